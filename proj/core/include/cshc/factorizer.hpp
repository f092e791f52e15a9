#ifndef CSHC_FACTORIZER_HPP_
#define CSHC_FACTORIZER_HPP_

#include <optional>
#include <vector>

#include "cshc/graph.hpp"
#include "cshc/independence.hpp"
#include "cshc/joint_table.hpp"
#include "cshc/loglinear.hpp"

namespace cshc {

// Plain (context-free) factorization along the cliques of a dependency
// model's pairwise graph.
struct CIFactorization {
  UndirectedGraph graph;
  std::vector<VarSet> cliques;
  // Canonical features whose scope lies inside some clique.
  FeatureSet features;
  FitResult fit;
  // No clique holds both variables of a triplet the model asserts.
  bool cliques_respect_model = true;
};

// Throws PreconditionFailed naming the failed precondition (positivity,
// graph-isomorphism, I-map) and a counterexample when there is one.
CIFactorization verify_ci_factorization(const JointTable& p,
                                        const DependencyModel& model,
                                        double tol = kDefaultTolerance);

// Clique-scoped canonical features of a graph over the schema's variables.
FeatureSet clique_features(const DomainSchema& schema,
                           const UndirectedGraph& graph);

// Per-context graph construction: for every W in `context_vars` and every
// x_W, the cliques of the pairwise graph of reduce(csi, x_W), each joined
// to x_W, plus the context features x_W themselves. Deduplicated, canonical
// order. Throws NotPositive, NotGraphIsomorph (naming the context).
FeatureSet factorize_csi(const JointTable& p, const CSIModel& csi,
                         const std::vector<VarSet>& context_vars);

struct FeatureCounts {
  std::size_t saturated = 0;
  std::size_t ci_pruned = 0;
  std::size_t csi_pruned = 0;

  double ci_ratio() const { return ratio(ci_pruned, saturated); }
  double csi_ratio() const { return ratio(csi_pruned, saturated); }
  double csi_to_ci() const { return ratio(csi_pruned, ci_pruned); }

 private:
  static double ratio(std::size_t x, std::size_t y) {
    return y == 0 ? 0.0 : static_cast<double>(x) / static_cast<double>(y);
  }
};

struct ContextVerdict {
  Context ctx;
  bool graph_isomorph = true;
  // Over the full schema, with the context attached.
  std::optional<Triplet> mismatch;
};

struct VerifyOptions {
  double tol = kDefaultTolerance;
  double residual_threshold = kResidualThreshold;
  MatchMode match_mode = MatchMode::kConsistent;
  // Check this feature set instead of the constructed one.
  std::optional<FeatureSet> features;
};

struct TheoremReport {
  bool positivity = false;
  bool csi_map = false;
  std::optional<Triplet> csi_map_violation;
  std::vector<ContextVerdict> contexts;
  bool all_graph_isomorph = false;
  // Each reduced model is an I-map of the matching conditional.
  bool reduced_i_maps = false;
  std::optional<Triplet> reduced_i_map_violation;

  // The remaining fields are filled only when the preconditions hold.
  bool factorization_checked = false;
  FeatureSet features;
  bool user_features = false;
  FactorizationReport factorization;
  std::optional<FitResult> fit;
  double residual_threshold = kResidualThreshold;
  std::optional<FeatureCounts> counts;

  bool theorem_verified = false;

  bool preconditions_hold() const {
    return positivity && csi_map && all_graph_isomorph;
  }
};

// Checks positivity, CSI-mapness and graph-isomorphism of every reduced
// model; when they hold, builds the context-specific feature set, checks it
// factorizes according to csi and that it represents p exactly.
// Failures are reported, never thrown.
TheoremReport verify_cshc(const JointTable& p, const CSIModel& csi,
                          const VerifyOptions& options = {});

// The feature set the theorem route produces: every per-context feature,
// minus the forbidden ones, reduced to a linearly independent subset.
FeatureSet csi_pruned_features(const JointTable& p, const CSIModel& csi,
                               const std::vector<ReducedModel>& reduced,
                               MatchMode mode = MatchMode::kConsistent);

// Throws PreconditionFailed when verify_cshc's preconditions do not hold.
FeatureCounts sparsity_report(const JointTable& p, const CSIModel& csi,
                              double tol = kDefaultTolerance);

}  // namespace cshc

#endif  // CSHC_FACTORIZER_HPP_
