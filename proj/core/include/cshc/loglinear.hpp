#ifndef CSHC_LOGLINEAR_HPP_
#define CSHC_LOGLINEAR_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "cshc/domain.hpp"
#include "cshc/independence.hpp"
#include "cshc/joint_table.hpp"

namespace cshc {

// An assignment to a subset of variables, used as a Kronecker-delta
// indicator: it fires on x iff x restricted to its scope equals it.
struct Feature {
  Assignment values;

  VarSet scope() const { return values.scope(); }

  friend bool operator==(const Feature&, const Feature&) = default;
  // By scope (size, then members), then values.
  friend bool canonical_less(const Feature& x, const Feature& y) {
    return canonical_less(x.values, y.values);
  }
};

// Sorted canonically, no duplicates.
using FeatureSet = std::vector<Feature>;

FeatureSet canonicalize(FeatureSet features);

// Feature-to-row layout reused by evaluation, partition and fitting:
// active[i] lists the feature indices firing on state i.
struct ActivationTable {
  std::vector<std::vector<std::size_t>> active;
};
ActivationTable activations(const DomainSchema& schema,
                            const FeatureSet& features);

class LogLinearModel {
 public:
  // logZ is computed from the weights.
  LogLinearModel(SchemaPtr schema, FeatureSet features,
                 std::vector<double> weights);

  const DomainSchema& schema() const { return *schema_; }
  const SchemaPtr& schema_ptr() const { return schema_; }
  const FeatureSet& features() const { return features_; }
  const std::vector<double>& weights() const { return weights_; }
  double log_z() const { return log_z_; }

  // Unnormalized log score: sum of the weights of the active features.
  double score(const Assignment& x) const;
  JointTable to_table() const;

 private:
  SchemaPtr schema_;
  FeatureSet features_;
  std::vector<double> weights_;
  double log_z_ = 0.0;
};

int delta(const Feature& f, const Assignment& x);

// exp(score(x) - logZ)
double evaluate(const LogLinearModel& model, const Assignment& x);

// log sum_x exp(sum_a theta_a delta_a(x)), max-shifted.
double partition(const DomainSchema& schema, const FeatureSet& features,
                 std::span<const double> weights);

// Every (C, y_C), C nonempty, with y_C differing from `reference` on every
// variable of C. For binary variables this is 2^n - 1 features.
FeatureSet canonical_features(const DomainSchema& schema,
                              const Assignment& reference);

// Moebius (inclusion-exclusion) parameters of ln p relative to the reference
// assignment; reproduces p exactly. Throws NotPositive.
LogLinearModel canonical_parameters(const JointTable& p,
                                    const Assignment& reference);
// Reference = all first values.
LogLinearModel canonical_parameters(const JointTable& p);

// Features whose weight magnitude exceeds eps.
FeatureSet support(const LogLinearModel& model, double eps = 1e-9);

enum class MatchMode {
  // f agrees with the context on the variables they share.
  kConsistent,
  // additionally requires the context's variables to lie within f's scope.
  kStrict,
};

bool matches(const Feature& f, const Context& ctx,
             MatchMode mode = MatchMode::kConsistent);

struct FactorizationViolation {
  Feature feature;
  // Triplet over the full schema; its context is the reduced model's x_W.
  Triplet triplet;
};

struct FactorizationReport {
  bool verdict = true;
  std::size_t num_violations = 0;
  // At most `max_witnesses` of them, in discovery order.
  std::vector<FactorizationViolation> violations;
  // (feature, triplet) checks where the two matching readings disagree:
  // consistent with the context, but the context is not within the scope.
  std::size_t ambiguous_matches = 0;
};

// Every feature matching a context x_W must not hold both a and b for any
// triplet <a, b | U> true in the reduced model of x_W, for every W and x_W.
FactorizationReport factorizes(const FeatureSet& features,
                               const CSIModel& csi,
                               MatchMode mode = MatchMode::kConsistent,
                               std::size_t max_witnesses = 256);
// Same check against precomputed reduced models.
FactorizationReport factorizes(const FeatureSet& features,
                               const std::vector<ReducedModel>& reduced,
                               MatchMode mode = MatchMode::kConsistent,
                               std::size_t max_witnesses = 256);

// Features violating the factorization condition removed.
FeatureSet prune_forbidden(const FeatureSet& features,
                           const std::vector<ReducedModel>& reduced,
                           MatchMode mode = MatchMode::kConsistent);

// Greedy, in the given order: keeps a feature iff its indicator is linearly
// independent of the constant and the indicators kept so far.
FeatureSet independent_subset(const DomainSchema& schema,
                              const FeatureSet& features);

struct FitResult {
  LogLinearModel model;
  // max_x |ln p(x) - ln model(x)|
  double residual = 0.0;
};

// Least-squares fit of ln p(x) = sum_a theta_a delta_a(x) + c over every
// state. Throws NotPositive.
FitResult fit_restricted(const JointTable& p, const FeatureSet& features);

inline constexpr double kResidualThreshold = 1e-7;

}  // namespace cshc

#endif  // CSHC_LOGLINEAR_HPP_
