#include "cshc/factorizer.hpp"

#include <algorithm>

#include "cshc/error.hpp"
#include "cshc/io.hpp"

namespace cshc {

namespace {

using io::describe;

// Triplet of a reduced model, lifted back to the full schema.
Triplet to_global(const Triplet& local, const Context& ctx) {
  const VarSet rest = VarSet::first(ctx.num_variables()) - ctx.scope();
  const std::vector<VarIndex> global = rest.members();
  return Triplet{global[static_cast<std::size_t>(local.a)],
                 global[static_cast<std::size_t>(local.b)],
                 local.cond.expand(rest), ctx};
}

FeatureSet features_for_contexts(const DomainSchema& schema,
                                 const std::vector<ReducedModel>& reduced) {
  FeatureSet out;
  for (const ReducedModel& r : reduced) {
    if (auto mismatch = graph_isomorph_mismatch(r.model)) {
      throw Error(ErrorKind::kNotGraphIsomorph,
                  "reduced model for context {" +
                      format_context(schema, r.ctx) +
                      "} is not graph-isomorph; mismatch at " +
                      describe(schema, to_global(*mismatch, r.ctx)));
    }
    const VarSet rest = schema.all() - r.ctx.scope();
    if (!r.ctx.scope().empty()) out.push_back(Feature{r.ctx});
    for (VarSet local : cliques(pairwise_graph(r.model))) {
      const VarSet clique = local.expand(rest);
      const StateIndexer idx(schema, clique);
      for (std::size_t i = 0; i < idx.size(); ++i) {
        Assignment y = r.ctx;
        idx.decode(i, y);
        out.push_back(Feature{std::move(y)});
      }
    }
  }
  return canonicalize(std::move(out));
}

std::vector<ReducedModel> reduce_family(const CSIModel& csi,
                                        const std::vector<VarSet>& family) {
  const DomainSchema& schema = csi.schema();
  std::vector<ReducedModel> out;
  for (VarSet w : family) {
    if (!schema.all().includes(w)) {
      throw Error(ErrorKind::kUnknownVariable,
                  "context variables outside the schema");
    }
    const StateIndexer idx(schema, w);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      Context ctx(schema.size());
      idx.decode(i, ctx);
      DependencyModel model = reduce(csi, ctx);
      out.push_back(ReducedModel{std::move(ctx), std::move(model)});
    }
  }
  return out;
}

}  // namespace

FeatureSet clique_features(const DomainSchema& schema,
                           const UndirectedGraph& graph) {
  const Assignment reference(
      std::vector<int>(static_cast<std::size_t>(schema.size()), 0));
  const std::vector<VarSet> cl = cliques(graph);
  FeatureSet out;
  for (Feature& f : canonical_features(schema, reference)) {
    const bool inside = std::any_of(cl.begin(), cl.end(), [&](VarSet c) {
      return c.includes(f.scope());
    });
    if (inside) out.push_back(std::move(f));
  }
  return out;
}

CIFactorization verify_ci_factorization(const JointTable& p,
                                        const DependencyModel& model,
                                        double tol) {
  const DomainSchema& schema = p.schema();
  if (!is_positive(p)) {
    throw Error(ErrorKind::kPreconditionFailed,
                "positivity: the table has a zero entry");
  }
  if (model.size() != schema.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "model and table have different variables");
  }
  for (VarIndex v = 0; v < schema.size(); ++v) {
    if (model.names()[static_cast<std::size_t>(v)] != schema.name(v)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "model variables must follow the table's order");
    }
  }
  if (auto mismatch = graph_isomorph_mismatch(model)) {
    throw Error(ErrorKind::kPreconditionFailed,
                "graph-isomorphism: pairwise graph disagrees at " +
                    describe(schema, *mismatch));
  }
  if (auto violation = first_i_map_violation(model, p, tol)) {
    throw Error(ErrorKind::kPreconditionFailed,
                "I-map: " + describe(schema, *violation) +
                    " does not hold in the distribution");
  }
  UndirectedGraph graph = pairwise_graph(model);
  std::vector<VarSet> cl = cliques(graph);
  bool respects = true;
  model.for_each([&](VarIndex a, VarIndex b, VarSet, bool value) {
    if (!value) return;
    for (VarSet c : cl) {
      if (c.contains(a) && c.contains(b)) respects = false;
    }
  });
  FeatureSet features = clique_features(schema, graph);
  FitResult fit = fit_restricted(p, features);
  return CIFactorization{std::move(graph), std::move(cl), std::move(features),
                         std::move(fit), respects};
}

FeatureSet factorize_csi(const JointTable& p, const CSIModel& csi,
                         const std::vector<VarSet>& context_vars) {
  if (!is_positive(p)) {
    throw Error(ErrorKind::kNotPositive,
                "factorization needs a positive table");
  }
  return features_for_contexts(csi.schema(), reduce_family(csi, context_vars));
}

FeatureSet csi_pruned_features(const JointTable& p, const CSIModel& csi,
                               const std::vector<ReducedModel>& reduced,
                               MatchMode mode) {
  if (!is_positive(p)) {
    throw Error(ErrorKind::kNotPositive,
                "factorization needs a positive table");
  }
  const DomainSchema& schema = csi.schema();
  const FeatureSet pool = features_for_contexts(schema, reduced);
  return independent_subset(schema, prune_forbidden(pool, reduced, mode));
}

TheoremReport verify_cshc(const JointTable& p, const CSIModel& csi,
                          const VerifyOptions& options) {
  const DomainSchema& schema = p.schema();
  if (!(schema == csi.schema())) {
    throw Error(ErrorKind::kInvalidArgument,
                "CSI model and table have different schemas");
  }
  TheoremReport report;
  report.residual_threshold = options.residual_threshold;
  report.positivity = is_positive(p);
  report.csi_map_violation = first_csi_map_violation(csi, p, options.tol);
  report.csi_map = !report.csi_map_violation.has_value();

  const std::vector<ReducedModel> reduced = reduce_all(csi);
  report.all_graph_isomorph = true;
  report.reduced_i_maps = true;
  for (const ReducedModel& r : reduced) {
    ContextVerdict verdict;
    verdict.ctx = r.ctx;
    if (auto mismatch = graph_isomorph_mismatch(r.model)) {
      verdict.graph_isomorph = false;
      verdict.mismatch = to_global(*mismatch, r.ctx);
      report.all_graph_isomorph = false;
    }
    report.contexts.push_back(std::move(verdict));
    // Each reduced model against the conditional it claims to describe.
    if (report.positivity && !report.reduced_i_map_violation) {
      const JointTable conditional = condition(p, r.ctx);
      if (auto v = first_i_map_violation(r.model, conditional, options.tol)) {
        const std::vector<VarIndex> to_full =
            schema.locate(conditional.schema());
        VarSet cond;
        for (VarIndex u : v->cond.members()) cond = cond.with(to_full[u]);
        report.reduced_i_map_violation =
            Triplet::make(to_full[v->a], to_full[v->b], cond, r.ctx);
        report.reduced_i_maps = false;
      }
    }
  }
  if (!report.positivity) report.reduced_i_maps = false;

  if (report.preconditions_hold()) {
    report.factorization_checked = true;
    FeatureSet constructed =
        csi_pruned_features(p, csi, reduced, options.match_mode);

    FeatureCounts counts;
    counts.saturated = schema.num_states() - 1;
    counts.ci_pruned =
        clique_features(schema, pairwise_graph(reduced.front().model)).size();
    counts.csi_pruned = constructed.size();
    report.counts = counts;

    if (options.features) {
      report.features = canonicalize(*options.features);
      report.user_features = true;
    } else {
      report.features = std::move(constructed);
    }
    report.factorization =
        factorizes(report.features, reduced, options.match_mode);
    report.fit = fit_restricted(p, report.features);
    report.theorem_verified =
        report.factorization.verdict &&
        report.fit->residual <= options.residual_threshold;
  }
  return report;
}

FeatureCounts sparsity_report(const JointTable& p, const CSIModel& csi,
                              double tol) {
  VerifyOptions options;
  options.tol = tol;
  TheoremReport report = verify_cshc(p, csi, options);
  if (!report.positivity) {
    throw Error(ErrorKind::kPreconditionFailed,
                "positivity: the table has a zero entry");
  }
  if (!report.csi_map) {
    throw Error(ErrorKind::kPreconditionFailed,
                "CSI-map: " + describe(p.schema(), *report.csi_map_violation) +
                    " does not hold in the distribution");
  }
  if (!report.all_graph_isomorph) {
    for (const ContextVerdict& c : report.contexts) {
      if (c.graph_isomorph) continue;
      throw Error(ErrorKind::kPreconditionFailed,
                  "graph-isomorphism: reduced model for context {" +
                      format_context(p.schema(), c.ctx) +
                      "} disagrees with its graph at " +
                      describe(p.schema(), *c.mismatch));
    }
  }
  return *report.counts;
}

}  // namespace cshc
