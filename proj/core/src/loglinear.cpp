#include "cshc/loglinear.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "cshc/error.hpp"

namespace cshc {

FeatureSet canonicalize(FeatureSet features) {
  std::sort(features.begin(), features.end(),
            [](const Feature& x, const Feature& y) {
              return canonical_less(x, y);
            });
  features.erase(std::unique(features.begin(), features.end()),
                 features.end());
  return features;
}

int delta(const Feature& f, const Assignment& x) {
  for (VarIndex v : f.scope().members()) {
    if (x.value(v) != f.values.value(v)) return 0;
  }
  return 1;
}

ActivationTable activations(const DomainSchema& schema,
                            const FeatureSet& features) {
  for (const Feature& f : features) {
    if (f.values.num_variables() != schema.size()) {
      throw Error(ErrorKind::kUnknownVariable,
                  "feature does not belong to this schema");
    }
  }
  const StateIndexer states(schema, schema.all());
  ActivationTable table;
  table.active.resize(states.size());
  Assignment x(schema.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    states.decode(i, x);
    for (std::size_t k = 0; k < features.size(); ++k) {
      if (delta(features[k], x) != 0) table.active[i].push_back(k);
    }
  }
  return table;
}

namespace {

std::vector<double> scores(const ActivationTable& act,
                           std::span<const double> weights) {
  std::vector<double> out(act.active.size(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t k : act.active[i]) out[i] += weights[k];
  }
  return out;
}

double log_sum_exp(const std::vector<double>& values) {
  const double m = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - m);
  return m + std::log(sum);
}

}  // namespace

double partition(const DomainSchema& schema, const FeatureSet& features,
                 std::span<const double> weights) {
  if (weights.size() != features.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "one weight per feature required");
  }
  return log_sum_exp(scores(activations(schema, features), weights));
}

LogLinearModel::LogLinearModel(SchemaPtr schema, FeatureSet features,
                               std::vector<double> weights)
    : schema_(std::move(schema)),
      features_(std::move(features)),
      weights_(std::move(weights)) {
  log_z_ = partition(*schema_, features_, weights_);
}

double LogLinearModel::score(const Assignment& x) const {
  double s = 0.0;
  for (std::size_t k = 0; k < features_.size(); ++k) {
    if (delta(features_[k], x) != 0) s += weights_[k];
  }
  return s;
}

JointTable LogLinearModel::to_table() const {
  std::vector<double> s = scores(activations(*schema_, features_), weights_);
  for (double& v : s) v = std::exp(v - log_z_);
  return JointTable(schema_, std::move(s));
}

double evaluate(const LogLinearModel& model, const Assignment& x) {
  return std::exp(model.score(x) - model.log_z());
}

FeatureSet canonical_features(const DomainSchema& schema,
                              const Assignment& reference) {
  if (reference.num_variables() != schema.size() || !reference.complete()) {
    throw Error(ErrorKind::kInvalidArgument,
                "reference assignment must be complete");
  }
  FeatureSet out;
  for (VarSet scope : schema.all().subsets()) {
    if (scope.empty()) continue;
    const StateIndexer idx(schema, scope);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      Assignment y(schema.size());
      idx.decode(i, y);
      bool off_reference = true;
      for (VarIndex v : scope.members()) {
        off_reference = off_reference && y.value(v) != reference.value(v);
      }
      if (off_reference) out.push_back(Feature{std::move(y)});
    }
  }
  return canonicalize(std::move(out));
}

LogLinearModel canonical_parameters(const JointTable& p,
                                    const Assignment& reference) {
  if (!is_positive(p)) {
    throw Error(ErrorKind::kNotPositive,
                "canonical parameters need a positive table");
  }
  const DomainSchema& schema = p.schema();
  FeatureSet features = canonical_features(schema, reference);
  const StateIndexer states(schema, schema.all());
  std::vector<double> weights;
  weights.reserve(features.size());
  for (const Feature& f : features) {
    const VarSet scope = f.scope();
    double theta = 0.0;
    // Inclusion-exclusion over the sub-scopes B: y on B, reference elsewhere.
    for (VarSet sub : scope.subsets()) {
      Assignment x = reference;
      for (VarIndex v : sub.members()) x.set(v, f.values.value(v));
      const double sign = ((scope.size() - sub.size()) % 2 == 0) ? 1.0 : -1.0;
      theta += sign * std::log(p[states.index(x)]);
    }
    weights.push_back(theta);
  }
  return LogLinearModel(p.schema_ptr(), std::move(features),
                        std::move(weights));
}

LogLinearModel canonical_parameters(const JointTable& p) {
  return canonical_parameters(
      p, Assignment(std::vector<int>(
             static_cast<std::size_t>(p.schema().size()), 0)));
}

FeatureSet support(const LogLinearModel& model, double eps) {
  FeatureSet out;
  for (std::size_t k = 0; k < model.features().size(); ++k) {
    if (std::abs(model.weights()[k]) > eps) {
      out.push_back(model.features()[k]);
    }
  }
  return out;
}

bool matches(const Feature& f, const Context& ctx, MatchMode mode) {
  if (mode == MatchMode::kStrict && !f.scope().includes(ctx.scope())) {
    return false;
  }
  return f.values.consistent_with(ctx);
}

namespace {

// Calls fn(feature index, triplet) for every violation; `ambiguous` counts
// checks on which the matching readings disagree. fn returns false to stop.
template <typename Fn>
void scan_violations(const FeatureSet& features,
                     const std::vector<ReducedModel>& reduced, MatchMode mode,
                     std::size_t& ambiguous, Fn&& fn) {
  bool stop = false;
  for (const ReducedModel& r : reduced) {
    if (stop) return;
    const int n = r.ctx.num_variables();
    const VarSet rest = VarSet::first(n) - r.ctx.scope();
    const std::vector<VarIndex> global = rest.members();
    std::vector<std::size_t> matching;
    std::vector<bool> is_ambiguous;
    for (std::size_t k = 0; k < features.size(); ++k) {
      if (!features[k].values.consistent_with(r.ctx)) continue;
      // Strict-mode non-matches stay in the list so ambiguity is counted.
      const bool strict = features[k].scope().includes(r.ctx.scope());
      matching.push_back(k);
      is_ambiguous.push_back(!strict);
    }
    r.model.for_each([&](VarIndex la, VarIndex lb, VarSet lcond, bool value) {
      if (!value || stop) return;
      const VarIndex a = global[static_cast<std::size_t>(la)];
      const VarIndex b = global[static_cast<std::size_t>(lb)];
      for (std::size_t m = 0; m < matching.size(); ++m) {
        const Feature& f = features[matching[m]];
        if (!f.scope().contains(a) || !f.scope().contains(b)) continue;
        if (is_ambiguous[m]) {
          ++ambiguous;
          if (mode == MatchMode::kStrict) continue;
        }
        if (!fn(matching[m],
                Triplet{a, b, lcond.expand(rest), r.ctx})) {
          stop = true;
          return;
        }
      }
    });
  }
}

}  // namespace

FactorizationReport factorizes(const FeatureSet& features,
                               const std::vector<ReducedModel>& reduced,
                               MatchMode mode, std::size_t max_witnesses) {
  FactorizationReport report;
  scan_violations(features, reduced, mode, report.ambiguous_matches,
                  [&](std::size_t k, Triplet t) {
                    ++report.num_violations;
                    if (report.violations.size() < max_witnesses ||
                        report.violations.empty()) {
                      report.violations.push_back(
                          FactorizationViolation{features[k], std::move(t)});
                    }
                    return true;
                  });
  report.verdict = report.num_violations == 0;
  return report;
}

FactorizationReport factorizes(const FeatureSet& features,
                               const CSIModel& csi, MatchMode mode,
                               std::size_t max_witnesses) {
  return factorizes(features, reduce_all(csi), mode, max_witnesses);
}

FeatureSet prune_forbidden(const FeatureSet& features,
                           const std::vector<ReducedModel>& reduced,
                           MatchMode mode) {
  std::vector<bool> forbidden(features.size(), false);
  std::size_t ambiguous = 0;
  scan_violations(features, reduced, mode, ambiguous,
                  [&](std::size_t k, const Triplet&) {
                    forbidden[k] = true;
                    return true;
                  });
  FeatureSet out;
  for (std::size_t k = 0; k < features.size(); ++k) {
    if (!forbidden[k]) out.push_back(features[k]);
  }
  return out;
}

FeatureSet independent_subset(const DomainSchema& schema,
                              const FeatureSet& features) {
  const std::size_t rows = schema.num_states();
  const ActivationTable act = activations(schema, features);
  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(rows),
      static_cast<Eigen::Index>(features.size()));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k : act.active[i]) {
      design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = 1.0;
    }
  }
  // Modified Gram-Schmidt with one reorthogonalization pass; the constant
  // column seeds the basis.
  std::vector<Eigen::VectorXd> basis;
  basis.push_back(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(rows),
                                            1.0 / std::sqrt(double(rows))));
  FeatureSet out;
  for (std::size_t k = 0; k < features.size(); ++k) {
    Eigen::VectorXd v = design.col(static_cast<Eigen::Index>(k));
    const double norm = v.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (const Eigen::VectorXd& q : basis) v -= q.dot(v) * q;
    }
    if (v.norm() > 1e-9 * std::max(norm, 1.0)) {
      basis.push_back(v / v.norm());
      out.push_back(features[k]);
    }
  }
  return out;
}

FitResult fit_restricted(const JointTable& p, const FeatureSet& features) {
  if (!is_positive(p)) {
    throw Error(ErrorKind::kNotPositive, "fitting needs a positive table");
  }
  const DomainSchema& schema = p.schema();
  const std::size_t rows = schema.num_states();
  const std::size_t cols = features.size() + 1;
  const ActivationTable act = activations(schema, features);
  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  Eigen::VectorXd target(static_cast<Eigen::Index>(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (std::size_t k : act.active[i]) {
      design(r, static_cast<Eigen::Index>(k)) = 1.0;
    }
    design(r, static_cast<Eigen::Index>(features.size())) = 1.0;
    target(r) = std::log(p[i]);
  }
  const Eigen::VectorXd solution =
      design.completeOrthogonalDecomposition().solve(target);
  std::vector<double> weights(features.size());
  for (std::size_t k = 0; k < features.size(); ++k) {
    weights[k] = solution(static_cast<Eigen::Index>(k));
  }
  LogLinearModel model(p.schema_ptr(), features, std::move(weights));
  // Residual against the normalized model, so logZ absorbs the offset.
  const std::vector<double> s = scores(act, model.weights());
  double residual = 0.0;
  for (std::size_t i = 0; i < rows; ++i) {
    residual = std::max(residual,
                        std::abs(std::log(p[i]) - (s[i] - model.log_z())));
  }
  return FitResult{std::move(model), residual};
}

}  // namespace cshc
