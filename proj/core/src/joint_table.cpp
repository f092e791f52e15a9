#include "cshc/joint_table.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cshc/error.hpp"

namespace cshc {

JointTable::JointTable(SchemaPtr schema, std::vector<double> probabilities)
    : schema_(std::move(schema)), probs_(std::move(probabilities)) {
  if (!schema_) throw Error(ErrorKind::kInvalidArgument, "null schema");
  if (probs_.size() != schema_->num_states()) {
    throw Error(ErrorKind::kInvalidArgument,
                "table has " + std::to_string(probs_.size()) +
                    " entries, schema expects " +
                    std::to_string(schema_->num_states()));
  }
}

double JointTable::at(const Assignment& x) const {
  StateIndexer idx(*schema_, schema_->all());
  return probs_[idx.index(x)];
}

double JointTable::total() const {
  return std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

double JointTable::min_entry() const {
  return *std::min_element(probs_.begin(), probs_.end());
}

JointTable normalize(SchemaPtr schema, std::vector<double> raw) {
  double sum = 0.0;
  for (double w : raw) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorKind::kInvalidArgument,
                  "weights must be finite and nonnegative");
    }
    sum += w;
  }
  if (sum <= 0.0) throw Error(ErrorKind::kAllZero, "every entry is zero");
  for (double& w : raw) w /= sum;
  return JointTable(std::move(schema), std::move(raw));
}

JointTable normalize(const JointTable& table) {
  return normalize(table.schema_ptr(),
                   {table.probabilities().begin(), table.probabilities().end()});
}

std::vector<double> marginal_masses(const JointTable& p, VarSet vars) {
  const DomainSchema& schema = p.schema();
  if (!schema.all().includes(vars)) {
    throw Error(ErrorKind::kUnknownVariable, "variable set outside schema");
  }
  StateIndexer full(schema, schema.all());
  StateIndexer sub(schema, vars);
  std::vector<double> out(sub.size(), 0.0);
  Assignment x(schema.size());
  for (std::size_t i = 0; i < full.size(); ++i) {
    full.decode(i, x);
    out[sub.index(x)] += p[i];
  }
  return out;
}

JointTable marginal(const JointTable& p, VarSet vars) {
  std::vector<double> masses = marginal_masses(p, vars);
  // StateIndexer over `vars` in the full schema lays states out in the same
  // row-major order as the restricted schema.
  return JointTable(p.schema().restrict_to(vars), std::move(masses));
}

JointTable marginal(const JointTable& p, std::span<const std::string> names) {
  return marginal(p, p.schema().set_of(names));
}

JointTable condition(const JointTable& p, const Context& ctx) {
  const DomainSchema& schema = p.schema();
  if (ctx.num_variables() != schema.size()) {
    throw Error(ErrorKind::kUnknownVariable,
                "context does not belong to this schema");
  }
  VarSet ctx_vars = ctx.scope();
  VarSet rest = schema.all() - ctx_vars;
  StateIndexer full(schema, schema.all());
  StateIndexer sub(schema, rest);
  std::vector<double> out(sub.size(), 0.0);
  double mass = 0.0;
  Assignment x(schema.size());
  for (std::size_t i = 0; i < full.size(); ++i) {
    full.decode(i, x);
    if (!x.consistent_with(ctx)) continue;
    out[sub.index(x)] += p[i];
    mass += p[i];
  }
  if (mass <= 0.0) {
    throw Error(ErrorKind::kZeroContext,
                "context " + format_context(schema, ctx) + " has zero mass");
  }
  for (double& v : out) v /= mass;
  return JointTable(schema.restrict_to(rest), std::move(out));
}

bool is_positive(const JointTable& p) {
  return std::all_of(p.probabilities().begin(), p.probabilities().end(),
                     [](double v) { return v > 0.0; });
}

}  // namespace cshc
