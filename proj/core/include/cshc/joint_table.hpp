#ifndef CSHC_JOINT_TABLE_HPP_
#define CSHC_JOINT_TABLE_HPP_

#include <span>
#include <vector>

#include "cshc/domain.hpp"

namespace cshc {

// Default relative tolerance for every probability comparison in the library.
inline constexpr double kDefaultTolerance = 1e-9;

// An exact probability table over every complete assignment of a schema,
// stored row-major in canonical variable order. Immutable once built.
class JointTable {
 public:
  // Takes the entries as given; use normalize() for raw weights.
  JointTable(SchemaPtr schema, std::vector<double> probabilities);

  const DomainSchema& schema() const { return *schema_; }
  const SchemaPtr& schema_ptr() const { return schema_; }
  std::size_t size() const { return probs_.size(); }
  std::span<const double> probabilities() const { return probs_; }

  double operator[](std::size_t i) const { return probs_[i]; }
  double at(const Assignment& x) const;

  double total() const;
  double min_entry() const;

 private:
  SchemaPtr schema_;
  std::vector<double> probs_;
};

// Rescales nonnegative weights to sum to one. Throws AllZero, or
// InvalidArgument for negative / non-finite entries.
JointTable normalize(SchemaPtr schema, std::vector<double> raw);
JointTable normalize(const JointTable& table);

// Table over `vars` (a sub-schema in canonical order). Throws UnknownVariable.
JointTable marginal(const JointTable& p, VarSet vars);
JointTable marginal(const JointTable& p, std::span<const std::string> names);

// p(X \ W | x_W) as a table over the remaining variables.
// Throws ZeroContext when p(x_W) == 0.
JointTable condition(const JointTable& p, const Context& ctx);

bool is_positive(const JointTable& p);

// Marginal masses over `vars`, laid out by a StateIndexer over the full
// schema restricted to `vars`. Cheaper than marginal() for internal use.
std::vector<double> marginal_masses(const JointTable& p, VarSet vars);

}  // namespace cshc

#endif  // CSHC_JOINT_TABLE_HPP_
