#ifndef CSHC_DOMAIN_HPP_
#define CSHC_DOMAIN_HPP_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cshc {

// Index of a variable within a DomainSchema.
using VarIndex = int;

// A set of variables of one schema, stored as a bitmask over schema
// positions. Iteration is always in ascending (canonical) order.
class VarSet {
 public:
  static constexpr int kMaxVariables = 32;

  constexpr VarSet() = default;
  constexpr explicit VarSet(std::uint32_t bits) : bits_(bits) {}
  VarSet(std::initializer_list<VarIndex> members);

  static constexpr VarSet single(VarIndex v) { return VarSet(1u << v); }
  // {0, 1, ..., n-1}
  static constexpr VarSet first(int n) {
    return VarSet(n >= 32 ? ~0u : ((1u << n) - 1u));
  }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(VarIndex v) const { return (bits_ >> v) & 1u; }
  constexpr bool includes(VarSet other) const {
    return (other.bits_ & ~bits_) == 0;
  }
  constexpr bool disjoint(VarSet other) const {
    return (bits_ & other.bits_) == 0;
  }

  constexpr VarSet with(VarIndex v) const { return VarSet(bits_ | (1u << v)); }
  constexpr VarSet without(VarIndex v) const {
    return VarSet(bits_ & ~(1u << v));
  }

  friend constexpr VarSet operator|(VarSet x, VarSet y) {
    return VarSet(x.bits_ | y.bits_);
  }
  friend constexpr VarSet operator&(VarSet x, VarSet y) {
    return VarSet(x.bits_ & y.bits_);
  }
  friend constexpr VarSet operator-(VarSet x, VarSet y) {
    return VarSet(x.bits_ & ~y.bits_);
  }
  friend constexpr bool operator==(VarSet, VarSet) = default;

  std::vector<VarIndex> members() const;

  // Canonical order: by size, then lexicographically by sorted members.
  friend bool canonical_less(VarSet x, VarSet y);

  // All subsets of this set, in increasing bitmask order (empty set first).
  std::vector<VarSet> subsets() const;

  // Maps the i-th member of `universe` to position i.
  VarSet compress(VarSet universe) const;
  // Inverse of compress: position i goes to the i-th member of `universe`.
  VarSet expand(VarSet universe) const;

 private:
  std::uint32_t bits_ = 0;
};

struct Variable {
  std::string name;
  int cardinality = 2;

  friend bool operator==(const Variable&, const Variable&) = default;
};

// Ordered list of discrete variables. The declaration order is the canonical
// order everywhere: tables are row-major in it (last variable fastest).
class DomainSchema {
 public:
  static constexpr std::uint64_t kMaxStates = std::uint64_t{1} << 24;

  explicit DomainSchema(std::vector<Variable> variables);

  int size() const { return static_cast<int>(variables_.size()); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(VarIndex v) const { return variables_.at(v); }
  const std::string& name(VarIndex v) const { return variables_.at(v).name; }
  int cardinality(VarIndex v) const { return variables_.at(v).cardinality; }
  VarSet all() const { return VarSet::first(size()); }

  std::size_t num_states() const { return num_states_; }
  std::size_t num_states(VarSet vars) const;

  // Throws UnknownVariable.
  VarIndex index_of(std::string_view name) const;
  bool has(std::string_view name) const;
  VarSet set_of(std::span<const std::string> names) const;

  // Schema over the listed variables only, preserving canonical order.
  std::shared_ptr<const DomainSchema> restrict_to(VarSet vars) const;

  // Positions (in this schema) of the variables of `sub`, matched by name.
  // Throws UnknownVariable if `sub` has a name this schema lacks.
  std::vector<VarIndex> locate(const DomainSchema& sub) const;

  std::string format(VarSet vars) const;

  friend bool operator==(const DomainSchema& x, const DomainSchema& y) {
    return x.variables_ == y.variables_;
  }

 private:
  std::vector<Variable> variables_;
  std::size_t num_states_ = 1;
};

using SchemaPtr = std::shared_ptr<const DomainSchema>;

SchemaPtr make_schema(std::vector<Variable> variables);
// Convenience: every variable binary.
SchemaPtr make_binary_schema(std::span<const std::string> names);
SchemaPtr make_binary_schema(std::initializer_list<const char*> names);

// A (possibly partial) assignment of values to the variables of a schema.
// Unbound positions hold kUnbound. A partial assignment is a context; the
// empty context binds nothing.
class Assignment {
 public:
  static constexpr int kUnbound = -1;

  Assignment() = default;
  // Empty assignment over a schema with `num_variables` variables.
  explicit Assignment(int num_variables)
      : values_(static_cast<std::size_t>(num_variables), kUnbound) {}
  // Complete assignment.
  explicit Assignment(std::vector<int> values);

  int num_variables() const { return static_cast<int>(values_.size()); }
  VarSet scope() const { return scope_; }
  bool complete() const {
    return scope_ == VarSet::first(num_variables());
  }
  bool binds(VarIndex v) const { return scope_.contains(v); }
  int value(VarIndex v) const { return values_.at(v); }
  const std::vector<int>& values() const { return values_; }

  Assignment& set(VarIndex v, int value);
  Assignment& unset(VarIndex v);

  // True iff both agree on every variable bound by both.
  bool consistent_with(const Assignment& other) const;
  // Union of two consistent assignments.
  Assignment merged(const Assignment& other) const;

  friend bool operator==(const Assignment&, const Assignment&) = default;
  // Canonical order: by scope (canonical_less), then values in scope order.
  friend bool canonical_less(const Assignment& x, const Assignment& y);

 private:
  std::vector<int> values_;
  VarSet scope_;
};

using Context = Assignment;

// x restricted to W. Throws UnknownVariable if W is not within x's scope.
Context project(const Assignment& x, VarSet vars);

// Context parsed from "a=1,c=0" (also accepts whitespace separators).
// Throws BadContext.
Context parse_context(const DomainSchema& schema, std::string_view text);
// "a=1,c=0"; the empty context formats as "".
std::string format_context(const DomainSchema& schema, const Context& ctx);

// Row-major codec for assignments of a subset of variables.
class StateIndexer {
 public:
  StateIndexer(const DomainSchema& schema, VarSet vars);

  VarSet vars() const { return vars_; }
  std::size_t size() const { return size_; }

  // Index of the restriction of `x` to vars(); x must bind all of vars().
  std::size_t index(const Assignment& x) const;
  std::size_t index(std::span<const int> full_values) const;
  // Writes the values of state `i` into `out` (positions in vars() only).
  void decode(std::size_t i, Assignment& out) const;
  // Every assignment of vars(), in row-major order.
  std::vector<Assignment> enumerate() const;

 private:
  VarSet vars_;
  int num_variables_ = 0;
  std::vector<VarIndex> members_;
  std::vector<int> cards_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 1;
};

}  // namespace cshc

#endif  // CSHC_DOMAIN_HPP_
