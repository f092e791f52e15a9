#ifndef CSHC_INDEPENDENCE_HPP_
#define CSHC_INDEPENDENCE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cshc/domain.hpp"
#include "cshc/joint_table.hpp"

namespace cshc {

// An independence query <a, b | U, x_W>. With an empty context it is a plain
// conditional independence <a, b | U>. Canonical form has a < b.
struct Triplet {
  VarIndex a = 0;
  VarIndex b = 1;
  VarSet cond;
  Context ctx;

  // Canonicalizes (swaps a and b if needed) and validates that {a}, {b}, U
  // and W are pairwise disjoint. Throws OverlappingSets.
  static Triplet make(VarIndex a, VarIndex b, VarSet cond, Context ctx);
  static Triplet make(int num_variables, VarIndex a, VarIndex b, VarSet cond);

  VarSet context_vars() const { return ctx.scope(); }
  // Every variable the triplet mentions.
  VarSet mentioned() const {
    return cond.with(a).with(b) | ctx.scope();
  }

  friend bool operator==(const Triplet&, const Triplet&) = default;
  // (a, b, U canonical, context canonical)
  friend bool canonical_less(const Triplet& x, const Triplet& y);
};

// Truth value for every plain triplet <a, b | U> over a set of named
// variables. Variables are referred to by position in names().
class DependencyModel {
 public:
  static constexpr int kMaxVariables = 16;
  using Predicate = std::function<bool(VarIndex, VarIndex, VarSet)>;

  DependencyModel(std::vector<std::string> names, const Predicate& truth);

  static DependencyModel all_true(std::vector<std::string> names);
  static DependencyModel all_false(std::vector<std::string> names);

  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  VarSet domain() const { return VarSet::first(size()); }

  // Symmetric in a and b; cond must avoid a and b.
  bool holds(VarIndex a, VarIndex b, VarSet cond) const;

  // Copy with one triplet's truth value replaced.
  DependencyModel with(VarIndex a, VarIndex b, VarSet cond, bool value) const;

  // Visits every canonical triplet (a < b, U in canonical order).
  void for_each(
      const std::function<void(VarIndex, VarIndex, VarSet, bool)>& fn) const;
  std::size_t count_true() const;

  friend bool operator==(const DependencyModel&,
                         const DependencyModel&) = default;

 private:
  std::size_t slot(VarIndex a, VarIndex b, VarSet cond) const;

  std::vector<std::string> names_;
  std::vector<std::uint8_t> truth_;
};

// Truth value for every canonical triplet <a, b | U, x_W> over a schema,
// including the empty context.
class CSIModel {
 public:
  using Predicate = std::function<bool(const Triplet&)>;

  CSIModel(SchemaPtr schema, const Predicate& truth);

  static CSIModel all_true(SchemaPtr schema);
  static CSIModel all_false(SchemaPtr schema);

  const DomainSchema& schema() const { return *schema_; }
  const SchemaPtr& schema_ptr() const { return schema_; }

  bool holds(const Triplet& t) const;
  CSIModel with(const Triplet& t, bool value) const;

  // Canonical order; see canonical_less(Triplet, Triplet).
  void for_each(const std::function<void(const Triplet&, bool)>& fn) const;
  std::vector<Triplet> true_triplets() const;
  std::size_t size() const { return truth_.size(); }
  std::size_t count_true() const;

  friend bool operator==(const CSIModel& x, const CSIModel& y) {
    return *x.schema_ == *y.schema_ && x.truth_ == y.truth_;
  }

 private:
  struct PairLayout {
    std::size_t offset = 0;
    std::vector<VarIndex> others;
    std::vector<std::size_t> radix;
  };
  std::size_t slot(const Triplet& t) const;
  const PairLayout& layout(VarIndex a, VarIndex b) const;

  SchemaPtr schema_;
  std::vector<PairLayout> pairs_;
  std::vector<std::uint8_t> truth_;
};

// p(X_a | X_b, X_U) = p(X_a | X_U) wherever p(X_b, X_U) > 0, checked in the
// product form p(a,b|u) = p(a|u) p(b|u) with relative tolerance.
// Throws UnknownVariable, OverlappingSets.
bool test_ci(const JointTable& p, VarIndex a, VarIndex b, VarSet cond,
             double tol = kDefaultTolerance);
// As test_ci, restricted to the context x_W.
bool test_csi(const JointTable& p, VarIndex a, VarIndex b, VarSet cond,
              const Context& ctx, double tol = kDefaultTolerance);
bool test_csi(const JointTable& p, const Triplet& t,
              double tol = kDefaultTolerance);

// Name-based conveniences.
bool test_ci(const JointTable& p, const std::string& a, const std::string& b,
             const std::vector<std::string>& cond,
             double tol = kDefaultTolerance);

// Every triplet's truth value under p. Throws NotPositive.
CSIModel build_csi_model(const JointTable& p, double tol = kDefaultTolerance);

// The reduced model over X \ W: <a, b | U> holds iff Ic holds
// <a, b | {}, x_U x_W> for every assignment x_U.
// Throws UnknownVariable when the context does not fit the schema.
DependencyModel reduce(const CSIModel& csi, const Context& ctx);

struct ReducedModel {
  Context ctx;
  DependencyModel model;
};

// reduce() for every W and every x_W: W in canonical order, then x_W
// row-major. The first entry is the empty context.
std::vector<ReducedModel> reduce_all(const CSIModel& csi);
// Restricted to context variable sets W within `allowed`.
std::vector<ReducedModel> reduce_all(const CSIModel& csi, VarSet allowed);

// CSI model that knows only plain independences:
// <a, b | U, x_W> holds iff I holds <a, b | U u W>.
CSIModel lift(const DependencyModel& model, SchemaPtr schema);

// Every triplet asserted by the model holds in p. Model variables are
// matched to p's by name; throws UnknownVariable on a missing name.
bool is_i_map(const DependencyModel& model, const JointTable& p,
              double tol = kDefaultTolerance);
std::optional<Triplet> first_i_map_violation(const DependencyModel& model,
                                             const JointTable& p,
                                             double tol = kDefaultTolerance);

bool is_csi_map(const CSIModel& csi, const JointTable& p,
                double tol = kDefaultTolerance);
std::optional<Triplet> first_csi_map_violation(const CSIModel& csi,
                                               const JointTable& p,
                                               double tol = kDefaultTolerance);

// Relative comparison used by the independence tests.
bool nearly_equal(double x, double y, double tol);

}  // namespace cshc

#endif  // CSHC_INDEPENDENCE_HPP_
