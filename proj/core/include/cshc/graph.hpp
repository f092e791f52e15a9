#ifndef CSHC_GRAPH_HPP_
#define CSHC_GRAPH_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cshc/domain.hpp"
#include "cshc/independence.hpp"

namespace cshc {

// Simple undirected graph over named nodes; adjacency kept as bitmasks.
class UndirectedGraph {
 public:
  static constexpr int kMaxNodes = 32;

  explicit UndirectedGraph(std::vector<std::string> nodes);

  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<std::string>& nodes() const { return nodes_; }
  VarSet all() const { return VarSet::first(size()); }
  VarIndex index_of(std::string_view name) const;

  // Self-loops are rejected.
  void add_edge(VarIndex u, VarIndex v);
  void remove_edge(VarIndex u, VarIndex v);
  bool adjacent(VarIndex u, VarIndex v) const;
  VarSet neighbors(VarIndex v) const { return adj_.at(v); }
  std::size_t num_edges() const;
  std::vector<std::pair<VarIndex, VarIndex>> edges() const;

  bool is_complete(VarSet vars) const;

  friend bool operator==(const UndirectedGraph&,
                         const UndirectedGraph&) = default;

 private:
  std::vector<std::string> nodes_;
  std::vector<VarSet> adj_;
};

// Edge (a, b) is absent iff the model holds <a, b | V \ {a, b}>.
UndirectedGraph pairwise_graph(const DependencyModel& model);

// True iff every a-b path meets `cond`. Throws UnknownVariable,
// OverlappingSets.
bool separates(const UndirectedGraph& g, VarIndex a, VarIndex b, VarSet cond);

// The dependency model whose triplets are exactly the graph's separations.
DependencyModel separation_model(const UndirectedGraph& g);

// First triplet on which the model and the separation semantics of its
// pairwise graph disagree; nullopt iff the model is graph-isomorph.
std::optional<Triplet> graph_isomorph_mismatch(const DependencyModel& model);
bool is_graph_isomorph(const DependencyModel& model);

// Set-valued triplet used by the axiom diagnostics. For sets the model is
// read pairwise: <A, B | U> holds iff <a, b | U> holds for all a, b.
struct SetTriplet {
  VarSet a;
  VarSet b;
  VarSet cond;
  friend bool operator==(const SetTriplet&, const SetTriplet&) = default;
};

enum class Axiom {
  kSymmetry,
  kDecomposition,
  kIntersection,
  kStrongUnion,
  kTransitivity,
};
inline constexpr std::array<Axiom, 5> kAllAxioms = {
    Axiom::kSymmetry, Axiom::kDecomposition, Axiom::kIntersection,
    Axiom::kStrongUnion, Axiom::kTransitivity};
std::string_view to_string(Axiom axiom);

struct AxiomVerdict {
  Axiom axiom = Axiom::kSymmetry;
  bool holds = true;
  // On failure: the premises that held and the conclusion(s) that did not.
  std::vector<SetTriplet> premises;
  std::vector<SetTriplet> conclusions;
};

struct AxiomReport {
  std::array<AxiomVerdict, 5> verdicts;

  bool all_hold() const;
  const AxiomVerdict& operator[](Axiom axiom) const {
    return verdicts[static_cast<std::size_t>(axiom)];
  }
};

// Exhaustive check of the five axioms over every admissible choice of sets.
// Transitivity quantifies its third variable over single variables only.
AxiomReport check_pearl_axioms(const DependencyModel& model);

// All maximal cliques, each as a set; sorted lexicographically by members.
std::vector<VarSet> cliques(const UndirectedGraph& g);

}  // namespace cshc

#endif  // CSHC_GRAPH_HPP_
