#include "cshc/graph.hpp"

#include <algorithm>
#include <functional>

#include "cshc/error.hpp"

namespace cshc {

UndirectedGraph::UndirectedGraph(std::vector<std::string> nodes)
    : nodes_(std::move(nodes)), adj_(nodes_.size()) {
  if (nodes_.size() > static_cast<std::size_t>(kMaxNodes)) {
    throw Error(ErrorKind::kCapExceeded, "graphs are limited to 32 nodes");
  }
}

VarIndex UndirectedGraph::index_of(std::string_view name) const {
  auto it = std::find(nodes_.begin(), nodes_.end(), name);
  if (it == nodes_.end()) {
    throw Error(ErrorKind::kUnknownVariable,
                "no node named '" + std::string(name) + "'");
  }
  return static_cast<VarIndex>(it - nodes_.begin());
}

void UndirectedGraph::add_edge(VarIndex u, VarIndex v) {
  if (u < 0 || v < 0 || u >= size() || v >= size()) {
    throw Error(ErrorKind::kUnknownVariable, "edge endpoint out of range");
  }
  if (u == v) throw Error(ErrorKind::kInvalidArgument, "self-loop");
  adj_[u] = adj_[u].with(v);
  adj_[v] = adj_[v].with(u);
}

void UndirectedGraph::remove_edge(VarIndex u, VarIndex v) {
  adj_.at(u) = adj_.at(u).without(v);
  adj_.at(v) = adj_.at(v).without(u);
}

bool UndirectedGraph::adjacent(VarIndex u, VarIndex v) const {
  return adj_.at(u).contains(v);
}

std::size_t UndirectedGraph::num_edges() const {
  std::size_t twice = 0;
  for (VarSet n : adj_) twice += static_cast<std::size_t>(n.size());
  return twice / 2;
}

std::vector<std::pair<VarIndex, VarIndex>> UndirectedGraph::edges() const {
  std::vector<std::pair<VarIndex, VarIndex>> out;
  for (VarIndex u = 0; u < size(); ++u) {
    for (VarIndex v : adj_[u].members()) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

bool UndirectedGraph::is_complete(VarSet vars) const {
  for (VarIndex v : vars.members()) {
    if (!adj_[v].includes(vars.without(v))) return false;
  }
  return true;
}

UndirectedGraph pairwise_graph(const DependencyModel& model) {
  UndirectedGraph g(model.names());
  const VarSet all = model.domain();
  for (VarIndex a = 0; a < model.size(); ++a) {
    for (VarIndex b = a + 1; b < model.size(); ++b) {
      if (!model.holds(a, b, all.without(a).without(b))) g.add_edge(a, b);
    }
  }
  return g;
}

bool separates(const UndirectedGraph& g, VarIndex a, VarIndex b,
               VarSet cond) {
  if (a < 0 || b < 0 || a >= g.size() || b >= g.size() ||
      !g.all().includes(cond)) {
    throw Error(ErrorKind::kUnknownVariable, "query outside the graph");
  }
  if (a == b || cond.contains(a) || cond.contains(b)) {
    throw Error(ErrorKind::kOverlappingSets,
                "a, b and U must be pairwise disjoint");
  }
  // Reachability from a with U deleted.
  VarSet reached = VarSet::single(a);
  VarSet frontier = reached;
  while (!frontier.empty()) {
    VarSet next;
    for (VarIndex v : frontier.members()) next = next | g.neighbors(v);
    next = next - cond - reached;
    if (next.contains(b)) return false;
    reached = reached | next;
    frontier = next;
  }
  return true;
}

DependencyModel separation_model(const UndirectedGraph& g) {
  return DependencyModel(g.nodes(), [&](VarIndex a, VarIndex b, VarSet cond) {
    return separates(g, a, b, cond);
  });
}

std::optional<Triplet> graph_isomorph_mismatch(const DependencyModel& model) {
  const UndirectedGraph g = pairwise_graph(model);
  std::optional<Triplet> mismatch;
  model.for_each([&](VarIndex a, VarIndex b, VarSet cond, bool value) {
    if (mismatch) return;
    if (value != separates(g, a, b, cond)) {
      mismatch = Triplet::make(model.size(), a, b, cond);
    }
  });
  return mismatch;
}

bool is_graph_isomorph(const DependencyModel& model) {
  return !graph_isomorph_mismatch(model).has_value();
}

// --- axioms ----------------------------------------------------------------

std::string_view to_string(Axiom axiom) {
  switch (axiom) {
    case Axiom::kSymmetry: return "symmetry";
    case Axiom::kDecomposition: return "decomposition";
    case Axiom::kIntersection: return "intersection";
    case Axiom::kStrongUnion: return "strong union";
    case Axiom::kTransitivity: return "transitivity";
  }
  return "unknown";
}

bool AxiomReport::all_hold() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const AxiomVerdict& v) { return v.holds; });
}

namespace {

bool holds_set(const DependencyModel& model, const SetTriplet& t) {
  for (VarIndex a : t.a.members()) {
    for (VarIndex b : t.b.members()) {
      if (!model.holds(a, b, t.cond)) return false;
    }
  }
  return true;
}

// Calls fn(roles) for every assignment of each variable to one of
// `num_roles` roles (role 0 = unused), variable 0 varying slowest.
void for_each_role_assignment(int n, int num_roles,
                              const std::function<bool(const std::vector<VarSet>&)>& fn) {
  std::vector<int> digit(static_cast<std::size_t>(n), 0);
  std::vector<VarSet> roles(static_cast<std::size_t>(num_roles));
  while (true) {
    std::fill(roles.begin(), roles.end(), VarSet());
    for (VarIndex v = 0; v < n; ++v) {
      roles[static_cast<std::size_t>(digit[v])] =
          roles[static_cast<std::size_t>(digit[v])].with(v);
    }
    if (!fn(roles)) return;
    int k = n - 1;
    while (k >= 0 && ++digit[k] == num_roles) digit[k--] = 0;
    if (k < 0) return;
  }
}

bool min_less(VarSet x, VarSet y) {
  return x.members().front() < y.members().front();
}

AxiomVerdict check_axiom(const DependencyModel& model, Axiom axiom) {
  AxiomVerdict verdict;
  verdict.axiom = axiom;
  const int n = model.size();
  auto fail = [&](std::vector<SetTriplet> premises,
                  std::vector<SetTriplet> conclusions) {
    verdict.holds = false;
    verdict.premises = std::move(premises);
    verdict.conclusions = std::move(conclusions);
    return false;
  };
  switch (axiom) {
    case Axiom::kSymmetry:
      // roles: 1 = A, 2 = B, 3 = U
      for_each_role_assignment(n, 4, [&](const std::vector<VarSet>& r) {
        if (r[1].empty() || r[2].empty()) return true;
        const SetTriplet ab{r[1], r[2], r[3]};
        const SetTriplet ba{r[2], r[1], r[3]};
        const bool x = holds_set(model, ab);
        const bool y = holds_set(model, ba);
        if (x && !y) return fail({ab}, {ba});
        if (y && !x) return fail({ba}, {ab});
        return true;
      });
      break;
    case Axiom::kDecomposition:
      // roles: 1 = A, 2 = B, 3 = W, 4 = U
      for_each_role_assignment(n, 5, [&](const std::vector<VarSet>& r) {
        if (r[1].empty() || r[2].empty() || r[3].empty()) return true;
        const SetTriplet premise{r[1], r[2] | r[3], r[4]};
        if (!holds_set(model, premise)) return true;
        const SetTriplet c1{r[1], r[2], r[4]};
        const SetTriplet c2{r[1], r[3], r[4]};
        if (!holds_set(model, c1)) return fail({premise}, {c1});
        if (!holds_set(model, c2)) return fail({premise}, {c2});
        return true;
      });
      break;
    case Axiom::kIntersection:
      for_each_role_assignment(n, 5, [&](const std::vector<VarSet>& r) {
        if (r[1].empty() || r[2].empty() || r[3].empty()) return true;
        const SetTriplet p1{r[1], r[2], r[4] | r[3]};
        const SetTriplet p2{r[1], r[3], r[4] | r[2]};
        if (!holds_set(model, p1) || !holds_set(model, p2)) return true;
        const SetTriplet c{r[1], r[2] | r[3], r[4]};
        if (!holds_set(model, c)) return fail({p1, p2}, {c});
        return true;
      });
      break;
    case Axiom::kStrongUnion:
      // roles: 1 = A, 2 = B, 3 = W, 4 = U
      for_each_role_assignment(n, 5, [&](const std::vector<VarSet>& r) {
        if (r[1].empty() || r[2].empty() || r[4].empty()) return true;
        if (!min_less(r[1], r[2])) return true;
        const SetTriplet premise{r[1], r[2], r[3]};
        if (!holds_set(model, premise)) return true;
        const SetTriplet c{r[1], r[2], r[3] | r[4]};
        if (!holds_set(model, c)) return fail({premise}, {c});
        return true;
      });
      break;
    case Axiom::kTransitivity:
      // roles: 1 = A, 2 = B, 3 = W; c ranges over the unused variables.
      for_each_role_assignment(n, 4, [&](const std::vector<VarSet>& r) {
        if (r[1].empty() || r[2].empty()) return true;
        if (!min_less(r[1], r[2])) return true;
        const SetTriplet premise{r[1], r[2], r[3]};
        if (!holds_set(model, premise)) return true;
        for (VarIndex c : r[0].members()) {
          const SetTriplet c1{r[1], VarSet::single(c), r[3]};
          const SetTriplet c2{VarSet::single(c), r[2], r[3]};
          if (!holds_set(model, c1) && !holds_set(model, c2)) {
            return fail({premise}, {c1, c2});
          }
        }
        return true;
      });
      break;
  }
  return verdict;
}

}  // namespace

AxiomReport check_pearl_axioms(const DependencyModel& model) {
  AxiomReport report;
  for (Axiom axiom : kAllAxioms) {
    report.verdicts[static_cast<std::size_t>(axiom)] =
        check_axiom(model, axiom);
  }
  return report;
}

// --- cliques ---------------------------------------------------------------

namespace {

// Bron-Kerbosch without pivoting.
void extend(const UndirectedGraph& g, VarSet current, VarSet candidates,
            VarSet excluded, std::vector<VarSet>& out) {
  if (candidates.empty() && excluded.empty()) {
    out.push_back(current);
    return;
  }
  for (VarIndex v : candidates.members()) {
    const VarSet nv = g.neighbors(v);
    extend(g, current.with(v), candidates & nv, excluded & nv, out);
    candidates = candidates.without(v);
    excluded = excluded.with(v);
  }
}

}  // namespace

std::vector<VarSet> cliques(const UndirectedGraph& g) {
  std::vector<VarSet> out;
  if (g.size() == 0) return out;
  extend(g, VarSet(), g.all(), VarSet(), out);
  std::sort(out.begin(), out.end(), [](VarSet x, VarSet y) {
    const auto xm = x.members();
    const auto ym = y.members();
    return std::lexicographical_compare(xm.begin(), xm.end(), ym.begin(),
                                        ym.end());
  });
  return out;
}

}  // namespace cshc
