#include "cshc/testkit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "cshc/error.hpp"

namespace cshc::testkit {

JointTable random_positive(SchemaPtr schema, std::uint64_t seed,
                           double floor) {
  Rng rng(seed);
  std::vector<double> raw(schema->num_states());
  for (double& v : raw) v = rng.uniform(floor, 1.0);
  return normalize(std::move(schema), std::move(raw));
}

JointTable plant(const PlantSpec& spec) {
  const DomainSchema& schema = *spec.schema;
  const StateIndexer states(schema, schema.all());
  std::vector<double> log_weights(states.size(), 0.0);
  Assignment x(schema.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    states.decode(i, x);
    for (const auto& [f, w] : spec.features) {
      if (delta(f, x) != 0) log_weights[i] += w;
    }
  }
  const double m = *std::max_element(log_weights.begin(), log_weights.end());
  for (double& v : log_weights) v = std::exp(v - m);
  return normalize(spec.schema, std::move(log_weights));
}

Feature feature(const DomainSchema& schema, std::string_view text) {
  return Feature{parse_context(schema, text)};
}

JointTable plant_graph(SchemaPtr schema, const UndirectedGraph& graph,
                       std::uint64_t seed, double scale) {
  Rng rng(seed);
  PlantSpec spec{schema, {}, seed};
  for (VarSet clique : cliques(graph)) {
    const StateIndexer idx(*schema, clique);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      Assignment y(schema->size());
      idx.decode(i, y);
      spec.features.emplace_back(Feature{std::move(y)},
                                 scale * rng.uniform(-1.0, 1.0));
    }
  }
  return plant(spec);
}

namespace {

SchemaPtr abc() { return make_binary_schema({"a", "b", "c"}); }
SchemaPtr abcd() { return make_binary_schema({"a", "b", "c", "d"}); }

JointTable planted(SchemaPtr schema,
                   std::vector<std::pair<std::string, double>> items) {
  PlantSpec spec{schema, {}, 0};
  for (const auto& [text, w] : items) {
    spec.features.emplace_back(feature(*schema, text), w);
  }
  return plant(spec);
}

}  // namespace

JointTable d2() { return planted(abc(), {{"a=1,b=1,c=1", 1.0}}); }

JointTable chain() {
  return planted(abc(), {{"a=1,b=1", 0.8}, {"b=1,c=1", -0.6}});
}

JointTable xor_triple() {
  return planted(abc(), {{"a=0,b=0,c=0", 2.0},
                         {"a=0,b=1,c=1", 2.0},
                         {"a=1,b=0,c=1", 2.0},
                         {"a=1,b=1,c=0", 2.0}});
}

JointTable independent_coins() {
  const SchemaPtr s = abc();
  std::vector<double> probs;
  const double pa = 0.75;
  const double pb = 0.5;
  const double pc = 0.2;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      for (int c = 0; c < 2; ++c) {
        probs.push_back((a ? pa : 1 - pa) * (b ? pb : 1 - pb) *
                        (c ? pc : 1 - pc));
      }
    }
  }
  return JointTable(s, std::move(probs));
}

JointTable uniform(SchemaPtr schema) {
  std::vector<double> raw(schema->num_states(), 1.0);
  return normalize(std::move(schema), std::move(raw));
}

std::vector<NamedTable> fixtures() {
  return {{"d2", d2()},
          {"chain", chain()},
          {"xor", xor_triple()},
          {"coins", independent_coins()},
          {"uniform", uniform(abc())}};
}

JointTable fixture(std::string_view name) {
  for (NamedTable& f : fixtures()) {
    if (f.name == name) return std::move(f.table);
  }
  throw Error(ErrorKind::kInvalidArgument,
              "unknown fixture '" + std::string(name) + "'");
}

std::vector<NamedTable> planted_csi_fixtures() {
  std::vector<NamedTable> out;
  out.push_back({"d2", d2()});
  // a-b interaction only when c=0.
  out.push_back({"ctx0", planted(abc(), {{"a=1,b=1,c=0", 1.2},
                                         {"a=1", 0.3},
                                         {"c=1", -0.4}})});
  // D2 extended by a fourth variable coupled to c.
  out.push_back({"d2-4", planted(abcd(), {{"a=1,b=1,c=1", 1.0},
                                          {"c=1,d=1", 0.7}})});
  // Interaction among all four only when everything is on.
  out.push_back({"all-on-4", planted(abcd(), {{"a=1,b=1,c=1,d=1", 1.3},
                                              {"b=1", -0.2}})});
  // Ternary context variable: a-b interaction only when c=2.
  {
    SchemaPtr s = make_schema({{"a", 2}, {"b", 2}, {"c", 3}});
    out.push_back({"ternary-ctx", planted(s, {{"a=1,b=1,c=2", 1.1},
                                              {"c=1", 0.5}})});
  }
  return out;
}

std::vector<NamedTable> random_plantings(std::size_t count,
                                         std::uint64_t seed) {
  Rng rng(seed);
  std::vector<NamedTable> out;
  for (std::size_t k = 0; k < count; ++k) {
    const int n = 3 + static_cast<int>(rng.below(2));
    std::vector<Variable> vars;
    for (int v = 0; v < n; ++v) {
      vars.push_back({std::string(1, static_cast<char>('a' + v)), 2});
    }
    SchemaPtr schema = make_schema(std::move(vars));
    PlantSpec spec{schema, {}, seed + k};
    const int num_features = 1 + static_cast<int>(rng.below(4));
    for (int j = 0; j < num_features; ++j) {
      Assignment y(n);
      for (VarIndex v = 0; v < n; ++v) {
        if (rng.uniform() < 0.6) y.set(v, static_cast<int>(rng.below(2)));
      }
      if (y.scope().empty()) y.set(static_cast<VarIndex>(rng.below(n)), 1);
      const double magnitude = rng.uniform(0.3, 1.5);
      spec.features.emplace_back(Feature{std::move(y)},
                                 rng.uniform() < 0.5 ? -magnitude : magnitude);
    }
    out.push_back({"planted-" + std::to_string(k), plant(spec)});
  }
  return out;
}

std::vector<NamedTable> corpus(std::size_t random_count, std::uint64_t seed) {
  std::vector<NamedTable> out;
  for (std::size_t k = 0; k < random_count; ++k) {
    const bool four = k % 2 == 1;
    SchemaPtr schema = four ? abcd() : abc();
    out.push_back({(four ? "random4-" : "random3-") + std::to_string(k),
                   random_positive(schema, seed * 100003 + k)});
  }
  for (NamedTable& f : fixtures()) out.push_back(std::move(f));
  for (NamedTable& f : planted_csi_fixtures()) {
    if (f.name == "d2") continue;
    out.push_back(std::move(f));
  }
  for (std::size_t k = 0; k < 3; ++k) {
    SchemaPtr s = abcd();
    UndirectedGraph path({"a", "b", "c", "d"});
    path.add_edge(0, 1);
    path.add_edge(1, 2);
    path.add_edge(2, 3);
    out.push_back({"chain4-" + std::to_string(k),
                   plant_graph(s, path, seed + 7 * k)});
  }
  for (NamedTable& f : random_plantings(100, seed + 17)) {
    out.push_back(std::move(f));
  }
  return out;
}

// --- oracles ---------------------------------------------------------------

namespace {

bool close(double x, double y, double tol) {
  return std::abs(x - y) <= tol * std::max(std::abs(x), std::abs(y));
}

}  // namespace

CSIModel oracle_csi_set(const JointTable& p, double tol) {
  const DomainSchema& schema = p.schema();
  const int n = schema.size();
  // Decode every complete assignment once.
  std::vector<std::vector<int>> rows;
  {
    const StateIndexer states(schema, schema.all());
    Assignment x(n);
    for (std::size_t i = 0; i < states.size(); ++i) {
      states.decode(i, x);
      rows.push_back(x.values());
    }
  }
  auto agrees = [](const std::vector<int>& row, const Assignment& partial) {
    for (VarIndex v : partial.scope().members()) {
      if (row[static_cast<std::size_t>(v)] != partial.value(v)) return false;
    }
    return true;
  };
  return CSIModel(p.schema_ptr(), [&](const Triplet& t) {
    const StateIndexer cond_states(schema, t.cond);
    for (std::size_t u = 0; u < cond_states.size(); ++u) {
      Assignment base = t.ctx;
      cond_states.decode(u, base);
      double denom = 0.0;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (agrees(rows[i], base)) denom += p[i];
      }
      if (denom <= 0.0) continue;
      for (int vb = 0; vb < schema.cardinality(t.b); ++vb) {
        Assignment with_b = base;
        with_b.set(t.b, vb);
        double denom_b = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (agrees(rows[i], with_b)) denom_b += p[i];
        }
        if (denom_b <= 0.0) continue;
        for (int va = 0; va < schema.cardinality(t.a); ++va) {
          Assignment with_a = base;
          with_a.set(t.a, va);
          Assignment with_ab = with_b;
          with_ab.set(t.a, va);
          double num_a = 0.0;
          double num_ab = 0.0;
          for (std::size_t i = 0; i < rows.size(); ++i) {
            if (agrees(rows[i], with_a)) num_a += p[i];
            if (agrees(rows[i], with_ab)) num_ab += p[i];
          }
          // p(a | b, u, x_W) against p(a | u, x_W)
          if (!close(num_ab / denom_b, num_a / denom, tol)) return false;
        }
      }
    }
    return true;
  });
}

double oracle_canonical_weight(const JointTable& p, const Feature& f,
                               const Assignment& reference) {
  // Recursive route: ln p(y_C, ref elsewhere) - ln p(ref) equals the sum of
  // the weights of all nonempty sub-features of y_C.
  const DomainSchema& schema = p.schema();
  const StateIndexer states(schema, schema.all());
  auto log_p = [&](VarSet sub) {
    Assignment x = reference;
    for (VarIndex v : sub.members()) x.set(v, f.values.value(v));
    return std::log(p[states.index(x)]);
  };
  std::function<double(VarSet)> weight = [&](VarSet scope) -> double {
    double w = log_p(scope) - log_p(VarSet());
    for (VarSet sub : scope.subsets()) {
      if (sub.empty() || sub == scope) continue;
      w -= weight(sub);
    }
    return w;
  };
  return weight(f.scope());
}

std::vector<UndirectedGraph> all_graphs(int n) {
  std::vector<std::string> names;
  for (int v = 0; v < n; ++v) {
    names.emplace_back(1, static_cast<char>('a' + v));
  }
  std::vector<std::pair<VarIndex, VarIndex>> slots;
  for (VarIndex u = 0; u < n; ++u) {
    for (VarIndex v = u + 1; v < n; ++v) slots.emplace_back(u, v);
  }
  std::vector<UndirectedGraph> out;
  for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
    UndirectedGraph g(names);
    for (std::size_t k = 0; k < slots.size(); ++k) {
      if ((mask >> k) & 1u) g.add_edge(slots[k].first, slots[k].second);
    }
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace cshc::testkit
