#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "cshc/error.hpp"
#include "cshc/graph.hpp"
#include "cshc/independence.hpp"
#include "cshc/loglinear.hpp"
#include "cshc/testkit.hpp"

namespace cshc {
namespace {

TEST(Rng, DeterministicAndInRange) {
  testkit::Rng x(42);
  testkit::Rng y(42);
  for (int i = 0; i < 1000; ++i) {
    const double u = x.uniform();
    EXPECT_EQ(u, y.uniform());
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(x.below(7), 7u);
    y.below(7);
  }
}

TEST(RandomPositive, RespectsFloorAndNormalizes) {
  const SchemaPtr s = make_binary_schema({"a", "b", "c"});
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const JointTable p = testkit::random_positive(s, seed, 0.2);
    EXPECT_NEAR(p.total(), 1.0, 1e-12);
    // Raw entries lie in [0.2, 1], so no entry is below 0.2 / 8 after
    // normalization and the ratio of any two stays within 5.
    EXPECT_GE(p.min_entry(), 0.2 / 8.0);
    double hi = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) hi = std::max(hi, p[i]);
    EXPECT_LE(hi / p.min_entry(), 5.0 + 1e-9);
  }
}

TEST(Plant, SingleFeature) {
  // One weight-1 feature on a=1 over one binary variable: p(a=1) = e/(1+e).
  const SchemaPtr s = make_binary_schema({"a"});
  const JointTable p =
      testkit::plant({s, {{testkit::feature(*s, "a=1"), 1.0}}, 0});
  EXPECT_NEAR(p[1], std::exp(1.0) / (1.0 + std::exp(1.0)), 1e-15);
}

TEST(Plant, D2Entries) {
  const JointTable p = testkit::d2();
  const double e = std::exp(1.0);
  for (std::size_t i = 0; i < 7; ++i) EXPECT_NEAR(p[i], 1.0 / (7.0 + e), 1e-15);
  EXPECT_NEAR(p[7], e / (7.0 + e), 1e-15);
}

TEST(Plant, GraphPlantingHasCliqueSupport) {
  UndirectedGraph g({"a", "b", "c"});
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  const JointTable p =
      testkit::plant_graph(make_binary_schema({"a", "b", "c"}), g, 9);
  EXPECT_TRUE(test_ci(p, "a", "c", {"b"}));
  EXPECT_FALSE(test_ci(p, "a", "b", {}));
}

TEST(Fixtures, NamesAndLookup) {
  std::vector<std::string> names;
  for (const auto& f : testkit::fixtures()) names.push_back(f.name);
  EXPECT_EQ(names, (std::vector<std::string>{"d2", "chain", "xor", "coins",
                                             "uniform"}));
  EXPECT_NO_THROW(testkit::fixture("xor"));
  EXPECT_THROW(testkit::fixture("nope"), Error);
}

TEST(Fixtures, CoinsMarginals) {
  const JointTable p = testkit::independent_coins();
  EXPECT_NEAR(marginal(p, VarSet{0})[1], 0.75, 1e-15);
  EXPECT_NEAR(marginal(p, VarSet{1})[1], 0.5, 1e-15);
  EXPECT_NEAR(marginal(p, VarSet{2})[1], 0.2, 1e-15);
}

TEST(Oracle, AgreesWithLibraryOnFixtures) {
  for (const auto& f : testkit::fixtures()) {
    EXPECT_EQ(testkit::oracle_csi_set(f.table), build_csi_model(f.table))
        << f.name;
  }
}

TEST(Oracle, CanonicalWeightOfD2) {
  const JointTable p = testkit::d2();
  const DomainSchema& s = p.schema();
  const Assignment ref(std::vector<int>{0, 0, 0});
  EXPECT_NEAR(testkit::oracle_canonical_weight(
                  p, testkit::feature(s, "a=1,b=1,c=1"), ref),
              1.0, 1e-12);
  EXPECT_NEAR(testkit::oracle_canonical_weight(
                  p, testkit::feature(s, "a=1,b=1"), ref),
              0.0, 1e-12);
}

TEST(PlantedFixtures, GraphIsomorphInEveryContext) {
  for (const auto& f : testkit::planted_csi_fixtures()) {
    for (const ReducedModel& r : reduce_all(build_csi_model(f.table))) {
      EXPECT_TRUE(is_graph_isomorph(r.model))
          << f.name << " " << format_context(f.table.schema(), r.ctx);
    }
  }
}

TEST(PlantedFixtures, CarryProperContextSpecificIndependence) {
  // Some CSI must fail once its context is widened to a plain conditioning
  // set; otherwise the fixture would carry no context-specific structure.
  for (const auto& f : testkit::planted_csi_fixtures()) {
    const CSIModel csi = build_csi_model(f.table);
    bool proper = false;
    for (const Triplet& t : csi.true_triplets()) {
      if (t.ctx.scope().empty()) continue;
      if (!test_ci(f.table, t.a, t.b, t.cond | t.ctx.scope())) proper = true;
    }
    EXPECT_TRUE(proper) << f.name;
  }
}

TEST(Corpus, DeterministicAndComplete) {
  const auto x = testkit::corpus(20, 3);
  const auto y = testkit::corpus(20, 3);
  ASSERT_EQ(x.size(), y.size());
  std::set<std::string> names;
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(x[i].name, y[i].name);
    EXPECT_TRUE(std::ranges::equal(x[i].table.probabilities(),
                                   y[i].table.probabilities()));
    EXPECT_TRUE(is_positive(x[i].table)) << x[i].name;
    names.insert(x[i].name);
  }
  EXPECT_EQ(names.size(), x.size());
  EXPECT_TRUE(names.count("xor"));
  EXPECT_TRUE(names.count("ternary-ctx"));
}

TEST(AllGraphs, Counts) {
  EXPECT_EQ(testkit::all_graphs(1).size(), 1u);
  EXPECT_EQ(testkit::all_graphs(3).size(), 8u);
  EXPECT_EQ(testkit::all_graphs(5).size(), 1024u);
}

}  // namespace
}  // namespace cshc
