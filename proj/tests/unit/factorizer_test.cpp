#include <gtest/gtest.h>

#include "cshc/error.hpp"
#include "cshc/factorizer.hpp"
#include "cshc/testkit.hpp"

namespace cshc {
namespace {

using testkit::feature;

const std::vector<std::string> kAbc{"a", "b", "c"};

ErrorKind kind_of(const std::function<void()>& fn, std::string* what = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (what) *what = e.what();
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kInvalidArgument;
}

DependencyModel ci_model(const JointTable& p) {
  return reduce(build_csi_model(p), Context(p.schema().size()));
}

TEST(CiFactorization, Coins) {
  const CIFactorization f = verify_ci_factorization(
      testkit::independent_coins(), DependencyModel::all_true(kAbc));
  EXPECT_EQ(f.cliques, (std::vector<VarSet>{VarSet{0}, VarSet{1}, VarSet{2}}));
  EXPECT_EQ(f.features.size(), 3u);
  EXPECT_LE(f.fit.residual, 1e-9);
  EXPECT_TRUE(f.cliques_respect_model);
}

TEST(CiFactorization, Chain) {
  const JointTable p = testkit::chain();
  const CIFactorization f = verify_ci_factorization(p, ci_model(p));
  EXPECT_EQ(f.cliques, (std::vector<VarSet>{VarSet{0, 1}, VarSet{1, 2}}));
  for (VarSet c : f.cliques) EXPECT_FALSE(c.includes(VarSet{0, 2}));
  EXPECT_TRUE(f.cliques_respect_model);
  EXPECT_LE(f.fit.residual, 1e-7);
}

TEST(CiFactorization, XorPreconditions) {
  const JointTable p = testkit::xor_triple();
  std::string what;
  // Marginal a-b independence alone is not representable by a graph.
  const auto ab = DependencyModel::all_false(kAbc).with(0, 1, VarSet{}, true);
  EXPECT_EQ(kind_of([&] { verify_ci_factorization(p, ab); }, &what),
            ErrorKind::kPreconditionFailed);
  EXPECT_NE(what.find("graph-isomorphism"), std::string::npos) << what;
  // a-b given c is graph-isomorph but false in the table.
  const auto ab_c = DependencyModel::all_false(kAbc).with(0, 1, VarSet{2}, true);
  EXPECT_EQ(kind_of([&] { verify_ci_factorization(p, ab_c); }, &what),
            ErrorKind::kPreconditionFailed);
  EXPECT_NE(what.find("I-map"), std::string::npos) << what;
}

TEST(CiFactorization, PositivityNamed) {
  const JointTable p =
      normalize(make_binary_schema({"a", "b", "c"}), {1, 1, 1, 1, 1, 1, 1, 0});
  std::string what;
  EXPECT_EQ(kind_of([&] {
              verify_ci_factorization(p, DependencyModel::all_false(kAbc));
            }, &what),
            ErrorKind::kPreconditionFailed);
  EXPECT_NE(what.find("positivity"), std::string::npos);
}

TEST(FactorizeCsi, AllTrueGivesSingletons) {
  const JointTable p = testkit::uniform(make_binary_schema({"a", "b", "c"}));
  const FeatureSet f =
      factorize_csi(p, CSIModel::all_true(p.schema_ptr()), {VarSet{}});
  EXPECT_EQ(f.size(), 6u);
  for (const Feature& x : f) EXPECT_EQ(x.scope().size(), 1);
}

TEST(FactorizeCsi, D2OverC) {
  const JointTable p = testkit::d2();
  const FeatureSet f = factorize_csi(p, build_csi_model(p), {VarSet{2}});
  const SchemaPtr s = p.schema_ptr();
  const FeatureSet expected = canonicalize({
      feature(*s, "c=0"), feature(*s, "a=0,c=0"), feature(*s, "a=1,c=0"),
      feature(*s, "b=0,c=0"), feature(*s, "b=1,c=0"), feature(*s, "c=1"),
      feature(*s, "a=0,b=0,c=1"), feature(*s, "a=0,b=1,c=1"),
      feature(*s, "a=1,b=0,c=1"), feature(*s, "a=1,b=1,c=1")});
  EXPECT_EQ(f, expected);
  for (const Feature& x : f) {
    if (x.scope().includes(VarSet{0, 1})) EXPECT_EQ(x.values.value(2), 1);
  }
  EXPECT_LE(fit_restricted(p, f).residual, 1e-7);
}

TEST(FactorizeCsi, EmptyContextIsCliqueConstruction) {
  const JointTable p = testkit::chain();
  const FeatureSet f = factorize_csi(p, build_csi_model(p), {VarSet{}});
  EXPECT_EQ(f.size(), 8u);
  for (const Feature& x : f) {
    EXPECT_TRUE(x.scope() == (VarSet{0, 1}) || x.scope() == (VarSet{1, 2}));
  }
  // Same span as the clique-scoped canonical features.
  const CIFactorization ci = verify_ci_factorization(p, ci_model(p));
  EXPECT_EQ(independent_subset(p.schema(), f).size(), ci.features.size());
}

TEST(FactorizeCsi, NamesTheFailingContext) {
  const JointTable p = testkit::xor_triple();
  std::string what;
  EXPECT_EQ(kind_of([&] { factorize_csi(p, build_csi_model(p), {VarSet{}}); },
                    &what),
            ErrorKind::kNotGraphIsomorph);
  EXPECT_NE(what.find("context {}"), std::string::npos) << what;
  // Every single-variable context is fine.
  EXPECT_NO_THROW(factorize_csi(p, build_csi_model(p), {VarSet{2}}));
}

TEST(FactorizeCsi, RejectsNonPositive) {
  const JointTable p =
      normalize(make_binary_schema({"a", "b", "c"}), {1, 1, 1, 1, 1, 1, 1, 0});
  EXPECT_EQ(kind_of([&] {
              factorize_csi(p, CSIModel::all_true(p.schema_ptr()), {VarSet{}});
            }),
            ErrorKind::kNotPositive);
}

TEST(VerifyCshc, Uniform) {
  const JointTable p = testkit::uniform(make_binary_schema({"a", "b", "c"}));
  const TheoremReport r = verify_cshc(p, build_csi_model(p));
  EXPECT_TRUE(r.theorem_verified);
  EXPECT_EQ(r.features.size(), 3u);
  EXPECT_EQ(r.counts->csi_pruned, 3u);
}

TEST(VerifyCshc, D2) {
  const JointTable p = testkit::d2();
  const TheoremReport r = verify_cshc(p, build_csi_model(p));
  EXPECT_TRUE(r.positivity);
  EXPECT_TRUE(r.csi_map);
  EXPECT_TRUE(r.all_graph_isomorph);
  EXPECT_TRUE(r.reduced_i_maps);
  EXPECT_EQ(r.contexts.size(), 27u);
  EXPECT_TRUE(r.factorization.verdict);
  EXPECT_LE(r.fit->residual, 1e-7);
  EXPECT_TRUE(r.theorem_verified);
  ASSERT_TRUE(r.counts);
  EXPECT_LT(r.counts->csi_pruned, r.counts->ci_pruned);
  // The CI graph of D2 is the triangle, whose one clique covers every scope.
  EXPECT_EQ(r.counts->ci_pruned, r.counts->saturated);
  EXPECT_EQ(r.counts->saturated, 7u);
  EXPECT_EQ(r.counts->csi_pruned, 4u);
}

TEST(VerifyCshc, FabricatedCsiIsRefuted) {
  const JointTable p = testkit::d2();
  const Context c1 = parse_context(p.schema(), "c=1");
  const CSIModel bad =
      build_csi_model(p).with(Triplet::make(0, 1, VarSet{}, c1), true);
  const TheoremReport r = verify_cshc(p, bad);
  EXPECT_FALSE(r.csi_map);
  ASSERT_TRUE(r.csi_map_violation);
  EXPECT_EQ(*r.csi_map_violation, Triplet::make(0, 1, VarSet{}, c1));
  EXPECT_FALSE(r.theorem_verified);
  EXPECT_FALSE(r.factorization_checked);
}

TEST(VerifyCshc, XorReportsFailingContext) {
  const JointTable p = testkit::xor_triple();
  const TheoremReport r = verify_cshc(p, build_csi_model(p));
  EXPECT_TRUE(r.csi_map);
  EXPECT_FALSE(r.all_graph_isomorph);
  EXPECT_FALSE(r.theorem_verified);
  std::size_t failing = 0;
  for (const ContextVerdict& c : r.contexts) {
    if (c.graph_isomorph) continue;
    ++failing;
    EXPECT_TRUE(c.ctx.scope().empty());
    EXPECT_TRUE(c.mismatch.has_value());
  }
  EXPECT_EQ(failing, 1u);
}

TEST(VerifyCshc, NonPositiveIsReported) {
  const JointTable p =
      normalize(make_binary_schema({"a", "b", "c"}), {1, 1, 1, 1, 1, 1, 1, 0});
  const TheoremReport r = verify_cshc(p, CSIModel::all_false(p.schema_ptr()));
  EXPECT_FALSE(r.positivity);
  EXPECT_FALSE(r.theorem_verified);
}

TEST(VerifyCshc, SuppliedFeaturesAreChecked) {
  const JointTable p = testkit::d2();
  VerifyOptions opt;
  opt.features = canonical_features(p.schema(), Assignment({0, 0, 0}));
  const TheoremReport r = verify_cshc(p, build_csi_model(p), opt);
  EXPECT_TRUE(r.user_features);
  EXPECT_FALSE(r.factorization.verdict);
  EXPECT_LE(r.fit->residual, 1e-9);
  EXPECT_FALSE(r.theorem_verified);
}

TEST(VerifyCshc, StrictMatching) {
  const JointTable p = testkit::d2();
  VerifyOptions opt;
  opt.match_mode = MatchMode::kStrict;
  const TheoremReport r = verify_cshc(p, build_csi_model(p), opt);
  EXPECT_TRUE(r.theorem_verified);
}

TEST(Sparsity, Coins) {
  const JointTable p = testkit::independent_coins();
  const FeatureCounts c = sparsity_report(p, build_csi_model(p));
  EXPECT_EQ(c.saturated, 7u);
  EXPECT_EQ(c.ci_pruned, 3u);
  EXPECT_EQ(c.csi_pruned, 3u);
  EXPECT_DOUBLE_EQ(c.csi_ratio(), 3.0 / 7.0);
}

TEST(Sparsity, D2AndChain) {
  const JointTable d2 = testkit::d2();
  const FeatureCounts cd = sparsity_report(d2, build_csi_model(d2));
  EXPECT_LT(cd.csi_pruned, cd.ci_pruned);
  const JointTable ch = testkit::chain();
  const FeatureCounts cc = sparsity_report(ch, build_csi_model(ch));
  EXPECT_EQ(cc.ci_pruned, cc.csi_pruned);
  EXPECT_EQ(cc.ci_pruned, 5u);
}

TEST(Sparsity, SaturatedCount) {
  for (int k = 1; k <= 4; ++k) {
    std::vector<std::string> names;
    for (int v = 0; v < k; ++v) names.emplace_back(1, char('a' + v));
    const JointTable p = testkit::uniform(make_binary_schema(names));
    EXPECT_EQ(sparsity_report(p, build_csi_model(p)).saturated,
              (std::size_t{1} << k) - 1);
  }
}

TEST(Sparsity, XorThrows) {
  const JointTable p = testkit::xor_triple();
  EXPECT_EQ(kind_of([&] { sparsity_report(p, build_csi_model(p)); }),
            ErrorKind::kPreconditionFailed);
}

// --- properties ---------------------------------------------------------------

TEST(DegenerateContexts, MatchCiFactorization) {
  for (const auto& f : testkit::corpus(16, 5)) {
    const JointTable& p = f.table;
    const DependencyModel i0 = ci_model(p);
    const CSIModel lifted = lift(i0, p.schema_ptr());
    const TheoremReport r = verify_cshc(p, lifted);
    bool ci_ok = true;
    try {
      const CIFactorization ci = verify_ci_factorization(p, i0);
      ci_ok = ci.cliques_respect_model && ci.fit.residual <= 1e-7;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kPreconditionFailed);
      ci_ok = false;
    }
    EXPECT_EQ(r.theorem_verified, ci_ok) << f.name;
  }
}

TEST(PlantSoundness, PlantedFeaturesFactorize) {
  // Closure: the planted features plus every singleton feature.
  testkit::Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const SchemaPtr s = make_binary_schema({"a", "b", "c", "d"});
    testkit::PlantSpec spec{s, {}, static_cast<std::uint64_t>(trial)};
    const int count = 1 + static_cast<int>(rng.below(3));
    for (int j = 0; j < count; ++j) {
      Assignment y(4);
      for (VarIndex v = 0; v < 4; ++v) {
        if (rng.uniform() < 0.6) y.set(v, static_cast<int>(rng.below(2)));
      }
      if (y.scope().empty()) y.set(0, 1);
      const double w = rng.uniform(0.3, 1.5);
      spec.features.emplace_back(Feature{y}, rng.uniform() < 0.5 ? -w : w);
    }
    const JointTable p = testkit::plant(spec);
    FeatureSet closure;
    for (const auto& [feat, w] : spec.features) closure.push_back(feat);
    for (VarIndex v = 0; v < 4; ++v) {
      for (int x = 0; x < 2; ++x) {
        closure.push_back(Feature{Assignment(4).set(v, x)});
      }
    }
    closure = canonicalize(closure);
    EXPECT_TRUE(factorizes(closure, build_csi_model(p)).verdict) << trial;
    EXPECT_LE(fit_restricted(p, closure).residual, 1e-7) << trial;
  }
}

}  // namespace
}  // namespace cshc
