#include <gtest/gtest.h>

#include "cshc/error.hpp"
#include "cshc/io.hpp"
#include "cshc/testkit.hpp"

namespace cshc {
namespace {

std::string parse_error(std::string_view text) {
  try {
    io::parse_distribution(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParseError) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "parsed";
  return {};
}

TEST(DistributionFile, RoundTripIsExact) {
  for (const auto& f : testkit::corpus(6, 9)) {
    const std::string text = io::format_distribution(f.table, f.name, 17);
    const io::DistributionFile back = io::parse_distribution(text);
    EXPECT_EQ(back.description, f.name);
    EXPECT_EQ(back.seed, 17u);
    EXPECT_EQ(back.table.schema(), f.table.schema());
    for (std::size_t i = 0; i < f.table.size(); ++i) {
      EXPECT_EQ(back.table[i], f.table[i]);
    }
    EXPECT_EQ(io::format_distribution(back.table, f.name, 17), text);
  }
}

TEST(DistributionFile, Layout) {
  const JointTable p =
      testkit::uniform(make_schema({{"a", 2}, {"b", 3}}));
  EXPECT_EQ(io::format_distribution(p),
            "cshc-distribution 1\n"
            "var a 2\n"
            "var b 3\n"
            "table\n"
            "0.16666666666666666\n0.16666666666666666\n0.16666666666666666\n"
            "0.16666666666666666\n0.16666666666666666\n0.16666666666666666\n");
}

TEST(DistributionFile, CommentsAndFreeLayout) {
  const io::DistributionFile f = io::parse_distribution(
      "# leading comment\n"
      "cshc-distribution 1\r\n"
      "description two  coins \n"
      "\n"
      "var a 2\n"
      "  # indented comment\n"
      "var b 2\n"
      "table\n"
      "  1 1\n"
      "\t2\n"
      "2");
  EXPECT_EQ(f.description, "two  coins");
  EXPECT_FALSE(f.seed.has_value());
  EXPECT_EQ(f.table.probabilities()[3], 2.0);
}

TEST(DistributionFile, Errors) {
  EXPECT_NE(parse_error("").find("empty"), std::string::npos);
  EXPECT_NE(parse_error("cshc-distribution 2\nvar a 2\ntable\n1 1\n")
                .find("version"),
            std::string::npos);
  const std::string short_table =
      parse_error("cshc-distribution 1\nvar a 2\nvar b 2\ntable\n1 1 1\n");
  EXPECT_NE(short_table.find("expected 4 table entries, got 3"),
            std::string::npos)
      << short_table;
  const std::string negative =
      parse_error("cshc-distribution 1\nvar a 2\ntable\n0.5 -0.5\n");
  EXPECT_NE(negative.find("line 4, offset 5"), std::string::npos) << negative;
  EXPECT_NE(parse_error("cshc-distribution 1\nvar a 2\ntable\n0.5 x\n")
                .find("expected a number"),
            std::string::npos);
  EXPECT_NE(parse_error("cshc-distribution 1\nvar a 1\ntable\n1\n")
                .find("cardinality"),
            std::string::npos);
  EXPECT_NE(parse_error("cshc-distribution 1\nvar a 2\nvar a 2\ntable\n")
                .find("duplicate"),
            std::string::npos);
  EXPECT_NE(parse_error("cshc-distribution 1\nvar a 2\n").find("table"),
            std::string::npos);
  EXPECT_NE(parse_error("cshc-distribution 1\ntable\n1\n").find("variable"),
            std::string::npos);
}

TEST(DistributionFile, StateCap) {
  std::string text = "cshc-distribution 1\n";
  for (int i = 0; i < 25; ++i) text += "var v" + std::to_string(i) + " 2\n";
  text += "table\n";
  try {
    io::parse_distribution(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCapExceeded);
  }
}

TEST(FeatureFile, RoundTrip) {
  const JointTable p = testkit::d2();
  const FitResult fit =
      fit_restricted(p, factorize_csi(p, build_csi_model(p), {VarSet{2}}));
  const std::string text = io::format_features(fit.model, fit.residual);
  const io::FeatureFile back = io::parse_features(text);
  EXPECT_EQ(*back.schema, p.schema());
  EXPECT_EQ(back.features, fit.model.features());
  EXPECT_EQ(back.weights, fit.model.weights());
  EXPECT_EQ(back.log_z, fit.model.log_z());
  const LogLinearModel again(back.schema, back.features, back.weights);
  for (const Assignment& x :
       StateIndexer(p.schema(), p.schema().all()).enumerate()) {
    EXPECT_NEAR(evaluate(again, x), p.at(x), 1e-9);
  }
}

TEST(FeatureFile, WeightsOptional) {
  const io::FeatureFile f = io::parse_features(
      "cshc-features 1\nvar a 2\nvar b 2\nfeature a=1 b=0\nfeature 0.5 b=1\n");
  ASSERT_EQ(f.features.size(), 2u);
  EXPECT_EQ(f.weights, (std::vector<double>{0.0, 0.5}));
  EXPECT_EQ(f.features[0].scope(), (VarSet{0, 1}));
  EXPECT_THROW(io::parse_features("cshc-features 1\nvar a 2\nfeature z=1\n"),
               Error);
  EXPECT_THROW(io::parse_features("cshc-features 1\nvar a 2\nfeature 1\n"),
               Error);
}

TEST(CsiListing, RoundTrip) {
  for (const auto& f : testkit::fixtures()) {
    const CSIModel m = build_csi_model(f.table);
    const std::string text = io::format_csi_listing(m);
    EXPECT_EQ(io::parse_csi_listing(f.table.schema_ptr(), text), m) << f.name;
  }
}

TEST(CsiListing, Lines) {
  const JointTable p = testkit::d2();
  EXPECT_EQ(io::format_csi_listing(build_csi_model(p)),
            "# cshc-csis 1\n"
            "# 3 true triplets\n"
            "a b | {} | {c=0}\n"
            "a c | {} | {b=0}\n"
            "b c | {} | {a=0}\n");
  EXPECT_EQ(io::format_csi_listing(build_csi_model(p), VarSet{2}),
            "# cshc-csis 1\n# 1 true triplets\na b | {} | {c=0}\n");
}

TEST(GraphListing, Layout) {
  UndirectedGraph g({"a", "b", "c"});
  g.add_edge(0, 1);
  EXPECT_EQ(io::format_graph(g, "d=1"),
            "# cshc-graph 1\ncontext {d=1}\nnodes a b c\nedges 1\n"
            "a: b\nb: a\nc:\n");
}

TEST(Reports, ResidualFormatting) {
  EXPECT_EQ(io::format_residual(3e-16), "<1e-12");
  EXPECT_EQ(io::format_residual(0.25), "2.500e-01");
}

TEST(Reports, VerifyJsonParsesBack) {
  const JointTable p = testkit::d2();
  const std::string json = io::format_verify_json(
      p.schema(), verify_cshc(p, build_csi_model(p)));
  EXPECT_NE(json.find("\"theorem_verified\": true"), std::string::npos);
  EXPECT_NE(json.find("\"csi_pruned\": 4"), std::string::npos);
}

TEST(Reports, Sparsity) {
  FeatureCounts c{7, 7, 4};
  EXPECT_EQ(io::format_sparsity(c),
            "# cshc-report 1\n"
            "set          features  of-saturated\n"
            "saturated           7  1.0000\n"
            "ci-pruned           7  1.0000\n"
            "csi-pruned          4  0.5714\n"
            "csi/ci 0.5714\n");
}

}  // namespace
}  // namespace cshc
