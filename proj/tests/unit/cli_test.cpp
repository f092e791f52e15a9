#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <gtest/gtest.h>

#include "commands.hpp"
#include "cshc/io.hpp"
#include "cshc/testkit.hpp"

namespace cshc::cli {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cshc_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }
  std::string fixture(const std::string& name) {
    return write(name + ".dist",
                 io::format_distribution(testkit::fixture(name), name));
  }

  struct Run {
    int status;
    std::string out;
    std::string err;
  };
  template <typename Cmd>
  Run run(Cmd cmd, const std::string& arg, const Options& opt = {}) {
    std::ostringstream out, err;
    const int status = cmd(arg, opt, out, err);
    return {status, out.str(), err.str()};
  }

  fs::path dir_;
};

TEST_F(Cli, ValidateUniform) {
  const std::string path = write(
      "u.dist", io::format_distribution(testkit::uniform(
                    make_binary_schema({"a", "b"}))));
  const Run r = run(cmd_validate, path);
  EXPECT_EQ(r.status, kOk);
  EXPECT_NE(r.out.find("positive, normalized, 4 states"), std::string::npos)
      << r.out;
}

TEST_F(Cli, ValidateWrongLength) {
  const std::string path =
      write("bad.dist", "cshc-distribution 1\nvar a 2\nvar b 2\ntable\n1 1 1\n");
  const Run r = run(cmd_validate, path);
  EXPECT_EQ(r.status, kInputError);
  EXPECT_NE(r.err.find("ParseError"), std::string::npos);
  EXPECT_NE(r.err.find("expected 4 table entries, got 3"), std::string::npos)
      << r.err;
}

TEST_F(Cli, ValidateZeroEntry) {
  const std::string path =
      write("z.dist", "cshc-distribution 1\nvar a 2\nvar b 2\ntable\n"
                      "0.5 0 0.25 0.25\n");
  const Run r = run(cmd_validate, path);
  EXPECT_EQ(r.status, kOk);
  EXPECT_NE(r.out.find("positivity=false"), std::string::npos) << r.out;
}

TEST_F(Cli, MissingFileIsInputError) {
  EXPECT_EQ(run(cmd_validate, (dir_ / "none").string()).status, kInputError);
}

TEST_F(Cli, CsisD2) {
  const Run r = run(cmd_csis, fixture("d2"));
  EXPECT_EQ(r.status, kOk);
  EXPECT_NE(r.out.find("a b | {} | {c=0}\n"), std::string::npos);
  EXPECT_EQ(r.out.find("a b | {} | {c=1}\n"), std::string::npos);
}

TEST_F(Cli, CsisUniformListsEverything) {
  const std::string path = fixture("uniform");
  const Run r = run(cmd_csis, path);
  const JointTable p = testkit::fixture("uniform");
  EXPECT_NE(r.out.find("# " + std::to_string(
                           CSIModel::all_true(p.schema_ptr()).size()) +
                       " true triplets"),
            std::string::npos);
}

TEST_F(Cli, CsisContextVars) {
  Options opt;
  opt.context_vars = {"c"};
  const Run r = run(cmd_csis, fixture("uniform"), opt);
  std::istringstream lines(r.out);
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    ++count;
    const std::string ctx = line.substr(line.rfind('|') + 2);
    EXPECT_TRUE(ctx == "{}" || ctx.rfind("{c=", 0) == 0) << line;
  }
  // Pairs a-b: U in {}, {c}, plus c=0 and c=1; pairs with c: U in {}, {x}.
  EXPECT_EQ(count, 4u + 2 + 2);
  opt.context_vars = {"z"};
  EXPECT_EQ(run(cmd_csis, fixture("uniform"), opt).status, kInputError);
}

TEST_F(Cli, CsisNonPositive) {
  const std::string path =
      write("z.dist", "cshc-distribution 1\nvar a 2\nvar b 2\ntable\n1 0 1 1\n");
  EXPECT_EQ(run(cmd_csis, path).status, kFailed);
}

TEST_F(Cli, GraphContexts) {
  const std::string path = fixture("d2");
  Options opt;
  opt.context = "c=0";
  Run r = run(cmd_graph, path, opt);
  EXPECT_NE(r.out.find("nodes a b\nedges 0\n"), std::string::npos) << r.out;
  opt.context = "c=1";
  r = run(cmd_graph, path, opt);
  EXPECT_NE(r.out.find("a: b\n"), std::string::npos) << r.out;
  r = run(cmd_graph, path);
  EXPECT_NE(r.out.find("nodes a b c\nedges 3\n"), std::string::npos) << r.out;
  opt.context = "q=1";
  r = run(cmd_graph, path, opt);
  EXPECT_EQ(r.status, kInputError);
  EXPECT_NE(r.err.find("BadContext"), std::string::npos);
}

TEST_F(Cli, VerifyExitStatus) {
  Run r = run(cmd_verify, fixture("d2"));
  EXPECT_EQ(r.status, kOk);
  EXPECT_NE(r.out.find("graph-isomorph contexts: 27/27"), std::string::npos);
  EXPECT_NE(r.out.find("residual: <1e-12"), std::string::npos);
  r = run(cmd_verify, fixture("xor"));
  EXPECT_EQ(r.status, kFailed);
  EXPECT_NE(r.out.find("{} FAIL"), std::string::npos);
  const std::string zero =
      write("z.dist", "cshc-distribution 1\nvar a 2\nvar b 2\ntable\n1 0 1 1\n");
  r = run(cmd_verify, zero);
  EXPECT_EQ(r.status, kFailed);
  EXPECT_NE(r.err.find("positivity"), std::string::npos);
}

TEST_F(Cli, VerifyJsonAndSuppliedInputs) {
  const std::string d2 = fixture("d2");
  Options opt;
  opt.json = true;
  Run r = run(cmd_verify, d2, opt);
  EXPECT_NE(r.out.find("\"theorem_verified\": true"), std::string::npos);

  // A fabricated CSI listing is refuted.
  opt.json = false;
  opt.csi_model = write("bad.csis", "a b | {} | {c=1}\n");
  r = run(cmd_verify, d2, opt);
  EXPECT_EQ(r.status, kFailed);
  EXPECT_NE(r.out.find("csi-map: no"), std::string::npos);

  // The saturated features violate the context-specific independences.
  opt.csi_model.reset();
  opt.features = write("sat.features",
                       "cshc-features 1\nvar a 2\nvar b 2\nvar c 2\n"
                       "feature a=1\nfeature b=1\nfeature c=1\n"
                       "feature a=1 b=1\nfeature a=1 c=1\nfeature b=1 c=1\n"
                       "feature a=1 b=1 c=1\n");
  r = run(cmd_verify, d2, opt);
  EXPECT_EQ(r.status, kFailed);
  EXPECT_NE(r.out.find("factorizes: no"), std::string::npos);
}

TEST_F(Cli, FactorizeD2OverC) {
  Options opt;
  opt.context_vars = {"c"};
  opt.out = (dir_ / "d2.features").string();
  const Run r = run(cmd_factorize, fixture("d2"), opt);
  ASSERT_EQ(r.status, kOk) << r.err;
  const io::FeatureFile f = io::read_features(*opt.out);
  std::size_t ab = 0;
  for (const Feature& x : f.features) {
    if (!x.scope().includes(VarSet{0, 1})) continue;
    ++ab;
    EXPECT_EQ(x.values.value(2), 1);
  }
  EXPECT_EQ(ab, 4u);
  EXPECT_LE(f.residual, 1e-7);
}

TEST_F(Cli, FactorizeUniformAndChain) {
  Run r = run(cmd_factorize, fixture("uniform"));
  io::FeatureFile f = io::parse_features(r.out);
  ASSERT_FALSE(f.features.empty());
  for (std::size_t k = 0; k < f.features.size(); ++k) {
    EXPECT_EQ(f.features[k].scope().size(), 1);
    EXPECT_NEAR(f.weights[k], 0.0, 1e-12);
  }
  Options opt;
  opt.context_vars = {"{}"};
  r = run(cmd_factorize, fixture("chain"), opt);
  f = io::parse_features(r.out);
  for (const Feature& x : f.features) {
    EXPECT_TRUE(x.scope() == (VarSet{0, 1}) || x.scope() == (VarSet{1, 2}));
  }
  r = run(cmd_factorize, fixture("xor"), opt);
  EXPECT_EQ(r.status, kFailed);
  EXPECT_NE(r.err.find("NotGraphIsomorph"), std::string::npos);
}

TEST_F(Cli, Report) {
  Run r = run(cmd_report, fixture("d2"));
  EXPECT_EQ(r.status, kOk);
  EXPECT_NE(r.out.find("csi-pruned          4"), std::string::npos) << r.out;
  r = run(cmd_report, fixture("coins"));
  EXPECT_NE(r.out.find("ci-pruned           3"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("csi-pruned          3"), std::string::npos) << r.out;
  r = run(cmd_report, fixture("xor"));
  EXPECT_EQ(r.status, kFailed);
  EXPECT_NE(r.err.find("PreconditionFailed"), std::string::npos);
}

TEST_F(Cli, FixtureList) {
  const Run r = run(cmd_fixture, "list");
  EXPECT_EQ(r.out, "d2\nchain\nxor\ncoins\nuniform\n");
  EXPECT_EQ(run(cmd_fixture, "nope").status, kInputError);
}

}  // namespace
}  // namespace cshc::cli
