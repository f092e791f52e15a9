#include <benchmark/benchmark.h>

#include "cshc/factorizer.hpp"
#include "cshc/graph.hpp"
#include "cshc/independence.hpp"
#include "cshc/loglinear.hpp"
#include "cshc/testkit.hpp"

namespace {

using namespace cshc;

SchemaPtr binary_schema(int n) {
  std::vector<std::string> names;
  for (int v = 0; v < n; ++v) names.emplace_back(1, static_cast<char>('a' + v));
  return make_binary_schema(names);
}

void BM_BuildCsiModel(benchmark::State& state) {
  const JointTable p =
      testkit::random_positive(binary_schema(static_cast<int>(state.range(0))), 7);
  for (auto _ : state) benchmark::DoNotOptimize(build_csi_model(p));
}
BENCHMARK(BM_BuildCsiModel)->DenseRange(3, 6);

void BM_OracleCsiSet(benchmark::State& state) {
  const JointTable p =
      testkit::random_positive(binary_schema(static_cast<int>(state.range(0))), 7);
  for (auto _ : state) benchmark::DoNotOptimize(testkit::oracle_csi_set(p));
}
BENCHMARK(BM_OracleCsiSet)->DenseRange(3, 5);

void BM_CanonicalParameters(benchmark::State& state) {
  const JointTable p =
      testkit::random_positive(binary_schema(static_cast<int>(state.range(0))), 11);
  for (auto _ : state) benchmark::DoNotOptimize(canonical_parameters(p));
}
BENCHMARK(BM_CanonicalParameters)->DenseRange(3, 8);

void BM_VerifyPlanted(benchmark::State& state) {
  const auto fixtures = testkit::planted_csi_fixtures();
  const JointTable& p = fixtures[static_cast<std::size_t>(state.range(0))].table;
  const CSIModel csi = build_csi_model(p);
  for (auto _ : state) benchmark::DoNotOptimize(verify_cshc(p, csi));
  state.SetLabel(fixtures[static_cast<std::size_t>(state.range(0))].name);
}
BENCHMARK(BM_VerifyPlanted)->DenseRange(0, 4);

void BM_Cliques(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<std::string> names;
  for (int v = 0; v < n; ++v) names.push_back("v" + std::to_string(v));
  UndirectedGraph g(names);
  testkit::Rng rng(3);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.uniform() < 0.5) g.add_edge(u, v);
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(cliques(g));
}
BENCHMARK(BM_Cliques)->RangeMultiplier(2)->Range(4, 16);

}  // namespace
BENCHMARK_MAIN();
