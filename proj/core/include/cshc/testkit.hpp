#ifndef CSHC_TESTKIT_HPP_
#define CSHC_TESTKIT_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cshc/domain.hpp"
#include "cshc/graph.hpp"
#include "cshc/independence.hpp"
#include "cshc/joint_table.hpp"
#include "cshc/loglinear.hpp"

// Generators, fixtures and brute-force oracles for cross-checking the
// library. Everything here is seed-deterministic.
namespace cshc::testkit {

// Uniform double in [0, 1) from the top 53 bits of a 64-bit Mersenne
// Twister draw; identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform integer in [0, n); modulo bias is irrelevant at these sizes.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

inline constexpr double kDefaultFloor = 1e-3;

// Entries drawn from [floor, 1] and then normalized.
JointTable random_positive(SchemaPtr schema, std::uint64_t seed,
                           double floor = kDefaultFloor);

struct PlantSpec {
  SchemaPtr schema;
  std::vector<std::pair<Feature, double>> features;
  std::uint64_t seed = 0;
};

// p(x) proportional to exp(sum of planted weights of the active features).
JointTable plant(const PlantSpec& spec);

// Feature over `schema` from "a=1,b=1".
Feature feature(const DomainSchema& schema, std::string_view text);

// Random clique potentials on `graph` (nodes = schema variables):
// ln p(x) = sum over maximal cliques C of phi_C(x_C) + const.
JointTable plant_graph(SchemaPtr schema, const UndirectedGraph& graph,
                       std::uint64_t seed, double scale = 1.0);

// Fixtures.
// Three binary variables, a single interaction feature (a=1,b=1,c=1), w=1.
JointTable d2();
// (a=1,b=1) w=0.8 and (b=1,c=1) w=-0.6.
JointTable chain();
// c agrees with a xor b, soft potential of weight 2.
JointTable xor_triple();
// p(a=1) = 0.75, p(b=1) = 0.5, p(c=1) = 0.2, independent.
JointTable independent_coins();
JointTable uniform(SchemaPtr schema);

struct NamedTable {
  std::string name;
  JointTable table;
};

// Named fixtures emitted by the CLI: d2, chain, xor, coins, uniform.
std::vector<NamedTable> fixtures();
// Throws InvalidArgument for an unknown name.
JointTable fixture(std::string_view name);

// Planted distributions with context-specific structure.
std::vector<NamedTable> planted_csi_fixtures();

// Random sparse plantings over 3-4 binary variables.
std::vector<NamedTable> random_plantings(std::size_t count, std::uint64_t seed);

// The acceptance corpus: `random_count` random positive tables split
// between 3 and 4 binary variables, plus every planted fixture.
std::vector<NamedTable> corpus(std::size_t random_count = 200,
                               std::uint64_t seed = 1);

// Independent re-derivation of build_csi_model: for every triplet compares
// the conditional tables p(a | b, u, x_W) and p(a | u, x_W) computed by
// direct summation over the full table.
CSIModel oracle_csi_set(const JointTable& p, double tol = kDefaultTolerance);

// Brute-force Möbius parameter for one feature straight from the
// definition, used to cross-check canonical_parameters.
double oracle_canonical_weight(const JointTable& p, const Feature& f,
                               const Assignment& reference);

// Every graph on `n` nodes named a, b, c, ...; 2^(n(n-1)/2) of them.
std::vector<UndirectedGraph> all_graphs(int n);

}  // namespace cshc::testkit

#endif  // CSHC_TESTKIT_HPP_
