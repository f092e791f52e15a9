#ifndef CSHC_IO_HPP_
#define CSHC_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cshc/factorizer.hpp"
#include "cshc/graph.hpp"
#include "cshc/independence.hpp"
#include "cshc/joint_table.hpp"
#include "cshc/loglinear.hpp"

// Text formats shared by the CLI and the golden tests. Every writer is a
// pure function of its arguments, so output is byte-stable.
namespace cshc::io {

inline constexpr int kDistributionVersion = 1;
inline constexpr int kFeaturesVersion = 1;

// Distribution file:
//
//   cshc-distribution 1
//   # comment lines and blank lines are ignored
//   description <free text to end of line>     (optional)
//   seed <unsigned integer>                    (optional)
//   var <name> <cardinality>                   (one per variable, in order)
//   table
//   <p_0> <p_1> ...                            (row-major, last var fastest)
//
// Entries may span any number of lines after `table`. The writer emits one
// entry per line with 17 significant digits.
struct DistributionFile {
  int version = kDistributionVersion;
  std::string description;
  std::optional<std::uint64_t> seed;
  JointTable table;
};

// Throws ParseError ("line L, offset O: ...") and CapExceeded. Entries must
// be finite and nonnegative; the table is not normalized.
DistributionFile parse_distribution(std::string_view text);
DistributionFile read_distribution(const std::filesystem::path& path);
std::string format_distribution(const JointTable& p,
                                std::string_view description = {},
                                std::optional<std::uint64_t> seed = {});

// Feature file:
//
//   cshc-features 1
//   var <name> <cardinality>
//   logZ <value>
//   residual <value>
//   feature <weight> <name>=<value> ...        (canonical feature order)
//
// Weights are optional on parse (missing means 0).
struct FeatureFile {
  SchemaPtr schema;
  FeatureSet features;
  std::vector<double> weights;
  double log_z = 0.0;
  double residual = 0.0;
};

FeatureFile parse_features(std::string_view text);
FeatureFile read_features(const std::filesystem::path& path);
std::string format_features(const LogLinearModel& model, double residual);

// "<a, b | {u}, c=0>"; the context part is omitted when empty.
std::string describe(const DomainSchema& schema, const Triplet& t);

// CSI listing: a header line, then one true triplet per line in canonical
// order, as "a b | {u,v} | {c=0,d=1}". Only triplets whose context
// variables lie inside `allowed` are listed.
std::string format_csi_listing(const CSIModel& csi, VarSet allowed);
std::string format_csi_listing(const CSIModel& csi);
// Rebuilds a CSI model from a listing: listed triplets true, others false.
CSIModel parse_csi_listing(SchemaPtr schema, std::string_view text);

// Adjacency listing: header, the context, the node list, then one
// "node: neighbor neighbor" line per node in canonical node order.
std::string format_graph(const UndirectedGraph& g, std::string_view context);

// The residual shown in reports: below 1e-12 it is printed as "<1e-12" so
// that floating-point noise does not leak into golden files.
std::string format_residual(double residual);

std::string format_verify_text(const DomainSchema& schema,
                               const TheoremReport& report);
std::string format_verify_json(const DomainSchema& schema,
                               const TheoremReport& report);

std::string format_sparsity(const FeatureCounts& counts);

}  // namespace cshc::io

#endif  // CSHC_IO_HPP_
