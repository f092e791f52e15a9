#ifndef CSHC_TOOLS_COMMANDS_HPP_
#define CSHC_TOOLS_COMMANDS_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cshc/joint_table.hpp"
#include "cshc/loglinear.hpp"

namespace cshc::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;      // precondition or verification failure
inline constexpr int kInputError = 2;  // unreadable or malformed input

struct Options {
  double tol = kDefaultTolerance;
  double residual_threshold = kResidualThreshold;
  bool strict_matching = false;
  bool json = false;
  std::optional<std::string> context;
  // Each entry is one context-variable set, e.g. "a,c"; "" or "{}" is empty.
  std::vector<std::string> context_vars;
  std::optional<std::string> out;
  std::optional<std::string> csi_model;
  std::optional<std::string> features;
};

int cmd_validate(const std::string& path, const Options& opt,
                 std::ostream& out, std::ostream& err);
int cmd_csis(const std::string& path, const Options& opt, std::ostream& out,
             std::ostream& err);
int cmd_graph(const std::string& path, const Options& opt, std::ostream& out,
              std::ostream& err);
int cmd_verify(const std::string& path, const Options& opt, std::ostream& out,
               std::ostream& err);
int cmd_factorize(const std::string& path, const Options& opt,
                  std::ostream& out, std::ostream& err);
int cmd_report(const std::string& path, const Options& opt, std::ostream& out,
               std::ostream& err);
// Writes a named fixture as a distribution file; "list" prints the names.
int cmd_fixture(const std::string& name, const Options& opt,
                std::ostream& out, std::ostream& err);

}  // namespace cshc::cli

#endif  // CSHC_TOOLS_COMMANDS_HPP_
