#ifndef CSHC_TESTS_GOLDEN_HPP_
#define CSHC_TESTS_GOLDEN_HPP_

#include <filesystem>
#include <string>
#include <vector>

namespace cshc::golden {

// One CLI invocation and the checked-in file it must reproduce.
struct Case {
  std::string fixture;
  std::string command;  // csis, graph, verify, report
  std::string variant;  // context for graph, "json" for verify, else empty
  std::filesystem::path golden;
};

std::vector<Case> cases(const std::filesystem::path& dir);

struct Outcome {
  int status = 0;
  std::string text;  // stdout, or stderr when stdout is empty
};

Outcome run(const Case& c, const std::filesystem::path& dir);

std::string read_file(const std::filesystem::path& path);

}  // namespace cshc::golden

#endif  // CSHC_TESTS_GOLDEN_HPP_
