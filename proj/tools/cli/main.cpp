#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace cshc::cli;
  CLI::App app{"Context-specific independence and log-linear factorization "
               "for discrete distributions"};
  app.require_subcommand(1);

  Options opt;
  std::string path;
  auto add_tol = [&](CLI::App* sub) {
    sub->add_option("--tol", opt.tol, "relative tolerance of independence tests")
        ->capture_default_str();
  };

  CLI::App* validate = app.add_subcommand("validate", "check a distribution file");
  validate->add_option("file", path)->required();
  add_tol(validate);

  CLI::App* csis = app.add_subcommand("csis", "list every true CSI triplet");
  csis->add_option("file", path)->required();
  csis->add_option("--context-vars", opt.context_vars,
                   "only contexts over these variables (a,c)")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  csis->add_option("--out", opt.out, "write to a file");
  add_tol(csis);

  CLI::App* graph = app.add_subcommand("graph", "pairwise graph of a reduced model");
  graph->add_option("file", path)->required();
  graph->add_option("--context", opt.context, "context such as c=0,d=1");
  graph->add_option("--out", opt.out, "write to a file");
  add_tol(graph);

  CLI::App* verify = app.add_subcommand("verify", "check the factorization theorem");
  verify->add_option("file", path)->required();
  add_tol(verify);
  verify->add_option("--residual-threshold", opt.residual_threshold)
      ->capture_default_str();
  verify->add_flag("--strict-matching", opt.strict_matching,
                   "a feature matches a context only if it binds all of it");
  verify->add_option("--csi-model", opt.csi_model,
                     "CSI listing to check instead of the table's own");
  verify->add_option("--features", opt.features,
                     "feature file to check instead of the constructed set");
  std::string format = "text";
  verify->add_option("--format", format)
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  verify->add_option("--out", opt.out, "write to a file");

  CLI::App* factorize =
      app.add_subcommand("factorize", "per-context feature set with fitted weights");
  factorize->add_option("file", path)->required();
  factorize->add_option("--context-vars", opt.context_vars,
                        "context-variable set, repeatable; {} is the empty set")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  factorize->add_flag("--strict-matching", opt.strict_matching);
  factorize->add_option("--out", opt.out, "write to a file");
  add_tol(factorize);

  CLI::App* report = app.add_subcommand("report", "saturated / CI / CSI feature counts");
  report->add_option("file", path)->required();
  report->add_option("--out", opt.out, "write to a file");
  add_tol(report);

  std::string fixture_name;
  CLI::App* fixture = app.add_subcommand("fixture", "emit a built-in distribution");
  fixture->add_option("name", fixture_name, "d2, chain, xor, coins, uniform or list")
      ->required();
  fixture->add_option("--out", opt.out, "write to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }
  opt.json = format == "json";

  if (*validate) return cmd_validate(path, opt, std::cout, std::cerr);
  if (*csis) return cmd_csis(path, opt, std::cout, std::cerr);
  if (*graph) return cmd_graph(path, opt, std::cout, std::cerr);
  if (*verify) return cmd_verify(path, opt, std::cout, std::cerr);
  if (*factorize) return cmd_factorize(path, opt, std::cout, std::cerr);
  if (*report) return cmd_report(path, opt, std::cout, std::cerr);
  return cmd_fixture(fixture_name, opt, std::cout, std::cerr);
}
