// front-forge: construct fronts from prescribed singular metric data, locate
// and classify their singular points, and compute geometric invariants.

#include <CLI11.hpp>
#include <exception>
#include <iostream>
#include <string>

#include "frontforge/job.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string preset;
  double tol = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "job configuration file");
  cmd->add_option("--preset", args.preset, "built-in preset name (overrides [input])");
  cmd->add_option("--tol", args.tol, "override the command's decision tolerance");
}

frontforge::cli::Job make_job(const CommonArgs& args, const std::string& command) {
  frontforge::cli::JobConfig cfg;
  if (!args.config_path.empty()) cfg = frontforge::cli::JobConfig::parse_file(args.config_path);
  if (!args.preset.empty()) {
    cfg.preset_name = args.preset;
    cfg.inline_fields.clear();
  }
  if (cfg.preset_name.empty() && cfg.inline_fields.empty())
    throw frontforge::cli::ConfigError("no input: give --config and/or --preset");
  if (args.tol > 0) {
    if (command == "check")
      cfg.tol.check = args.tol;
    else if (command == "build")
      cfg.tol.integrability = args.tol;
    else if (command == "invariants")
      cfg.tol.invariant_match = args.tol;
    else
      cfg.tol.check = args.tol;
  }
  return frontforge::cli::resolve(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kenmotsu-type construction of fronts with singular-point analysis"};
  app.require_subcommand(1);

  CommonArgs args;
  CLI::App* check = app.add_subcommand("check", "validate the construction hypotheses");
  CLI::App* build = app.add_subcommand("build", "construct the surface and export meshes");
  CLI::App* classify = app.add_subcommand("classify", "classify singular points");
  CLI::App* invariants = app.add_subcommand("invariants", "invariants along singular curves");
  for (CLI::App* cmd : {check, build, classify, invariants}) add_common(cmd, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const auto job = make_job(args, command);
    if (command == "check") return frontforge::cli::cmd_check(job, std::cout);
    if (command == "build") return frontforge::cli::cmd_build(job, std::cout);
    if (command == "classify") return frontforge::cli::cmd_classify(job, std::cout);
    return frontforge::cli::cmd_invariants(job, std::cout);
  } catch (const frontforge::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
