#include "subreg/commands.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <stdexcept>
#include <string>

namespace {

struct CliArgs {
  std::string config_path;
  subreg::RunContext ctx;
};

void add_common_options(CLI::App* cmd, CliArgs& args, bool config_required) {
  auto* config = cmd->add_option("--config", args.config_path,
                                 "experiment configuration (JSON)");
  if (config_required) config->required();
  cmd->add_option("--out", args.ctx.out_dir, "output directory")
      ->envname("SUBREG_OUT");
  cmd->add_option("--parallel", args.ctx.threads, "worker threads for sweeps")
      ->check(CLI::PositiveNumber);
  cmd->add_option_function<double>(
      "--eta", [&args](const double& v) { args.ctx.eta_override = v; },
      "slack override for propagation rules");
  cmd->add_option_function<double>(
      "--tol", [&args](const double& v) { args.ctx.tol_override = v; },
      "solver tolerance override");
}

int dispatch(const std::string& name, const CliArgs& args) {
  subreg::Json config = subreg::Json::object();
  if (!args.config_path.empty()) {
    config = subreg::load_config_file(args.config_path);
  }
  if (name == "estimate") return subreg::cmd_estimate(config, args.ctx);
  if (name == "certify") return subreg::cmd_certify(config, args.ctx);
  if (name == "uniformize") return subreg::cmd_uniformize(config, args.ctx);
  if (name == "follow") return subreg::cmd_follow(config, args.ctx);
  if (name == "counterexample") return subreg::cmd_counterexample(config, args.ctx);
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"empirical regularity moduli, certificates, and path-following "
               "for generalized equations"};
  app.require_subcommand(1);

  CliArgs estimate_args, certify_args, uniformize_args, follow_args, counter_args;
  add_common_options(app.add_subcommand("estimate",
                                        "brute-force modulus estimation"),
                     estimate_args, true);
  add_common_options(app.add_subcommand("certify",
                                        "certificate propagation and validation"),
                     certify_args, true);
  add_common_options(app.add_subcommand("uniformize",
                                        "uniform certificates over compact samples"),
                     uniformize_args, true);
  add_common_options(app.add_subcommand("follow",
                                        "path-following for parametric inclusions"),
                     follow_args, true);
  add_common_options(app.add_subcommand("counterexample",
                                        "the f/g/h divergence pipeline"),
                     counter_args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const CliArgs* args = nullptr;
  if (name == "estimate") args = &estimate_args;
  if (name == "certify") args = &certify_args;
  if (name == "uniformize") args = &uniformize_args;
  if (name == "follow") args = &follow_args;
  if (name == "counterexample") args = &counter_args;

  try {
    return dispatch(name, *args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const subreg::Json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
