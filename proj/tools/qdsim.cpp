// qdsim: seedable simulator of two-photon logical-qubit dialogue over
// collective-noise channels, with decoy checks and eavesdropping analysis.

#include <cstdint>
#include <string>

#include "CLI11.hpp"
#include "qdsim/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"collective-noise quantum dialogue simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
  std::string format;
  std::string out_path;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "config file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", seed, "override run.seed");
    cmd->add_option("--trials", trials, "override run.trials");
    cmd->add_option("--format", format, "report format: doc | table")
        ->check(CLI::IsMember({"doc", "table"}));
    cmd->add_option("--out", out_path, "report output path");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "run one full dialogue");
  add_common(simulate);
  CLI::App* sweep = app.add_subcommand("attack-sweep",
                                       "detection and leakage for an attack catalog");
  add_common(sweep);
  app.add_subcommand("selftest", "run the built-in verification suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : qdsim::cli::kExitConfigError;
  }

  const auto overrides_for = [&](CLI::App* cmd) {
    qdsim::cli::Overrides overrides;
    if (cmd->count("--seed") > 0) overrides.seed = seed;
    if (cmd->count("--trials") > 0) overrides.trials = trials;
    if (cmd->count("--format") > 0) overrides.format = format;
    if (cmd->count("--out") > 0) overrides.output_path = out_path;
    return overrides;
  };

  if (app.got_subcommand(simulate)) {
    return qdsim::cli::cmd_simulate(config_path, overrides_for(simulate));
  }
  if (app.got_subcommand(sweep)) {
    return qdsim::cli::cmd_attack_sweep(config_path, overrides_for(sweep));
  }
  return qdsim::cli::cmd_selftest();
}
