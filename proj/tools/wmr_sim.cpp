// wmr-sim: command-line front end for scenario runs, controller comparisons,
// theorem checks and gain sweeps.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "wmr/cli.hpp"
#include "wmr/errors.hpp"
#include "wmr/io.hpp"

namespace {

struct CommonFlags {
  std::string scenario;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::string mode;
  std::string chattering;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool needs_scenario)
{
  auto* opt = cmd->add_option("--scenario,-s", f.scenario, "scenario JSON file");
  if (needs_scenario) {
    opt->required();
  }
  cmd->add_option("--seed-override", f.seed, "replace the scenario seed");
  cmd->add_option("--dt-override", f.dt, "replace the scenario step [s]");
  cmd->add_option("--mode", f.mode, "INH-SMC equivalent control")->check(CLI::IsMember({"paper", "derived"}));
  cmd->add_option("--chattering", f.chattering, "switching function")->check(CLI::IsMember({"sign", "boundary"}));
}

wmr::cli::Overrides overrides_from(const CommonFlags& f)
{
  wmr::cli::Overrides o;
  o.seed = f.seed;
  o.dt = f.dt;
  if (!f.mode.empty()) {
    o.mode = wmr::io::parse_mode(f.mode);
  }
  if (!f.chattering.empty()) {
    o.chattering = wmr::io::parse_chattering(f.chattering);
  }
  return o;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Flatness-based sliding mode control simulator for differential-drive robots"};
  app.set_version_flag("--version", wmr::cli::kToolVersion);
  app.require_subcommand(1);

  CommonFlags flags;
  std::string sweep_spec;
  wmr::verify::VerificationOptions verify_opts;

  auto* validate = app.add_subcommand("validate", "parse and validate a scenario");
  add_common(validate, flags, true);

  auto* run = app.add_subcommand("run", "simulate one scenario: trace CSV, metrics JSON, manifest");
  add_common(run, flags, true);
  run->add_option("--out,-o", flags.out, "output directory");

  auto* compare = app.add_subcommand("compare", "run controller and baseline on the same scenario");
  add_common(compare, flags, true);
  compare->add_option("--out,-o", flags.out, "output directory");

  auto* verify = app.add_subcommand("verify", "numerical checks of the finite-time convergence results");
  verify->add_option("--out,-o", flags.out, "output directory");
  verify->add_option("--runs", verify_opts.reaching_runs, "randomized reaching runs")->check(CLI::PositiveNumber);
  verify->add_option("--seed", verify_opts.seed, "seed for the reaching runs");
  verify->add_option("--bound-factor", verify_opts.bound_factor,
                     "disturbance as a fraction of the reaching bound (> 1 violates it)");

  auto* sweep = app.add_subcommand("sweep", "gain sweep over mu, beta, upsilon1, upsilon2");
  add_common(sweep, flags, false);
  sweep->add_option("--spec", sweep_spec, "sweep JSON file")->required();
  sweep->add_option("--out,-o", flags.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return wmr::cli::kUsage;
  }

  wmr::cli::Context ctx{std::cout, std::cerr, std::vector<std::string>(argv + 1, argv + argc)};
  wmr::cli::Overrides overrides;
  try {
    overrides = overrides_from(flags);
  } catch (const wmr::ScenarioInvalid& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return wmr::cli::kValidationError;
  }

  if (*validate) {
    return wmr::cli::cmd_validate(flags.scenario, overrides, ctx);
  }
  if (*run) {
    return wmr::cli::cmd_run(flags.scenario, flags.out, overrides, ctx);
  }
  if (*compare) {
    return wmr::cli::cmd_compare(flags.scenario, flags.out, overrides, ctx);
  }
  if (*verify) {
    return wmr::cli::cmd_verify(flags.out, verify_opts, ctx);
  }
  return wmr::cli::cmd_sweep(sweep_spec, flags.out, overrides, ctx);
}
