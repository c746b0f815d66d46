#pragma once

// Command-line parsing for the `species` tool.

#include <map>
#include <ostream>
#include <string>

#include "CLI11.hpp"
#include "species/cli/run.hpp"

namespace species::cli {

/// Parses argv and runs the selected command. Returns the process exit code.
inline int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and asymptotic inference for the number of new species in an additional sample"};
  app.require_subcommand(1);

  RunConfig config;
  std::string model = "ngg";
  std::string format = "json";
  double beta = 1.0, theta = 0.0;
  bool force_exact = false, force_asymptotic = false;

  const std::map<std::string, Command> commands{
      {"pmf", Command::Pmf},           {"estimate", Command::Estimate},
      {"hpd", Command::Hpd},           {"simulate", Command::Simulate},
      {"sample-limit", Command::SampleLimit}, {"validate", Command::Validate}};
  const std::map<std::string, std::string> help{
      {"pmf", "posterior distribution of the number of new species"},
      {"estimate", "posterior mean (exact) or large-m approximation with interval"},
      {"hpd", "highest posterior density interval with mass 1 - alpha"},
      {"simulate", "replicated exact draws of the number of new species"},
      {"sample-limit", "draws of the limit variable of K_m / m^sigma"},
      {"validate", "run the built-in self-check suite"}};

  struct Flags {
    CLI::Option* beta = nullptr;
    CLI::Option* theta = nullptr;
  };
  std::map<std::string, Flags> flags;
  for (const auto& [name, command] : commands) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    if (command != Command::Validate) {
      sub->add_option("--model", model, "prior family")->check(CLI::IsMember({"ngg", "pd"}));
      sub->add_option("--sigma", config.model.sigma, "discount parameter in (0, 1)")->required();
      flags[name].beta = sub->add_option("--beta", beta, "NGG tilting parameter (default 1)");
      flags[name].theta = sub->add_option("--theta", theta, "PD concentration parameter (default 0)");
      sub->add_option("--n", config.sample.n, "size of the basic sample")->required();
      sub->add_option("--j", config.sample.j, "distinct species in the basic sample")->required();
      if (command != Command::SampleLimit) sub->add_option("--m", config.m, "size of the additional sample")->required();
    }
    if (command == Command::Estimate || command == Command::Hpd) {
      sub->add_option("--alpha", config.alpha, "tail probability; intervals carry mass 1 - alpha");
    }
    if (command == Command::Estimate || command == Command::Simulate || command == Command::SampleLimit) {
      sub->add_option("--draws", config.n_draws, "Monte Carlo draws or replications");
    }
    sub->add_option("--seed", config.seed, "random seed");
    sub->add_option("--precision-bits", config.precision_bits, "working precision of exact sums");
    sub->add_option("--output", format, "output format")->check(CLI::IsMember({"json", "csv"}));
    if (command == Command::Estimate || command == Command::Hpd || command == Command::Pmf) {
      auto* fe = sub->add_flag("--force-exact", force_exact, "always use the exact engine");
      auto* fa = sub->add_flag("--force-asymptotic", force_asymptotic, "always use the large-m approximation");
      fe->excludes(fa);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::string chosen;
  for (const auto* sub : app.get_subcommands()) chosen = sub->get_name();
  config.command = commands.at(chosen);
  config.model.family = model == "pd" ? Family::PD : Family::NGG;
  const Flags& f = flags[chosen];
  if (config.model.family == Family::PD && f.beta && f.beta->count() > 0) {
    err << "error: --beta: applies only to --model ngg\n";
    return kExitUsage;
  }
  if (config.model.family == Family::NGG && f.theta && f.theta->count() > 0) {
    err << "error: --theta: applies only to --model pd\n";
    return kExitUsage;
  }
  config.model.beta = config.model.family == Family::NGG ? beta : 0.0;
  config.model.theta = config.model.family == Family::PD ? theta : 0.0;
  config.output_format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  config.engine = force_exact ? Engine::Exact : force_asymptotic ? Engine::Asymptotic : Engine::Auto;
  return run(config, out, err);
}

}  // namespace species::cli
