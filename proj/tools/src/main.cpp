#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "virodyn/integrator.hpp"

namespace {

using virodyn::cli::ConfigError;
using virodyn::cli::json;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("-c,--config", args.config_path, "JSON configuration file")
      ->required();
  sub->add_option("--set", args.overrides,
                  "Override a config entry, e.g. --set model.xi=0.06");
}

int report_error(bool json_errors, int code, const std::string& what) {
  if (json_errors) {
    std::fprintf(stderr, "%s\n",
                 json{{"error", what}, {"exit_code", code}}.dump().c_str());
  } else {
    std::fprintf(stderr, "error: %s\n", what.c_str());
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tumour-virotherapy dynamics toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(virodyn::kVersion));

  bool json_errors = false;
  app.add_flag("--json-errors", json_errors,
               "Report failures as machine-readable JSON on stderr");

  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const json&);
  };
  const std::vector<Entry> entries{
      {"simulate", "Integrate one trajectory and classify its outcome",
       virodyn::cli::cmd_simulate},
      {"equilibria", "Report the model equilibria with eigenvalues",
       virodyn::cli::cmd_equilibria},
      {"region", "Scan interior-equilibrium stability over a parameter grid",
       virodyn::cli::cmd_region},
      {"branch", "Continue the interior equilibrium and locate bifurcations",
       virodyn::cli::cmd_branch},
      {"hopf-curve", "Trace the Hopf locus in two parameters",
       virodyn::cli::cmd_hopf_curve},
      {"cycles", "Measure limit-cycle amplitude and period over a sweep",
       virodyn::cli::cmd_cycles},
      {"protocol", "Run an injection protocol or a kappa sweep",
       virodyn::cli::cmd_protocol},
      {"dosage-sweep", "Classify outcomes over a range of initial doses",
       virodyn::cli::cmd_dosage_sweep},
      {"basin", "Label outcomes over a (U0, V0) grid",
       virodyn::cli::cmd_basin},
  };

  std::function<int()> action;
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    auto args = std::make_shared<CommonArgs>();
    add_common(sub, *args);
    sub->callback([&action, args, run = e.run] {
      action = [args, run] {
        return run(virodyn::cli::load_config(args->config_path, args->overrides));
      };
    });
  }

  {
    CLI::App* sub = app.add_subcommand(
        "repro", "Regenerate the full analysis data suite");
    auto out = std::make_shared<std::string>("repro_out");
    sub->add_option("-o,--output", *out, "Output directory");
    sub->callback([&action, out] {
      action = [out] { return virodyn::cli::cmd_repro(*out); };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    return action();
  } catch (const ConfigError& e) {
    return report_error(json_errors, 2, e.what());
  } catch (const std::invalid_argument& e) {
    return report_error(json_errors, 2, e.what());
  } catch (const std::domain_error& e) {
    return report_error(json_errors, 2, e.what());
  } catch (const virodyn::IntegrationError& e) {
    return report_error(json_errors, 3, e.what());
  } catch (const std::exception& e) {
    return report_error(json_errors, 3, e.what());
  }
}
