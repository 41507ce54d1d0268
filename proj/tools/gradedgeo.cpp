#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gradedgeo/cli/commands.hpp"

using namespace gradedgeo::cli;

int main(int argc, char** argv) {
  CLI::App app{"Graded tangent-bundle geometry engine"};
  app.require_subcommand(1);

  std::string config_path, out_path, format;
  std::optional<double> tol;
  std::vector<int> grid;
  std::uint64_t seed = 42;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", config_path, "Run configuration file");
    if (config_required) c->required();
    sub->add_option("--out", out_path, "Output file (default: stdout or [output] path)");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--tol", tol, "Override residual_tol");
    sub->add_option("--grid", grid, "Override grid counts, one per coordinate")->delimiter(',');
    sub->add_option("--seed", seed, "Seed for randomized checks");
  };
  auto* report = app.add_subcommand("report", "Tensor tables at grid points");
  auto* residuals = app.add_subcommand("residuals", "Field-equation residuals on the grid");
  auto* validate = app.add_subcommand("validate", "Invariant suite (random geometry without --config)");
  auto* cosmo = app.add_subcommand("cosmo", "Integrate the scale factor ODE");
  auto* action = app.add_subcommand("action", "First variation of the Hilbert action");
  add_common(report, true);
  add_common(residuals, true);
  add_common(validate, false);
  add_common(cosmo, false);
  add_common(action, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfigError;
  }

  return run_guarded(
      [&]() -> int {
        std::optional<RunConfig> cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        CommandOptions opt;
        opt.format = format;
        opt.tol = tol;
        if (!grid.empty()) opt.grid = grid;
        opt.seed = seed;

        std::string dest = out_path;
        if (dest.empty() && cfg) dest = cfg->out_path;
        std::ofstream file;
        if (!dest.empty()) {
          file.open(dest);
          if (!file) throw ConfigError("out", "cannot open '" + dest + "' for writing");
        }
        std::ostream& out = dest.empty() ? std::cout : file;

        const RunConfig* cp = cfg ? &*cfg : nullptr;
        if (*report) return cmd_report(*cfg, opt, out);
        if (*residuals) return cmd_residuals(*cfg, opt, out);
        if (*validate) return cmd_validate(cp, opt, out);
        if (*cosmo) return cmd_cosmo(cp, opt, out);
        return cmd_action(*cfg, opt, out);
      },
      std::cerr);
}
