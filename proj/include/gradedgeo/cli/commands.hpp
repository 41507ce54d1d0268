#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gradedgeo/cli/config.hpp"
#include "gradedgeo/graded.hpp"
#include "gradedgeo/tensor.hpp"

namespace gradedgeo::cli {

inline constexpr const char* kEngineVersion = "1.0.0";
/// |closed-form variation| <= kCriticalRatio * scale marks a critical metric.
inline constexpr double kCriticalRatio = 1e-8;

enum ExitCode : int { kExitPass = 0, kExitResidualFailure = 1, kExitConfigError = 2, kExitDomainError = 3 };

/// Command-line overrides of the config.
struct CommandOptions {
  std::string format;  // json | csv; empty = config or command default
  std::optional<double> tol;
  std::optional<std::vector<int>> grid;
  std::uint64_t seed = 42;
};

nlohmann::json to_json(const TensorValue& t);
nlohmann::json to_json(const FieldEquationReport& r);
nlohmann::json provenance(const RunConfig* cfg, const std::string& command);

/// Each command writes its output to `out` and returns an ExitCode.
int cmd_report(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out);
int cmd_residuals(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out);
/// Without a config, validates a random polynomial geometry drawn from opt.seed.
int cmd_validate(const RunConfig* cfg, const CommandOptions& opt, std::ostream& out);
/// Without a config (or [cosmo] section), integrates the n = 3 EdS data.
int cmd_cosmo(const RunConfig* cfg, const CommandOptions& opt, std::ostream& out);
int cmd_action(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out);

/// Runs `fn`, mapping exceptions to exit codes; errors are written to `err`
/// as one JSON object {"error": kind, "message": text}.
int run_guarded(const std::function<int()>& fn, std::ostream& err);

}  // namespace gradedgeo::cli
