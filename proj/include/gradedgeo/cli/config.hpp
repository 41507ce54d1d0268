#pragma once

// Run configuration: flat `key = value` lines under `[section]` headers.
//
//   [chart]      coords = t, x, y, z        box.<coord> = lo, hi
//   [params]     <name> = <number>          (substituted into expressions)
//   [metric]     g_<i>_<j> = <expr>         (i <= j; missing entries are 0)
//   [theta]      expr = <expr>
//   [grid]       counts = 20, 1, 1, 1       (uniform, endpoints included;
//                                             a count of 1 takes the midpoint)
//                points = 1, 0, 0, 0 | 2, 0, 0, 0
//   [tolerances] residual_tol = 1e-9        fd_tol = 1e-5
//   [quadrature] nodes = 16
//   [variation]  support.<coord> = lo, hi   s_<i>_<j> = <expr>   h = <expr>
//                (each expression is multiplied by the bump profile of the
//                support box)
//   [cosmo]      n, c, lambda, t0, a0, a_dot0, theta0, t_end, step, branch
//   [output]     path = <file>              format = json | csv
//
// Lines starting with '#' are comments. Unknown sections or keys are errors.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gradedgeo/action.hpp"
#include "gradedgeo/chart.hpp"
#include "gradedgeo/error.hpp"
#include "gradedgeo/graded_metric.hpp"

namespace gradedgeo::cli {

/// Bad configuration; `key_path()` is e.g. "metric.g_0_1".
class ConfigError : public Error {
 public:
  ConfigError(std::string key_path, const std::string& what)
      : Error(key_path.empty() ? what : key_path + ": " + what), key_path_(std::move(key_path)) {}
  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

struct VariationConfig {
  std::map<std::string, Interval> support;  // by coordinate name
  std::map<std::string, std::string> s;     // "s_i_j" -> expr
  std::string h = "0";
  bool operator==(const VariationConfig&) const = default;
};

struct CosmoConfig {
  int n = 3;
  std::optional<double> c;  // default: the Einstein-de Sitter value
  double lambda = 0.0;
  double t0 = 1.0;
  std::optional<double> a0, a_dot0, theta0;  // default: on the EdS trajectory
  double t_end = 4.0;
  double step = 1e-3;
  int branch = 1;
  bool operator==(const CosmoConfig&) const = default;
};

struct RunConfig {
  std::vector<std::string> coords;
  std::map<std::string, Interval> box;  // by coordinate name; missing = unbounded
  std::map<std::string, double> params;
  std::map<std::string, std::string> metric;  // "g_i_j" -> expr
  std::string theta = "0";
  std::vector<int> grid_counts;
  std::vector<std::vector<double>> grid_points;
  double residual_tol = 1e-9;
  double fd_tol = 1e-5;
  int quad_nodes = 16;
  std::optional<VariationConfig> variation;
  std::optional<CosmoConfig> cosmo;
  std::string out_path;
  std::string format;
  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);

/// FNV-1a 64-bit hash of the serialized config, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

ChartPtr build_chart(const RunConfig& cfg);
GradedMetric build_graded_metric(const RunConfig& cfg);
/// Zero variation when the config has no [variation] section.
VariationSpec build_variation(const RunConfig& cfg, const ChartPtr& chart);
/// Explicit points if given, else the uniform per-axis grid over the box.
std::vector<std::vector<double>> grid_points(const RunConfig& cfg);

}  // namespace gradedgeo::cli
