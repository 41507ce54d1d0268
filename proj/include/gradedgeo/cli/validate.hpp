#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gradedgeo/graded_metric.hpp"

namespace gradedgeo::cli {

struct CheckResult {
  std::string name;
  double max_error = 0.0;
  double tol = 0.0;
  bool pass = true;
  std::size_t samples = 0;
  std::string note;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool pass() const;
};

/// Runs the invariant suite on `gm` at `points`. Random vector fields for the
/// connection checks come from `seed`; `residual_tol` drives the field
/// equation equivalence checks.
ValidationReport run_validation(const GradedMetric& gm, const std::vector<std::vector<double>>& points,
                                std::uint64_t seed, double residual_tol = 1e-9, int field_samples = 10);

/// Random polynomial graded metric on (x, y, z) in [-1, 1]^3 with signature
/// (-, +, +), and `count` random sample points.
struct RandomGeometry {
  GradedMetric gm;
  std::vector<std::vector<double>> points;
};
RandomGeometry random_geometry(std::uint64_t seed, int count = 5);

}  // namespace gradedgeo::cli
