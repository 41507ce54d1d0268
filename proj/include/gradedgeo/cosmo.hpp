#pragma once

// Warped-product spacetimes N x (0, inf) with g = e^{2a(t)} gbar - dt (x) dt,
// their closed-form connection and curvature, the Einstein-de Sitter family
// and a fixed-step integrator for the scale factor.
//
// The spacetime chart is the base chart followed by the time coordinate, so
// index n is t.

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "gradedgeo/graded_metric.hpp"
#include "gradedgeo/tensor.hpp"

namespace gradedgeo {

struct WarpedSpec {
  MetricSpec base;  // Riemannian, dim n >= 2
  ScalarField a;    // on a one-coordinate time chart
  ScalarField theta;
  /// Einstein constant of the base (Ric_bar = lambda gbar); nullopt means
  /// Ricci-flat.
  std::optional<double> einstein_lambda;

  int n() const noexcept { return base.dim(); }
  double lambda() const noexcept { return einstein_lambda.value_or(0.0); }
};

ChartPtr warped_chart(const WarpedSpec& w);
MetricSpec build_warped_metric(const WarpedSpec& w);
GradedMetric build_warped_graded_metric(const WarpedSpec& w);

struct WarpedClosedForms {
  double a = 0.0, a_dot = 0.0, a_ddot = 0.0;
  double theta_dot = 0.0, theta_ddot = 0.0;
  TensorValue christoffel;  // (1,2) over n+1
  TensorValue riemann;      // (1,3) over n+1
  TensorValue ricci;        // (0,2) over n+1
  double laplacian_theta = 0.0;  // -n a' theta' - theta''
};

/// `p` is a point of the spacetime chart; requires t > 0.
WarpedClosedForms warped_closed_forms(const WarpedSpec& w, std::span<const double> p);

struct EdsSolution {
  int n = 0;
  double c = 0.0;  // sqrt((n-1)/(2n))
  ScalarField a;   // ln(t)/n
  ScalarField theta;  // c ln(t)
};

/// On `time_chart` (default: a single unbounded coordinate named t).
EdsSolution eds_solution(int n, ChartPtr time_chart = nullptr);

/// Einstein-de Sitter spacetime over flat R^n with coordinates x1..xn on
/// [-1, 1] and t on `t_box`.
WarpedSpec eds_spec(int n, Interval t_box);

struct OdeState {
  double t = 0.0;
  double a = 0.0;
  double a_dot = 0.0;
  double theta = 0.0;
};

/// a'' = -a'^2 - (2c^2/n) e^{-2na}, theta' = branch * c e^{-na}.
double scale_factor_accel(int n, double c, double a, double a_dot);

/// Classical RK4 from w0.t to t_end with the uniform step (t_end - t0)/N,
/// N = ceil(|t_end - t0| / step). Returns all N + 1 states.
std::vector<OdeState> integrate_scale_factor(const OdeState& w0, int n, double c, double t_end,
                                             double step, int branch = 1);

struct TrajectoryRow {
  OdeState state;
  double a_ddot = 0.0;
  double eq41_residual = 0.0;  // lambda + (a'' + n a'^2) e^{2a}
  double eq42_residual = 0.0;  // -n (a'' + a'^2) - 2 c^2 e^{-2na}
};

/// a'' along the trajectory is taken from fourth-order finite differences of
/// a_dot, so the residuals check the integrated path, not the right-hand side.
std::vector<TrajectoryRow> trajectory_rows(const std::vector<OdeState>& traj, int n, double c,
                                           double lambda);

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRow>& rows);

}  // namespace gradedgeo
