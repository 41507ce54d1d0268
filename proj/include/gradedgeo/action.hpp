#pragma once

#include <vector>

#include "gradedgeo/graded_metric.hpp"
#include "gradedgeo/quadrature.hpp"

namespace gradedgeo {

/// A variation (s, h) of a graded metric: g -> g + e s, theta -> theta + e h.
struct VariationSpec {
  SymmetricField s;
  ScalarField h;
  std::vector<Interval> support;

  static VariationSpec zero(ChartPtr chart);
  /// s = b * s_shape and h = b * h_shape where b is the product over axes of
  /// exp(-1/(1-u^2)), u the coordinate rescaled to [-1, 1] on `support`.
  static VariationSpec bump(std::vector<Interval> support, const SymmetricField& s_shape,
                            const ScalarField& h_shape);
};

/// The bump profile of a support box on `chart`.
ScalarField bump_profile(ChartPtr chart, const std::vector<Interval>& support);

/// Integral of the graded scalar curvature against sqrt|det g| over quad.box.
double hilbert_action(const GradedMetric& gm, const QuadratureSpec& quad);

struct VariationResult {
  double closed_form = 0.0;
  double finite_difference = 0.0;
  /// Integral of the sum of absolute values of the terms of the closed-form
  /// integrand; the yardstick for "close to zero".
  double scale = 0.0;
};

inline constexpr double kVariationStep = 1e-4;

/// Closed form: integral of
///   <s, -Ric + (R/2 - |grad theta|^2) g + 2 d theta (x) d theta> + 4 h Lap theta
/// against sqrt|det g|, with <s, T> = g^im g^jn s_ij T_mn. Finite difference:
/// central difference of hilbert_action along (g + e s, theta + e h) with step
/// `step`, optionally Richardson-extrapolated with step/2. Both are integrated
/// over v.support (inside quad.box) with quad.nodes per axis; off the support
/// the integrands vanish identically.
VariationResult action_first_variation(const GradedMetric& gm, const VariationSpec& v,
                                       const QuadratureSpec& quad, double step = kVariationStep,
                                       bool richardson = false);

/// Closed form and scale only; finite_difference is left at 0.
VariationResult closed_form_variation(const GradedMetric& gm, const VariationSpec& v,
                                      const QuadratureSpec& quad);

}  // namespace gradedgeo
