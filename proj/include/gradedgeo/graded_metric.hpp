#pragma once

#include "gradedgeo/metric.hpp"

namespace gradedgeo {

/// Graded metric (g, theta) on the graded tangent bundle TM + R xi:
/// <X + f xi, Y + k xi> = g(X, Y) + f k e^{2 theta}. Even and odd parts are
/// orthogonal by construction and the odd norm e^{2 theta} is positive.
class GradedMetric {
 public:
  GradedMetric(MetricSpec g, ScalarField theta);

  /// Builds (g, theta) from a prescribed odd norm h = <xi, xi> via
  /// theta = ln(h) / 2. Only positive odd norms are supported: a constant
  /// h <= 0 is rejected here, a field that is non-positive somewhere fails
  /// with a DomainError where it is evaluated.
  static GradedMetric from_odd_norm(MetricSpec g, const ScalarField& h);

  const MetricSpec& g() const noexcept { return g_; }
  const ScalarField& theta() const noexcept { return theta_; }
  int dim() const noexcept { return g_.dim(); }
  const ChartPtr& chart_ptr() const noexcept { return g_.chart_ptr(); }

 private:
  MetricSpec g_;
  ScalarField theta_;
};

}  // namespace gradedgeo
