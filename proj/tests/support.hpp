#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "gradedgeo/expr.hpp"
#include "gradedgeo/metric.hpp"
#include "gradedgeo/random_fields.hpp"

namespace testing {

using namespace gradedgeo;

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline double fd1(const ScalarField& f, std::vector<double> p, int i, double h = 1e-4) {
  auto q = p;
  p[static_cast<std::size_t>(i)] += h;
  q[static_cast<std::size_t>(i)] -= h;
  return (f(p) - f(q)) / (2.0 * h);
}

inline double fd2(const ScalarField& f, const std::vector<double>& p, int i, int j, double h = 1e-4) {
  auto at = [&](double di, double dj) {
    auto q = p;
    q[static_cast<std::size_t>(i)] += di;
    q[static_cast<std::size_t>(j)] += dj;
    return f(q);
  };
  if (i == j) return (at(h, 0) - 2.0 * f(p) + at(-h, 0)) / (h * h);
  return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
}

inline ChartPtr box_chart(std::vector<std::string> names, double lo = -1.0, double hi = 1.0) {
  std::vector<Interval> box(names.size(), Interval{lo, hi});
  return make_chart(std::move(names), std::move(box));
}

inline ScalarField x(const ChartPtr& c, int i) { return ScalarField::coordinate(c, i); }
inline ScalarField k(const ChartPtr& c, double v) { return ScalarField::constant(c, v); }

inline MetricSpec euclidean(const ChartPtr& c) {
  return MetricSpec::diagonal(c, std::vector<ScalarField>(static_cast<std::size_t>(c->dim()), k(c, 1.0)));
}

inline MetricSpec minkowski(const ChartPtr& c) {
  std::vector<ScalarField> d(static_cast<std::size_t>(c->dim()), k(c, 1.0));
  d[0] = k(c, -1.0);
  return MetricSpec::diagonal(c, std::move(d));
}

/// dtheta^2 + sin^2(theta) dphi^2 on (th, ph).
inline MetricSpec unit_sphere(const ChartPtr& c) {
  const auto s = sin(x(c, 0));
  return MetricSpec::diagonal(c, {k(c, 1.0), s * s});
}

}  // namespace testing
