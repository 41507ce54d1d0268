#include "gradedgeo/random_fields.hpp"

#include <cmath>

#include "gradedgeo/error.hpp"

namespace gradedgeo {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

ScalarField random_polynomial(ChartPtr chart, Rng& rng, int degree, double scale) {
  const int n = chart->dim();
  ScalarField f = ScalarField::constant(chart, uniform(rng, -scale, scale));
  if (degree < 1) return f;
  for (int i = 0; i < n; ++i) f = f + uniform(rng, -scale, scale) * ScalarField::coordinate(chart, i);
  if (degree < 2) return f;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      f = f + uniform(rng, -scale, scale) * ScalarField::coordinate(chart, i) * ScalarField::coordinate(chart, j);
  if (degree < 3) return f;
  for (int i = 0; i < n; ++i)
    f = f + uniform(rng, -scale, scale) * pow(ScalarField::coordinate(chart, i), 3.0);
  return f;
}

ScalarField random_composite(ChartPtr chart, Rng& rng) {
  const ScalarField u = random_polynomial(chart, rng, 2, 0.8);
  switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
    case 0: return exp(u);
    case 1: return sin(u);
    case 2: return cos(u);
    case 3: return ln(1.0 + u * u);
    case 4: return sqrt(1.0 + u * u);
    default: return tan(u / 4.0);
  }
}

const char* class_name(ElementaryClass c) {
  switch (c) {
    case ElementaryClass::Polynomial: return "polynomial";
    case ElementaryClass::Exp: return "exp";
    case ElementaryClass::Ln: return "ln";
    case ElementaryClass::Sin: return "sin";
    case ElementaryClass::Cos: return "cos";
    case ElementaryClass::Tan: return "tan";
    case ElementaryClass::Sqrt: return "sqrt";
    case ElementaryClass::Pow: return "pow";
  }
  return "?";
}

ScalarField random_composite(ChartPtr chart, Rng& rng, ElementaryClass cls) {
  const ScalarField u = random_polynomial(chart, rng, 2, 0.8);
  const ScalarField v = random_polynomial(chart, rng, 1, 0.5);
  // positive on [-1, 1]^n
  const ScalarField pos = 1.0 + u * u;
  switch (cls) {
    case ElementaryClass::Polynomial: return random_polynomial(chart, rng, 3, 1.0);
    case ElementaryClass::Exp: return v * exp(u);
    case ElementaryClass::Ln: return ln(pos) + v * ln(2.0 + sin(u));
    case ElementaryClass::Sin: return sin(u) * cos(v) + sin(2.0 * u * v);
    case ElementaryClass::Cos: return cos(u) + v * cos(u * u);
    case ElementaryClass::Tan: return tan(u / 4.0) + v * tan(0.3 * v);
    case ElementaryClass::Sqrt: return sqrt(pos) + v * sqrt(2.5 + v);
    case ElementaryClass::Pow: {
      static constexpr double kExp[] = {-1.5, -0.5, 1.0 / 3.0, 1.5};
      const double e = kExp[std::uniform_int_distribution<int>(0, 3)(rng)];
      return pow(pos, e) + v * pow(2.5 + v, 1.5);
    }
  }
  return u;
}

MetricSpec random_metric(ChartPtr chart, Rng& rng, const std::vector<int>& signs, double eps) {
  const int n = chart->dim();
  if (signs.size() != static_cast<std::size_t>(n)) throw InvalidArgument("need one sign per coordinate");
  std::vector<ScalarField> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      ScalarField p = random_polynomial(chart, rng, 2, eps);
      upper.push_back(i == j ? static_cast<double>(signs[static_cast<std::size_t>(i)]) + p : p);
    }
  return MetricSpec(chart, std::move(upper));
}

GradedMetric random_graded_metric(ChartPtr chart, Rng& rng, const std::vector<int>& signs, double eps) {
  MetricSpec g = random_metric(chart, rng, signs, eps);
  return GradedMetric(std::move(g), random_polynomial(chart, rng, 2, 0.5));
}

GradedVectorField random_homogeneous_field(ChartPtr chart, Rng& rng) {
  const int a = std::uniform_int_distribution<int>(0, chart->dim())(rng);
  return random_polynomial(chart, rng, 2, 1.0) * GradedVectorField::basis(chart, a);
}

GradedVectorField random_graded_field(ChartPtr chart, Rng& rng) {
  std::vector<ScalarField> x;
  for (int i = 0; i < chart->dim(); ++i) x.push_back(random_polynomial(chart, rng, 2, 1.0));
  return {std::move(x), random_polynomial(chart, rng, 2, 1.0)};
}

std::vector<double> random_point(const ChartSpec& chart, Rng& rng, double margin) {
  std::vector<double> p;
  for (const auto& iv : chart.box()) {
    const double lo = std::isfinite(iv.lo) ? iv.lo : -1.0;
    const double hi = std::isfinite(iv.hi) ? iv.hi : 1.0;
    const double m = margin * (hi - lo);
    p.push_back(uniform(rng, lo + m, hi - m));
  }
  return p;
}

}  // namespace gradedgeo
