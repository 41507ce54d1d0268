#include "gradedgeo/algebroid.hpp"

#include <cmath>

#include "gradedgeo/error.hpp"

namespace gradedgeo {

GradedMetric::GradedMetric(MetricSpec g, ScalarField theta) : g_(std::move(g)), theta_(std::move(theta)) {
  if (!theta_.chart().compatible(g_.chart()))
    throw InvalidArgument("theta and g live on different charts");
}

GradedMetric GradedMetric::from_odd_norm(MetricSpec g, const ScalarField& h) {
  if (h.root().op == ExprOp::Const && !(h.root().value > 0.0))
    throw InvalidArgument("graded metrics need a positive odd norm <xi, xi>");
  return GradedMetric(std::move(g), 0.5 * ln(h));
}

DualFunction DualFunction::from_even(ScalarField f) {
  auto zero = ScalarField::constant(f.chart_ptr(), 0.0);
  return {std::move(f), std::move(zero)};
}

DualFunction DualFunction::tau(ChartPtr chart) {
  return {ScalarField::constant(chart, 0.0), ScalarField::constant(chart, 1.0)};
}

std::pair<ScalarField, ScalarField> DualFunction::to_pair() const { return {even + odd, even - odd}; }

DualFunction DualFunction::from_pair(const ScalarField& a, const ScalarField& b) {
  return {0.5 * (a + b), 0.5 * (a - b)};
}

DualFunction operator+(const DualFunction& a, const DualFunction& b) {
  return {a.even + b.even, a.odd + b.odd};
}

DualFunction operator-(const DualFunction& a, const DualFunction& b) {
  return {a.even - b.even, a.odd - b.odd};
}

DualFunction dual_mul(const DualFunction& a, const DualFunction& b) {
  return {a.even * b.even + a.odd * b.odd, a.even * b.odd + a.odd * b.even};
}

GradedVectorField GradedVectorField::from_even(std::vector<ScalarField> x) {
  if (x.empty()) throw InvalidArgument("vector field needs components");
  auto zero = ScalarField::constant(x.front().chart_ptr(), 0.0);
  return {std::move(x), std::move(zero)};
}

GradedVectorField GradedVectorField::from_odd(ScalarField h) {
  const auto& chart = h.chart_ptr();
  std::vector<ScalarField> x(static_cast<std::size_t>(chart->dim()), ScalarField::constant(chart, 0.0));
  return {std::move(x), std::move(h)};
}

GradedVectorField GradedVectorField::basis(ChartPtr chart, int i) {
  const int n = chart->dim();
  if (i < 0 || i > n) throw InvalidArgument("graded basis index out of range");
  std::vector<ScalarField> x;
  for (int k = 0; k < n; ++k) x.push_back(ScalarField::constant(chart, k == i ? 1.0 : 0.0));
  return {std::move(x), ScalarField::constant(chart, i == n ? 1.0 : 0.0)};
}

GradedVectorField operator+(const GradedVectorField& a, const GradedVectorField& b) {
  GradedVectorField r{{}, a.odd + b.odd};
  for (std::size_t i = 0; i < a.even.size(); ++i) r.even.push_back(a.even[i] + b.even.at(i));
  return r;
}

GradedVectorField operator-(const GradedVectorField& a, const GradedVectorField& b) {
  GradedVectorField r{{}, a.odd - b.odd};
  for (std::size_t i = 0; i < a.even.size(); ++i) r.even.push_back(a.even[i] - b.even.at(i));
  return r;
}

GradedVectorField operator*(const ScalarField& f, const GradedVectorField& v) {
  GradedVectorField r{{}, f * v.odd};
  for (const auto& c : v.even) r.even.push_back(f * c);
  return r;
}

ScalarField apply_even(std::span<const ScalarField> x, const ScalarField& f) {
  ScalarField s = ScalarField::constant(f.chart_ptr(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) s = s + x[i] * diff(f, static_cast<int>(i));
  return s;
}

DualFunction derive(const GradedVectorField& v, const DualFunction& a) {
  return {apply_even(v.even, a.even) + a.odd * v.odd, apply_even(v.even, a.odd)};
}

GradedVectorField bracket(const GradedVectorField& v, const GradedVectorField& w) {
  const std::size_t n = v.even.size();
  if (w.even.size() != n) throw InvalidArgument("bracket of fields of different dimension");
  GradedVectorField r{{}, apply_even(v.even, w.odd) - apply_even(w.even, v.odd)};
  for (std::size_t i = 0; i < n; ++i) r.even.push_back(apply_even(v.even, w.even[i]) - apply_even(w.even, v.even[i]));
  return r;
}

std::vector<ScalarField> anchor(const GradedVectorField& v) { return v.even; }

ScalarField pairing(const GradedMetric& gm, const GradedVectorField& u, const GradedVectorField& v) {
  const int n = gm.dim();
  if (u.dim() != n || v.dim() != n) throw InvalidArgument("pairing of fields of wrong dimension");
  ScalarField s = u.odd * v.odd * exp(2.0 * gm.theta());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s = s + u.even[static_cast<std::size_t>(i)] * v.even[static_cast<std::size_t>(j)] *
                  gm.g().component(i, j);
  return s;
}

namespace {

// rho(Xh)(f) at p.
double act(const GradedVectorField& xh, const ScalarField& f, std::span<const double> p) {
  const Jet fj = eval_jet(f, p, 1);
  double s = 0.0;
  for (std::size_t i = 0; i < xh.even.size(); ++i) s += xh.even[i](p) * fj.d(static_cast<int>(i));
  return s;
}

}  // namespace

double koszul_eval(const GradedMetric& gm, const GradedVectorField& x, const GradedVectorField& y,
                   const GradedVectorField& z, std::span<const double> p) {
  const double twice = act(x, pairing(gm, y, z), p) + act(y, pairing(gm, z, x), p) -
                       act(z, pairing(gm, x, y), p) + pairing(gm, bracket(x, y), z)(p) -
                       pairing(gm, bracket(y, z), x)(p) + pairing(gm, bracket(z, x), y)(p);
  return 0.5 * twice;
}

GradedVectorJet eval_jet(const GradedVectorField& v, std::span<const double> p, int order) {
  GradedVectorJet out;
  for (const auto& c : v.even) out.even.push_back(eval_jet(c, p, order));
  out.odd = eval_jet(v.odd, p, order);
  return out;
}

}  // namespace gradedgeo
