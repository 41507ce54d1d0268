#include "gradedgeo/action.hpp"

#include <cmath>

#include "gradedgeo/error.hpp"
#include "gradedgeo/local.hpp"

namespace gradedgeo {

namespace {

std::size_t i2(int n, int a, int b) { return static_cast<std::size_t>(a * n + b); }

void check_support(const std::vector<Interval>& support, const std::vector<Interval>& box) {
  if (support.size() != box.size()) throw InvalidArgument("variation support has the wrong dimension");
  for (std::size_t k = 0; k < box.size(); ++k)
    if (support[k].lo < box[k].lo || support[k].hi > box[k].hi)
      throw InvalidArgument("variation support must lie inside the quadrature box");
}

double density_scalar(const GradedMetric& gm, std::span<const double> p) {
  const int n = gm.dim();
  const auto mj = local::metric_jets(gm.g(), p, 2);
  const auto gam = local::christoffel(mj);
  const auto ric = local::ricci(local::riemann(gam, n), n);
  const Jet th = eval_jet(gm.theta(), p, 2);
  const auto dth = local::differential(th, n);
  const double lap = local::trace(mj.ginv, local::hessian(gam, th, n), n).value();
  const double grad2 = local::dot(mj.ginv, dth, dth, n).value();
  const double scalar = local::trace(mj.ginv, ric, n).value() - 2.0 * (lap + grad2);
  return scalar * std::sqrt(std::abs(mj.det));
}

}  // namespace

VariationSpec VariationSpec::zero(ChartPtr chart) {
  std::vector<Interval> support = chart->box();
  auto h = ScalarField::constant(chart, 0.0);
  return {SymmetricField::zero(chart), std::move(h), std::move(support)};
}

ScalarField bump_profile(ChartPtr chart, const std::vector<Interval>& support) {
  if (support.size() != static_cast<std::size_t>(chart->dim()))
    throw InvalidArgument("support box has the wrong dimension");
  ScalarField b = ScalarField::constant(chart, 1.0);
  for (int k = 0; k < chart->dim(); ++k) {
    const auto& iv = support[static_cast<std::size_t>(k)];
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo < iv.hi))
      throw InvalidArgument("support box must be finite and nonempty");
    const double mid = 0.5 * (iv.lo + iv.hi);
    const double half = 0.5 * (iv.hi - iv.lo);
    b = b * bump((ScalarField::coordinate(chart, k) - mid) / half);
  }
  return b;
}

VariationSpec VariationSpec::bump(std::vector<Interval> support, const SymmetricField& s_shape,
                                  const ScalarField& h_shape) {
  const ScalarField b = bump_profile(s_shape.chart_ptr(), support);
  return {b * s_shape, b * h_shape, std::move(support)};
}

double hilbert_action(const GradedMetric& gm, const QuadratureSpec& quad) {
  if (quad.box.size() != static_cast<std::size_t>(gm.dim()))
    throw InvalidArgument("quadrature box has the wrong dimension");
  return integrate(quad, [&](std::span<const double> p) { return density_scalar(gm, p); });
}

VariationResult closed_form_variation(const GradedMetric& gm, const VariationSpec& v,
                                      const QuadratureSpec& quad) {
  const int n = gm.dim();
  if (quad.box.size() != static_cast<std::size_t>(n))
    throw InvalidArgument("quadrature box has the wrong dimension");
  if (v.s.dim() != n || v.h.dim() != n) throw InvalidArgument("variation has the wrong dimension");
  check_support(v.support, quad.box);

  // Both integrands vanish off the support, and Gauss-Legendre converges far
  // faster on the support box than across the flat edges of the bump.
  const QuadratureSpec local_quad{v.support, quad.nodes};
  VariationResult r;
  const auto sums = integrate(local_quad, 2, [&](std::span<const double> p, std::span<double> out) {
    const auto mj = local::metric_jets(gm.g(), p, 2);
    const auto gam = local::christoffel(mj);
    const auto ric = local::ricci(local::riemann(gam, n), n);
    const double R = local::trace(mj.ginv, ric, n).value();
    const Jet th = eval_jet(gm.theta(), p, 2);
    const auto dth = local::differential(th, n);
    const double lap = local::trace(mj.ginv, local::hessian(gam, th, n), n).value();
    const double grad2 = local::dot(mj.ginv, dth, dth, n).value();
    local::JetArray s(static_cast<std::size_t>(n * n)), tt(s.size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        s[i2(n, i, j)] = eval_jet(v.s.component(i, j), p, 0);
        tt[i2(n, i, j)] = dth[static_cast<std::size_t>(i)] * dth[static_cast<std::size_t>(j)];
      }
    const double s_ric = local::inner2(mj.ginv, s, ric, n).value();
    const double s_tt = local::inner2(mj.ginv, s, tt, n).value();
    const double tr_s = local::trace(mj.ginv, s, n).value();
    const double h = v.h(p);
    const double vol = std::sqrt(std::abs(mj.det));
    const double t1 = -s_ric, t2 = (0.5 * R - grad2) * tr_s, t3 = 2.0 * s_tt, t4 = 4.0 * h * lap;
    out[0] = (t1 + t2 + t3 + t4) * vol;
    out[1] = (std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4)) * vol;
  });
  r.closed_form = sums[0];
  r.scale = sums[1];
  return r;
}

VariationResult action_first_variation(const GradedMetric& gm, const VariationSpec& v,
                                       const QuadratureSpec& quad, double step, bool richardson) {
  if (!(step > 0.0)) throw InvalidArgument("finite-difference step must be positive");
  VariationResult r = closed_form_variation(gm, v, quad);
  const QuadratureSpec local_quad{v.support, quad.nodes};
  auto action_at = [&](double e) {
    GradedMetric pert(MetricSpec(gm.g().field() + e * v.s), gm.theta() + e * v.h);
    return hilbert_action(pert, local_quad);
  };
  auto central = [&](double e) { return (action_at(e) - action_at(-e)) / (2.0 * e); };
  r.finite_difference = central(step);
  if (richardson) r.finite_difference = (4.0 * central(0.5 * step) - r.finite_difference) / 3.0;
  return r;
}

}  // namespace gradedgeo
