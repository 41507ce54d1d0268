#include "gradedgeo/cosmo.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "gradedgeo/error.hpp"
#include "gradedgeo/riemann.hpp"

namespace gradedgeo {

namespace {

constexpr auto kCo = Variance::Covariant;
constexpr auto kContra = Variance::Contravariant;

void check_spec(const WarpedSpec& w) {
  if (w.n() < 2) throw InvalidArgument("warped product needs a base of dimension >= 2");
  if (w.a.dim() != 1 || w.theta.dim() != 1)
    throw InvalidArgument("a and theta must live on a one-coordinate time chart");
  if (!w.a.chart().compatible(w.theta.chart())) throw InvalidArgument("a and theta use different time charts");
}

}  // namespace

ChartPtr warped_chart(const WarpedSpec& w) {
  check_spec(w);
  auto names = w.base.chart().coord_names();
  auto box = w.base.chart().box();
  names.push_back(w.a.chart().coord_names()[0]);
  box.push_back(w.a.chart().box()[0]);
  return make_chart(std::move(names), std::move(box));
}

MetricSpec build_warped_metric(const WarpedSpec& w) {
  const ChartPtr chart = warped_chart(w);
  const int n = w.n();
  std::vector<int> base_map;
  for (int i = 0; i < n; ++i) base_map.push_back(i);
  const std::vector<int> t_map{n};
  const ScalarField e2a = exp(2.0 * w.a.rebind(chart, t_map));
  std::vector<ScalarField> upper;
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      if (j == n)
        upper.push_back(ScalarField::constant(chart, i == n ? -1.0 : 0.0));
      else
        upper.push_back(e2a * w.base.component(i, j).rebind(chart, base_map));
    }
  return MetricSpec(chart, std::move(upper));
}

GradedMetric build_warped_graded_metric(const WarpedSpec& w) {
  MetricSpec g = build_warped_metric(w);
  const std::vector<int> t_map{w.n()};
  ScalarField theta = w.theta.rebind(g.chart_ptr(), t_map);
  return GradedMetric(std::move(g), std::move(theta));
}

WarpedClosedForms warped_closed_forms(const WarpedSpec& w, std::span<const double> p) {
  check_spec(w);
  const int n = w.n();
  const int N = n + 1;
  if (p.size() != static_cast<std::size_t>(N)) throw InvalidArgument("point has the wrong dimension");
  const double t = p[static_cast<std::size_t>(n)];
  if (!(t > 0.0)) throw DomainError("warped closed forms need t > 0");
  const std::span<const double> bp = p.first(static_cast<std::size_t>(n));
  const std::vector<double> tp{t};

  WarpedClosedForms out;
  const Jet aj = eval_jet(w.a, tp, 2);
  const Jet thj = eval_jet(w.theta, tp, 2);
  out.a = aj.value();
  out.a_dot = aj.d(0);
  out.a_ddot = aj.d2(0, 0);
  out.theta_dot = thj.d(0);
  out.theta_ddot = thj.d2(0, 0);
  const double ad = out.a_dot, add = out.a_ddot;
  const double e2a = std::exp(2.0 * out.a);
  const double k = add + ad * ad;

  const auto gbar = metric_at(w.base, bp).g;
  const auto gam_bar = christoffel_at(w.base, bp);
  const auto riem_bar = riemann_at(w.base, bp);
  const auto ric_bar = ricci_at(w.base, bp);
  auto g = [&](int i, int j) { return e2a * gbar[{i, j}]; };
  auto delta = [](int i, int j) { return i == j ? 1.0 : 0.0; };
  const std::vector<double> pv(p.begin(), p.end());

  TensorValue gam({kContra, kCo, kCo}, N, pv);
  for (int kk = 0; kk < n; ++kk)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) gam[{kk, i, j}] = gam_bar[{kk, i, j}];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      gam[{n, i, j}] = ad * g(i, j);
      gam[{i, n, j}] = ad * delta(i, j);
      gam[{i, j, n}] = ad * delta(i, j);
    }

  TensorValue r({kContra, kCo, kCo, kCo}, N, pv);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int kk = 0; kk < n; ++kk)
          r[{l, i, j, kk}] = riem_bar[{l, i, j, kk}] + ad * ad * (g(j, kk) * delta(l, i) - g(i, kk) * delta(l, j));
  for (int j = 0; j < n; ++j)
    for (int kk = 0; kk < n; ++kk) {
      r[{n, n, j, kk}] = k * g(j, kk);
      r[{n, j, n, kk}] = -k * g(j, kk);
      r[{kk, n, j, n}] = k * delta(kk, j);
      r[{kk, j, n, n}] = -k * delta(kk, j);
    }

  TensorValue ric({kCo, kCo}, N, pv);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) ric[{i, j}] = ric_bar[{i, j}] + (add + n * ad * ad) * g(i, j);
  ric[{n, n}] = -n * k;

  out.christoffel = std::move(gam);
  out.riemann = std::move(r);
  out.ricci = std::move(ric);
  out.laplacian_theta = -n * ad * out.theta_dot - out.theta_ddot;
  return out;
}

EdsSolution eds_solution(int n, ChartPtr time_chart) {
  if (n < 2) throw InvalidArgument("Einstein-de Sitter family needs n >= 2");
  if (!time_chart) time_chart = make_chart({"t"});
  if (time_chart->dim() != 1) throw InvalidArgument("time chart must have one coordinate");
  const double c = std::sqrt((n - 1.0) / (2.0 * n));
  const ScalarField lt = ln(ScalarField::coordinate(time_chart, 0));
  return {n, c, lt / static_cast<double>(n), c * lt};
}

WarpedSpec eds_spec(int n, Interval t_box) {
  std::vector<std::string> names;
  std::vector<Interval> box;
  for (int i = 1; i <= n; ++i) {
    names.push_back("x" + std::to_string(i));
    box.push_back({-1.0, 1.0});
  }
  ChartPtr base = make_chart(std::move(names), std::move(box));
  std::vector<ScalarField> ones(static_cast<std::size_t>(n), ScalarField::constant(base, 1.0));
  const EdsSolution e = eds_solution(n, make_chart({"t"}, {t_box}));
  return {MetricSpec::diagonal(base, std::move(ones)), e.a, e.theta, 0.0};
}

double scale_factor_accel(int n, double c, double a, double a_dot) {
  return -a_dot * a_dot - (2.0 * c * c / n) * std::exp(-2.0 * n * a);
}

std::vector<OdeState> integrate_scale_factor(const OdeState& w0, int n, double c, double t_end,
                                             double step, int branch) {
  if (n < 1) throw InvalidArgument("n must be positive");
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("step must be positive");
  if (branch != 1 && branch != -1) throw InvalidArgument("branch must be +1 or -1");
  if (!(w0.t > 0.0) || !(t_end > 0.0)) throw DomainError("integration range must stay in t > 0");
  const double span = t_end - w0.t;
  const auto steps = static_cast<std::size_t>(std::ceil(std::abs(span) / step - 1e-9));
  std::vector<OdeState> out{w0};
  if (steps == 0) return out;
  const double h = span / static_cast<double>(steps);

  struct D {
    double a, ad, th;
  };
  auto rhs = [&](double a, double ad) {
    return D{ad, scale_factor_accel(n, c, a, ad), branch * c * std::exp(-n * a)};
  };
  OdeState s = w0;
  for (std::size_t k = 0; k < steps; ++k) {
    const D k1 = rhs(s.a, s.a_dot);
    const D k2 = rhs(s.a + 0.5 * h * k1.a, s.a_dot + 0.5 * h * k1.ad);
    const D k3 = rhs(s.a + 0.5 * h * k2.a, s.a_dot + 0.5 * h * k2.ad);
    const D k4 = rhs(s.a + h * k3.a, s.a_dot + h * k3.ad);
    s.a += h / 6.0 * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a);
    s.a_dot += h / 6.0 * (k1.ad + 2.0 * k2.ad + 2.0 * k3.ad + k4.ad);
    s.theta += h / 6.0 * (k1.th + 2.0 * k2.th + 2.0 * k3.th + k4.th);
    s.t = w0.t + h * static_cast<double>(k + 1);
    if (!std::isfinite(s.a) || !std::isfinite(s.a_dot) || !std::isfinite(s.theta))
      throw DomainError("scale factor overflowed at t = " + std::to_string(s.t));
    out.push_back(s);
  }
  return out;
}

std::vector<TrajectoryRow> trajectory_rows(const std::vector<OdeState>& traj, int n, double c,
                                           double lambda) {
  const std::size_t m = traj.size();
  std::vector<TrajectoryRow> rows(m);
  for (std::size_t i = 0; i < m; ++i) {
    rows[i].state = traj[i];
    rows[i].a_ddot = scale_factor_accel(n, c, traj[i].a, traj[i].a_dot);
  }
  if (m >= 5) {
    const double h = traj[1].t - traj[0].t;
    auto f = [&](std::size_t i) { return traj[i].a_dot; };
    const std::size_t e = m - 1;
    rows[0].a_ddot = (-25 * f(0) + 48 * f(1) - 36 * f(2) + 16 * f(3) - 3 * f(4)) / (12 * h);
    rows[1].a_ddot = (-3 * f(0) - 10 * f(1) + 18 * f(2) - 6 * f(3) + f(4)) / (12 * h);
    for (std::size_t i = 2; i + 2 < m; ++i)
      rows[i].a_ddot = (f(i - 2) - 8 * f(i - 1) + 8 * f(i + 1) - f(i + 2)) / (12 * h);
    rows[e - 1].a_ddot = (3 * f(e) + 10 * f(e - 1) - 18 * f(e - 2) + 6 * f(e - 3) - f(e - 4)) / (12 * h);
    rows[e].a_ddot = (25 * f(e) - 48 * f(e - 1) + 36 * f(e - 2) - 16 * f(e - 3) + 3 * f(e - 4)) / (12 * h);
  }
  for (auto& r : rows) {
    const double a = r.state.a, ad = r.state.a_dot;
    r.eq41_residual = lambda + (r.a_ddot + n * ad * ad) * std::exp(2.0 * a);
    r.eq42_residual = -n * (r.a_ddot + ad * ad) - 2.0 * c * c * std::exp(-2.0 * n * a);
  }
  return rows;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRow>& rows) {
  os << "t,a,a_dot,theta,eq41_residual,eq42_residual\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.state.t, r.state.a,
                  r.state.a_dot, r.state.theta, r.eq41_residual, r.eq42_residual);
    os << buf;
  }
}

}  // namespace gradedgeo
