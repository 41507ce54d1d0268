#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gradedgeo/cosmo.hpp"
#include "gradedgeo/error.hpp"
#include "gradedgeo/graded.hpp"
#include "gradedgeo/riemann.hpp"
#include "support.hpp"

using namespace gradedgeo;
using testing::k;
using testing::x;

namespace {

ScalarField random_time_function(const ChartPtr& tc, Rng& rng) {
  const auto t = x(tc, 0);
  return uniform(rng, -0.5, 0.5) + uniform(rng, -0.3, 0.3) * t + uniform(rng, -0.3, 0.3) * sin(uniform(rng, 0.5, 2.0) * t) +
         uniform(rng, -0.5, 0.5) * ln(t);
}

double max_err_vs_eds(const std::vector<OdeState>& traj, int n) {
  double e = 0.0;
  for (const auto& s : traj) e = std::max(e, std::abs(s.a - std::log(s.t) / n));
  return e;
}

OdeState eds_start(int n, double t0) {
  const double c = std::sqrt((n - 1.0) / (2.0 * n));
  return {t0, std::log(t0) / n, 1.0 / (n * t0), c * std::log(t0)};
}

}  // namespace

TEST_CASE("warped metric construction") {
  auto tc = make_chart({"t"}, {{0.5, 4.0}});
  const auto flat = testing::euclidean(testing::box_chart({"x", "y", "z"}));
  const WarpedSpec mk{flat, k(tc, 0.0), k(tc, 0.0), std::nullopt};
  const auto g = metric_at(build_warped_metric(mk), std::vector{0.1, 0.2, 0.3, 1.5}).g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(g[{i, j}] == (i == j ? (i == 3 ? -1.0 : 1.0) : 0.0));

  const auto eds = eds_spec(3, {0.5, 10.0});
  const auto ge = metric_at(build_warped_metric(eds), std::vector{0.0, 0.0, 0.0, 8.0}).g;
  for (int i = 0; i < 3; ++i) CHECK(ge[{i, i}] == doctest::Approx(4.0));
  CHECK(warped_chart(eds)->coord_names() == std::vector<std::string>{"x1", "x2", "x3", "t"});

  auto sc = make_chart({"th", "ph"}, {{0.3, 2.8}, {-3.0, 3.0}});
  const WarpedSpec sph{testing::unit_sphere(sc), ln(x(tc, 0)), k(tc, 0.0), 1.0};
  const auto gs = metric_at(build_warped_metric(sph), std::vector{1.0, 0.0, 2.0}).g;
  CHECK(gs[{0, 0}] == doctest::Approx(4.0));
  CHECK(gs[{1, 1}] == doctest::Approx(4.0 * std::sin(1.0) * std::sin(1.0)));
  CHECK(gs[{2, 2}] == -1.0);
  CHECK(gs[{0, 2}] == 0.0);

  const WarpedSpec bad{testing::euclidean(testing::box_chart({"x"})), k(tc, 0.0), k(tc, 0.0), std::nullopt};
  CHECK_THROWS_AS(build_warped_metric(bad), InvalidArgument);
}

TEST_CASE("warped closed-form examples") {
  auto tc = make_chart({"t"}, {{0.5, 4.0}});
  const WarpedSpec still{testing::euclidean(testing::box_chart({"x", "y"})), k(tc, 0.0), k(tc, 0.0), std::nullopt};
  const auto z = warped_closed_forms(still, std::vector{0.1, 0.2, 1.0});
  CHECK(z.christoffel.max_abs() == 0.0);
  CHECK(z.riemann.max_abs() == 0.0);
  CHECK(z.ricci.max_abs() == 0.0);

  const auto eds = eds_spec(3, {0.5, 4.0});
  const auto e = warped_closed_forms(eds, std::vector{0.0, 0.0, 0.0, 1.0});
  CHECK(e.ricci[{3, 3}] == doctest::Approx(2.0 / 3.0));
  for (int i = 0; i < 3; ++i) {
    CHECK(e.ricci[{i, 3}] == 0.0);
    CHECK(e.christoffel[{i, 3, i}] == doctest::Approx(1.0 / 3.0));
    CHECK(e.riemann[{i, 3, i, 3}] == doctest::Approx(-2.0 / 9.0));
  }
  CHECK(std::abs(e.laplacian_theta) <= 1e-15);
  CHECK_THROWS_AS(warped_closed_forms(eds, std::vector{0.0, 0.0, 0.0, 0.0}), DomainError);
}

TEST_CASE("warped closed forms agree with the generic engine") {
  auto tc = make_chart({"t"}, {{0.5, 4.0}});
  auto sc = make_chart({"th", "ph"}, {{0.3, 2.8}, {-3.0, 3.0}});
  const std::vector<std::pair<MetricSpec, std::optional<double>>> bases{
      {testing::euclidean(testing::box_chart({"x", "y", "z"})), std::nullopt},
      {testing::unit_sphere(sc), 1.0},
  };
  Rng rng(71);
  for (const auto& [base, lambda] : bases)
    for (int trial = 0; trial < 5; ++trial) {
      const WarpedSpec w{base, random_time_function(tc, rng), random_time_function(tc, rng), lambda};
      const auto m = build_warped_metric(w);
      const auto gm = build_warped_graded_metric(w);
      const auto p = random_point(*warped_chart(w), rng, 0.05);
      const auto cf = warped_closed_forms(w, p);
      CHECK(max_abs_diff(cf.christoffel, christoffel_at(m, p)) <= 1e-9);
      CHECK(max_abs_diff(cf.riemann, riemann_at(m, p)) <= 1e-9);
      CHECK(max_abs_diff(cf.ricci, ricci_at(m, p)) <= 1e-9);
      CHECK(std::abs(cf.laplacian_theta - laplacian_at(m, gm.theta(), p)) <= 1e-9);
      if (lambda) {
        const auto rb = ricci_at(base, std::span<const double>(p).first(2));
        const auto gb = metric_at(base, std::span<const double>(p).first(2)).g;
        CHECK(max_abs_diff(rb, gb) <= 1e-12);
      }
    }
}

TEST_CASE("Einstein-de Sitter data") {
  CHECK(eds_solution(3).c == doctest::Approx(0.5773503).epsilon(1e-7));
  CHECK(eds_solution(2).c == 0.5);
  CHECK_THROWS_AS(eds_solution(1), InvalidArgument);
  for (int n : {2, 3, 4}) {
    const auto e = eds_solution(n);
    for (double t : {0.5, 1.0, 3.0}) {
      const std::vector p{t};
      CHECK(e.a(p) == doctest::Approx(std::log(t) / n));
      const double thp = eval_jet(e.theta, p, 1).d(0);
      CHECK(std::abs(thp) == doctest::Approx(e.c * std::exp(-n * e.a(p))));
      CHECK(std::abs(thp) == doctest::Approx(e.c / t));
    }
  }
}

TEST_CASE("Einstein-de Sitter solves the field equations") {
  for (int n : {2, 3, 4}) {
    const auto gm = build_warped_graded_metric(eds_spec(n, {0.5, 4.0}));
    for (int i = 0; i < 20; ++i) {
      std::vector<double> p(static_cast<std::size_t>(n), 0.0);
      p.push_back(0.5 + 3.5 * i / 19.0);
      const auto r = field_residuals_at(gm, p);
      CHECK(std::max({r.e27, r.e28, r.e29, r.e44}) <= 1e-9);
    }
  }
}

TEST_CASE("integrator reproduces ln(t)/n") {
  for (int n : {2, 3, 4}) {
    const double c = std::sqrt((n - 1.0) / (2.0 * n));
    const auto traj = integrate_scale_factor(eds_start(n, 1.0), n, c, 4.0, 1e-3);
    CHECK(traj.size() == 3001);
    CHECK(traj.back().t == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(max_err_vs_eds(traj, n) <= 1e-8);
    double th = 0.0;
    for (const auto& s : traj) th = std::max(th, std::abs(s.theta - c * std::log(s.t)));
    CHECK(th <= 1e-8);
  }
}

TEST_CASE("integrator converges at fourth order") {
  const int n = 3;
  const double c = std::sqrt(1.0 / 3.0);
  std::vector<double> errs;
  for (double h : {0.2, 0.1, 0.05, 0.025, 0.0125})
    errs.push_back(max_err_vs_eds(integrate_scale_factor(eds_start(n, 1.0), n, c, 4.0, h), n));
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double ratio = errs[i - 1] / errs[i];
    CHECK_MESSAGE(std::abs(ratio - 16.0) <= 3.0, "ratio " << ratio);
  }
}

TEST_CASE("static vacuum and backwards integration") {
  const auto traj = integrate_scale_factor({1.0, 0.3, 0.0, 0.0}, 3, 0.0, 2.0, 0.01);
  for (const auto& s : traj) {
    CHECK(s.a == 0.3);
    CHECK(s.a_dot == 0.0);
  }
  const double c = std::sqrt(1.0 / 3.0);
  const auto back = integrate_scale_factor(eds_start(3, 2.0), 3, c, 1.0, 1e-3);
  CHECK(back.back().t == doctest::Approx(1.0));
  CHECK(max_err_vs_eds(back, 3) <= 1e-8);
  CHECK_THROWS_AS(integrate_scale_factor(eds_start(3, 1.0), 3, c, -1.0, 1e-3), DomainError);
  CHECK_THROWS_AS(integrate_scale_factor(eds_start(3, 1.0), 3, c, 2.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(integrate_scale_factor(eds_start(3, 1.0), 3, c, 2.0, 1e-3, 0), InvalidArgument);
}

TEST_CASE("constraint residuals along integrated trajectories") {
  for (int n : {2, 3}) {
    const double c = std::sqrt((n - 1.0) / (2.0 * n));
    const auto traj = integrate_scale_factor(eds_start(n, 1.0), n, c, 4.0, 1e-3);
    const auto rows = trajectory_rows(traj, n, c, 0.0);
    for (const auto& r : rows) {
      CHECK(std::abs(r.eq42_residual) <= 1e-8);
      CHECK(std::abs(r.eq41_residual) <= 1e-9);
    }
  }
}

TEST_CASE("theta stays harmonic along the trajectory") {
  const int n = 3;
  const double c = std::sqrt(1.0 / 3.0);
  const double h = 1e-3;
  const auto traj = integrate_scale_factor(eds_start(n, 1.0), n, c, 4.0, h);
  auto thp = [&](std::size_t i) { return c * std::exp(-n * traj[i].a); };
  for (std::size_t i = 2; i + 2 < traj.size(); i += 50) {
    const double thpp = (thp(i - 2) - 8 * thp(i - 1) + 8 * thp(i + 1) - thp(i + 2)) / (12 * h);
    CHECK(std::abs(-n * traj[i].a_dot * thp(i) - thpp) <= 1e-6);
  }
}

TEST_CASE("big-bang behaviour along Einstein-de Sitter") {
  const int n = 3;
  const auto w = eds_spec(n, {1e-4, 2.0});
  const auto gm = build_warped_graded_metric(w);
  double prev_scale = -1.0, prev_density = 1e300;
  for (int i = 0; i <= 30; ++i) {
    const double t = std::pow(10.0, -3.0 + 3.0 * i / 30.0);
    const std::vector p{0.0, 0.0, 0.0, t};
    const double scale = metric_at(gm.g(), p).g[{0, 0}];
    const auto grad = gradient_at(gm.g(), gm.theta(), p);
    const double density = 2.0 * std::abs(grad[{n}] * grad[{n}] * -1.0);
    CHECK(scale > prev_scale);
    CHECK(density < prev_density);
    CHECK(density == doctest::Approx(2.0 * (1.0 / 3.0) / (t * t)));
    prev_scale = scale;
    prev_density = density;
  }
  CHECK(prev_scale == doctest::Approx(1.0));
}

TEST_CASE("trajectory CSV") {
  const double c = std::sqrt(1.0 / 3.0);
  const auto rows = trajectory_rows(integrate_scale_factor(eds_start(3, 1.0), 3, c, 1.01, 1e-3), 3, c, 0.0);
  std::ostringstream a, b;
  write_trajectory_csv(a, rows);
  write_trajectory_csv(b, rows);
  CHECK(a.str() == b.str());
  std::istringstream in(a.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,a,a_dot,theta,eq41_residual,eq42_residual");
  std::getline(in, line);
  CHECK(line.rfind("1,0,0.33333333333333331,0,", 0) == 0);
  int count = 1;
  while (std::getline(in, line)) ++count;
  CHECK(count == 11);

  // Fewer than five states fall back to the right-hand side for a''.
  const auto few = trajectory_rows(integrate_scale_factor(eds_start(3, 1.0), 3, c, 1.003, 1e-3), 3, c, 0.0);
  CHECK(few.size() == 4);
  CHECK(few[0].a_ddot == scale_factor_accel(3, c, 0.0, 1.0 / 3.0));
}
