#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gradedgeo/error.hpp"
#include "gradedgeo/riemann.hpp"
#include "support.hpp"

using namespace gradedgeo;
using testing::k;
using testing::x;

namespace {

constexpr double kPi = std::numbers::pi;

MetricSpec eds_metric(int n, const ChartPtr& c) {
  std::vector<ScalarField> d;
  for (int i = 0; i < n; ++i) d.push_back(pow(x(c, n), 2.0 / n));
  d.push_back(k(c, -1.0));
  return MetricSpec::diagonal(c, d);
}

ChartPtr eds_chart(int n) {
  std::vector<std::string> names;
  std::vector<Interval> box;
  for (int i = 1; i <= n; ++i) {
    names.push_back("x" + std::to_string(i));
    box.push_back({-1.0, 1.0});
  }
  names.push_back("t");
  box.push_back({0.1, 10.0});
  return make_chart(names, box);
}

/// Lowered Rm(i,j,k,l) = g(R(d_i, d_j) d_k, d_l).
double rm(const TensorValue& riem, const TensorValue& g, int i, int j, int kk, int l) {
  double s = 0.0;
  for (int m = 0; m < g.dim(); ++m) s += g[{l, m}] * riem[{m, i, j, kk}];
  return s;
}

std::vector<MetricSpec> random_metrics(const ChartPtr& c, std::uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<int> signs(static_cast<std::size_t>(c->dim()), 1);
  signs[0] = -1;
  std::vector<MetricSpec> out;
  for (int i = 0; i < count; ++i) out.push_back(random_metric(c, rng, signs, 0.1));
  return out;
}

}  // namespace

TEST_CASE("metric_at on constant, spherical and warped metrics") {
  auto c4 = testing::box_chart({"t", "x", "y", "z"});
  const auto mk = metric_at(testing::minkowski(c4), std::vector{0.1, 0.2, 0.3, 0.4});
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double want = i == j ? (i == 0 ? -1.0 : 1.0) : 0.0;
      CHECK(mk.g[{i, j}] == want);
      CHECK(mk.ginv[{i, j}] == want);
    }

  auto sc = make_chart({"th", "ph"});
  const auto s = metric_at(testing::unit_sphere(sc), std::vector{kPi / 2, 0.3});
  CHECK(s.g[{0, 0}] == doctest::Approx(1.0));
  CHECK(s.g[{1, 1}] == doctest::Approx(1.0));

  auto ec = eds_chart(3);
  const auto e = metric_at(eds_metric(3, ec), std::vector{0.0, 0.0, 0.0, 8.0});
  for (int i = 0; i < 3; ++i) CHECK(e.g[{i, i}] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(e.g[{3, 3}] == -1.0);
}

TEST_CASE("metric times inverse is the identity") {
  auto c = testing::box_chart({"t", "x", "y"});
  Rng rng(21);
  for (const auto& m : random_metrics(c, 21, 10)) {
    const auto p = random_point(*c, rng);
    const auto at = metric_at(m, p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int l = 0; l < 3; ++l) s += at.g[{i, l}] * at.ginv[{l, j}];
        CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) <= 1e-12);
      }
  }
}

TEST_CASE("degenerate metrics are rejected") {
  auto c = testing::box_chart({"x", "y"});
  const auto m = MetricSpec(c, {k(c, 1.0), k(c, 1.0), k(c, 1.0)});
  CHECK_THROWS_AS(metric_at(m, std::vector{0.0, 0.0}), DegenerateMetricError);
  CHECK_THROWS_AS(christoffel_at(m, std::vector{0.0, 0.0}), DegenerateMetricError);
  CHECK_THROWS_AS(SymmetricField(c, {k(c, 1.0)}), InvalidArgument);
}

TEST_CASE("signature as a sign pattern") {
  auto c = testing::box_chart({"t", "x", "y", "z"});
  CHECK(signature_at(testing::minkowski(c), std::vector{0.0, 0.0, 0.0, 0.0}) == std::vector{-1, 1, 1, 1});
}

TEST_CASE("christoffel examples") {
  auto c = testing::box_chart({"x", "y"});
  CHECK(christoffel_at(testing::euclidean(c), std::vector{0.3, 0.1}).max_abs() == 0.0);

  auto sc = make_chart({"th", "ph"});
  const auto g = christoffel_at(testing::unit_sphere(sc), std::vector{kPi / 4, 0.0});
  CHECK(g[{0, 1, 1}] == doctest::Approx(-0.5));
  CHECK(g[{1, 0, 1}] == doctest::Approx(1.0));
  CHECK(g[{1, 1, 0}] == doctest::Approx(1.0));

  auto ec = eds_chart(3);
  const auto e = christoffel_at(eds_metric(3, ec), std::vector{0.0, 0.0, 0.0, 1.0});
  for (int i = 0; i < 3; ++i) CHECK(e[{i, 3, i}] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("riemann examples") {
  auto c = testing::box_chart({"x", "y"});
  CHECK(riemann_at(testing::euclidean(c), std::vector{0.3, 0.1}).max_abs() == 0.0);

  // R(d_th, d_ph) d_ph = sin^2(th) d_th on the unit sphere.
  auto sc = make_chart({"th", "ph"});
  const auto r = riemann_at(testing::unit_sphere(sc), std::vector{kPi / 3, 0.0});
  CHECK(r[{0, 0, 1, 1}] == doctest::Approx(0.75));
  CHECK(r[{0, 1, 0, 1}] == doctest::Approx(-0.75));

  // R(d_t, Y) d_t = (a'' + a'^2) Y with a = ln(t)/3 at t = 1.
  auto ec = eds_chart(3);
  const auto e = riemann_at(eds_metric(3, ec), std::vector{0.0, 0.0, 0.0, 1.0});
  for (int i = 0; i < 3; ++i) CHECK(e[{i, 3, i, 3}] == doctest::Approx(-2.0 / 9.0));
}

TEST_CASE("ricci and scalar examples") {
  auto c = testing::box_chart({"x", "y"});
  CHECK(ricci_at(testing::euclidean(c), std::vector{0.3, 0.1}).max_abs() == 0.0);
  CHECK(scalar_curvature_at(testing::euclidean(c), std::vector{0.3, 0.1}) == 0.0);

  auto sc = make_chart({"th", "ph"});
  const std::vector p{1.1, 0.4};
  const auto m = testing::unit_sphere(sc);
  const auto ric = ricci_at(m, p);
  const auto g = metric_at(m, p).g;
  CHECK(max_abs_diff(ric, g) <= 1e-12);
  CHECK(scalar_curvature_at(m, p) == doctest::Approx(2.0));

  auto ec = eds_chart(3);
  CHECK(ricci_at(eds_metric(3, ec), std::vector{0.0, 0.0, 0.0, 1.0})[{3, 3}] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("gradient examples") {
  auto c = testing::box_chart({"x", "y"});
  const auto g = gradient_at(testing::euclidean(c), x(c, 0), std::vector{0.2, 0.2});
  CHECK(g[{0}] == 1.0);
  CHECK(g[{1}] == 0.0);

  auto m = testing::box_chart({"t", "x"});
  const auto gm = gradient_at(testing::minkowski(m), x(m, 0), std::vector{0.2, 0.2});
  CHECK(gm[{0}] == -1.0);
  CHECK(gm[{1}] == 0.0);

  auto ec = eds_chart(3);
  const auto th = std::sqrt(1.0 / 3.0) * ln(x(ec, 3));
  const auto ge = gradient_at(eds_metric(3, ec), th, std::vector{0.0, 0.0, 0.0, 2.0});
  CHECK(ge[{3}] == doctest::Approx(-std::sqrt(1.0 / 3.0) / 2.0));
}

TEST_CASE("hessian and laplacian examples") {
  auto c = testing::box_chart({"x", "y"});
  const auto f = x(c, 0) * x(c, 0);
  const auto h = hessian_at(testing::euclidean(c), f, std::vector{0.3, 0.1});
  CHECK(h[{0, 0}] == doctest::Approx(2.0));
  CHECK(h[{0, 1}] == 0.0);
  CHECK(h[{1, 1}] == 0.0);
  CHECK(laplacian_at(testing::euclidean(c), f, std::vector{0.3, 0.1}) == doctest::Approx(2.0));

  auto ec = eds_chart(3);
  const auto th = std::sqrt(1.0 / 3.0) * ln(x(ec, 3));
  for (double t : {0.5, 1.0, 2.5, 4.0})
    CHECK(std::abs(laplacian_at(eds_metric(3, ec), th, std::vector{0.0, 0.0, 0.0, t})) <= 1e-14);

  auto sc = make_chart({"th", "ph"});
  CHECK(laplacian_at(testing::unit_sphere(sc), cos(x(sc, 0)), std::vector{kPi / 3, 0.0}) ==
        doctest::Approx(-1.0));
}

TEST_CASE("divergence examples") {
  auto c = testing::box_chart({"x", "y"});
  const auto flat = testing::euclidean(c);
  const std::vector v{k(c, 2.0), k(c, -1.0)};
  CHECK(divergence_vec_at(flat, v, std::vector{0.1, 0.2}) == 0.0);

  const auto f = x(c, 0) * x(c, 0);
  const auto d = divergence_sym2_at(flat, f * flat.field(), std::vector{0.35, 0.2});
  CHECK(d[{0}] == doctest::Approx(0.7));
  CHECK(d[{1}] == doctest::Approx(0.0));

  // Harmonic theta: div(dtheta (x) dtheta) = Hes(theta)(grad theta, .).
  const auto th = exp(x(c, 0)) * sin(x(c, 1));
  const auto t0 = diff(th, 0), t1 = diff(th, 1);
  const SymmetricField s(c, {t0 * t0, t0 * t1, t1 * t1});
  const std::vector p{0.3, -0.6};
  const auto div = divergence_sym2_at(flat, s, p);
  const auto hes = hessian_at(flat, th, p);
  const auto grad = gradient_at(flat, th, p);
  for (int j = 0; j < 2; ++j) {
    const double want = grad[{0}] * hes[{0, j}] + grad[{1}] * hes[{1, j}];
    CHECK(div[{j}] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("random metrics: compatibility, symmetries and Bianchi") {
  auto c = testing::box_chart({"t", "x", "y"});
  Rng rng(99);
  for (const auto& m : random_metrics(c, 1234, 10)) {
    for (int s = 0; s < 5; ++s) {
      const auto p = random_point(*c, rng);
      const auto gam = christoffel_at(m, p);
      const auto g = metric_at(m, p).g;
      for (int kk = 0; kk < 3; ++kk)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            double cov = eval_jet(m.component(i, j), p, 1).d(kk);
            for (int l = 0; l < 3; ++l) cov -= gam[{l, kk, i}] * g[{l, j}] + gam[{l, kk, j}] * g[{i, l}];
            CHECK(std::abs(cov) <= 1e-10);
            CHECK(gam[{kk, i, j}] == gam[{kk, j, i}]);
          }

      const auto r = riemann_at(m, p);
      for (int l = 0; l < 3; ++l)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            for (int kk = 0; kk < 3; ++kk) {
              CHECK(std::abs(r[{l, i, j, kk}] + r[{l, j, i, kk}]) <= 1e-10);
              CHECK(std::abs(r[{l, i, j, kk}] + r[{l, j, kk, i}] + r[{l, kk, i, j}]) <= 1e-10);
              CHECK(std::abs(rm(r, g, i, j, kk, l) + rm(r, g, i, j, l, kk)) <= 1e-10);
              CHECK(std::abs(rm(r, g, i, j, kk, l) - rm(r, g, kk, l, i, j)) <= 1e-10);
            }

      const auto ric = ricci_at(m, p);
      const auto ginv = metric_at(m, p).ginv;
      double tr = 0.0;
      for (int j = 0; j < 3; ++j)
        for (int kk = 0; kk < 3; ++kk) {
          double con = 0.0;
          for (int l = 0; l < 3; ++l) con += r[{l, l, j, kk}];
          CHECK(std::abs(ric[{j, kk}] - con) <= 1e-12);
          CHECK(std::abs(ric[{j, kk}] - ric[{kk, j}]) <= 1e-10);
          tr += ginv[{j, kk}] * ric[{j, kk}];
        }
      CHECK(std::abs(scalar_curvature_at(m, p) - tr) <= 1e-12);
    }
  }
}

TEST_CASE("ricci against a finite-difference oracle") {
  auto c = testing::box_chart({"t", "x", "y"});
  Rng rng(5);
  const double h = 1e-4;
  for (const auto& m : random_metrics(c, 77, 5)) {
    const auto p = random_point(*c, rng, 0.1);
    const auto gam = christoffel_at(m, p);
    std::vector<TensorValue> dgam;
    for (int i = 0; i < 3; ++i) {
      auto a = p, b = p;
      a[static_cast<std::size_t>(i)] += h;
      b[static_cast<std::size_t>(i)] -= h;
      const auto ga = christoffel_at(m, a), gb = christoffel_at(m, b);
      TensorValue d = ga;
      for (std::size_t q = 0; q < d.components().size(); ++q)
        d.components()[q] = (ga.components()[q] - gb.components()[q]) / (2 * h);
      dgam.push_back(d);
    }
    const auto ric = ricci_at(m, p);
    for (int j = 0; j < 3; ++j)
      for (int kk = 0; kk < 3; ++kk) {
        double want = 0.0;
        for (int l = 0; l < 3; ++l) {
          want += dgam[static_cast<std::size_t>(l)][{l, j, kk}] - dgam[static_cast<std::size_t>(j)][{l, l, kk}];
          for (int q = 0; q < 3; ++q) want += gam[{l, l, q}] * gam[{q, j, kk}] - gam[{l, j, q}] * gam[{q, l, kk}];
        }
        CHECK(testing::rel_err(ric[{j, kk}], want) <= 1e-6);
      }
  }
}

TEST_CASE("laplacian equals divergence of the gradient") {
  auto c = testing::box_chart({"x", "y"});
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = random_metric(c, rng, {1, 1}, 0.1);
    const auto f = random_composite(c, rng);
    const auto& g00 = m.component(0, 0);
    const auto& g01 = m.component(0, 1);
    const auto& g11 = m.component(1, 1);
    const auto det = g00 * g11 - g01 * g01;
    const auto f0 = diff(f, 0), f1 = diff(f, 1);
    const std::vector grad{(g11 * f0 - g01 * f1) / det, (g00 * f1 - g01 * f0) / det};
    const auto p = random_point(*c, rng);
    CHECK(std::abs(laplacian_at(m, f, p) - divergence_vec_at(m, grad, p)) <= 1e-10);
  }
}

TEST_CASE("div(h g) = dh on random metrics") {
  auto c = testing::box_chart({"t", "x", "y"});
  Rng rng(31);
  for (const auto& m : random_metrics(c, 31, 5)) {
    const auto hf = random_composite(c, rng);
    const auto p = random_point(*c, rng);
    const auto d = divergence_sym2_at(m, hf * m.field(), p);
    const auto j = eval_jet(hf, p, 1);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(d[{i}] - j.d(i)) <= 1e-10);
  }
}
