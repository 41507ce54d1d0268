#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gradedgeo/error.hpp"
#include "gradedgeo/expr.hpp"
#include "support.hpp"

using namespace gradedgeo;
using testing::box_chart;

TEST_CASE("parse and evaluate elementary expressions") {
  auto t = make_chart({"t"});
  CHECK(parse_field("exp(2*t)", t)(std::vector{1.0}) == doctest::Approx(std::exp(2.0)));

  auto sph = make_chart({"th", "ph"});
  const auto f = parse_field("sin(th)^2", sph);
  CHECK(f(std::vector{0.7, 0.1}) == doctest::Approx(std::sin(0.7) * std::sin(0.7)));

  const auto a = parse_field("(1/n)*ln(t)", t, {{"n", 3.0}});
  CHECK(a(std::vector{2.0}) == doctest::Approx(0.23104906018664842).epsilon(1e-14));
}

TEST_CASE("grammar details") {
  auto c = make_chart({"x", "y"});
  const std::vector p{0.3, -0.4};
  CHECK(parse_field("  x+ y*2 ", c)(p) == doctest::Approx(-0.5));
  CHECK(parse_field("-x^2", c)(p) == doctest::Approx(-0.09));
  CHECK(parse_field("2^3", c)(p) == doctest::Approx(8.0));
  CHECK(parse_field("pi", c)(p) == doctest::Approx(std::numbers::pi));
  CHECK(parse_field("1.5e-1*x", c)(p) == doctest::Approx(0.045));
  CHECK(parse_field("x/y/2", c)(p) == doctest::Approx(0.3 / -0.4 / 2.0));
  CHECK(parse_field("x - y - 1", c)(p) == doctest::Approx(-0.3));
  CHECK(parse_field("sqrt(x^2 + y^2)", c)(p) == doctest::Approx(0.5));
  CHECK(parse_field("tan(x)+cos(y)", c)(p) == doctest::Approx(std::tan(0.3) + std::cos(-0.4)));
  CHECK(parse_field("y_1", make_chart({"y_1"}))(std::vector{2.0}) == doctest::Approx(2.0));
}

TEST_CASE("parse errors carry positions") {
  auto c = make_chart({"x", "y"});
  CHECK_THROWS_AS(parse_field("x +", c), ParseError);
  CHECK_THROWS_AS(parse_field("(x", c), ParseError);
  CHECK_THROWS_AS(parse_field("x y", c), ParseError);
  CHECK_THROWS_AS(parse_field("1.2.3", c), ParseError);
  CHECK_THROWS_AS(parse_field("foo(x)", c), ParseError);
  CHECK_THROWS_AS(parse_field("x^y", c), ParseError);
  try {
    parse_field("x + zz", c);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("chart construction") {
  CHECK_THROWS_AS(make_chart({}), InvalidArgument);
  CHECK_THROWS_AS(make_chart({"x", "x"}), InvalidArgument);
  CHECK_THROWS_AS(make_chart({"1x"}), InvalidArgument);
  CHECK_THROWS_AS(make_chart({"exp"}), InvalidArgument);
  CHECK_THROWS_AS(make_chart({"x"}, {{1.0, 0.0}}), InvalidArgument);
  auto c = make_chart({"x"}, {{0.0, 1.0}});
  CHECK(c->contains(std::vector{0.5}));
  CHECK_FALSE(c->contains(std::vector{1.5}));
}

TEST_CASE("jets of polynomials and constants") {
  auto c = make_chart({"x", "y"});
  const auto f = parse_field("x^2 + y", c);
  const std::vector p{1.0, 2.0};
  const auto j = eval_jet(f, p, 2);
  CHECK(j.value() == doctest::Approx(3.0));
  CHECK(j.d(0) == doctest::Approx(2.0));
  CHECK(j.d(1) == doctest::Approx(1.0));
  CHECK(j.d2(0, 0) == doctest::Approx(2.0));
  CHECK(j.coeff(std::vector{2, 0}) == doctest::Approx(1.0));
  CHECK(j.d2(0, 1) == 0.0);
  CHECK(j.coeffs().size() == 6);

  const auto cj = eval_jet(ScalarField::constant(c, 4.5), p, 3);
  CHECK(cj.value() == 4.5);
  for (std::size_t i = 1; i < cj.coeffs().size(); ++i) CHECK(cj.coeffs()[i] == 0.0);
}

TEST_CASE("jet of ln(t) matches the closed-form derivatives") {
  auto t = make_chart({"t"});
  const auto j = eval_jet(parse_field("ln(t)", t), std::vector{2.0}, 3);
  CHECK(j.partial(std::vector{1}) == doctest::Approx(0.5));
  CHECK(j.partial(std::vector{2}) == doctest::Approx(-0.25));
  CHECK(j.partial(std::vector{3}) == doctest::Approx(0.25));
  CHECK(j.coeff(std::vector{3}) == doctest::Approx(0.25 / 6.0));
}

TEST_CASE("partials table") {
  auto c = make_chart({"x", "y"});
  const auto pt = partials(parse_field("x*y", c), std::vector{3.0, 5.0}, 2);
  CHECK(pt({1, 0}) == doctest::Approx(5.0));
  CHECK(pt({0, 1}) == doctest::Approx(3.0));
  CHECK(pt({1, 1}) == doctest::Approx(1.0));

  auto t = make_chart({"t"});
  const auto e = partials(parse_field("exp(2*(ln(t)/3))", t), std::vector{1.0}, 1);
  CHECK(e({0}) == doctest::Approx(1.0));
  CHECK(e({1}) == doctest::Approx(2.0 / 3.0));

  auto xc = make_chart({"x"});
  const auto s = partials(parse_field("sin(x)", xc), std::vector{0.0}, 3);
  CHECK(s({0}) == doctest::Approx(0.0));
  CHECK(s({1}) == doctest::Approx(1.0));
  CHECK(s({2}) == doctest::Approx(0.0));
  CHECK(s({3}) == doctest::Approx(-1.0));
}

TEST_CASE("domain errors") {
  auto c = make_chart({"x"}, {{-2.0, 2.0}});
  CHECK_THROWS_AS(eval_jet(parse_field("ln(x)", c), std::vector{-1.0}, 1), DomainError);
  CHECK_THROWS_AS(eval_jet(parse_field("1/x", c), std::vector{0.0}, 1), DomainError);
  CHECK_THROWS_AS(eval_jet(parse_field("sqrt(x)", c), std::vector{-0.5}, 0), DomainError);
  CHECK_THROWS_AS(eval_jet(parse_field("x^0.5", c), std::vector{-0.5}, 0), DomainError);
  CHECK(eval_jet(parse_field("x^3", c), std::vector{-0.5}, 1).d(0) == doctest::Approx(0.75));
  CHECK_THROWS_AS(eval_jet(parse_field("x", c), std::vector{3.0}, 0), DomainError);
  CHECK_THROWS_AS(eval_jet(parse_field("x", c), std::vector{0.0}, max_jet_order() + 1), DomainError);
}

TEST_CASE("bump profile vanishes outside its support") {
  auto c = make_chart({"u"});
  const auto b = bump(ScalarField::coordinate(c, 0));
  CHECK(b(std::vector{0.0}) == doctest::Approx(std::exp(-1.0)));
  CHECK(b(std::vector{1.0}) == 0.0);
  CHECK(b(std::vector{1.5}) == 0.0);
  CHECK(b(std::vector{-0.99999}) < 1e-12);
  const auto j = eval_jet(b, std::vector{0.5}, 2);
  CHECK(j.d(0) == doctest::Approx(testing::fd1(b, {0.5}, 0)).epsilon(1e-6));
}

TEST_CASE("jet linearity and product truncation") {
  auto c = box_chart({"x", "y", "z"});
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = random_composite(c, rng);
    const auto g = random_composite(c, rng);
    const auto pf = random_polynomial(c, rng, 3, 1.0);
    const auto pg = random_polynomial(c, rng, 3, 1.0);
    const auto p = random_point(*c, rng);
    const double al = uniform(rng, -2, 2), be = uniform(rng, -2, 2);

    const auto lin = eval_jet(al * f + be * g, p, 3);
    const auto lin_ref = eval_jet(f, p, 3) * al + eval_jet(g, p, 3) * be;
    double scale = 1.0;
    for (double v : lin_ref.coeffs()) scale = std::max(scale, std::abs(v));
    CHECK(max_abs_diff(lin, lin_ref) <= 1e-14 * scale);

    const auto prod = eval_jet(pf * pg, p, 3);
    const auto prod_ref = eval_jet(pf, p, 3) * eval_jet(pg, p, 3);
    CHECK(max_abs_diff(prod, prod_ref) <= 1e-14);

    const auto cprod = eval_jet(f * g, p, 3);
    const auto cprod_ref = eval_jet(f, p, 3) * eval_jet(g, p, 3);
    scale = 1.0;
    for (double v : cprod_ref.coeffs()) scale = std::max(scale, std::abs(v));
    CHECK(max_abs_diff(cprod, cprod_ref) <= 1e-12 * scale);
  }
}

TEST_CASE("jet partials agree with central differences") {
  auto c = box_chart({"x", "y"});
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_composite(c, rng);
    const auto p = random_point(*c, rng, 0.05);
    const auto j = eval_jet(f, p, 2);
    for (int i = 0; i < 2; ++i) {
      CHECK(testing::rel_err(testing::fd1(f, p, i), j.d(i)) <= 1e-6);
      for (int k = i; k < 2; ++k) CHECK(testing::rel_err(testing::fd2(f, p, i, k), j.d2(i, k)) <= 1e-6);
    }
  }
}

TEST_CASE("symbolic derivative agrees with jets") {
  auto c = box_chart({"x", "y"});
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_composite(c, rng);
    const auto p = random_point(*c, rng);
    const auto j = eval_jet(f, p, 2);
    CHECK(diff(f, 0)(p) == doctest::Approx(j.d(0)).epsilon(1e-12));
    CHECK(diff(diff(f, 1), 0)(p) == doctest::Approx(j.d2(0, 1)).epsilon(1e-10));
  }
}

TEST_CASE("pretty_print round-trips the tree") {
  auto c = box_chart({"x", "y"});
  Rng rng(5);
  for (const char* src : {"-x^2", "2 - (x - y)", "x/(y*2)", "exp(-x)*ln(1 + y^2)", "-3.25e-7*x",
                          "(x + y)^(1/3)", "x - -y", "sin(cos(tan(sqrt(x^2 + 1))))", "1/(1/x)"}) {
    const auto f = parse_field(src, c);
    const auto g = parse_field(pretty_print(f), c);
    CHECK_MESSAGE(structurally_equal(f.root(), g.root()), src << " -> " << pretty_print(f));
  }
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_composite(c, rng);
    const auto g = parse_field(pretty_print(f), c);
    CHECK(structurally_equal(f.root(), g.root()));
  }
}

TEST_CASE("rebind moves a field onto a larger chart") {
  auto t = make_chart({"t"});
  auto st = make_chart({"x", "y", "t"});
  const auto a = parse_field("ln(t)/3", t);
  const std::vector<int> map{2};
  const auto b = a.rebind(st, map);
  CHECK(b(std::vector{0.1, 0.2, 2.0}) == doctest::Approx(std::log(2.0) / 3.0));
}

TEST_CASE("per-class composites are smooth on the unit box") {
  auto c = box_chart({"x", "y", "z"});
  Rng rng(12);
  for (auto cls : kElementaryClasses) {
    CAPTURE(class_name(cls));
    for (int trial = 0; trial < 20; ++trial) {
      const auto f = random_composite(c, rng, cls);
      const auto j = eval_jet(f, random_point(*c, rng), 2);
      CHECK(std::isfinite(j.value()));
      CHECK(std::isfinite(j.d2(0, 1)));
    }
  }
}
