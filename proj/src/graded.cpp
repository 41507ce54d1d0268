#include "gradedgeo/graded.hpp"

#include <algorithm>
#include <cmath>

#include "gradedgeo/error.hpp"
#include "gradedgeo/riemann.hpp"

namespace gradedgeo {

namespace {

using local::JetArray;

constexpr auto kCo = Variance::Covariant;
constexpr auto kContra = Variance::Contravariant;

std::size_t i2(int n, int a, int b) { return static_cast<std::size_t>(a * n + b); }
std::size_t i3(int n, int a, int b, int c) { return static_cast<std::size_t>((a * n + b) * n + c); }
std::size_t i4(int n, int a, int b, int c, int d) {
  return static_cast<std::size_t>(((a * n + b) * n + c) * n + d);
}

std::vector<double> point_vec(std::span<const double> p) { return {p.begin(), p.end()}; }

Jet zero_jet(int nvars, int order) { return Jet::constant(nvars, std::max(order, 0), 0.0); }

// Frame derivative: d_A on even slots, zero along xi.
Jet frame_d(const Jet& f, int a, int n) {
  if (a < n) return f.derivative(a);
  return zero_jet(f.nvars(), f.order() - 1);
}

void check_dim(const ScalarField& f, int n) {
  if (f.dim() != n) throw InvalidArgument("field lives on a chart of the wrong dimension");
}

void check_fields(const GradedVectorField& v, int n) {
  if (v.dim() != n) throw InvalidArgument("graded vector field has the wrong dimension");
}

// R^D_ABC over N = n + 1 frame slots from Christoffel jets [C][A][B].
JetArray frame_riemann(const JetArray& gam, int n) {
  const int N = n + 1;
  const int nv = gam.front().nvars();
  const int order = gam.front().order() - 1;
  JetArray dg(static_cast<std::size_t>(N) * gam.size());  // [A][D][B][C]
  for (int a = 0; a < N; ++a)
    for (std::size_t k = 0; k < gam.size(); ++k) dg[static_cast<std::size_t>(a) * gam.size() + k] = frame_d(gam[k], a, n);
  auto d = [&](int a, int dd, int b, int c) -> const Jet& {
    return dg[static_cast<std::size_t>(a) * gam.size() + i3(N, dd, b, c)];
  };
  JetArray r(static_cast<std::size_t>(N * N * N * N));
  for (int dd = 0; dd < N; ++dd)
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        for (int c = 0; c < N; ++c) {
          if (b < a) {
            r[i4(N, dd, a, b, c)] = -r[i4(N, dd, b, a, c)];
            continue;
          }
          if (a == b) {
            r[i4(N, dd, a, b, c)] = zero_jet(nv, order);
            continue;
          }
          Jet s = d(a, dd, b, c) - d(b, dd, a, c);
          for (int e = 0; e < N; ++e) {
            s += gam[i3(N, dd, a, e)] * gam[i3(N, e, b, c)];
            s -= gam[i3(N, dd, b, e)] * gam[i3(N, e, a, c)];
          }
          r[i4(N, dd, a, b, c)] = std::move(s);
        }
  return r;
}

// Graded metric matrix over N slots.
JetArray graded_metric_jets(const GradedMetric& gm, std::span<const double> p, int order) {
  const int n = gm.dim();
  const int N = n + 1;
  JetArray G(static_cast<std::size_t>(N * N), zero_jet(n, order));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Jet v = eval_jet(gm.g().component(i, j), p, order);
      G[i2(N, j, i)] = v;
      G[i2(N, i, j)] = std::move(v);
    }
  G[i2(N, n, n)] = exp(2.0 * eval_jet(gm.theta(), p, order));
  return G;
}

// Koszul formula in the graded coordinate frame, whose brackets vanish:
// <nabla_A e_B, e_D> = (e_A G_BD + e_B G_AD - e_D G_AB) / 2.
JetArray koszul_christoffel_jets(const GradedMetric& gm, std::span<const double> p, int order) {
  const int n = gm.dim();
  const int N = n + 1;
  const JetArray G = graded_metric_jets(gm, p, order + 1);
  double det = 0.0;
  JetArray Ginv;
  try {
    Ginv = local::invert(G, N, &det);
  } catch (const DegenerateMetricError&) {
    throw DegenerateMetricError("degenerate graded metric");
  }
  JetArray dG(static_cast<std::size_t>(N) * G.size());  // [A][B][D]
  for (int a = 0; a < N; ++a)
    for (std::size_t k = 0; k < G.size(); ++k) dG[static_cast<std::size_t>(a) * G.size() + k] = frame_d(G[k], a, n);
  auto d = [&](int a, int b, int c) -> const Jet& { return dG[static_cast<std::size_t>(a) * G.size() + i2(N, b, c)]; };
  JetArray low(static_cast<std::size_t>(N * N * N));  // [D][A][B]
  for (int dd = 0; dd < N; ++dd)
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) low[i3(N, dd, a, b)] = 0.5 * (d(a, b, dd) + d(b, a, dd) - d(dd, a, b));
  JetArray gam(low.size());
  for (int c = 0; c < N; ++c)
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) {
        Jet s = zero_jet(n, order);
        for (int dd = 0; dd < N; ++dd) s += Ginv[i2(N, c, dd)] * low[i3(N, dd, a, b)];
        gam[i3(N, c, a, b)] = std::move(s);
      }
  return gam;
}

GradedCurvature to_curvature(const JetArray& r, int n, std::span<const double> p) {
  return {local::values(r, {kContra, kCo, kCo, kCo}, n + 1, p)};
}

// Orthonormal graded frame at p by Gram-Schmidt from d_0, ..., d_(n-1),
// e^{-theta} xi, with pivoting on |<v, v>| so indefinite metrics work.
struct Frame {
  std::vector<std::vector<double>> vectors;
  std::vector<double> eps;
};

Frame orthonormal_frame(const std::vector<double>& G, int N, double theta) {
  auto ip = [&](const std::vector<double>& u, const std::vector<double>& v) {
    double s = 0.0;
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) s += G[i2(N, a, b)] * u[static_cast<std::size_t>(a)] * v[static_cast<std::size_t>(b)];
    return s;
  };
  std::vector<std::vector<double>> cand;
  for (int a = 0; a < N; ++a) {
    std::vector<double> v(static_cast<std::size_t>(N), 0.0);
    v[static_cast<std::size_t>(a)] = a == N - 1 ? std::exp(-theta) : 1.0;
    cand.push_back(std::move(v));
  }
  Frame f;
  while (!cand.empty()) {
    for (auto& v : cand)
      for (std::size_t k = 0; k < f.vectors.size(); ++k) {
        const double c = ip(v, f.vectors[k]) * f.eps[k];
        for (int a = 0; a < N; ++a) v[static_cast<std::size_t>(a)] -= c * f.vectors[k][static_cast<std::size_t>(a)];
      }
    std::size_t best = 0;
    for (std::size_t k = 1; k < cand.size(); ++k)
      if (std::abs(ip(cand[k], cand[k])) > std::abs(ip(cand[best], cand[best]))) best = k;
    std::vector<double> v = cand[best];
    double nn = ip(v, v);
    if (std::abs(nn) < 1e-10 && cand.size() > 1) {
      // every remaining direction is null; a sum of two is not
      const std::size_t other = best == 0 ? 1 : 0;
      for (int a = 0; a < N; ++a) v[static_cast<std::size_t>(a)] += cand[other][static_cast<std::size_t>(a)];
      nn = ip(v, v);
    }
    if (std::abs(nn) < 1e-14) throw DegenerateMetricError("graded frame construction hit a null direction");
    const double s = 1.0 / std::sqrt(std::abs(nn));
    for (auto& x : v) x *= s;
    f.vectors.push_back(std::move(v));
    f.eps.push_back(nn > 0 ? 1.0 : -1.0);
    cand.erase(cand.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return f;
}

GradedTensorValue split(const std::vector<double>& full, int n, std::span<const double> p) {
  const int N = n + 1;
  GradedTensorValue t;
  t.base_point = point_vec(p);
  std::vector<double> even(static_cast<std::size_t>(n * n)), cross(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) even[i2(n, i, j)] = full[i2(N, i, j)];
    cross[static_cast<std::size_t>(i)] = full[i2(N, i, n)];
  }
  t.even = TensorValue({kCo, kCo}, n, std::move(even), t.base_point);
  t.cross = TensorValue({kCo}, n, std::move(cross), t.base_point);
  t.odd = full[i2(N, n, n)];
  return t;
}

struct ThetaData {
  Jet theta;        // order 2
  JetArray dtheta;  // order 1
  JetArray x0;      // order 1
  JetArray hes;     // order 0
  JetArray tilde;   // order 0
  Jet tr_tilde;     // order 0
};

ThetaData theta_data(const GradedMetric& gm, const local::MetricJets& mj, const JetArray& gam,
                     std::span<const double> p) {
  const int n = gm.dim();
  ThetaData d;
  d.theta = eval_jet(gm.theta(), p, 2);
  d.dtheta = local::differential(d.theta, n);
  const Jet e2 = exp(2.0 * d.theta);
  d.x0 = local::raise(mj.ginv, d.dtheta, n);
  for (auto& c : d.x0) c = -1.0 * (e2 * c);
  d.hes = local::hessian(gam, d.theta, n);
  d.tilde = d.hes;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d.tilde[i2(n, i, j)] += d.dtheta[static_cast<std::size_t>(i)] * d.dtheta[static_cast<std::size_t>(j)];
  d.tr_tilde = local::trace(mj.ginv, d.tilde, n);
  return d;
}

}  // namespace

double max_abs_diff(const GradedVectorValue& a, const GradedVectorValue& b) {
  if (a.even.size() != b.even.size()) throw InvalidArgument("graded vectors of different dimension");
  double m = std::abs(a.odd - b.odd);
  for (std::size_t i = 0; i < a.even.size(); ++i) m = std::max(m, std::abs(a.even[i] - b.even[i]));
  return m;
}

GradedConnection GradedConnection::levicivita_triple(const GradedMetric& gm) {
  GradedConnection c(gm.g());
  c.theta_ = gm.theta();
  return c;
}

GradedConnection GradedConnection::from_fields(MetricSpec m, std::vector<ScalarField> alpha,
                                               std::vector<ScalarField> alpha_prime,
                                               std::vector<ScalarField> x0) {
  const auto n = static_cast<std::size_t>(m.dim());
  if (alpha.size() != n || alpha_prime.size() != n || x0.size() != n)
    throw InvalidArgument("connection triple components must have one entry per coordinate");
  GradedConnection c(std::move(m));
  c.alpha_ = std::move(alpha);
  c.alpha_prime_ = std::move(alpha_prime);
  c.x0_ = std::move(x0);
  return c;
}

JetArray GradedConnection::christoffel_jets(std::span<const double> p, int order) const {
  const int n = dim();
  const int N = n + 1;
  const auto mj = local::metric_jets(metric_, p, order + 1);
  const JetArray gam = local::christoffel(mj);
  JetArray alpha, alpha_prime, x0;
  if (theta_) {
    const Jet th = eval_jet(*theta_, p, order + 1);
    alpha = local::differential(th, n);
    alpha_prime = alpha;
    const Jet e2 = exp(2.0 * th);
    x0 = local::raise(mj.ginv, alpha, n);
    for (auto& c : x0) c = -1.0 * (e2 * c);
  } else {
    for (int i = 0; i < n; ++i) {
      alpha.push_back(eval_jet(alpha_[static_cast<std::size_t>(i)], p, order));
      alpha_prime.push_back(eval_jet(alpha_prime_[static_cast<std::size_t>(i)], p, order));
      x0.push_back(eval_jet(x0_[static_cast<std::size_t>(i)], p, order));
    }
  }
  JetArray out(static_cast<std::size_t>(N * N * N), zero_jet(n, order));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[i3(N, k, i, j)] = gam[i3(n, k, i, j)];
  for (int j = 0; j < n; ++j) {
    out[i3(N, n, n, j)] = alpha[static_cast<std::size_t>(j)];
    out[i3(N, n, j, n)] = alpha_prime[static_cast<std::size_t>(j)];
    out[i3(N, j, n, n)] = x0[static_cast<std::size_t>(j)];
  }
  return out;
}

TensorValue GradedConnection::alpha_at(std::span<const double> p) const {
  const int n = dim();
  const auto g = christoffel_jets(p, 0);
  std::vector<double> v;
  for (int j = 0; j < n; ++j) v.push_back(g[i3(n + 1, n, n, j)].value());
  return TensorValue::covector(std::move(v), point_vec(p));
}

TensorValue GradedConnection::alpha_prime_at(std::span<const double> p) const {
  const int n = dim();
  const auto g = christoffel_jets(p, 0);
  std::vector<double> v;
  for (int j = 0; j < n; ++j) v.push_back(g[i3(n + 1, n, j, n)].value());
  return TensorValue::covector(std::move(v), point_vec(p));
}

TensorValue GradedConnection::x0_at(std::span<const double> p) const {
  const int n = dim();
  const auto g = christoffel_jets(p, 0);
  std::vector<double> v;
  for (int j = 0; j < n; ++j) v.push_back(g[i3(n + 1, j, n, n)].value());
  return TensorValue::vector(std::move(v), point_vec(p));
}

GradedVectorValue graded_apply(const GradedConnection& conn, const GradedVectorField& xh,
                               const GradedVectorField& yh, std::span<const double> p) {
  const int n = conn.dim();
  const int N = n + 1;
  check_fields(xh, n);
  check_fields(yh, n);
  const JetArray gam = conn.christoffel_jets(p, 0);
  std::vector<double> x(static_cast<std::size_t>(N));
  for (int a = 0; a < n; ++a) x[static_cast<std::size_t>(a)] = xh.even[static_cast<std::size_t>(a)](p);
  x[static_cast<std::size_t>(n)] = xh.odd(p);
  const GradedVectorJet yj = eval_jet(yh, p, 1);
  std::vector<const Jet*> y;
  for (const auto& c : yj.even) y.push_back(&c);
  y.push_back(&yj.odd);

  std::vector<double> out(static_cast<std::size_t>(N), 0.0);
  for (int c = 0; c < N; ++c) {
    double s = 0.0;
    for (int a = 0; a < n; ++a) s += x[static_cast<std::size_t>(a)] * y[static_cast<std::size_t>(c)]->d(a);
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) s += gam[i3(N, c, a, b)].value() * x[static_cast<std::size_t>(a)] * y[static_cast<std::size_t>(b)]->value();
    out[static_cast<std::size_t>(c)] = s;
  }
  const double odd = out.back();
  out.pop_back();
  return {std::move(out), odd};
}

GradedVectorValue graded_torsion(const GradedConnection& conn, const GradedVectorField& xh,
                                 const GradedVectorField& yh, std::span<const double> p) {
  const auto a = graded_apply(conn, xh, yh, p);
  const auto b = graded_apply(conn, yh, xh, p);
  const auto br = bracket(xh, yh);
  GradedVectorValue t{{}, a.odd - b.odd - br.odd(p)};
  for (std::size_t i = 0; i < a.even.size(); ++i) t.even.push_back(a.even[i] - b.even[i] - br.even[i](p));
  return t;
}

TensorValue tilde_T_at(const GradedMetric& gm, std::span<const double> p) {
  const int n = gm.dim();
  const auto mj = local::metric_jets(gm.g(), p, 1);
  const auto td = theta_data(gm, mj, local::christoffel(mj), p);
  return local::values(td.tilde, {kCo, kCo}, n, p);
}

double tr_tilde_T_at(const GradedMetric& gm, std::span<const double> p) {
  const auto mj = local::metric_jets(gm.g(), p, 1);
  return theta_data(gm, mj, local::christoffel(mj), p).tr_tilde.value();
}

std::vector<double> GradedCurvature::block(CurvatureBlock b) const {
  const int n = dim();
  const int N = n + 1;
  std::vector<double> out;
  for (int d = 0; d < N; ++d) switch (b) {
      case CurvatureBlock::EvenEvenEven:
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) out.push_back(full[{d, i, j, k}]);
        break;
      case CurvatureBlock::EvenEvenOdd:
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) out.push_back(full[{d, i, j, n}]);
        break;
      case CurvatureBlock::EvenOddEven:
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k) out.push_back(full[{d, i, n, k}]);
        break;
      case CurvatureBlock::EvenOddOdd:
        for (int i = 0; i < n; ++i) out.push_back(full[{d, i, n, n}]);
        break;
    }
  return out;
}

GradedCurvature graded_curvature_at(const GradedMetric& gm, std::span<const double> p) {
  const int n = gm.dim();
  const int N = n + 1;
  const auto mj = local::metric_jets(gm.g(), p, 2);
  const JetArray gam = local::christoffel(mj);
  const JetArray riem = local::riemann(gam, n);
  const auto td = theta_data(gm, mj, gam, p);
  const JetArray nx0 = local::covariant_derivative_vector(gam, td.x0, n);  // [i][k]

  std::vector<double> r(static_cast<std::size_t>(N * N * N * N), 0.0);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) r[i4(N, l, i, j, k)] = riem[i4(n, l, i, j, k)].value();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double t = td.tilde[i2(n, i, j)].value();
      r[i4(N, n, i, n, j)] = t;
      r[i4(N, n, n, i, j)] = -t;
    }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double v = nx0[i2(n, i, k)].value() -
                       td.dtheta[static_cast<std::size_t>(i)].value() * td.x0[static_cast<std::size_t>(k)].value();
      r[i4(N, k, i, n, n)] = v;
      r[i4(N, k, n, i, n)] = -v;
    }
  return {TensorValue({kContra, kCo, kCo, kCo}, N, std::move(r), point_vec(p))};
}

GradedCurvature generic_curvature_at(const GradedConnection& conn, std::span<const double> p) {
  return to_curvature(frame_riemann(conn.christoffel_jets(p, 1), conn.dim()), conn.dim(), p);
}

GradedCurvature koszul_curvature_at(const GradedMetric& gm, std::span<const double> p) {
  return to_curvature(frame_riemann(koszul_christoffel_jets(gm, p, 1), gm.dim()), gm.dim(), p);
}

double max_abs(const GradedTensorValue& t) {
  return std::max({t.even.max_abs(), t.cross.max_abs(), std::abs(t.odd)});
}

double max_abs_diff(const GradedTensorValue& a, const GradedTensorValue& b) {
  return std::max({max_abs_diff(a.even, b.even), max_abs_diff(a.cross, b.cross), std::abs(a.odd - b.odd)});
}

GradedTensorValue graded_ricci_at(const GradedMetric& gm, std::span<const double> p) {
  const int n = gm.dim();
  const auto mj = local::metric_jets(gm.g(), p, 2);
  const JetArray gam = local::christoffel(mj);
  const JetArray ric = local::ricci(local::riemann(gam, n), n);
  const auto td = theta_data(gm, mj, gam, p);
  GradedTensorValue t;
  t.base_point = point_vec(p);
  std::vector<double> even(static_cast<std::size_t>(n * n));
  for (std::size_t k = 0; k < even.size(); ++k) even[k] = ric[k].value() - td.tilde[k].value();
  t.even = TensorValue({kCo, kCo}, n, std::move(even), t.base_point);
  t.cross = TensorValue({kCo}, n, std::vector<double>(static_cast<std::size_t>(n), 0.0), t.base_point);
  t.odd = -std::exp(2.0 * td.theta.value()) * td.tr_tilde.value();
  return t;
}

double graded_scalar_at(const GradedMetric& gm, std::span<const double> p) {
  const int n = gm.dim();
  const auto mj = local::metric_jets(gm.g(), p, 2);
  const JetArray gam = local::christoffel(mj);
  const JetArray ric = local::ricci(local::riemann(gam, n), n);
  const auto td = theta_data(gm, mj, gam, p);
  return local::trace(mj.ginv, ric, n).value() - 2.0 * td.tr_tilde.value();
}

namespace {

std::vector<double> frame_ricci_full(const GradedMetric& gm, std::span<const double> p, Frame* frame_out) {
  const int n = gm.dim();
  const int N = n + 1;
  const GradedCurvature cur = koszul_curvature_at(gm, p);
  const JetArray Gj = graded_metric_jets(gm, p, 0);
  std::vector<double> G;
  for (const auto& j : Gj) G.push_back(j.value());
  const Frame f = orthonormal_frame(G, N, gm.theta()(p));
  std::vector<double> ric(static_cast<std::size_t>(N * N), 0.0);
  for (int b = 0; b < N; ++b)
    for (int c = 0; c < N; ++c) {
      double s = 0.0;
      for (std::size_t A = 0; A < f.vectors.size(); ++A) {
        const auto& E = f.vectors[A];
        // <R(E_A, e_b) e_c, E_A>
        double term = 0.0;
        for (int d = 0; d < N; ++d) {
          double rv = 0.0;
          for (int k = 0; k < N; ++k) rv += E[static_cast<std::size_t>(k)] * cur.full[{d, k, b, c}];
          double lowered = 0.0;
          for (int m = 0; m < N; ++m) lowered += G[i2(N, d, m)] * E[static_cast<std::size_t>(m)];
          term += rv * lowered;
        }
        s += f.eps[A] * term;
      }
      ric[i2(N, b, c)] = s;
    }
  if (frame_out) *frame_out = f;
  return ric;
}

}  // namespace

GradedTensorValue graded_ricci_frame_at(const GradedMetric& gm, std::span<const double> p) {
  return split(frame_ricci_full(gm, p, nullptr), gm.dim(), p);
}

double graded_scalar_frame_at(const GradedMetric& gm, std::span<const double> p) {
  const int N = gm.dim() + 1;
  Frame f;
  const auto ric = frame_ricci_full(gm, p, &f);
  double s = 0.0;
  for (std::size_t A = 0; A < f.vectors.size(); ++A) {
    const auto& E = f.vectors[A];
    double q = 0.0;
    for (int b = 0; b < N; ++b)
      for (int c = 0; c < N; ++c) q += E[static_cast<std::size_t>(b)] * E[static_cast<std::size_t>(c)] * ric[i2(N, b, c)];
    s += f.eps[A] * q;
  }
  return s;
}

GradedTensorValue graded_hessian_at(const GradedMetric& gm, const ScalarField& f,
                                    std::span<const double> p) {
  const int n = gm.dim();
  const int N = n + 1;
  check_dim(f, n);
  const JetArray gam = GradedConnection::levicivita_triple(gm).christoffel_jets(p, 0);
  const Jet fj = eval_jet(f, p, 2);
  std::vector<double> df(static_cast<std::size_t>(N), 0.0);
  for (int a = 0; a < n; ++a) df[static_cast<std::size_t>(a)] = fj.d(a);
  std::vector<double> h(static_cast<std::size_t>(N * N), 0.0);
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      double s = (a < n && b < n) ? fj.d2(a, b) : 0.0;
      for (int c = 0; c < N; ++c) s -= gam[i3(N, c, a, b)].value() * df[static_cast<std::size_t>(c)];
      h[i2(N, a, b)] = s;
    }
  return split(h, n, p);
}

double graded_trace(const GradedMetric& gm, const GradedTensorValue& t, std::span<const double> p) {
  const int n = gm.dim();
  const auto at = metric_at(gm.g(), p);
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += at.ginv[{i, j}] * t.even[{i, j}];
  return s + std::exp(-2.0 * gm.theta()(p)) * t.odd;
}

namespace {

JetArray stress_jets(const local::MetricJets& mj, const JetArray& dth, int n) {
  const Jet grad2 = local::dot(mj.ginv, dth, dth, n);
  JetArray s(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s[i2(n, i, j)] = 2.0 * (dth[static_cast<std::size_t>(i)] * dth[static_cast<std::size_t>(j)]) - grad2 * mj.g[i2(n, i, j)];
  return s;
}

}  // namespace

TensorValue stress_tensor_at(const GradedMetric& gm, std::span<const double> p) {
  const int n = gm.dim();
  const auto mj = local::metric_jets(gm.g(), p, 0);
  const auto dth = local::differential(eval_jet(gm.theta(), p, 1), n);
  return local::values(stress_jets(mj, dth, n), {kCo, kCo}, n, p);
}

TensorValue conservation_residual_at(const GradedMetric& gm, std::span<const double> p) {
  const int n = gm.dim();
  const auto mj = local::metric_jets(gm.g(), p, 1);
  const auto dth = local::differential(eval_jet(gm.theta(), p, 2), n);
  const JetArray s = stress_jets(mj, dth, n);
  return local::values(local::divergence_sym2(mj.ginv, local::christoffel(mj), s, n), {kCo}, n, p);
}

FieldEquationReport field_residuals_at(const GradedMetric& gm, std::span<const double> p) {
  const int n = gm.dim();
  const auto mj = local::metric_jets(gm.g(), p, 2);
  const JetArray gam = local::christoffel(mj);
  const JetArray ric = local::ricci(local::riemann(gam, n), n);
  const double R = local::trace(mj.ginv, ric, n).value();
  const auto td = theta_data(gm, mj, gam, p);
  const double grad2 = local::dot(mj.ginv, td.dtheta, td.dtheta, n).value();
  const double lap = local::trace(mj.ginv, td.hes, n).value();

  FieldEquationReport r;
  r.point = point_vec(p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double g = mj.g[i2(n, i, j)].value();
      const double tt = td.dtheta[static_cast<std::size_t>(i)].value() * td.dtheta[static_cast<std::size_t>(j)].value();
      const double rc = ric[i2(n, i, j)].value();
      r.e27 = std::max(r.e27, std::abs(rc - 0.5 * R * g - 2.0 * tt + grad2 * g));
      r.e29 = std::max(r.e29, std::abs(rc - 2.0 * tt));
    }
  r.e28 = std::abs(lap);
  r.scalar_curvature = R;
  r.graded_scalar = R - 2.0 * td.tr_tilde.value();

  // graded Ricci against d^theta (x) d^theta - graded Hessian of theta
  const GradedTensorValue gric = graded_ricci_at(gm, p);
  const GradedTensorValue ghes = graded_hessian_at(gm, gm.theta(), p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double tt = td.dtheta[static_cast<std::size_t>(i)].value() * td.dtheta[static_cast<std::size_t>(j)].value();
      r.e44_even = std::max(r.e44_even, std::abs(gric.even[{i, j}] - (tt - ghes.even[{i, j}])));
    }
    // d^theta(xi) = xi(theta) = 0
    r.e44_cross = std::max(r.e44_cross, std::abs(gric.cross[{i}] - (0.0 - ghes.cross[{i}])));
  }
  r.e44_odd = std::abs(gric.odd - (0.0 - ghes.odd));
  r.e44 = std::max({r.e44_even, r.e44_cross, r.e44_odd});
  return r;
}

}  // namespace gradedgeo
