#include "gradedgeo/riemann.hpp"

#include <cmath>

#include "gradedgeo/error.hpp"
#include "gradedgeo/local.hpp"

namespace gradedgeo {

namespace {

std::size_t upper_index(int n, int i, int j) {
  if (i > j) std::swap(i, j);
  // rows 0..i-1 contribute n, n-1, ..., n-i+1 entries
  return static_cast<std::size_t>(i * n - i * (i - 1) / 2 + (j - i));
}


constexpr auto kCo = Variance::Covariant;
constexpr auto kContra = Variance::Contravariant;

}  // namespace

SymmetricField::SymmetricField(ChartPtr chart, std::vector<ScalarField> upper)
    : chart_(std::move(chart)), upper_(std::move(upper)) {
  const int n = chart_->dim();
  if (upper_.size() != static_cast<std::size_t>(n * (n + 1) / 2))
    throw InvalidArgument("symmetric field on a " + std::to_string(n) + "-chart needs " +
                          std::to_string(n * (n + 1) / 2) + " upper-triangle components");
  for (const auto& f : upper_)
    if (!f.chart().compatible(*chart_))
      throw InvalidArgument("symmetric field component lives on a different chart");
}

SymmetricField SymmetricField::diagonal(ChartPtr chart, std::vector<ScalarField> diag) {
  const int n = chart->dim();
  if (diag.size() != static_cast<std::size_t>(n))
    throw InvalidArgument("diagonal needs one entry per coordinate");
  std::vector<ScalarField> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      upper.push_back(i == j ? diag[static_cast<std::size_t>(i)] : ScalarField::constant(chart, 0.0));
  return SymmetricField(std::move(chart), std::move(upper));
}

SymmetricField SymmetricField::zero(ChartPtr chart) {
  const int n = chart->dim();
  std::vector<ScalarField> diag(static_cast<std::size_t>(n), ScalarField::constant(chart, 0.0));
  return diagonal(std::move(chart), std::move(diag));
}

SymmetricField SymmetricField::from_matrix(ChartPtr chart,
                                           const std::vector<std::vector<ScalarField>>& m) {
  const int n = chart->dim();
  if (m.size() != static_cast<std::size_t>(n)) throw InvalidArgument("matrix has wrong row count");
  std::vector<ScalarField> upper;
  for (int i = 0; i < n; ++i) {
    if (m[static_cast<std::size_t>(i)].size() != static_cast<std::size_t>(n))
      throw InvalidArgument("matrix has wrong column count");
    for (int j = i; j < n; ++j) {
      const auto& a = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const auto& b = m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      if (!structurally_equal(a.root(), b.root()))
        throw InvalidArgument("matrix is not symmetric at (" + std::to_string(i) + ", " +
                              std::to_string(j) + ")");
      upper.push_back(a);
    }
  }
  return SymmetricField(std::move(chart), std::move(upper));
}

const ScalarField& SymmetricField::component(int i, int j) const {
  const int n = dim();
  if (i < 0 || j < 0 || i >= n || j >= n) throw InvalidArgument("component index out of range");
  return upper_[upper_index(n, i, j)];
}

SymmetricField operator+(const SymmetricField& a, const SymmetricField& b) {
  std::vector<ScalarField> upper;
  for (std::size_t k = 0; k < a.upper_.size(); ++k) upper.push_back(a.upper_[k] + b.upper_.at(k));
  return SymmetricField(a.chart_, std::move(upper));
}

SymmetricField operator*(const ScalarField& f, const SymmetricField& s) {
  std::vector<ScalarField> upper;
  for (const auto& c : s.upper_) upper.push_back(f * c);
  return SymmetricField(s.chart_, std::move(upper));
}

SymmetricField operator*(double c, const SymmetricField& s) {
  return ScalarField::constant(s.chart_, c) * s;
}

MetricAt metric_at(const MetricSpec& m, std::span<const double> p) {
  const auto mj = local::metric_jets(m, p, 0);
  return {local::values(mj.g, {kCo, kCo}, m.dim(), p),
          local::values(mj.ginv, {kContra, kContra}, m.dim(), p), mj.det};
}

std::vector<int> signature_at(const MetricSpec& m, std::span<const double> p) {
  const auto at = metric_at(m, p);
  const int n = m.dim();
  std::vector<double> a(at.g.components().begin(), at.g.components().end());
  auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i * n + j)]; };
  // Cyclic Jacobi rotations; diagonal slot i converges to the eigenvalue
  // continuously connected to g_ii.
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
    if (off < 1e-30) break;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (A(i, j) == 0.0) continue;
        const double theta = (A(j, j) - A(i, i)) / (2.0 * A(i, j));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double aki = A(k, i), akj = A(k, j);
          A(k, i) = c * aki - s * akj;
          A(k, j) = s * aki + c * akj;
        }
        for (int k = 0; k < n; ++k) {
          const double aik = A(i, k), ajk = A(j, k);
          A(i, k) = c * aik - s * ajk;
          A(j, k) = s * aik + c * ajk;
        }
      }
  }
  std::vector<int> signs;
  for (int i = 0; i < n; ++i) signs.push_back(A(i, i) > 0 ? 1 : -1);
  return signs;
}

TensorValue christoffel_at(const MetricSpec& m, std::span<const double> p) {
  const auto mj = local::metric_jets(m, p, 1);
  return local::values(local::christoffel(mj), {kContra, kCo, kCo}, m.dim(), p);
}

TensorValue riemann_at(const MetricSpec& m, std::span<const double> p) {
  const int n = m.dim();
  const auto mj = local::metric_jets(m, p, 2);
  return local::values(local::riemann(local::christoffel(mj), n), {kContra, kCo, kCo, kCo}, n, p);
}

TensorValue ricci_at(const MetricSpec& m, std::span<const double> p) {
  const int n = m.dim();
  const auto mj = local::metric_jets(m, p, 2);
  return local::values(local::ricci(local::riemann(local::christoffel(mj), n), n), {kCo, kCo}, n, p);
}

double scalar_curvature_at(const MetricSpec& m, std::span<const double> p) {
  const int n = m.dim();
  const auto mj = local::metric_jets(m, p, 2);
  const auto ric = local::ricci(local::riemann(local::christoffel(mj), n), n);
  return local::trace(mj.ginv, ric, n).value();
}

TensorValue gradient_at(const MetricSpec& m, const ScalarField& f, std::span<const double> p) {
  const int n = m.dim();
  const auto mj = local::metric_jets(m, p, 0);
  const auto df = local::differential(eval_jet(f, p, 1), n);
  return local::values(local::raise(mj.ginv, df, n), {kContra}, n, p);
}

TensorValue hessian_at(const MetricSpec& m, const ScalarField& f, std::span<const double> p) {
  const int n = m.dim();
  const auto mj = local::metric_jets(m, p, 1);
  const auto h = local::hessian(local::christoffel(mj), eval_jet(f, p, 2), n);
  return local::values(h, {kCo, kCo}, n, p);
}

double laplacian_at(const MetricSpec& m, const ScalarField& f, std::span<const double> p) {
  const int n = m.dim();
  const auto mj = local::metric_jets(m, p, 1);
  const auto h = local::hessian(local::christoffel(mj), eval_jet(f, p, 2), n);
  return local::trace(mj.ginv, h, n).value();
}

double divergence_vec_at(const MetricSpec& m, std::span<const ScalarField> v,
                         std::span<const double> p) {
  const int n = m.dim();
  if (v.size() != static_cast<std::size_t>(n)) throw InvalidArgument("vector field has wrong size");
  const auto mj = local::metric_jets(m, p, 1);
  local::JetArray vj;
  for (const auto& c : v) vj.push_back(eval_jet(c, p, 1));
  return local::divergence_vector(local::christoffel(mj), vj, n).value();
}

TensorValue divergence_sym2_at(const MetricSpec& m, const SymmetricField& s,
                               std::span<const double> p) {
  const int n = m.dim();
  if (s.dim() != n) throw InvalidArgument("tensor field has wrong dimension");
  const auto mj = local::metric_jets(m, p, 1);
  local::JetArray sj(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sj[static_cast<std::size_t>(i * n + j)] = eval_jet(s.component(i, j), p, 1);
  const auto div = local::divergence_sym2(mj.ginv, local::christoffel(mj), sj, n);
  return local::values(div, {kCo}, n, p);
}

}  // namespace gradedgeo
