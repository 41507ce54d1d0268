#include "gradedgeo/jet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "gradedgeo/error.hpp"

namespace gradedgeo {

namespace {

// Appends every exponent vector of total degree `deg` in lexicographically
// descending order.
void enumerate_degree(int nvars, int deg, std::vector<int>& current, int var,
                      std::vector<int>& out) {
  if (var == nvars - 1) {
    current[static_cast<std::size_t>(var)] = deg;
    out.insert(out.end(), current.begin(), current.end());
    return;
  }
  for (int e = deg; e >= 0; --e) {
    current[static_cast<std::size_t>(var)] = e;
    enumerate_degree(nvars, deg - e, current, var + 1, out);
  }
}

}  // namespace

MonomialBasis::MonomialBasis(int nvars, int order) : nvars_(nvars), order_(order) {
  if (nvars < 1) throw InvalidArgument("jet needs at least one variable");
  if (order < 0) throw InvalidArgument("jet order must be non-negative");
  const auto n = static_cast<std::size_t>(nvars);

  offsets_.push_back(0);
  std::vector<int> current(n, 0);
  for (int d = 0; d <= order; ++d) {
    enumerate_degree(nvars, d, current, 0, exps_);
    offsets_.push_back(exps_.size() / n);
  }
  const std::size_t count = offsets_.back();

  degree_.resize(count);
  factorial_.resize(count);
  std::size_t table = 1;
  for (std::size_t k = 0; k < n; ++k) table *= static_cast<std::size_t>(order + 1);
  lookup_.assign(table, -1);
  for (std::size_t i = 0; i < count; ++i) {
    auto e = exponents(i);
    int deg = 0;
    double fact = 1.0;
    std::size_t key = 0;
    for (std::size_t k = 0; k < n; ++k) {
      deg += e[k];
      for (int q = 2; q <= e[k]; ++q) fact *= q;
      key = key * static_cast<std::size_t>(order + 1) + static_cast<std::size_t>(e[k]);
    }
    degree_[i] = deg;
    factorial_[i] = fact;
    lookup_[key] = static_cast<std::int32_t>(i);
  }

  product_.assign(count * count, -1);
  std::vector<int> sum(n);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      if (degree_[i] + degree_[j] > order) continue;
      auto a = exponents(i);
      auto b = exponents(j);
      for (std::size_t k = 0; k < n; ++k) sum[k] = a[k] + b[k];
      product_[i * count + j] = static_cast<std::int32_t>(index(sum));
    }
  }
  raise_.assign(count * n, -1);
  for (std::size_t i = 0; i < count; ++i) {
    if (degree_[i] + 1 > order) continue;
    auto a = exponents(i);
    for (std::size_t v = 0; v < n; ++v) {
      std::copy(a.begin(), a.end(), sum.begin());
      ++sum[v];
      raise_[i * n + v] = static_cast<std::int32_t>(index(sum));
    }
  }
}

std::ptrdiff_t MonomialBasis::index(std::span<const int> multi) const {
  if (multi.size() != static_cast<std::size_t>(nvars_)) return -1;
  int deg = 0;
  std::size_t key = 0;
  for (int e : multi) {
    if (e < 0) return -1;
    deg += e;
    if (deg > order_) return -1;
    key = key * static_cast<std::size_t>(order_ + 1) + static_cast<std::size_t>(e);
  }
  return lookup_[key];
}

std::shared_ptr<const MonomialBasis> MonomialBasis::get(int nvars, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{nvars, order}];
  if (!slot) slot = std::make_shared<const MonomialBasis>(nvars, order);
  return slot;
}

Jet::Jet(std::shared_ptr<const MonomialBasis> basis, int order)
    : basis_(std::move(basis)), order_(order), c_(basis_->size(order), 0.0) {}

Jet Jet::constant(int nvars, int order, double value) {
  Jet j(MonomialBasis::get(nvars, order), order);
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(int nvars, int order, double value, int var) {
  if (var < 0 || var >= nvars) throw InvalidArgument("jet variable index out of range");
  Jet j = constant(nvars, order, value);
  if (order >= 1) j.c_[1 + static_cast<std::size_t>(var)] = 1.0;
  return j;
}

double Jet::coeff(std::span<const int> multi) const {
  auto idx = basis_->index(multi);
  if (idx < 0 || static_cast<std::size_t>(idx) >= c_.size())
    throw DomainError("requested derivative exceeds jet order " + std::to_string(order_));
  return c_[static_cast<std::size_t>(idx)];
}

double Jet::partial(std::span<const int> multi) const {
  auto idx = basis_->index(multi);
  if (idx < 0 || static_cast<std::size_t>(idx) >= c_.size())
    throw DomainError("requested derivative exceeds jet order " + std::to_string(order_));
  return c_[static_cast<std::size_t>(idx)] * basis_->factorial(static_cast<std::size_t>(idx));
}

double Jet::d(int var) const {
  if (order_ < 1) throw DomainError("first derivative requested from an order-0 jet");
  return c_[1 + static_cast<std::size_t>(var)];
}

double Jet::d2(int i, int j) const {
  if (order_ < 2) throw DomainError("second derivative requested from a jet of order < 2");
  auto idx = basis_->raise_index(static_cast<std::size_t>(1 + i), j);
  const double c = c_[static_cast<std::size_t>(idx)];
  return i == j ? 2.0 * c : c;
}

Jet Jet::derivative(int var) const {
  if (order_ < 1) throw DomainError("jet has no derivative order left");
  Jet r(basis_, order_ - 1);
  const std::size_t n = r.c_.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto up = basis_->raise_index(i, var);
    const int e = basis_->exponents(i)[static_cast<std::size_t>(var)];
    r.c_[i] = (e + 1) * c_[static_cast<std::size_t>(up)];
  }
  return r;
}

Jet Jet::truncated(int order) const {
  if (order >= order_) return *this;
  Jet r(basis_, order);
  std::copy_n(c_.begin(), r.c_.size(), r.c_.begin());
  return r;
}

namespace {

void check_compatible(const Jet& a, const Jet& b) {
  if (a.nvars() != b.nvars())
    throw InvalidArgument("jet variable counts differ (" + std::to_string(a.nvars()) + " vs " +
                          std::to_string(b.nvars()) + ")");
}

}  // namespace

Jet& Jet::operator+=(const Jet& o) {
  check_compatible(*this, o);
  if (o.order_ < order_) *this = truncated(o.order_);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  check_compatible(*this, o);
  if (o.order_ < order_) *this = truncated(o.order_);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (auto& c : c_) c *= s;
  return *this;
}

Jet operator-(Jet a) {
  for (auto& c : a.c_) c = -c;
  return a;
}

Jet operator*(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  const int order = std::min(a.order_, b.order_);
  const auto& basis = a.basis_->order() >= b.basis_->order() ? a.basis_ : b.basis_;
  Jet r(basis, order);
  const std::size_t n = r.c_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double ai = a.c_[i];
    if (ai == 0.0) continue;
    const std::size_t limit = basis->size(order - basis->degree(i));
    const std::int32_t* row = basis->product_row(i);
    for (std::size_t j = 0; j < limit; ++j) r.c_[static_cast<std::size_t>(row[j])] += ai * b.c_[j];
  }
  return r;
}

Jet Jet::compose(std::span<const double> taylor) const {
  Jet u = *this;
  u.c_[0] = 0.0;
  Jet r(basis_, order_);
  r.c_[0] = taylor[static_cast<std::size_t>(order_)];
  for (int k = order_ - 1; k >= 0; --k) {
    r = r * u;
    r.c_[0] += taylor[static_cast<std::size_t>(k)];
  }
  return r;
}

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " produced a non-finite value");
}

}  // namespace

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  require_finite(e, "exp");
  std::vector<double> t(static_cast<std::size_t>(a.order()) + 1);
  double fact = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    t[k] = e / fact;
  }
  return a.compose(t);
}

Jet log(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw DomainError("ln of non-positive argument " + std::to_string(x));
  std::vector<double> t(static_cast<std::size_t>(a.order()) + 1);
  t[0] = std::log(x);
  double xp = 1.0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    xp *= x;
    t[k] = ((k % 2 == 1) ? 1.0 : -1.0) / (static_cast<double>(k) * xp);
  }
  return a.compose(t);
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  const double cycle[4] = {s, c, -s, -c};
  std::vector<double> t(static_cast<std::size_t>(a.order()) + 1);
  double fact = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    t[k] = cycle[k % 4] / fact;
  }
  return a.compose(t);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value());
  const double c = std::cos(a.value());
  const double cycle[4] = {c, -s, -c, s};
  std::vector<double> t(static_cast<std::size_t>(a.order()) + 1);
  double fact = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    t[k] = cycle[k % 4] / fact;
  }
  return a.compose(t);
}

Jet tan(const Jet& a) {
  if (std::cos(a.value()) == 0.0) throw DomainError("tan is singular at the evaluation point");
  return sin(a) / cos(a);
}

Jet reciprocal(const Jet& a) {
  const double x = a.value();
  if (x == 0.0) throw DomainError("division by a field vanishing at the evaluation point");
  std::vector<double> t(static_cast<std::size_t>(a.order()) + 1);
  double p = 1.0 / x;
  for (std::size_t k = 0; k < t.size(); ++k) {
    t[k] = (k % 2 == 0) ? p : -p;
    p /= x;
  }
  require_finite(t[0], "division");
  return a.compose(t);
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet powi(const Jet& a, long n) {
  if (n < 0) return reciprocal(powi(a, -n));
  Jet result = Jet::constant(a.nvars(), a.order(), 1.0);
  Jet base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

Jet pow(const Jet& a, double r) {
  if (r == std::trunc(r) && std::abs(r) < 1e9) return powi(a, static_cast<long>(r));
  const double x = a.value();
  if (x == 0.0 && r > 0.0 && a.order() == 0) return Jet::constant(a.nvars(), 0, 0.0);
  if (!(x > 0.0))
    throw DomainError("non-integer power of non-positive base " + std::to_string(x));
  std::vector<double> t(static_cast<std::size_t>(a.order()) + 1);
  // t_k = binom(r, k) x^(r-k)
  double binom = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0) binom *= (r - static_cast<double>(k - 1)) / static_cast<double>(k);
    t[k] = binom * std::pow(x, r - static_cast<double>(k));
  }
  require_finite(t[0], "power");
  return a.compose(t);
}

Jet sqrt(const Jet& a) { return pow(a, 0.5); }

double max_abs_diff(const Jet& a, const Jet& b) {
  const std::size_t n = std::min(a.coeffs().size(), b.coeffs().size());
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

}  // namespace gradedgeo
