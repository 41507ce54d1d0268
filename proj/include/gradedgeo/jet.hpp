#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace gradedgeo {

/// Multi-indices of total degree <= order in `nvars` variables, enumerated in
/// graded order: all degree-0, then degree-1, ... monomials. A basis of lower
/// order is therefore a prefix of a higher one, so jets of different orders
/// share coefficient indices and truncation is a resize.
class MonomialBasis {
 public:
  static std::shared_ptr<const MonomialBasis> get(int nvars, int order);

  int nvars() const noexcept { return nvars_; }
  int order() const noexcept { return order_; }

  /// Number of monomials of total degree <= k (= C(n+k, k)).
  std::size_t size(int k) const { return offsets_[static_cast<std::size_t>(k) + 1]; }
  std::size_t size() const { return size(order_); }

  std::span<const int> exponents(std::size_t idx) const {
    return {exps_.data() + idx * static_cast<std::size_t>(nvars_), static_cast<std::size_t>(nvars_)};
  }
  int degree(std::size_t idx) const { return degree_[idx]; }

  /// Index of a multi-index, or -1 if its degree exceeds order().
  std::ptrdiff_t index(std::span<const int> multi) const;
  /// Index of exps(i) + exps(j); -1 when beyond order().
  std::int32_t product_index(std::size_t i, std::size_t j) const {
    return product_[i * size() + j];
  }
  const std::int32_t* product_row(std::size_t i) const { return product_.data() + i * size(); }
  /// Index of exps(i) + e_var; -1 when beyond order().
  std::int32_t raise_index(std::size_t i, int var) const {
    return raise_[i * static_cast<std::size_t>(nvars_) + static_cast<std::size_t>(var)];
  }
  /// m! = prod_k m_k!
  double factorial(std::size_t idx) const { return factorial_[idx]; }

  MonomialBasis(int nvars, int order);

 private:
  int nvars_;
  int order_;
  std::vector<std::size_t> offsets_;  // offsets_[d] = #monomials of degree < d
  std::vector<int> exps_;
  std::vector<int> degree_;
  std::vector<double> factorial_;
  std::vector<std::int32_t> product_;
  std::vector<std::int32_t> raise_;
  std::vector<std::int32_t> lookup_;  // dense (order+1)^nvars table
};

/// Truncated multivariate Taylor series of a scalar at a point:
/// coeffs[m] = (1/m!) d^m f(p) for all |m| <= order.
///
/// Arithmetic is closed and truncation-consistent: the product of two jets is
/// the truncation of the product series to the smaller of the two orders.
class Jet {
 public:
  Jet() = default;

  static Jet constant(int nvars, int order, double value);
  /// The coordinate function x_var expanded at `value`.
  static Jet variable(int nvars, int order, double value, int var);

  int nvars() const noexcept { return basis_ ? basis_->nvars() : 0; }
  int order() const noexcept { return order_; }
  bool empty() const noexcept { return !basis_; }

  double value() const { return c_[0]; }
  std::span<const double> coeffs() const { return c_; }
  std::span<double> coeffs() { return c_; }
  const MonomialBasis& basis() const { return *basis_; }

  double coeff(std::span<const int> multi) const;
  /// d^m f(p) (coefficient times m!).
  double partial(std::span<const int> multi) const;
  /// First partial d f / d x_var.
  double d(int var) const;
  /// Second partial d^2 f / dx_i dx_j.
  double d2(int i, int j) const;

  /// Partial derivative as a jet of order-1.
  Jet derivative(int var) const;
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);
  Jet& operator+=(double s) {
    c_[0] += s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator-(Jet a);
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a += -s; }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a *= 1.0 / s; }

 private:
  Jet(std::shared_ptr<const MonomialBasis> basis, int order);

  /// Evaluates sum_k taylor[k] * (this - value())^k.
  Jet compose(std::span<const double> taylor) const;

  friend Jet exp(const Jet&);
  friend Jet log(const Jet&);
  friend Jet sin(const Jet&);
  friend Jet cos(const Jet&);
  friend Jet pow(const Jet&, double);
  friend Jet reciprocal(const Jet&);

  std::shared_ptr<const MonomialBasis> basis_;
  int order_ = 0;
  std::vector<double> c_;
};

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet tan(const Jet& a);
Jet sqrt(const Jet& a);
Jet reciprocal(const Jet& a);
/// Integer exponent: any base (zero base only for n >= 0).
Jet powi(const Jet& a, long n);
/// Integer-valued exponents go through powi; others need a positive base.
Jet pow(const Jet& a, double r);

/// Max |a_m - b_m| over the common coefficients.
double max_abs_diff(const Jet& a, const Jet& b);

}  // namespace gradedgeo
