#pragma once

#include <initializer_list>
#include <span>
#include <vector>

namespace gradedgeo {

enum class Variance { Covariant, Contravariant };

/// Components of a tensor at a point, row-major over the index slots in
/// valence order. Christoffel symbols are stored as [k][i][j] for G^k_ij and
/// the Riemann tensor as [l][i][j][k] for R^l_ijk.
class TensorValue {
 public:
  TensorValue() = default;
  TensorValue(std::vector<Variance> valence, int dim, std::vector<double> base_point);
  TensorValue(std::vector<Variance> valence, int dim, std::vector<double> components,
              std::vector<double> base_point);

  static TensorValue covector(std::vector<double> components, std::vector<double> base_point);
  static TensorValue vector(std::vector<double> components, std::vector<double> base_point);

  const std::vector<Variance>& valence() const noexcept { return valence_; }
  int rank() const noexcept { return static_cast<int>(valence_.size()); }
  int dim() const noexcept { return dim_; }
  const std::vector<double>& base_point() const noexcept { return base_point_; }
  std::span<const double> components() const noexcept { return components_; }
  std::span<double> components() noexcept { return components_; }

  double& operator[](std::initializer_list<int> idx) { return components_[flat(idx)]; }
  double operator[](std::initializer_list<int> idx) const { return components_[flat(idx)]; }
  double& at(std::span<const int> idx) { return components_[flat(idx)]; }
  double at(std::span<const int> idx) const { return components_[flat(idx)]; }

  double max_abs() const;

 private:
  std::size_t flat(std::span<const int> idx) const;
  std::size_t flat(std::initializer_list<int> idx) const {
    return flat(std::span<const int>(idx.begin(), idx.size()));
  }

  std::vector<Variance> valence_;
  int dim_ = 0;
  std::vector<double> components_;
  std::vector<double> base_point_;
};

/// Componentwise max |a - b|; shapes must agree.
double max_abs_diff(const TensorValue& a, const TensorValue& b);

}  // namespace gradedgeo
