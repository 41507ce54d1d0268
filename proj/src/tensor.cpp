#include "gradedgeo/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gradedgeo/error.hpp"

namespace gradedgeo {

namespace {

std::size_t power(int dim, std::size_t rank) {
  std::size_t n = 1;
  for (std::size_t i = 0; i < rank; ++i) n *= static_cast<std::size_t>(dim);
  return n;
}

}  // namespace

TensorValue::TensorValue(std::vector<Variance> valence, int dim, std::vector<double> base_point)
    : valence_(std::move(valence)),
      dim_(dim),
      components_(power(dim, valence_.size()), 0.0),
      base_point_(std::move(base_point)) {}

TensorValue::TensorValue(std::vector<Variance> valence, int dim, std::vector<double> components,
                         std::vector<double> base_point)
    : valence_(std::move(valence)),
      dim_(dim),
      components_(std::move(components)),
      base_point_(std::move(base_point)) {
  if (components_.size() != power(dim_, valence_.size()))
    throw InvalidArgument("tensor has " + std::to_string(components_.size()) +
                          " components, expected " +
                          std::to_string(power(dim_, valence_.size())));
}

TensorValue TensorValue::covector(std::vector<double> components, std::vector<double> base_point) {
  const int n = static_cast<int>(components.size());
  return TensorValue({Variance::Covariant}, n, std::move(components), std::move(base_point));
}

TensorValue TensorValue::vector(std::vector<double> components, std::vector<double> base_point) {
  const int n = static_cast<int>(components.size());
  return TensorValue({Variance::Contravariant}, n, std::move(components), std::move(base_point));
}

std::size_t TensorValue::flat(std::span<const int> idx) const {
  if (idx.size() != valence_.size()) throw InvalidArgument("tensor index has wrong rank");
  std::size_t k = 0;
  for (int i : idx) {
    if (i < 0 || i >= dim_) throw InvalidArgument("tensor index out of range");
    k = k * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  }
  return k;
}

double TensorValue::max_abs() const {
  double m = 0.0;
  for (double c : components_) m = std::max(m, std::abs(c));
  return m;
}

double max_abs_diff(const TensorValue& a, const TensorValue& b) {
  if (a.dim() != b.dim() || a.rank() != b.rank())
    throw InvalidArgument("tensor shapes differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.components().size(); ++i)
    m = std::max(m, std::abs(a.components()[i] - b.components()[i]));
  return m;
}

}  // namespace gradedgeo
