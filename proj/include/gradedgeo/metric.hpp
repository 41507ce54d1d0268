#pragma once

#include <vector>

#include "gradedgeo/expr.hpp"

namespace gradedgeo {

/// Symmetric (0,2) tensor field on a chart. Only the upper triangle is
/// stored: `upper` lists S_00, S_01, ..., S_0(n-1), S_11, ..., S_(n-1)(n-1).
class SymmetricField {
 public:
  SymmetricField(ChartPtr chart, std::vector<ScalarField> upper);

  static SymmetricField diagonal(ChartPtr chart, std::vector<ScalarField> diag);
  static SymmetricField zero(ChartPtr chart);
  /// Full matrix; entries below the diagonal must structurally equal their
  /// transposes.
  static SymmetricField from_matrix(ChartPtr chart, const std::vector<std::vector<ScalarField>>& m);

  int dim() const noexcept { return chart_->dim(); }
  const ChartSpec& chart() const noexcept { return *chart_; }
  const ChartPtr& chart_ptr() const noexcept { return chart_; }
  const ScalarField& component(int i, int j) const;
  const std::vector<ScalarField>& upper() const noexcept { return upper_; }

  friend SymmetricField operator+(const SymmetricField& a, const SymmetricField& b);
  friend SymmetricField operator*(const ScalarField& f, const SymmetricField& s);
  friend SymmetricField operator*(double c, const SymmetricField& s);

 private:
  ChartPtr chart_;
  std::vector<ScalarField> upper_;
};

/// A semi-Riemannian metric on one chart; symmetric by construction.
/// Nondegeneracy is checked wherever the metric is evaluated.
class MetricSpec {
 public:
  explicit MetricSpec(SymmetricField g) : g_(std::move(g)) {}
  MetricSpec(ChartPtr chart, std::vector<ScalarField> upper)
      : g_(std::move(chart), std::move(upper)) {}

  static MetricSpec diagonal(ChartPtr chart, std::vector<ScalarField> diag) {
    return MetricSpec(SymmetricField::diagonal(std::move(chart), std::move(diag)));
  }
  static MetricSpec from_matrix(ChartPtr chart, const std::vector<std::vector<ScalarField>>& m) {
    return MetricSpec(SymmetricField::from_matrix(std::move(chart), m));
  }

  int dim() const noexcept { return g_.dim(); }
  const ChartSpec& chart() const noexcept { return g_.chart(); }
  const ChartPtr& chart_ptr() const noexcept { return g_.chart_ptr(); }
  const ScalarField& component(int i, int j) const { return g_.component(i, j); }
  const SymmetricField& field() const noexcept { return g_; }

 private:
  SymmetricField g_;
};

/// Hard error below this |det g|.
inline constexpr double kDegeneracyThreshold = 1e-10;

}  // namespace gradedgeo
