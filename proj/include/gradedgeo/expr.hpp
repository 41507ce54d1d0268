#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gradedgeo/chart.hpp"
#include "gradedgeo/jet.hpp"

namespace gradedgeo {

enum class ExprOp { Const, Coord, Add, Sub, Mul, Div, Neg, Pow, Exp, Ln, Sin, Cos, Tan, Sqrt, Bump };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

/// Immutable expression tree node. `value` holds the constant of Const nodes
/// and the exponent of Pow nodes; `coord` the coordinate index of Coord nodes.
struct ExprNode {
  ExprOp op = ExprOp::Const;
  double value = 0.0;
  int coord = -1;
  ExprPtr lhs;
  ExprPtr rhs;
};

bool structurally_equal(const ExprNode& a, const ExprNode& b);

/// A smooth function on a chart, given as an expression in its coordinates.
class ScalarField {
 public:
  ScalarField(ChartPtr chart, ExprPtr expr);

  static ScalarField constant(ChartPtr chart, double value);
  static ScalarField coordinate(ChartPtr chart, int index);
  static ScalarField coordinate(ChartPtr chart, const std::string& name);

  const ChartSpec& chart() const noexcept { return *chart_; }
  const ChartPtr& chart_ptr() const noexcept { return chart_; }
  const ExprNode& root() const noexcept { return *expr_; }
  const ExprPtr& expr() const noexcept { return expr_; }
  int dim() const noexcept { return chart_->dim(); }

  /// Point value (order-0 jet).
  double operator()(std::span<const double> p) const;

  bool is_constant() const;
  bool is_zero() const;

  /// Re-expresses the field on `target`; coordinate i of this chart becomes
  /// coordinate coord_map[i] of the target.
  ScalarField rebind(ChartPtr target, std::span<const int> coord_map) const;

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator/(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a);
  friend ScalarField operator+(const ScalarField& a, double b);
  friend ScalarField operator+(double a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, double b);
  friend ScalarField operator-(double a, const ScalarField& b);
  friend ScalarField operator*(const ScalarField& a, double b);
  friend ScalarField operator*(double a, const ScalarField& b);
  friend ScalarField operator/(const ScalarField& a, double b);
  friend ScalarField operator/(double a, const ScalarField& b);

 private:
  ChartPtr chart_;
  ExprPtr expr_;
};

ScalarField exp(const ScalarField& f);
ScalarField ln(const ScalarField& f);
ScalarField sin(const ScalarField& f);
ScalarField cos(const ScalarField& f);
ScalarField tan(const ScalarField& f);
ScalarField sqrt(const ScalarField& f);
ScalarField pow(const ScalarField& f, double exponent);
/// exp(-1/(1-u^2)) for |u| < 1, identically 0 otherwise.
ScalarField bump(const ScalarField& u);

/// Symbolic partial derivative with respect to coordinate `var`.
ScalarField diff(const ScalarField& f, int var);

/// Parses `src` against the chart coordinates. Identifiers found in `params`
/// are substituted as constants.
ScalarField parse_field(std::string_view src, ChartPtr chart,
                        const std::map<std::string, double>& params = {});

/// Text that parses back to the same tree.
std::string pretty_print(const ScalarField& f);
std::string pretty_print(const ExprNode& node, const ChartSpec& chart);

/// Highest jet order the engine will compute; GRADEDGEO_MAX_JET_ORDER
/// overrides the default of 3.
int max_jet_order();
inline constexpr int kDefaultMaxJetOrder = 3;

/// Taylor jet of `f` at `p`: coeffs[m] = d^m f(p) / m!.
Jet eval_jet(const ScalarField& f, std::span<const double> p, int order);

/// Table of partial derivatives d^m f(p), |m| <= upto.
class PartialTable {
 public:
  explicit PartialTable(Jet jet) : jet_(std::move(jet)) {}
  int order() const noexcept { return jet_.order(); }
  double operator()(std::span<const int> multi) const { return jet_.partial(multi); }
  double operator()(std::initializer_list<int> multi) const {
    return jet_.partial(std::span<const int>(multi.begin(), multi.size()));
  }
  const Jet& jet() const noexcept { return jet_; }

 private:
  Jet jet_;
};

PartialTable partials(const ScalarField& f, std::span<const double> p, int upto);

}  // namespace gradedgeo
