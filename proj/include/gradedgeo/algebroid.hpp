#pragma once

// The algebra C^(M) of R+R valued functions f + g tau (tau^2 = 1), its graded
// derivations X + h xi, the super bracket, the anchor map and a generic
// Koszul-formula evaluator for graded metrics.

#include <span>
#include <vector>

#include "gradedgeo/graded_metric.hpp"
#include "gradedgeo/local.hpp"

namespace gradedgeo {

/// f + g tau, stored in (even, odd) coordinates.
struct DualFunction {
  ScalarField even;
  ScalarField odd;

  static DualFunction from_even(ScalarField f);
  static DualFunction tau(ChartPtr chart);
  /// Components in the idempotent picture (a, b) = (f + g, f - g).
  std::pair<ScalarField, ScalarField> to_pair() const;
  static DualFunction from_pair(const ScalarField& a, const ScalarField& b);
};

DualFunction operator+(const DualFunction& a, const DualFunction& b);
DualFunction operator-(const DualFunction& a, const DualFunction& b);
DualFunction dual_mul(const DualFunction& a, const DualFunction& b);

/// X + h xi: an even vector field X (n components) plus the odd coefficient h.
struct GradedVectorField {
  std::vector<ScalarField> even;
  ScalarField odd;

  static GradedVectorField from_even(std::vector<ScalarField> x);
  static GradedVectorField from_odd(ScalarField h);
  /// d_i (odd part 0), or xi itself when i == dim.
  static GradedVectorField basis(ChartPtr chart, int i);
  int dim() const noexcept { return static_cast<int>(even.size()); }
};

GradedVectorField operator+(const GradedVectorField& a, const GradedVectorField& b);
GradedVectorField operator-(const GradedVectorField& a, const GradedVectorField& b);
GradedVectorField operator*(const ScalarField& f, const GradedVectorField& v);

/// Even field X applied to an ordinary function: X^i d_i f.
ScalarField apply_even(std::span<const ScalarField> x, const ScalarField& f);

/// (X + h xi)(f + g tau) = (X(f) + g h) + X(g) tau.
DualFunction derive(const GradedVectorField& v, const DualFunction& a);

/// [X + f xi, Y + g xi] = [X, Y] + (X(g) - Y(f)) xi.
GradedVectorField bracket(const GradedVectorField& v, const GradedVectorField& w);

/// rho(X + h xi) = X.
std::vector<ScalarField> anchor(const GradedVectorField& v);

/// <X + f xi, Y + k xi> = g(X, Y) + f k e^{2 theta}, as a field.
ScalarField pairing(const GradedMetric& gm, const GradedVectorField& u, const GradedVectorField& v);

/// <nabla_Xh Yh, Zh> from the Koszul formula
///   2<nabla_X Y, Z> = X<Y,Z> + Y<Z,X> - Z<X,Y> + <[X,Y],Z> - <[Y,Z],X> + <[Z,X],Y>
/// where a graded field acts on functions through the anchor. Uses only the
/// metric, the bracket and first derivatives of pairings, never Christoffels.
double koszul_eval(const GradedMetric& gm, const GradedVectorField& xh, const GradedVectorField& yh,
                   const GradedVectorField& zh, std::span<const double> p);

/// Pointwise jets of a graded vector field.
struct GradedVectorJet {
  local::JetArray even;
  Jet odd;
};

GradedVectorJet eval_jet(const GradedVectorField& v, std::span<const double> p, int order);

}  // namespace gradedgeo
