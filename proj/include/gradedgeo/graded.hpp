#pragma once

// Graded connections on TM + R xi, the Levi-Civita triple of a graded metric,
// graded curvature, Ricci, scalar and Hessian, and the field-equation
// residuals.
//
// Graded objects are indexed over the frame {d_0, ..., d_(n-1), xi}; slot n is
// the odd direction. Frame brackets vanish and xi annihilates even functions,
// so the frame derivative e_n is zero on every coefficient.

#include <optional>
#include <span>
#include <vector>

#include "gradedgeo/algebroid.hpp"
#include "gradedgeo/graded_metric.hpp"
#include "gradedgeo/local.hpp"
#include "gradedgeo/tensor.hpp"

namespace gradedgeo {

/// Value of X + h xi at a point.
struct GradedVectorValue {
  std::vector<double> even;
  double odd = 0.0;
};

double max_abs_diff(const GradedVectorValue& a, const GradedVectorValue& b);

/// A graded connection given by its triple (nabla, alpha, X0) together with the
/// 1-form alpha' of the torsion-carrying variant:
///   nabla_X Y        = nabla_X Y
///   nabla_(h xi) Y   = h alpha(Y) xi
///   nabla_X (k xi)   = (k alpha'(X) + X(k)) xi
///   nabla_(h xi) k xi = h k X0
/// The Levi-Civita triple of (g, theta) has nabla = nabla_g, alpha = alpha' =
/// d theta and X0 = -e^{2 theta} grad theta.
class GradedConnection {
 public:
  static GradedConnection levicivita_triple(const GradedMetric& gm);
  /// Arbitrary triple over the Levi-Civita connection of `m`.
  static GradedConnection from_fields(MetricSpec m, std::vector<ScalarField> alpha,
                                      std::vector<ScalarField> alpha_prime,
                                      std::vector<ScalarField> x0);

  int dim() const noexcept { return metric_.dim(); }
  const MetricSpec& metric() const noexcept { return metric_; }
  bool is_levicivita() const noexcept { return theta_.has_value(); }

  /// Jets of the graded Christoffel symbols, [C][A][B] over n+1 slots:
  /// nabla_(e_A) e_B = G^C_AB e_C.
  local::JetArray christoffel_jets(std::span<const double> p, int order) const;

  TensorValue alpha_at(std::span<const double> p) const;
  TensorValue alpha_prime_at(std::span<const double> p) const;
  TensorValue x0_at(std::span<const double> p) const;

 private:
  GradedConnection(MetricSpec m) : metric_(std::move(m)) {}

  MetricSpec metric_;
  std::optional<ScalarField> theta_;
  std::vector<ScalarField> alpha_, alpha_prime_, x0_;
};

GradedVectorValue graded_apply(const GradedConnection& conn, const GradedVectorField& xh,
                               const GradedVectorField& yh, std::span<const double> p);

/// nabla_X Y - nabla_Y X - [X, Y].
GradedVectorValue graded_torsion(const GradedConnection& conn, const GradedVectorField& xh,
                                 const GradedVectorField& yh, std::span<const double> p);

/// Hes(theta) + d theta (x) d theta.
TensorValue tilde_T_at(const GradedMetric& gm, std::span<const double> p);
double tr_tilde_T_at(const GradedMetric& gm, std::span<const double> p);

enum class CurvatureBlock {
  EvenEvenEven,  // R(X,Y)Z
  EvenEvenOdd,   // R(X,Y)xi
  EvenOddEven,   // R(X,xi)Y
  EvenOddOdd,    // R(X,xi)xi
};

/// Full graded curvature R^D_ABC over n+1 slots (convention of riemann.hpp:
/// R(e_A, e_B) e_C = R^D_ABC e_D).
struct GradedCurvature {
  TensorValue full;
  int dim() const noexcept { return full.dim() - 1; }
  /// The selected block as a tensor over the n even slots. Blocks whose value
  /// is a graded vector carry n + 1 output components (last one odd):
  ///   EvenEvenEven [D][i][j][k], EvenEvenOdd [D][i][j], EvenOddEven [D][i][k],
  ///   EvenOddOdd [D][i].
  std::vector<double> block(CurvatureBlock b) const;
};

/// Closed-form blocks: R(X,Y)Z, 0, T~(X,Y) xi, nabla_X X0 - alpha(X) X0.
GradedCurvature graded_curvature_at(const GradedMetric& gm, std::span<const double> p);
/// Curvature of an arbitrary graded connection from its Christoffel jets.
GradedCurvature generic_curvature_at(const GradedConnection& conn, std::span<const double> p);
/// Oracle: graded Christoffels from the Koszul formula in the graded frame
/// (no use of the triple), then the generic curvature.
GradedCurvature koszul_curvature_at(const GradedMetric& gm, std::span<const double> p);

/// Blocks of a graded symmetric 2-tensor.
struct GradedTensorValue {
  TensorValue even;   // (0,2) over n
  TensorValue cross;  // (0,1): T(X, xi)
  double odd = 0.0;   // T(xi, xi)
  std::vector<double> base_point;
};

double max_abs(const GradedTensorValue& t);
double max_abs_diff(const GradedTensorValue& a, const GradedTensorValue& b);

/// Ric - T~; 0; -e^{2 theta} tr T~.
GradedTensorValue graded_ricci_at(const GradedMetric& gm, std::span<const double> p);
/// R - 2 tr T~.
double graded_scalar_at(const GradedMetric& gm, std::span<const double> p);

/// Oracle: sum_A eps_A <R(E_A, a) b, E_A> over a Gram-Schmidt orthonormal
/// graded frame, from koszul_curvature_at.
GradedTensorValue graded_ricci_frame_at(const GradedMetric& gm, std::span<const double> p);
double graded_scalar_frame_at(const GradedMetric& gm, std::span<const double> p);

/// (nabla_X d^f)(Y) through the Levi-Civita triple.
GradedTensorValue graded_hessian_at(const GradedMetric& gm, const ScalarField& f,
                                    std::span<const double> p);
/// Trace against the graded metric: g^ij T_ij + e^{-2 theta} T(xi, xi).
double graded_trace(const GradedMetric& gm, const GradedTensorValue& t, std::span<const double> p);

/// 2 d theta (x) d theta - |grad theta|^2 g.
TensorValue stress_tensor_at(const GradedMetric& gm, std::span<const double> p);
/// div of the stress tensor.
TensorValue conservation_residual_at(const GradedMetric& gm, std::span<const double> p);

struct FieldEquationReport {
  std::vector<double> point;
  double e27 = 0.0;  // |Ric - R g / 2 - 2 d theta (x) d theta + |grad theta|^2 g|
  double e28 = 0.0;  // |Lap theta|
  double e29 = 0.0;  // |Ric - 2 d theta (x) d theta|
  double e44 = 0.0;  // max of the three blocks below
  double e44_even = 0.0;
  double e44_cross = 0.0;
  double e44_odd = 0.0;
  double scalar_curvature = 0.0;
  double graded_scalar = 0.0;
};

FieldEquationReport field_residuals_at(const GradedMetric& gm, std::span<const double> p);

}  // namespace gradedgeo
