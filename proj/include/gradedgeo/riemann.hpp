#pragma once

// Classical semi-Riemannian calculus on a chart.
//
// Conventions:
//   G^k_ij = 1/2 g^kl (d_j g_il + d_i g_jl - d_l g_ij)
//   R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
//   R^l_ijk = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik,
//             i.e. R(d_i, d_j) d_k = R^l_ijk d_l
//   Ric_jk = R^l_ljk, R = g^jk Ric_jk
//   Hes(f)_ij = d_i d_j f - G^k_ij d_k f, Lap f = g^ij Hes(f)_ij
//   (div S)_j = g^ik (nabla_i S)_kj
// With these, the unit 2-sphere has Ric = g and R = 2.

#include <span>
#include <vector>

#include "gradedgeo/metric.hpp"
#include "gradedgeo/tensor.hpp"

namespace gradedgeo {

struct MetricAt {
  TensorValue g;     // (0,2)
  TensorValue ginv;  // (2,0)
  double det = 0.0;
};

MetricAt metric_at(const MetricSpec& m, std::span<const double> p);
/// Signs of the metric's diagonal after symmetric elimination at p, i.e. the
/// signature as a sign pattern (+1 / -1 per slot).
std::vector<int> signature_at(const MetricSpec& m, std::span<const double> p);

TensorValue christoffel_at(const MetricSpec& m, std::span<const double> p);
TensorValue riemann_at(const MetricSpec& m, std::span<const double> p);
TensorValue ricci_at(const MetricSpec& m, std::span<const double> p);
double scalar_curvature_at(const MetricSpec& m, std::span<const double> p);

TensorValue gradient_at(const MetricSpec& m, const ScalarField& f, std::span<const double> p);
TensorValue hessian_at(const MetricSpec& m, const ScalarField& f, std::span<const double> p);
double laplacian_at(const MetricSpec& m, const ScalarField& f, std::span<const double> p);

double divergence_vec_at(const MetricSpec& m, std::span<const ScalarField> v,
                         std::span<const double> p);
TensorValue divergence_sym2_at(const MetricSpec& m, const SymmetricField& s,
                               std::span<const double> p);

}  // namespace gradedgeo
