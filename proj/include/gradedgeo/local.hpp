#pragma once

// Pointwise kernels in jet arithmetic. Every quantity is a jet at the base
// point, so derivatives of derived quantities (Christoffels, curvature,
// tensor fields built from them) remain exact. Each differentiation lowers
// the usable jet order by one.

#include <span>
#include <vector>

#include "gradedgeo/jet.hpp"
#include "gradedgeo/metric.hpp"
#include "gradedgeo/tensor.hpp"

namespace gradedgeo::local {

/// Dense row-major array of jets, n^rank entries.
using JetArray = std::vector<Jet>;

struct MetricJets {
  int dim = 0;
  JetArray g;     // [i][j]
  JetArray ginv;  // [i][j]
  double det = 0.0;
};

MetricJets metric_jets(const MetricSpec& m, std::span<const double> p, int order);

/// Gauss-Jordan inverse of an n x n jet matrix, pivoting on values.
JetArray invert(const JetArray& a, int n, double* det = nullptr);

/// G^k_ij stored [k][i][j].
JetArray christoffel(const MetricJets& m);
/// R^l_ijk stored [l][i][j][k]; R(d_i, d_j) d_k = R^l_ijk d_l.
JetArray riemann(const JetArray& gamma, int n);
/// Ric_jk = R^l_ljk.
JetArray ricci(const JetArray& riem, int n);

/// g^ij T_ij.
Jet trace(const JetArray& ginv, const JetArray& t, int n);
/// g^im g^jn S_ij T_mn.
Jet inner2(const JetArray& ginv, const JetArray& s, const JetArray& t, int n);

JetArray differential(const Jet& f, int n);
JetArray raise(const JetArray& ginv, const JetArray& covector, int n);
JetArray lower(const JetArray& g, const JetArray& vector, int n);
/// d_i d_j f - G^k_ij d_k f.
JetArray hessian(const JetArray& gamma, const Jet& f, int n);
/// (nabla_i w)_j stored [i][j].
JetArray covariant_derivative_covector(const JetArray& gamma, const JetArray& w, int n);
/// (nabla_i V)^k stored [i][k].
JetArray covariant_derivative_vector(const JetArray& gamma, const JetArray& v, int n);
Jet divergence_vector(const JetArray& gamma, const JetArray& v, int n);
/// (div S)_j = g^ik (nabla_i S)_kj for a symmetric (0,2) field.
JetArray divergence_sym2(const JetArray& ginv, const JetArray& gamma, const JetArray& s, int n);
JetArray outer(const JetArray& a, const JetArray& b);
Jet dot(const JetArray& g, const JetArray& u, const JetArray& v, int n);

TensorValue values(const JetArray& a, std::vector<Variance> valence, int n,
                   std::span<const double> p);

}  // namespace gradedgeo::local
