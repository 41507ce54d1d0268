#pragma once

// Seeded generators of random smooth geometry for property checks.

#include <cstdint>
#include <random>
#include <vector>

#include "gradedgeo/algebroid.hpp"
#include "gradedgeo/graded_metric.hpp"

namespace gradedgeo {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);

/// c0 + sum c_i x_i + sum_{i<=j} c_ij x_i x_j (+ cubic terms when degree 3)
/// with coefficients uniform in [-scale, scale].
ScalarField random_polynomial(ChartPtr chart, Rng& rng, int degree, double scale);

/// exp, sin, cos, ln(1 + u^2), sqrt(1 + u^2) or tan(u/4) of a random
/// polynomial u; smooth everywhere on [-1, 1]^n.
ScalarField random_composite(ChartPtr chart, Rng& rng);

enum class ElementaryClass { Polynomial, Exp, Ln, Sin, Cos, Tan, Sqrt, Pow };
inline constexpr ElementaryClass kElementaryClasses[] = {
    ElementaryClass::Polynomial, ElementaryClass::Exp, ElementaryClass::Ln,   ElementaryClass::Sin,
    ElementaryClass::Cos,        ElementaryClass::Tan, ElementaryClass::Sqrt, ElementaryClass::Pow};
const char* class_name(ElementaryClass c);

/// Sums and products of one function class applied to random polynomials,
/// smooth on [-1, 1]^n for n <= 3. Pow uses exponents in {-3/2, -1/2, 1/3, 3/2}.
ScalarField random_composite(ChartPtr chart, Rng& rng, ElementaryClass cls);

/// diag(signs) plus a symmetric polynomial perturbation of size `eps`.
MetricSpec random_metric(ChartPtr chart, Rng& rng, const std::vector<int>& signs, double eps);

GradedMetric random_graded_metric(ChartPtr chart, Rng& rng, const std::vector<int>& signs,
                                  double eps = 0.1);

/// f * e_A with f a random polynomial and e_A a basis field (A = n is xi).
GradedVectorField random_homogeneous_field(ChartPtr chart, Rng& rng);
/// Random polynomial even part and odd coefficient.
GradedVectorField random_graded_field(ChartPtr chart, Rng& rng);

std::vector<double> random_point(const ChartSpec& chart, Rng& rng, double margin = 0.0);

}  // namespace gradedgeo
