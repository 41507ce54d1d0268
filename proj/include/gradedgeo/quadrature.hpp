#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gradedgeo/chart.hpp"

namespace gradedgeo {

/// Tensor-product Gauss-Legendre rule on a box.
struct QuadratureSpec {
  std::vector<Interval> box;
  int nodes = 16;  // per axis
};

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// Cached m-point rule; nodes from Newton iteration on P_m.
const GaussLegendreRule& gauss_legendre(int m);

/// Pairwise (cascade) summation; result depends only on the input order.
double pairwise_sum(std::span<const double> v);

/// Calls fn(i) for i in [0, count) on up to `threads` workers (0 = hardware
/// concurrency). The first exception thrown by any call is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, unsigned threads = 0);

/// Integrates a vector-valued integrand of fixed length `width`. Each
/// component is summed pairwise over the nodes in lexicographic order, so the
/// result does not depend on scheduling.
std::vector<double> integrate(const QuadratureSpec& q, std::size_t width,
                              const std::function<void(std::span<const double>, std::span<double>)>& f);

double integrate(const QuadratureSpec& q, const std::function<double(std::span<const double>)>& f);

}  // namespace gradedgeo
