#include "gradedgeo/quadrature.hpp"

#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

#include "gradedgeo/error.hpp"

namespace gradedgeo {

const GaussLegendreRule& gauss_legendre(int m) {
  if (m < 1) throw InvalidArgument("quadrature needs at least one node");
  static std::mutex mu;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(m); it != cache.end()) return it->second;

  GaussLegendreRule r;
  r.nodes.resize(static_cast<std::size_t>(m));
  r.weights.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) p0 = 1.0;
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[static_cast<std::size_t>(i)] = -x;
    r.nodes[static_cast<std::size_t>(m - 1 - i)] = x;
    r.weights[static_cast<std::size_t>(i)] = w;
    r.weights[static_cast<std::size_t>(m - 1 - i)] = w;
  }
  if (m % 2 == 1) r.nodes[static_cast<std::size_t>(m / 2)] = 0.0;
  return cache.emplace(m, std::move(r)).first->second;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      const std::size_t lo = t * chunk;
      const std::size_t hi = std::min(count, lo + chunk);
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

std::vector<double> integrate(const QuadratureSpec& q, std::size_t width,
                              const std::function<void(std::span<const double>, std::span<double>)>& f) {
  const std::size_t d = q.box.size();
  if (d == 0) throw InvalidArgument("quadrature box is empty");
  for (const auto& iv : q.box)
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo < iv.hi))
      throw InvalidArgument("quadrature box must be finite and nonempty");
  const auto& rule = gauss_legendre(q.nodes);
  const auto m = static_cast<std::size_t>(q.nodes);
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) total *= m;

  // values[c * total + node]
  std::vector<double> values(width * total);
  parallel_for(total, [&](std::size_t idx) {
    std::vector<double> x(d);
    std::vector<double> out(width, 0.0);
    double w = 1.0;
    std::size_t rest = idx;
    for (std::size_t k = d; k-- > 0;) {
      const std::size_t j = rest % m;
      rest /= m;
      const double half = 0.5 * (q.box[k].hi - q.box[k].lo);
      x[k] = q.box[k].lo + half * (rule.nodes[j] + 1.0);
      w *= half * rule.weights[j];
    }
    f(x, out);
    for (std::size_t c = 0; c < width; ++c) values[c * total + idx] = w * out[c];
  });
  std::vector<double> res(width);
  for (std::size_t c = 0; c < width; ++c)
    res[c] = pairwise_sum(std::span<const double>(values).subspan(c * total, total));
  return res;
}

double integrate(const QuadratureSpec& q, const std::function<double(std::span<const double>)>& f) {
  return integrate(q, 1, [&](std::span<const double> x, std::span<double> out) { out[0] = f(x); })[0];
}

}  // namespace gradedgeo
