#include "gradedgeo/local.hpp"

#include <cmath>
#include <sstream>

#include "gradedgeo/error.hpp"

namespace gradedgeo::local {

namespace {

std::size_t idx2(int n, int i, int j) { return static_cast<std::size_t>(i * n + j); }
std::size_t idx3(int n, int i, int j, int k) { return static_cast<std::size_t>((i * n + j) * n + k); }
std::size_t idx4(int n, int i, int j, int k, int l) {
  return static_cast<std::size_t>(((i * n + j) * n + k) * n + l);
}

Jet zero_like(const Jet& j, int order) { return Jet::constant(j.nvars(), order, 0.0); }

std::string point_text(std::span<const double> p) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ')';
  return os.str();
}

}  // namespace

JetArray invert(const JetArray& a, int n, double* det) {
  JetArray m = a;
  JetArray inv(static_cast<std::size_t>(n * n));
  const int nv = a.front().nvars();
  const int order = a.front().order();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[idx2(n, i, j)] = Jet::constant(nv, order, i == j ? 1.0 : 0.0);

  double d = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m[idx2(n, r, col)].value()) > std::abs(m[idx2(n, pivot, col)].value())) pivot = r;
    if (m[idx2(n, pivot, col)].value() == 0.0) {
      if (det) *det = 0.0;
      throw DegenerateMetricError("singular matrix");
    }
    if (pivot != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(m[idx2(n, col, c)], m[idx2(n, pivot, c)]);
        std::swap(inv[idx2(n, col, c)], inv[idx2(n, pivot, c)]);
      }
      d = -d;
    }
    d *= m[idx2(n, col, col)].value();
    const Jet rinv = reciprocal(m[idx2(n, col, col)]);
    for (int c = 0; c < n; ++c) {
      m[idx2(n, col, c)] = m[idx2(n, col, c)] * rinv;
      inv[idx2(n, col, c)] = inv[idx2(n, col, c)] * rinv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Jet f = m[idx2(n, r, col)];
      if (f.value() == 0.0 && f.order() == 0) continue;
      for (int c = 0; c < n; ++c) {
        m[idx2(n, r, c)] -= f * m[idx2(n, col, c)];
        inv[idx2(n, r, c)] -= f * inv[idx2(n, col, c)];
      }
    }
  }
  if (det) *det = d;
  return inv;
}

MetricJets metric_jets(const MetricSpec& m, std::span<const double> p, int order) {
  const int n = m.dim();
  MetricJets out;
  out.dim = n;
  out.g.resize(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Jet v = eval_jet(m.component(i, j), p, order);
      out.g[idx2(n, j, i)] = v;
      out.g[idx2(n, i, j)] = std::move(v);
    }
  }
  try {
    out.ginv = invert(out.g, n, &out.det);
  } catch (const DegenerateMetricError&) {
    throw DegenerateMetricError("degenerate metric at " + point_text(p) + ": det g = 0");
  }
  if (!(std::abs(out.det) >= kDegeneracyThreshold)) {
    std::ostringstream os;
    os << "degenerate metric at " << point_text(p) << ": |det g| = " << std::abs(out.det)
       << " < " << kDegeneracyThreshold;
    throw DegenerateMetricError(os.str());
  }
  return out;
}

JetArray christoffel(const MetricJets& m) {
  const int n = m.dim;
  // dg[l][i][j] = d_l g_ij
  JetArray dg(static_cast<std::size_t>(n * n * n));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet d = m.g[idx2(n, i, j)].derivative(l);
        dg[idx3(n, l, j, i)] = d;
        dg[idx3(n, l, i, j)] = std::move(d);
      }
  // first kind: G_lij = (d_j g_il + d_i g_jl - d_l g_ij) / 2
  JetArray first(static_cast<std::size_t>(n * n * n));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet v = 0.5 * (dg[idx3(n, j, i, l)] + dg[idx3(n, i, j, l)] - dg[idx3(n, l, i, j)]);
        first[idx3(n, l, j, i)] = v;
        first[idx3(n, l, i, j)] = std::move(v);
      }
  JetArray gamma(static_cast<std::size_t>(n * n * n));
  const int order = first.front().order();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Jet s = zero_like(first.front(), order);
        for (int l = 0; l < n; ++l) s += m.ginv[idx2(n, k, l)] * first[idx3(n, l, i, j)];
        gamma[idx3(n, k, j, i)] = s;
        gamma[idx3(n, k, i, j)] = std::move(s);
      }
  return gamma;
}

JetArray riemann(const JetArray& gamma, int n) {
  // dgam[i][l][j][k] = d_i G^l_jk
  JetArray dgam(static_cast<std::size_t>(n * n * n * n));
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j)
        for (int k = j; k < n; ++k) {
          Jet d = gamma[idx3(n, l, j, k)].derivative(i);
          dgam[idx4(n, i, l, k, j)] = d;
          dgam[idx4(n, i, l, j, k)] = std::move(d);
        }
  const int order = dgam.front().order();
  JetArray r(static_cast<std::size_t>(n * n * n * n));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          if (j < i) {
            r[idx4(n, l, i, j, k)] = -r[idx4(n, l, j, i, k)];
            continue;
          }
          if (i == j) {
            r[idx4(n, l, i, j, k)] = zero_like(dgam.front(), order);
            continue;
          }
          Jet s = dgam[idx4(n, i, l, j, k)] - dgam[idx4(n, j, l, i, k)];
          for (int m = 0; m < n; ++m) {
            s += gamma[idx3(n, l, i, m)] * gamma[idx3(n, m, j, k)];
            s -= gamma[idx3(n, l, j, m)] * gamma[idx3(n, m, i, k)];
          }
          r[idx4(n, l, i, j, k)] = std::move(s);
        }
  return r;
}

JetArray ricci(const JetArray& riem, int n) {
  JetArray ric(static_cast<std::size_t>(n * n));
  const int order = riem.front().order();
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      Jet s = zero_like(riem.front(), order);
      for (int l = 0; l < n; ++l) s += riem[idx4(n, l, l, j, k)];
      ric[idx2(n, j, k)] = std::move(s);
    }
  return ric;
}

Jet trace(const JetArray& ginv, const JetArray& t, int n) {
  Jet s = zero_like(t.front(), std::min(t.front().order(), ginv.front().order()));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += ginv[idx2(n, i, j)] * t[idx2(n, i, j)];
  return s;
}

Jet inner2(const JetArray& ginv, const JetArray& s, const JetArray& t, int n) {
  // raise both indices of s, then contract with t
  JetArray up(static_cast<std::size_t>(n * n));
  for (int m = 0; m < n; ++m)
    for (int q = 0; q < n; ++q) {
      Jet acc = zero_like(s.front(), std::min(s.front().order(), ginv.front().order()));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          acc += ginv[idx2(n, m, i)] * ginv[idx2(n, q, j)] * s[idx2(n, i, j)];
      up[idx2(n, m, q)] = std::move(acc);
    }
  Jet out = zero_like(up.front(), std::min(up.front().order(), t.front().order()));
  for (std::size_t k = 0; k < up.size(); ++k) out += up[k] * t[k];
  return out;
}

JetArray differential(const Jet& f, int n) {
  JetArray d(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = f.derivative(i);
  return d;
}

JetArray raise(const JetArray& ginv, const JetArray& w, int n) {
  JetArray v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Jet s = zero_like(w.front(), std::min(w.front().order(), ginv.front().order()));
    for (int j = 0; j < n; ++j) s += ginv[idx2(n, i, j)] * w[static_cast<std::size_t>(j)];
    v[static_cast<std::size_t>(i)] = std::move(s);
  }
  return v;
}

JetArray lower(const JetArray& g, const JetArray& v, int n) { return raise(g, v, n); }

JetArray hessian(const JetArray& gamma, const Jet& f, int n) {
  JetArray df = differential(f, n);
  JetArray h(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Jet s = df[static_cast<std::size_t>(j)].derivative(i);
      for (int k = 0; k < n; ++k) s -= gamma[idx3(n, k, i, j)] * df[static_cast<std::size_t>(k)];
      h[idx2(n, j, i)] = s;
      h[idx2(n, i, j)] = std::move(s);
    }
  return h;
}

JetArray covariant_derivative_covector(const JetArray& gamma, const JetArray& w, int n) {
  JetArray out(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet s = w[static_cast<std::size_t>(j)].derivative(i);
      for (int k = 0; k < n; ++k) s -= gamma[idx3(n, k, i, j)] * w[static_cast<std::size_t>(k)];
      out[idx2(n, i, j)] = std::move(s);
    }
  return out;
}

JetArray covariant_derivative_vector(const JetArray& gamma, const JetArray& v, int n) {
  JetArray out(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      Jet s = v[static_cast<std::size_t>(k)].derivative(i);
      for (int j = 0; j < n; ++j) s += gamma[idx3(n, k, i, j)] * v[static_cast<std::size_t>(j)];
      out[idx2(n, i, k)] = std::move(s);
    }
  return out;
}

Jet divergence_vector(const JetArray& gamma, const JetArray& v, int n) {
  JetArray cov = covariant_derivative_vector(gamma, v, n);
  Jet s = cov[0];
  for (int i = 1; i < n; ++i) s += cov[idx2(n, i, i)];
  return s;
}

JetArray divergence_sym2(const JetArray& ginv, const JetArray& gamma, const JetArray& s, int n) {
  // (nabla_i S)_kj = d_i S_kj - G^l_ik S_lj - G^l_ij S_kl
  JetArray out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Jet acc;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        Jet cov = s[idx2(n, k, j)].derivative(i);
        for (int l = 0; l < n; ++l) {
          cov -= gamma[idx3(n, l, i, k)] * s[idx2(n, l, j)];
          cov -= gamma[idx3(n, l, i, j)] * s[idx2(n, k, l)];
        }
        Jet term = ginv[idx2(n, i, k)] * cov;
        if (acc.empty()) {
          acc = std::move(term);
        } else {
          acc += term;
        }
      }
    out[static_cast<std::size_t>(j)] = std::move(acc);
  }
  return out;
}

JetArray outer(const JetArray& a, const JetArray& b) {
  JetArray out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(x * y);
  return out;
}

Jet dot(const JetArray& g, const JetArray& u, const JetArray& v, int n) {
  Jet s;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet term = g[idx2(n, i, j)] * u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
      if (s.empty()) {
        s = std::move(term);
      } else {
        s += term;
      }
    }
  return s;
}

TensorValue values(const JetArray& a, std::vector<Variance> valence, int n,
                   std::span<const double> p) {
  std::vector<double> comps(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) comps[i] = a[i].value();
  return TensorValue(std::move(valence), n, std::move(comps), std::vector<double>(p.begin(), p.end()));
}

}  // namespace gradedgeo::local
