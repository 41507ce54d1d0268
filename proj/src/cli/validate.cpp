#include "gradedgeo/cli/validate.hpp"

#include <algorithm>
#include <cmath>

#include "gradedgeo/graded.hpp"
#include "gradedgeo/local.hpp"
#include "gradedgeo/random_fields.hpp"
#include "gradedgeo/riemann.hpp"

namespace gradedgeo::cli {

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); }

double rel(const TensorValue& a, const TensorValue& b) {
  return max_abs_diff(a, b) / std::max(1.0, a.max_abs());
}

struct Tracker {
  CheckResult r;
  Tracker(std::string name, double tol) {
    r.name = std::move(name);
    r.tol = tol;
  }
  void add(double err) {
    r.max_error = std::max(r.max_error, err);
    ++r.samples;
  }
  CheckResult done() {
    r.pass = r.max_error <= r.tol;
    return r;
  }
};

// (nabla_k g)_ij from the Christoffels.
double metric_compatibility_error(const MetricSpec& m, std::span<const double> p) {
  const int n = m.dim();
  const auto mj = local::metric_jets(m, p, 1);
  const auto gam = local::christoffel(mj);
  double err = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = mj.g[static_cast<std::size_t>(i * n + j)].d(k);
        for (int l = 0; l < n; ++l) {
          v -= gam[static_cast<std::size_t>((l * n + k) * n + i)].value() * mj.g[static_cast<std::size_t>(l * n + j)].value();
          v -= gam[static_cast<std::size_t>((l * n + k) * n + j)].value() * mj.g[static_cast<std::size_t>(i * n + l)].value();
        }
        err = std::max(err, std::abs(v));
      }
  return err;
}

double bianchi_error(const MetricSpec& m, std::span<const double> p) {
  const int n = m.dim();
  const auto r = riemann_at(m, p);
  double err = 0.0;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          err = std::max(err, std::abs(r[{l, i, j, k}] + r[{l, j, i, k}]));
          err = std::max(err, std::abs(r[{l, i, j, k}] + r[{l, j, k, i}] + r[{l, k, i, j}]));
        }
  return err;
}

}  // namespace

bool ValidationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

ValidationReport run_validation(const GradedMetric& gm, const std::vector<std::vector<double>>& points,
                                std::uint64_t seed, double residual_tol, int field_samples) {
  const ChartPtr chart = gm.chart_ptr();
  const int n = gm.dim();
  const auto conn = GradedConnection::levicivita_triple(gm);
  Rng rng(seed);

  Tracker koszul("koszul_vs_triple", 1e-9), compat("graded_metric_compatibility", 1e-9),
      torsion("graded_torsion", 1e-10), curv("graded_curvature_vs_koszul", 1e-9),
      even_odd("curvature_even_even_odd_block", 1e-12), ricci("graded_ricci_vs_frame_sum", 1e-9),
      scal_same("graded_scalar_identity", 1e-12), scal_frame("graded_scalar_vs_frame_sum", 1e-9),
      trace43("hessian_trace_identity", 1e-12), cons_id("conservation_identity", 1e-9),
      cons("conservation_harmonic", 1e-9), eq27("equivalence_27_28_vs_29_30", 0.0),
      eq44("equivalence_44_vs_29_30", 0.0), mcompat("metric_compatibility", 1e-10),
      bianchi("riemann_symmetries", 1e-10);

  bool harmonic = true;
  std::vector<double> cons_norms;
  for (const auto& pv : points) {
    const std::span<const double> p(pv);
    for (int s = 0; s < field_samples; ++s) {
      const auto x = random_homogeneous_field(chart, rng);
      const auto y = random_homogeneous_field(chart, rng);
      const auto z = random_homogeneous_field(chart, rng);
      const auto nxy = graded_apply(conn, x, y, p);
      const auto nxz = graded_apply(conn, x, z, p);
      auto pair_at = [&](const GradedVectorValue& a, const GradedVectorField& b) {
        GradedVectorField av{{}, ScalarField::constant(chart, a.odd)};
        for (double c : a.even) av.even.push_back(ScalarField::constant(chart, c));
        return pairing(gm, av, b)(p);
      };
      koszul.add(rel(koszul_eval(gm, x, y, z, p), pair_at(nxy, z)));
      // rho(X)<Y, Z> against <nabla_X Y, Z> + <Y, nabla_X Z>
      const Jet yz = eval_jet(pairing(gm, y, z), p, 1);
      double lhs = 0.0;
      for (int i = 0; i < n; ++i) lhs += x.even[static_cast<std::size_t>(i)](p) * yz.d(i);
      compat.add(rel(lhs, pair_at(nxy, z) + pair_at(nxz, y)));
      const auto t = graded_torsion(conn, x, y, p);
      torsion.add(max_abs_diff(t, GradedVectorValue{std::vector<double>(static_cast<std::size_t>(n), 0.0), 0.0}));
    }

    const auto closed = graded_curvature_at(gm, p);
    curv.add(rel(closed.full, koszul_curvature_at(gm, p).full));
    for (double v : koszul_curvature_at(gm, p).block(CurvatureBlock::EvenEvenOdd)) even_odd.add(std::abs(v));

    const auto gric = graded_ricci_at(gm, p);
    ricci.add(max_abs_diff(gric, graded_ricci_frame_at(gm, p)) / std::max(1.0, max_abs(gric)));
    const double gs = graded_scalar_at(gm, p);
    scal_same.add(rel(gs, graded_trace(gm, gric, p)));
    scal_frame.add(rel(gs, graded_scalar_frame_at(gm, p)));
    trace43.add(rel(tr_tilde_T_at(gm, p), graded_trace(gm, graded_hessian_at(gm, gm.theta(), p), p)));

    const auto res = conservation_residual_at(gm, p);
    const double lap = laplacian_at(gm.g(), gm.theta(), p);
    const Jet th = eval_jet(gm.theta(), p, 1);
    double id_err = 0.0;
    for (int i = 0; i < n; ++i) id_err = std::max(id_err, std::abs(res[{i}] - 2.0 * lap * th.d(i)));
    cons_id.add(id_err / std::max(1.0, res.max_abs()));
    if (std::abs(lap) > 1e-12) harmonic = false;
    cons_norms.push_back(res.max_abs());

    const auto fr = field_residuals_at(gm, p);
    const bool ok29 = std::max(fr.e29, fr.e28) <= residual_tol;
    if (n >= 3) eq27.add((std::max(fr.e27, fr.e28) <= residual_tol) == ok29 ? 0.0 : 1.0);
    eq44.add((fr.e44 <= residual_tol) == ok29 ? 0.0 : 1.0);

    mcompat.add(metric_compatibility_error(gm.g(), p));
    bianchi.add(bianchi_error(gm.g(), p));
  }
  if (harmonic) {
    for (double v : cons_norms) cons.add(v);
  } else {
    cons.r.note = "theta is not harmonic at the sampled points; see conservation_identity";
  }
  if (n < 3) eq27.r.note = "the equivalence needs dim >= 3";

  ValidationReport rep;
  for (Tracker* t : {&koszul, &compat, &torsion, &curv, &even_odd, &ricci, &scal_same, &scal_frame, &trace43,
                     &cons_id, &cons, &eq27, &eq44, &mcompat, &bianchi})
    rep.checks.push_back(t->done());
  return rep;
}

RandomGeometry random_geometry(std::uint64_t seed, int count) {
  Rng rng(seed);
  const ChartPtr chart = make_chart({"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}});
  RandomGeometry g{random_graded_metric(chart, rng, {-1, 1, 1}, 0.1), {}};
  for (int i = 0; i < count; ++i) g.points.push_back(random_point(*chart, rng, 0.05));
  return g;
}

}  // namespace gradedgeo::cli
