#include "gradedgeo/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "gradedgeo/action.hpp"
#include "gradedgeo/cli/validate.hpp"
#include "gradedgeo/cosmo.hpp"
#include "gradedgeo/quadrature.hpp"
#include "gradedgeo/riemann.hpp"

namespace gradedgeo::cli {

using nlohmann::json;

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string resolve_format(const RunConfig* cfg, const CommandOptions& opt, const char* fallback) {
  std::string f = !opt.format.empty() ? opt.format : (cfg && !cfg->format.empty() ? cfg->format : fallback);
  if (f != "json" && f != "csv") throw ConfigError("format", "must be json or csv");
  return f;
}

RunConfig apply_overrides(RunConfig cfg, const CommandOptions& opt) {
  if (opt.tol) {
    if (!(*opt.tol > 0.0)) throw ConfigError("tol", "must be positive");
    cfg.residual_tol = *opt.tol;
  }
  if (opt.grid) {
    cfg.grid_counts = *opt.grid;
    cfg.grid_points.clear();
    if (cfg.grid_counts.size() != cfg.coords.size()) throw ConfigError("grid", "need one count per coordinate");
    for (int c : cfg.grid_counts)
      if (c < 1) throw ConfigError("grid", "counts must be positive");
  }
  return cfg;
}

std::string point_text(const std::vector<double>& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + fmt(p[i]);
  return s + ")";
}

// Evaluates fn at every point in grid order; domain errors name the point.
template <class T, class F>
std::vector<T> sweep(const std::vector<std::vector<double>>& pts, F fn) {
  std::vector<std::optional<T>> tmp(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    try {
      tmp[i] = fn(pts[i]);
    } catch (const DegenerateMetricError&) {
      throw;
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " at point " + point_text(pts[i]));
    }
  });
  std::vector<T> out;
  for (auto& t : tmp) out.push_back(std::move(*t));
  return out;
}

json graded_json(const GradedTensorValue& t) {
  return {{"even", to_json(t.even)}, {"cross", to_json(t.cross)}, {"odd", t.odd}};
}

}  // namespace

json to_json(const TensorValue& t) {
  json valence = json::array();
  for (auto v : t.valence()) valence.push_back(v == Variance::Covariant ? "co" : "contra");
  return {{"valence", valence},
          {"shape", std::vector<int>(static_cast<std::size_t>(t.rank()), t.dim())},
          {"components", std::vector<double>(t.components().begin(), t.components().end())},
          {"base_point", t.base_point()}};
}

json to_json(const FieldEquationReport& r) {
  return {{"point", r.point},
          {"e27", r.e27},
          {"e28", r.e28},
          {"e29", r.e29},
          {"e44", r.e44},
          {"e44_blocks", {{"even", r.e44_even}, {"cross", r.e44_cross}, {"odd", r.e44_odd}}},
          {"scalar_curvature", r.scalar_curvature},
          {"graded_scalar", r.graded_scalar}};
}

json provenance(const RunConfig* cfg, const std::string& command) {
  json p = {{"engine_version", kEngineVersion}, {"command", command}};
  p["config_hash"] = cfg ? json(config_hash(*cfg)) : json(nullptr);
  return p;
}

int cmd_report(const RunConfig& cfg0, const CommandOptions& opt, std::ostream& out) {
  const RunConfig cfg = apply_overrides(cfg0, opt);
  const std::string format = resolve_format(&cfg, opt, "json");
  const GradedMetric gm = build_graded_metric(cfg);
  const auto pts = grid_points(cfg);
  const int n = gm.dim();

  struct Row {
    TensorValue g, gamma, ric, tilde;
    double R, tr_tilde, gscalar;
    GradedTensorValue gric;
  };
  const auto rows = sweep<Row>(pts, [&](const std::vector<double>& p) {
    return Row{metric_at(gm.g(), p).g, christoffel_at(gm.g(), p), ricci_at(gm.g(), p), tilde_T_at(gm, p),
               scalar_curvature_at(gm.g(), p), tr_tilde_T_at(gm, p), graded_scalar_at(gm, p),
               graded_ricci_at(gm, p)};
  });

  if (format == "json") {
    json recs = json::array();
    for (const auto& r : rows)
      recs.push_back({{"point", r.g.base_point()},
                      {"metric", to_json(r.g)},
                      {"christoffel", to_json(r.gamma)},
                      {"ricci", to_json(r.ric)},
                      {"scalar_curvature", r.R},
                      {"tilde_T", to_json(r.tilde)},
                      {"tr_tilde_T", r.tr_tilde},
                      {"graded_ricci", graded_json(r.gric)},
                      {"graded_scalar", r.gscalar}});
    out << json{{"provenance", provenance(&cfg, "report")}, {"points", recs}}.dump(2) << "\n";
  } else {
    for (const auto& c : cfg.coords) out << c << ",";
    out << "scalar_curvature,tr_tilde_T,graded_ricci_odd,graded_scalar";
    auto pairs = [&](const char* prefix) {
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) out << "," << prefix << "_" << i << "_" << j;
    };
    pairs("g");
    pairs("ric");
    pairs("tilde_T");
    pairs("graded_ricci_even");
    out << "\n";
    for (const auto& r : rows) {
      for (double x : r.g.base_point()) out << fmt(x) << ",";
      out << fmt(r.R) << "," << fmt(r.tr_tilde) << "," << fmt(r.gric.odd) << "," << fmt(r.gscalar);
      for (const TensorValue* t : {&r.g, &r.ric, &r.tilde, &r.gric.even})
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j) out << "," << fmt((*t)[{i, j}]);
      out << "\n";
    }
  }
  return kExitPass;
}

int cmd_residuals(const RunConfig& cfg0, const CommandOptions& opt, std::ostream& out) {
  const RunConfig cfg = apply_overrides(cfg0, opt);
  const std::string format = resolve_format(&cfg, opt, "json");
  const GradedMetric gm = build_graded_metric(cfg);
  const auto pts = grid_points(cfg);
  const auto recs = sweep<FieldEquationReport>(pts, [&](const std::vector<double>& p) { return field_residuals_at(gm, p); });

  double m27 = 0, m28 = 0, m29 = 0, m44 = 0;
  for (const auto& r : recs) {
    m27 = std::max(m27, r.e27);
    m28 = std::max(m28, r.e28);
    m29 = std::max(m29, r.e29);
    m44 = std::max(m44, r.e44);
  }
  const bool pass = std::max({m27, m28, m29, m44}) <= cfg.residual_tol;

  if (format == "json") {
    json arr = json::array();
    for (const auto& r : recs) arr.push_back(to_json(r));
    json summary = {{"max_e27", m27}, {"max_e28", m28},          {"max_e29", m29},
                    {"max_e44", m44}, {"residual_tol", cfg.residual_tol}, {"pass", pass}};
    out << json{{"provenance", provenance(&cfg, "residuals")}, {"records", arr}, {"summary", summary}}.dump(2)
        << "\n";
  } else {
    for (const auto& c : cfg.coords) out << c << ",";
    out << "e27,e28,e29,e44,scalar_curvature,graded_scalar\n";
    for (const auto& r : recs) {
      for (double x : r.point) out << fmt(x) << ",";
      out << fmt(r.e27) << "," << fmt(r.e28) << "," << fmt(r.e29) << "," << fmt(r.e44) << ","
          << fmt(r.scalar_curvature) << "," << fmt(r.graded_scalar) << "\n";
    }
  }
  return pass ? kExitPass : kExitResidualFailure;
}

int cmd_validate(const RunConfig* cfg0, const CommandOptions& opt, std::ostream& out) {
  std::optional<RunConfig> cfg;
  if (cfg0) cfg = apply_overrides(*cfg0, opt);
  const std::string format = resolve_format(cfg ? &*cfg : nullptr, opt, "json");
  ValidationReport rep;
  if (cfg) {
    const GradedMetric gm = build_graded_metric(*cfg);
    rep = run_validation(gm, grid_points(*cfg), opt.seed, cfg->residual_tol);
  } else {
    const auto geo = random_geometry(opt.seed);
    rep = run_validation(geo.gm, geo.points, opt.seed, opt.tol.value_or(1e-9));
  }
  if (format == "json") {
    json checks = json::array();
    for (const auto& c : rep.checks)
      checks.push_back({{"name", c.name},
                        {"max_error", c.max_error},
                        {"tol", c.tol},
                        {"pass", c.pass},
                        {"samples", c.samples},
                        {"note", c.note}});
    json prov = provenance(cfg ? &*cfg : nullptr, "validate");
    prov["seed"] = opt.seed;
    out << json{{"provenance", prov}, {"checks", checks}, {"pass", rep.pass()}}.dump(2) << "\n";
  } else {
    out << "name,max_error,tol,pass,samples\n";
    for (const auto& c : rep.checks)
      out << c.name << "," << fmt(c.max_error) << "," << fmt(c.tol) << "," << (c.pass ? "true" : "false") << ","
          << c.samples << "\n";
  }
  return rep.pass() ? kExitPass : kExitResidualFailure;
}

int cmd_cosmo(const RunConfig* cfg, const CommandOptions& opt, std::ostream& out) {
  const std::string format = resolve_format(cfg, opt, "csv");
  const CosmoConfig c = cfg && cfg->cosmo ? *cfg->cosmo : CosmoConfig{};
  if (c.n < 2) throw ConfigError("cosmo.n", "must be >= 2");
  if (!(c.t0 > 0.0)) throw ConfigError("cosmo.t0", "must be positive");
  if (!(c.step > 0.0)) throw ConfigError("cosmo.step", "must be positive");
  if (c.branch != 1 && c.branch != -1) throw ConfigError("cosmo.branch", "must be 1 or -1");
  const EdsSolution eds = eds_solution(c.n);
  const double cc = c.c.value_or(eds.c);
  OdeState s0{c.t0, c.a0.value_or(std::log(c.t0) / c.n), c.a_dot0.value_or(1.0 / (c.n * c.t0)),
              c.theta0.value_or(c.branch * eds.c * std::log(c.t0))};
  const auto traj = integrate_scale_factor(s0, c.n, cc, c.t_end, c.step, c.branch);
  const auto rows = trajectory_rows(traj, c.n, cc, c.lambda);
  double max42 = 0.0;
  for (const auto& r : rows) max42 = std::max(max42, std::abs(r.eq42_residual));
  const double tol = opt.tol.value_or(cfg ? cfg->residual_tol : 1e-9);

  if (format == "csv") {
    write_trajectory_csv(out, rows);
  } else {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"t", r.state.t},
                     {"a", r.state.a},
                     {"a_dot", r.state.a_dot},
                     {"theta", r.state.theta},
                     {"eq41_residual", r.eq41_residual},
                     {"eq42_residual", r.eq42_residual}});
    json summary = {{"n", c.n}, {"c", cc}, {"lambda", c.lambda}, {"max_abs_eq42_residual", max42},
                    {"residual_tol", tol}, {"pass", max42 <= tol}};
    out << json{{"provenance", provenance(cfg, "cosmo")}, {"trajectory", arr}, {"summary", summary}}.dump(2)
        << "\n";
  }
  return max42 <= tol ? kExitPass : kExitResidualFailure;
}

int cmd_action(const RunConfig& cfg0, const CommandOptions& opt, std::ostream& out) {
  const RunConfig cfg = apply_overrides(cfg0, opt);
  const std::string format = resolve_format(&cfg, opt, "json");
  const GradedMetric gm = build_graded_metric(cfg);
  const ChartPtr chart = gm.chart_ptr();
  VariationResult r;
  std::optional<double> action;
  const bool bounded = std::all_of(chart->box().begin(), chart->box().end(), [](const Interval& iv) {
    return std::isfinite(iv.lo) && std::isfinite(iv.hi);
  });
  const QuadratureSpec quad{chart->box(), cfg.quad_nodes};
  if (bounded) action = hilbert_action(gm, quad);
  if (cfg.variation) {
    if (!bounded) throw ConfigError("chart.box", "the action needs a finite box");
    r = action_first_variation(gm, build_variation(cfg, chart), quad);
  }
  const double diff = std::abs(r.closed_form - r.finite_difference);
  // relative to the closed form, floored by the action scale so critical metrics are judged by their terms
  const bool pass = diff <= cfg.fd_tol * std::max(std::abs(r.closed_form), r.scale);
  // a critical point of the action: the closed form vanishes relative to its terms
  const bool critical = std::abs(r.closed_form) <= kCriticalRatio * r.scale;

  if (format == "json") {
    json rec = {{"closed_form", r.closed_form},
                {"finite_difference", r.finite_difference},
                {"scale", r.scale},
                {"abs_diff", diff},
                {"fd_tol", cfg.fd_tol},
                {"critical", critical},
                {"pass", pass}};
    rec["action"] = action ? json(*action) : json(nullptr);
    out << json{{"provenance", provenance(&cfg, "action")}, {"variation", rec}}.dump(2) << "\n";
  } else {
    out << "action,closed_form,finite_difference,scale,abs_diff,critical,pass\n"
        << (action ? fmt(*action) : "") << "," << fmt(r.closed_form) << "," << fmt(r.finite_difference) << ","
        << fmt(r.scale) << "," << fmt(diff) << "," << (critical ? "true" : "false") << ","
        << (pass ? "true" : "false") << "\n";
  }
  return pass ? kExitPass : kExitResidualFailure;
}

int run_guarded(const std::function<int()>& fn, std::ostream& err) {
  auto report = [&](const char* kind, const std::string& msg) {
    err << json{{"error", kind}, {"message", msg}}.dump() << "\n";
  };
  try {
    return fn();
  } catch (const ConfigError& e) {
    report("config", e.what());
    return kExitConfigError;
  } catch (const ParseError& e) {
    report("config", e.what());
    return kExitConfigError;
  } catch (const InvalidArgument& e) {
    report("config", e.what());
    return kExitConfigError;
  } catch (const DegenerateMetricError& e) {
    report("degenerate_metric", e.what());
    return kExitDomainError;
  } catch (const DomainError& e) {
    report("domain", e.what());
    return kExitDomainError;
  } catch (const std::exception& e) {
    report("internal", e.what());
    return kExitDomainError;
  }
}

}  // namespace gradedgeo::cli
