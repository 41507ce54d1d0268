#include "gradedgeo/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "gradedgeo/expr.hpp"

namespace gradedgeo::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const char* b = v.data();
  const char* e = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(b, e, x);
  if (ec != std::errc() || ptr != e || v.empty()) throw ConfigError(key, "expected a number, got '" + v + "'");
  return x;
}

int parse_int(const std::string& key, const std::string& v) {
  int x = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw ConfigError(key, "expected an integer, got '" + v + "'");
  return x;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) out.push_back(parse_double(key, item));
  return out;
}

Interval parse_interval(const std::string& key, const std::string& v) {
  const auto xs = parse_list(key, v);
  if (xs.size() != 2) throw ConfigError(key, "expected 'lo, hi'");
  if (!(xs[0] <= xs[1])) throw ConfigError(key, "empty interval");
  return {xs[0], xs[1]};
}

// "g_1_0" -> "g_0_1"; checks indices against dim when known.
std::string tensor_key(const std::string& path, const std::string& key, char prefix) {
  const auto parts = split(key, '_');
  if (parts.size() != 3 || parts[0] != std::string(1, prefix))
    throw ConfigError(path, "expected a key of the form " + std::string(1, prefix) + "_i_j");
  int i = parse_int(path, parts[1]);
  int j = parse_int(path, parts[2]);
  if (i < 0 || j < 0) throw ConfigError(path, "negative index");
  if (i > j) std::swap(i, j);
  return std::string(1, prefix) + "_" + std::to_string(i) + "_" + std::to_string(j);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + fmt(xs[i]);
  return s;
}

template <class T>
void put_unique(std::map<std::string, T>& m, const std::string& key, T value, const std::string& path) {
  if (!m.emplace(key, std::move(value)).second) throw ConfigError(path, "duplicate entry");
}

ScalarField parse_expr(const std::string& path, const std::string& src, const ChartPtr& chart,
                       const std::map<std::string, double>& params) {
  try {
    return parse_field(src, chart, params);
  } catch (const ParseError& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::string section;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno), "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      static const std::set<std::string> known{"chart", "params", "metric", "theta", "grid", "tolerances",
                                               "quadrature", "variation", "cosmo", "output"};
      if (!known.count(section)) throw ConfigError(section, "unknown section");
      if (section == "variation" && !cfg.variation) cfg.variation.emplace();
      if (section == "cosmo" && !cfg.cosmo) cfg.cosmo.emplace();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
    if (section.empty()) throw ConfigError("line " + std::to_string(lineno), "key outside of any section");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string val = trim(std::string_view(line).substr(eq + 1));
    const std::string path = section + "." + key;
    if (key.empty()) throw ConfigError(path, "empty key");
    if (!seen.insert(path).second) throw ConfigError(path, "duplicate key");

    if (section == "chart") {
      if (key == "coords") {
        cfg.coords = split(val, ',');
      } else if (key.rfind("box.", 0) == 0) {
        put_unique(cfg.box, key.substr(4), parse_interval(path, val), path);
      } else {
        throw ConfigError(path, "unknown key");
      }
    } else if (section == "params") {
      if (!is_valid_identifier(key) || is_reserved_name(key)) throw ConfigError(path, "invalid parameter name");
      cfg.params[key] = parse_double(path, val);
    } else if (section == "metric") {
      put_unique(cfg.metric, tensor_key(path, key, 'g'), val, path);
    } else if (section == "theta") {
      if (key != "expr") throw ConfigError(path, "unknown key");
      cfg.theta = val;
    } else if (section == "grid") {
      if (key == "counts") {
        for (const auto& item : split(val, ',')) {
          const int c = parse_int(path, item);
          if (c < 1) throw ConfigError(path, "grid counts must be positive");
          cfg.grid_counts.push_back(c);
        }
      } else if (key == "points") {
        for (const auto& pt : split(val, '|')) cfg.grid_points.push_back(parse_list(path, pt));
      } else {
        throw ConfigError(path, "unknown key");
      }
    } else if (section == "tolerances") {
      if (key == "residual_tol")
        cfg.residual_tol = parse_double(path, val);
      else if (key == "fd_tol")
        cfg.fd_tol = parse_double(path, val);
      else
        throw ConfigError(path, "unknown key");
      if (!(parse_double(path, val) > 0.0)) throw ConfigError(path, "tolerance must be positive");
    } else if (section == "quadrature") {
      if (key != "nodes") throw ConfigError(path, "unknown key");
      cfg.quad_nodes = parse_int(path, val);
      if (cfg.quad_nodes < 1) throw ConfigError(path, "need at least one node");
    } else if (section == "variation") {
      auto& v = *cfg.variation;
      if (key.rfind("support.", 0) == 0)
        put_unique(v.support, key.substr(8), parse_interval(path, val), path);
      else if (key == "h")
        v.h = val;
      else if (key.rfind("s_", 0) == 0)
        put_unique(v.s, tensor_key(path, key, 's'), val, path);
      else
        throw ConfigError(path, "unknown key");
    } else if (section == "cosmo") {
      auto& c = *cfg.cosmo;
      if (key == "n") c.n = parse_int(path, val);
      else if (key == "c") c.c = parse_double(path, val);
      else if (key == "lambda") c.lambda = parse_double(path, val);
      else if (key == "t0") c.t0 = parse_double(path, val);
      else if (key == "a0") c.a0 = parse_double(path, val);
      else if (key == "a_dot0") c.a_dot0 = parse_double(path, val);
      else if (key == "theta0") c.theta0 = parse_double(path, val);
      else if (key == "t_end") c.t_end = parse_double(path, val);
      else if (key == "step") c.step = parse_double(path, val);
      else if (key == "branch") c.branch = parse_int(path, val);
      else throw ConfigError(path, "unknown key");
    } else if (section == "output") {
      if (key == "path") {
        cfg.out_path = val;
      } else if (key == "format") {
        if (val != "json" && val != "csv") throw ConfigError(path, "format must be json or csv");
        cfg.format = val;
      } else {
        throw ConfigError(path, "unknown key");
      }
    }
  }

  // cross-field checks
  const std::set<std::string> names(cfg.coords.begin(), cfg.coords.end());
  for (const auto& [name, iv] : cfg.box)
    if (!names.count(name)) throw ConfigError("chart.box." + name, "not a declared coordinate");
  const int n = static_cast<int>(cfg.coords.size());
  for (const auto& [k, v] : cfg.metric) {
    const auto parts = split(k, '_');
    if (std::stoi(parts[2]) >= n) throw ConfigError("metric." + k, "index out of range");
  }
  if (!cfg.grid_counts.empty() && static_cast<int>(cfg.grid_counts.size()) != n)
    throw ConfigError("grid.counts", "need one count per coordinate");
  for (const auto& p : cfg.grid_points)
    if (static_cast<int>(p.size()) != n) throw ConfigError("grid.points", "point has the wrong dimension");
  if (cfg.variation) {
    for (const auto& [name, iv] : cfg.variation->support)
      if (!names.count(name)) throw ConfigError("variation.support." + name, "not a declared coordinate");
    for (const auto& [k, v] : cfg.variation->s) {
      const auto parts = split(k, '_');
      if (std::stoi(parts[2]) >= n) throw ConfigError("variation." + k, "index out of range");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "[chart]\n";
  // A cosmo-only config has no coordinates; an empty coords line would parse as one blank name.
  if (!cfg.coords.empty()) {
    os << "coords = ";
    for (std::size_t i = 0; i < cfg.coords.size(); ++i) os << (i ? ", " : "") << cfg.coords[i];
    os << "\n";
  }
  for (const auto& [name, iv] : cfg.box) os << "box." << name << " = " << fmt(iv.lo) << ", " << fmt(iv.hi) << "\n";
  if (!cfg.params.empty()) {
    os << "\n[params]\n";
    for (const auto& [k, v] : cfg.params) os << k << " = " << fmt(v) << "\n";
  }
  os << "\n[metric]\n";
  for (const auto& [k, v] : cfg.metric) os << k << " = " << v << "\n";
  os << "\n[theta]\nexpr = " << cfg.theta << "\n";
  if (!cfg.grid_counts.empty() || !cfg.grid_points.empty()) {
    os << "\n[grid]\n";
    if (!cfg.grid_counts.empty()) {
      os << "counts = ";
      for (std::size_t i = 0; i < cfg.grid_counts.size(); ++i) os << (i ? ", " : "") << cfg.grid_counts[i];
      os << "\n";
    }
    if (!cfg.grid_points.empty()) {
      os << "points = ";
      for (std::size_t i = 0; i < cfg.grid_points.size(); ++i) os << (i ? " | " : "") << join(cfg.grid_points[i]);
      os << "\n";
    }
  }
  os << "\n[tolerances]\nresidual_tol = " << fmt(cfg.residual_tol) << "\nfd_tol = " << fmt(cfg.fd_tol) << "\n";
  os << "\n[quadrature]\nnodes = " << cfg.quad_nodes << "\n";
  if (cfg.variation) {
    os << "\n[variation]\n";
    for (const auto& [name, iv] : cfg.variation->support)
      os << "support." << name << " = " << fmt(iv.lo) << ", " << fmt(iv.hi) << "\n";
    for (const auto& [k, v] : cfg.variation->s) os << k << " = " << v << "\n";
    os << "h = " << cfg.variation->h << "\n";
  }
  if (cfg.cosmo) {
    const auto& c = *cfg.cosmo;
    os << "\n[cosmo]\nn = " << c.n << "\n";
    if (c.c) os << "c = " << fmt(*c.c) << "\n";
    os << "lambda = " << fmt(c.lambda) << "\nt0 = " << fmt(c.t0) << "\n";
    if (c.a0) os << "a0 = " << fmt(*c.a0) << "\n";
    if (c.a_dot0) os << "a_dot0 = " << fmt(*c.a_dot0) << "\n";
    if (c.theta0) os << "theta0 = " << fmt(*c.theta0) << "\n";
    os << "t_end = " << fmt(c.t_end) << "\nstep = " << fmt(c.step) << "\nbranch = " << c.branch << "\n";
  }
  if (!cfg.out_path.empty() || !cfg.format.empty()) {
    os << "\n[output]\n";
    if (!cfg.out_path.empty()) os << "path = " << cfg.out_path << "\n";
    if (!cfg.format.empty()) os << "format = " << cfg.format << "\n";
  }
  return os.str();
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : serialize_config(cfg)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ChartPtr build_chart(const RunConfig& cfg) {
  if (cfg.coords.empty()) throw ConfigError("chart.coords", "missing");
  std::vector<Interval> box;
  for (const auto& name : cfg.coords) {
    auto it = cfg.box.find(name);
    box.push_back(it == cfg.box.end() ? Interval{-INFINITY, INFINITY} : it->second);
  }
  try {
    return make_chart(cfg.coords, std::move(box));
  } catch (const InvalidArgument& e) {
    throw ConfigError("chart", e.what());
  }
}

GradedMetric build_graded_metric(const RunConfig& cfg) {
  const ChartPtr chart = build_chart(cfg);
  const int n = chart->dim();
  std::vector<ScalarField> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const std::string key = "g_" + std::to_string(i) + "_" + std::to_string(j);
      auto it = cfg.metric.find(key);
      upper.push_back(it == cfg.metric.end() ? ScalarField::constant(chart, 0.0)
                                             : parse_expr("metric." + key, it->second, chart, cfg.params));
    }
  return GradedMetric(MetricSpec(chart, std::move(upper)), parse_expr("theta.expr", cfg.theta, chart, cfg.params));
}

VariationSpec build_variation(const RunConfig& cfg, const ChartPtr& chart) {
  if (!cfg.variation) return VariationSpec::zero(chart);
  const auto& v = *cfg.variation;
  const int n = chart->dim();
  std::vector<Interval> support;
  for (const auto& name : cfg.coords) {
    auto it = v.support.find(name);
    if (it == v.support.end()) throw ConfigError("variation.support." + name, "missing");
    support.push_back(it->second);
  }
  std::vector<ScalarField> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const std::string key = "s_" + std::to_string(i) + "_" + std::to_string(j);
      auto it = v.s.find(key);
      upper.push_back(it == v.s.end() ? ScalarField::constant(chart, 0.0)
                                      : parse_expr("variation." + key, it->second, chart, cfg.params));
    }
  try {
    return VariationSpec::bump(std::move(support), SymmetricField(chart, std::move(upper)),
                               parse_expr("variation.h", v.h, chart, cfg.params));
  } catch (const InvalidArgument& e) {
    throw ConfigError("variation", e.what());
  }
}

std::vector<std::vector<double>> grid_points(const RunConfig& cfg) {
  const ChartPtr chart = build_chart(cfg);
  const int n = chart->dim();
  std::vector<std::vector<double>> pts;
  if (!cfg.grid_points.empty()) {
    pts = cfg.grid_points;
  } else {
    std::vector<int> counts = cfg.grid_counts;
    if (counts.empty()) counts.assign(static_cast<std::size_t>(n), 3);
    std::vector<std::vector<double>> axes;
    for (int k = 0; k < n; ++k) {
      const auto& iv = chart->box()[static_cast<std::size_t>(k)];
      const int c = counts[static_cast<std::size_t>(k)];
      std::vector<double> ax;
      const bool finite = std::isfinite(iv.lo) && std::isfinite(iv.hi);
      if (c == 1) {
        ax.push_back(finite ? 0.5 * (iv.lo + iv.hi) : (std::isfinite(iv.lo) ? iv.lo : (std::isfinite(iv.hi) ? iv.hi : 0.0)));
      } else {
        if (!finite) throw ConfigError("grid.counts", "axis '" + cfg.coords[static_cast<std::size_t>(k)] + "' needs a finite box");
        for (int i = 0; i < c; ++i) ax.push_back(iv.lo + (iv.hi - iv.lo) * i / (c - 1));
      }
      axes.push_back(std::move(ax));
    }
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    while (true) {
      std::vector<double> p;
      for (int k = 0; k < n; ++k) p.push_back(axes[static_cast<std::size_t>(k)][idx[static_cast<std::size_t>(k)]]);
      pts.push_back(std::move(p));
      int k = n - 1;
      while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == axes[static_cast<std::size_t>(k)].size()) {
        idx[static_cast<std::size_t>(k)] = 0;
        --k;
      }
      if (k < 0) break;
    }
  }
  for (const auto& p : pts)
    if (!chart->contains(p)) throw ConfigError("grid", "grid point outside the chart box");
  return pts;
}

}  // namespace gradedgeo::cli
