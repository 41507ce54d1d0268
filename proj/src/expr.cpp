#include "gradedgeo/expr.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <unordered_map>

#include "gradedgeo/error.hpp"

namespace gradedgeo {

namespace {

ExprPtr make_const(double v) {
  return std::make_shared<const ExprNode>(ExprNode{ExprOp::Const, v, -1, nullptr, nullptr});
}

ExprPtr make_coord(int i) {
  return std::make_shared<const ExprNode>(ExprNode{ExprOp::Coord, 0.0, i, nullptr, nullptr});
}

bool is_const(const ExprPtr& e, double v) { return e->op == ExprOp::Const && e->value == v; }

ExprPtr make_unary(ExprOp op, ExprPtr a) {
  if (op == ExprOp::Neg && a->op == ExprOp::Const) return a->value == 0.0 ? a : make_const(-a->value);
  return std::make_shared<const ExprNode>(ExprNode{op, 0.0, -1, std::move(a), nullptr});
}

ExprPtr make_pow(ExprPtr base, double exponent) {
  if (exponent == 1.0) return base;
  if (exponent == 0.0) return make_const(1.0);
  return std::make_shared<const ExprNode>(
      ExprNode{ExprOp::Pow, exponent, -1, std::move(base), nullptr});
}

// Light folding only: identities with 0 and 1 and constant-constant pairs.
ExprPtr make_binary(ExprOp op, ExprPtr a, ExprPtr b) {
  const bool ca = a->op == ExprOp::Const;
  const bool cb = b->op == ExprOp::Const;
  switch (op) {
    case ExprOp::Add:
      if (is_const(a, 0.0)) return b;
      if (is_const(b, 0.0)) return a;
      if (ca && cb) return make_const(a->value + b->value);
      break;
    case ExprOp::Sub:
      if (is_const(b, 0.0)) return a;
      if (is_const(a, 0.0)) return make_unary(ExprOp::Neg, b);
      if (ca && cb) return make_const(a->value - b->value);
      break;
    case ExprOp::Mul:
      if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
      if (is_const(a, 1.0)) return b;
      if (is_const(b, 1.0)) return a;
      if (ca && cb) return make_const(a->value * b->value);
      break;
    case ExprOp::Div:
      if (is_const(a, 0.0) && !is_const(b, 0.0)) return make_const(0.0);
      if (is_const(b, 1.0)) return a;
      break;
    default:
      break;
  }
  return std::make_shared<const ExprNode>(ExprNode{op, 0.0, -1, std::move(a), std::move(b)});
}

void check_same_chart(const ScalarField& a, const ScalarField& b) {
  if (a.chart_ptr() != b.chart_ptr() && !a.chart().compatible(b.chart()))
    throw InvalidArgument("scalar fields live on different charts");
}

void check_coords(const ExprNode& n, int dim) {
  if (n.op == ExprOp::Coord && (n.coord < 0 || n.coord >= dim))
    throw InvalidArgument("expression references coordinate index " + std::to_string(n.coord) +
                          " outside a " + std::to_string(dim) + "-dimensional chart");
  if (n.lhs) check_coords(*n.lhs, dim);
  if (n.rhs) check_coords(*n.rhs, dim);
}

}  // namespace

bool structurally_equal(const ExprNode& a, const ExprNode& b) {
  if (&a == &b) return true;
  if (a.op != b.op) return false;
  switch (a.op) {
    case ExprOp::Const:
      return a.value == b.value;
    case ExprOp::Coord:
      return a.coord == b.coord;
    case ExprOp::Pow:
      return a.value == b.value && structurally_equal(*a.lhs, *b.lhs);
    default:
      break;
  }
  if (!structurally_equal(*a.lhs, *b.lhs)) return false;
  if (static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) return false;
  return !a.rhs || structurally_equal(*a.rhs, *b.rhs);
}

ScalarField::ScalarField(ChartPtr chart, ExprPtr expr)
    : chart_(std::move(chart)), expr_(std::move(expr)) {
  if (!chart_ || !expr_) throw InvalidArgument("scalar field needs a chart and an expression");
  check_coords(*expr_, chart_->dim());
}

ScalarField ScalarField::constant(ChartPtr chart, double value) {
  return ScalarField(std::move(chart), make_const(value));
}

ScalarField ScalarField::coordinate(ChartPtr chart, int index) {
  return ScalarField(std::move(chart), make_coord(index));
}

ScalarField ScalarField::coordinate(ChartPtr chart, const std::string& name) {
  auto idx = chart->index_of(name);
  if (!idx) throw InvalidArgument("unknown coordinate '" + name + "'");
  return coordinate(std::move(chart), *idx);
}

double ScalarField::operator()(std::span<const double> p) const {
  return eval_jet(*this, p, 0).value();
}

bool ScalarField::is_constant() const {
  std::function<bool(const ExprNode&)> rec = [&](const ExprNode& n) {
    if (n.op == ExprOp::Coord) return false;
    if (n.lhs && !rec(*n.lhs)) return false;
    if (n.rhs && !rec(*n.rhs)) return false;
    return true;
  };
  return rec(*expr_);
}

bool ScalarField::is_zero() const { return is_const(expr_, 0.0); }

ScalarField ScalarField::rebind(ChartPtr target, std::span<const int> coord_map) const {
  if (coord_map.size() != static_cast<std::size_t>(dim()))
    throw InvalidArgument("rebind map size does not match the chart dimension");
  std::unordered_map<const ExprNode*, ExprPtr> memo;
  std::function<ExprPtr(const ExprPtr&)> rec = [&](const ExprPtr& n) -> ExprPtr {
    if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
    ExprPtr out;
    if (n->op == ExprOp::Coord) {
      out = make_coord(coord_map[static_cast<std::size_t>(n->coord)]);
    } else if (n->op == ExprOp::Const) {
      out = n;
    } else {
      out = std::make_shared<const ExprNode>(ExprNode{n->op, n->value, -1, rec(n->lhs),
                                                      n->rhs ? rec(n->rhs) : nullptr});
    }
    memo.emplace(n.get(), out);
    return out;
  };
  return ScalarField(std::move(target), rec(expr_));
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  check_same_chart(a, b);
  return ScalarField(a.chart_ptr(), make_binary(ExprOp::Add, a.expr(), b.expr()));
}
ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  check_same_chart(a, b);
  return ScalarField(a.chart_ptr(), make_binary(ExprOp::Sub, a.expr(), b.expr()));
}
ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  check_same_chart(a, b);
  return ScalarField(a.chart_ptr(), make_binary(ExprOp::Mul, a.expr(), b.expr()));
}
ScalarField operator/(const ScalarField& a, const ScalarField& b) {
  check_same_chart(a, b);
  return ScalarField(a.chart_ptr(), make_binary(ExprOp::Div, a.expr(), b.expr()));
}
ScalarField operator-(const ScalarField& a) {
  return ScalarField(a.chart_ptr(), make_unary(ExprOp::Neg, a.expr()));
}
ScalarField operator+(const ScalarField& a, double b) {
  return a + ScalarField::constant(a.chart_ptr(), b);
}
ScalarField operator+(double a, const ScalarField& b) {
  return ScalarField::constant(b.chart_ptr(), a) + b;
}
ScalarField operator-(const ScalarField& a, double b) {
  return a - ScalarField::constant(a.chart_ptr(), b);
}
ScalarField operator-(double a, const ScalarField& b) {
  return ScalarField::constant(b.chart_ptr(), a) - b;
}
ScalarField operator*(const ScalarField& a, double b) {
  return a * ScalarField::constant(a.chart_ptr(), b);
}
ScalarField operator*(double a, const ScalarField& b) {
  return ScalarField::constant(b.chart_ptr(), a) * b;
}
ScalarField operator/(const ScalarField& a, double b) {
  return a / ScalarField::constant(a.chart_ptr(), b);
}
ScalarField operator/(double a, const ScalarField& b) {
  return ScalarField::constant(b.chart_ptr(), a) / b;
}

ScalarField exp(const ScalarField& f) {
  return ScalarField(f.chart_ptr(), make_unary(ExprOp::Exp, f.expr()));
}
ScalarField ln(const ScalarField& f) {
  return ScalarField(f.chart_ptr(), make_unary(ExprOp::Ln, f.expr()));
}
ScalarField sin(const ScalarField& f) {
  return ScalarField(f.chart_ptr(), make_unary(ExprOp::Sin, f.expr()));
}
ScalarField cos(const ScalarField& f) {
  return ScalarField(f.chart_ptr(), make_unary(ExprOp::Cos, f.expr()));
}
ScalarField tan(const ScalarField& f) {
  return ScalarField(f.chart_ptr(), make_unary(ExprOp::Tan, f.expr()));
}
ScalarField sqrt(const ScalarField& f) {
  return ScalarField(f.chart_ptr(), make_unary(ExprOp::Sqrt, f.expr()));
}
ScalarField pow(const ScalarField& f, double exponent) {
  return ScalarField(f.chart_ptr(), make_pow(f.expr(), exponent));
}
ScalarField bump(const ScalarField& u) {
  return ScalarField(u.chart_ptr(), make_unary(ExprOp::Bump, u.expr()));
}

ScalarField diff(const ScalarField& f, int var) {
  if (var < 0 || var >= f.dim()) throw InvalidArgument("derivative variable out of range");
  std::unordered_map<const ExprNode*, ExprPtr> memo;
  std::function<ExprPtr(const ExprPtr&)> d = [&](const ExprPtr& n) -> ExprPtr {
    if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
    const ExprPtr& a = n->lhs;
    const ExprPtr& b = n->rhs;
    ExprPtr out;
    switch (n->op) {
      case ExprOp::Const:
        out = make_const(0.0);
        break;
      case ExprOp::Coord:
        out = make_const(n->coord == var ? 1.0 : 0.0);
        break;
      case ExprOp::Add:
        out = make_binary(ExprOp::Add, d(a), d(b));
        break;
      case ExprOp::Sub:
        out = make_binary(ExprOp::Sub, d(a), d(b));
        break;
      case ExprOp::Mul:
        out = make_binary(ExprOp::Add, make_binary(ExprOp::Mul, d(a), b),
                          make_binary(ExprOp::Mul, a, d(b)));
        break;
      case ExprOp::Div:
        out = make_binary(
            ExprOp::Sub, make_binary(ExprOp::Div, d(a), b),
            make_binary(ExprOp::Div, make_binary(ExprOp::Mul, a, d(b)), make_pow(b, 2.0)));
        break;
      case ExprOp::Neg:
        out = make_unary(ExprOp::Neg, d(a));
        break;
      case ExprOp::Pow:
        out = make_binary(ExprOp::Mul,
                          make_binary(ExprOp::Mul, make_const(n->value), make_pow(a, n->value - 1.0)),
                          d(a));
        break;
      case ExprOp::Exp:
        out = make_binary(ExprOp::Mul, n, d(a));
        break;
      case ExprOp::Ln:
        out = make_binary(ExprOp::Div, d(a), a);
        break;
      case ExprOp::Sin:
        out = make_binary(ExprOp::Mul, make_unary(ExprOp::Cos, a), d(a));
        break;
      case ExprOp::Cos:
        out = make_unary(ExprOp::Neg, make_binary(ExprOp::Mul, make_unary(ExprOp::Sin, a), d(a)));
        break;
      case ExprOp::Tan:
        out = make_binary(ExprOp::Div, d(a), make_pow(make_unary(ExprOp::Cos, a), 2.0));
        break;
      case ExprOp::Sqrt:
        out = make_binary(ExprOp::Div, d(a), make_binary(ExprOp::Mul, make_const(2.0), n));
        break;
      case ExprOp::Bump:
        // Only a constant argument has a representable derivative (zero).
        if (d(a)->op == ExprOp::Const && d(a)->value == 0.0) {
          out = make_const(0.0);
          break;
        }
        throw InvalidArgument("symbolic derivative of bump() is not supported");
    }
    memo.emplace(n.get(), out);
    return out;
  };
  return ScalarField(f.chart_ptr(), d(f.expr()));
}

int max_jet_order() {
  static const int cached = [] {
    const char* env = std::getenv("GRADEDGEO_MAX_JET_ORDER");
    if (!env) return kDefaultMaxJetOrder;
    int v = 0;
    auto [ptr, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), v);
    if (ec != std::errc() || *ptr != '\0' || v < 0) return kDefaultMaxJetOrder;
    return v;
  }();
  return cached;
}

namespace {

class JetEvaluator {
 public:
  JetEvaluator(std::span<const double> p, int order) : p_(p), order_(order) {}

  Jet eval(const ExprPtr& n) {
    // Shared subtrees (from symbolic differentiation) are evaluated once.
    const bool shared = n.use_count() > 1 && n->op != ExprOp::Const && n->op != ExprOp::Coord;
    if (shared) {
      if (auto it = memo_.find(n.get()); it != memo_.end()) return it->second;
    }
    Jet r = compute(*n);
    if (!std::isfinite(r.value()))
      throw DomainError("expression evaluated to a non-finite value");
    if (shared) memo_.emplace(n.get(), r);
    return r;
  }

 private:
  Jet compute(const ExprNode& n) {
    const int dim = static_cast<int>(p_.size());
    switch (n.op) {
      case ExprOp::Const:
        return Jet::constant(dim, order_, n.value);
      case ExprOp::Coord:
        return Jet::variable(dim, order_, p_[static_cast<std::size_t>(n.coord)], n.coord);
      case ExprOp::Add:
        return eval(n.lhs) + eval(n.rhs);
      case ExprOp::Sub:
        return eval(n.lhs) - eval(n.rhs);
      case ExprOp::Mul:
        return eval(n.lhs) * eval(n.rhs);
      case ExprOp::Div:
        return eval(n.lhs) / eval(n.rhs);
      case ExprOp::Neg:
        return -eval(n.lhs);
      case ExprOp::Pow:
        return pow(eval(n.lhs), n.value);
      case ExprOp::Exp:
        return exp(eval(n.lhs));
      case ExprOp::Ln:
        return log(eval(n.lhs));
      case ExprOp::Sin:
        return sin(eval(n.lhs));
      case ExprOp::Cos:
        return cos(eval(n.lhs));
      case ExprOp::Tan:
        return tan(eval(n.lhs));
      case ExprOp::Sqrt:
        return sqrt(eval(n.lhs));
      case ExprOp::Bump: {
        Jet u = eval(n.lhs);
        if (std::abs(u.value()) >= 1.0) return Jet::constant(dim, order_, 0.0);
        Jet w = 1.0 - u * u;
        return exp(-reciprocal(w));
      }
    }
    throw InvalidArgument("unknown expression node");
  }

  std::span<const double> p_;
  int order_;
  std::unordered_map<const ExprNode*, Jet> memo_;
};

}  // namespace

Jet eval_jet(const ScalarField& f, std::span<const double> p, int order) {
  if (order < 0) throw InvalidArgument("jet order must be non-negative");
  if (order > max_jet_order())
    throw DomainError("jet order " + std::to_string(order) + " exceeds the configured maximum " +
                      std::to_string(max_jet_order()));
  if (p.size() != static_cast<std::size_t>(f.dim()))
    throw InvalidArgument("point has " + std::to_string(p.size()) + " coordinates, chart has " +
                          std::to_string(f.dim()));
  if (!f.chart().contains(p)) throw DomainError("evaluation point lies outside the chart box");
  return JetEvaluator(p, order).eval(f.expr());
}

PartialTable partials(const ScalarField& f, std::span<const double> p, int upto) {
  return PartialTable(eval_jet(f, p, upto));
}

namespace {

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

class Printer {
 public:
  explicit Printer(const ChartSpec& chart) : chart_(chart) {}

  std::string expr(const ExprNode& n) const {
    if (n.op == ExprOp::Add || n.op == ExprOp::Sub) {
      return expr(*n.lhs) + (n.op == ExprOp::Add ? " + " : " - ") + term(*n.rhs);
    }
    return term(n);
  }

 private:
  std::string term(const ExprNode& n) const {
    if (n.op == ExprOp::Mul || n.op == ExprOp::Div) {
      return term(*n.lhs) + (n.op == ExprOp::Mul ? "*" : "/") + factor(*n.rhs);
    }
    return factor(n);
  }

  std::string factor(const ExprNode& n) const {
    if (n.op == ExprOp::Neg) {
      const ExprNode& c = *n.lhs;
      return "-" + (c.op == ExprOp::Pow ? power(c) : atom(c));
    }
    if (n.op == ExprOp::Pow) return power(n);
    return atom(n);
  }

  std::string power(const ExprNode& n) const {
    const std::string e = n.value < 0 ? "(-" + format_number(-n.value) + ")" : format_number(n.value);
    return atom(*n.lhs) + "^" + e;
  }

  std::string atom(const ExprNode& n) const {
    switch (n.op) {
      case ExprOp::Const:
        return n.value < 0 ? "(-" + format_number(-n.value) + ")" : format_number(n.value);
      case ExprOp::Coord:
        return chart_.coord_names()[static_cast<std::size_t>(n.coord)];
      case ExprOp::Exp:
        return "exp(" + expr(*n.lhs) + ")";
      case ExprOp::Ln:
        return "ln(" + expr(*n.lhs) + ")";
      case ExprOp::Sin:
        return "sin(" + expr(*n.lhs) + ")";
      case ExprOp::Cos:
        return "cos(" + expr(*n.lhs) + ")";
      case ExprOp::Tan:
        return "tan(" + expr(*n.lhs) + ")";
      case ExprOp::Sqrt:
        return "sqrt(" + expr(*n.lhs) + ")";
      case ExprOp::Bump:
        return "bump(" + expr(*n.lhs) + ")";
      default:
        return "(" + expr(n) + ")";
    }
  }

  const ChartSpec& chart_;
};

}  // namespace

std::string pretty_print(const ExprNode& node, const ChartSpec& chart) {
  return Printer(chart).expr(node);
}

std::string pretty_print(const ScalarField& f) { return pretty_print(f.root(), f.chart()); }

}  // namespace gradedgeo
