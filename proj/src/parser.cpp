#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "gradedgeo/error.hpp"
#include "gradedgeo/expr.hpp"

namespace gradedgeo {

namespace {

// expr   := term (('+'|'-') term)*
// term   := factor (('*'|'/') factor)*
// factor := ('-')? atom ('^' atom)?
// atom   := number | ident | ident '(' expr ')' | '(' expr ')'
class Parser {
 public:
  Parser(std::string_view src, const ChartSpec& chart, const std::map<std::string, double>& params)
      : src_(src), chart_(chart), params_(params) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  static ExprPtr node(ExprOp op, ExprPtr a, ExprPtr b = nullptr, double value = 0.0) {
    return std::make_shared<const ExprNode>(ExprNode{op, value, -1, std::move(a), std::move(b)});
  }

  static ExprPtr constant(double v) {
    return std::make_shared<const ExprNode>(ExprNode{ExprOp::Const, v, -1, nullptr, nullptr});
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = node(ExprOp::Add, lhs, term());
      } else if (accept('-')) {
        lhs = node(ExprOp::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = node(ExprOp::Mul, lhs, factor());
      } else if (accept('/')) {
        lhs = node(ExprOp::Div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr factor() {
    const bool negate = accept('-');
    ExprPtr base = atom();
    if (accept('^')) {
      const std::size_t at = pos_;
      ExprPtr e = atom();
      base = node(ExprOp::Pow, base, nullptr, constant_exponent(*e, at));
    }
    if (!negate) return base;
    // A signed literal is a single constant, matching how constants print.
    if (base->op == ExprOp::Const) return constant(-base->value);
    return node(ExprOp::Neg, base);
  }

  double constant_exponent(const ExprNode& e, std::size_t at) const {
    double v = 0.0;
    try {
      v = fold(e);
    } catch (const DomainError&) {
      throw ParseError("exponent is not a finite constant", at);
    }
    if (!std::isfinite(v)) throw ParseError("exponent is not a finite constant", at);
    return v;
  }

  const ExprNode* find_coord(const ExprNode& e) const {
    if (e.op == ExprOp::Coord) return &e;
    if (e.lhs) {
      if (auto c = find_coord(*e.lhs)) return c;
    }
    if (e.rhs) return find_coord(*e.rhs);
    return nullptr;
  }

  double fold(const ExprNode& e) const {
    if (const ExprNode* c = find_coord(e))
      throw ParseError("exponent must be a constant, found coordinate '" +
                           chart_.coord_names()[static_cast<std::size_t>(c->coord)] + "'",
                       pos_);
    if (e.op == ExprOp::Const) return e.value;
    // Closed constant subtree: evaluate on a one-variable dummy chart.
    static const ChartPtr dummy = make_chart({"c_"});
    const double zero = 0.0;
    return eval_jet(ScalarField(dummy, std::make_shared<const ExprNode>(e)),
                    std::span<const double>(&zero, 1), 0)
        .value();
  }

  ExprPtr atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  ExprPtr number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (ec != std::errc() || ptr != src_.data() + pos_ || !std::isfinite(v))
      throw ParseError("malformed number '" + std::string(src_.substr(start, pos_ - start)) + "'",
                       start);
    if (pos_ < src_.size() && (std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      throw ParseError("malformed number '" + std::string(src_.substr(start, pos_ + 1 - start)) + "'",
                       start);
    return constant(v);
  }

  ExprPtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string name(src_.substr(start, pos_ - start));
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      static const std::map<std::string, ExprOp> functions = {
          {"exp", ExprOp::Exp}, {"ln", ExprOp::Ln},     {"sin", ExprOp::Sin},
          {"cos", ExprOp::Cos}, {"tan", ExprOp::Tan},   {"sqrt", ExprOp::Sqrt},
          {"bump", ExprOp::Bump}};
      auto it = functions.find(name);
      if (it == functions.end()) throw ParseError("unknown function '" + name + "'", start);
      ++pos_;
      ExprPtr arg = expr();
      expect(')');
      return node(it->second, arg);
    }
    if (auto idx = chart_.index_of(name)) {
      return std::make_shared<const ExprNode>(ExprNode{ExprOp::Coord, 0.0, *idx, nullptr, nullptr});
    }
    if (auto it = params_.find(name); it != params_.end()) {
      const double v = it->second;
      return v < 0 ? node(ExprOp::Neg, constant(-v)) : constant(v);
    }
    if (name == "pi") return constant(std::numbers::pi);
    throw ParseError("unknown identifier '" + name + "'", start);
  }

  std::string_view src_;
  const ChartSpec& chart_;
  const std::map<std::string, double>& params_;
  std::size_t pos_ = 0;
};

}  // namespace

ScalarField parse_field(std::string_view src, ChartPtr chart,
                        const std::map<std::string, double>& params) {
  if (!chart) throw InvalidArgument("parse_field needs a chart");
  ExprPtr e = Parser(src, *chart, params).parse();
  return ScalarField(std::move(chart), std::move(e));
}

}  // namespace gradedgeo
