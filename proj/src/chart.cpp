#include "gradedgeo/chart.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <set>

#include "gradedgeo/error.hpp"

namespace gradedgeo {

namespace {

std::vector<Interval> unbounded(std::size_t n) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::vector<Interval>(n, Interval{-inf, inf});
}

}  // namespace

bool is_reserved_name(const std::string& name) {
  static const std::set<std::string> reserved = {"exp", "ln",   "sin", "cos",
                                                 "tan", "sqrt", "bump", "pi"};
  return reserved.count(name) != 0;
}

bool is_valid_identifier(const std::string& name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

ChartSpec::ChartSpec(std::vector<std::string> coord_names)
    : ChartSpec(coord_names, unbounded(coord_names.size())) {}

ChartSpec::ChartSpec(std::vector<std::string> coord_names, std::vector<Interval> box)
    : names_(std::move(coord_names)), box_(std::move(box)) {
  if (names_.empty()) throw InvalidArgument("chart dimension must be at least 1");
  if (box_.size() != names_.size())
    throw InvalidArgument("chart box has " + std::to_string(box_.size()) +
                          " intervals for " + std::to_string(names_.size()) + " coordinates");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (!is_valid_identifier(n)) throw InvalidArgument("invalid coordinate name '" + n + "'");
    if (is_reserved_name(n)) throw InvalidArgument("coordinate name '" + n + "' is reserved");
    if (!seen.insert(n).second) throw InvalidArgument("duplicate coordinate name '" + n + "'");
  }
  for (std::size_t i = 0; i < box_.size(); ++i) {
    const auto& iv = box_[i];
    if (std::isnan(iv.lo) || std::isnan(iv.hi) || !(iv.lo <= iv.hi))
      throw InvalidArgument("empty box interval for coordinate '" + names_[i] + "'");
  }
}

std::optional<int> ChartSpec::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<int>(it - names_.begin());
}

bool ChartSpec::contains(std::span<const double> point) const {
  if (point.size() != names_.size()) return false;
  for (std::size_t i = 0; i < point.size(); ++i) {
    const auto& iv = box_[i];
    const double slack = 1e-12 * std::max(1.0, std::abs(point[i]));
    if (!(point[i] >= iv.lo - slack && point[i] <= iv.hi + slack)) return false;
  }
  return true;
}

}  // namespace gradedgeo
