#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gradedgeo {

/// Closed interval; either end may be infinite.
struct Interval {
  double lo;
  double hi;
  bool operator==(const Interval&) const = default;
};

/// A single coordinate chart: coordinate names and the box on which fields are
/// evaluated and integrated.
class ChartSpec {
 public:
  /// Unbounded box.
  explicit ChartSpec(std::vector<std::string> coord_names);
  ChartSpec(std::vector<std::string> coord_names, std::vector<Interval> box);

  int dim() const noexcept { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& coord_names() const noexcept { return names_; }
  const std::vector<Interval>& box() const noexcept { return box_; }

  std::optional<int> index_of(const std::string& name) const;
  bool contains(std::span<const double> point) const;

  /// Same names in the same order (boxes may differ).
  bool compatible(const ChartSpec& other) const { return names_ == other.names_; }
  bool operator==(const ChartSpec&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<Interval> box_;
};

using ChartPtr = std::shared_ptr<const ChartSpec>;

inline ChartPtr make_chart(std::vector<std::string> names) {
  return std::make_shared<const ChartSpec>(std::move(names));
}
inline ChartPtr make_chart(std::vector<std::string> names, std::vector<Interval> box) {
  return std::make_shared<const ChartSpec>(std::move(names), std::move(box));
}

/// True for names reserved by the expression language (function names, `pi`).
bool is_reserved_name(const std::string& name);
bool is_valid_identifier(const std::string& name);

}  // namespace gradedgeo
