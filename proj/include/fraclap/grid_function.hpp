#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fraclap {

// Samples of a function at uniform nodes a = x_0 < ... < x_{n-1} = b,
// optionally with first and second derivative columns.
//
// With derivative columns the function is reconstructed by piecewise
// quintic Hermite interpolation (C^2 across nodes); without them, by
// piecewise linear interpolation (value only). Outside [a, b] the value
// is extended by the nearest endpoint value and derivatives vanish.
class GridFunction {
 public:
  GridFunction(double a, double b, std::vector<double> values,
               std::optional<std::vector<double>> deriv1 = std::nullopt,
               std::optional<std::vector<double>> deriv2 = std::nullopt);

  double a() const { return a_; }
  double b() const { return b_; }
  std::size_t size() const { return values_.size(); }
  double spacing() const { return (b_ - a_) / static_cast<double>(size() - 1); }
  double node(std::size_t i) const;
  std::span<const double> values() const { return values_; }
  bool has_derivatives() const { return deriv1_.has_value(); }
  std::span<const double> deriv1() const;
  std::span<const double> deriv2() const;

  // order 0, 1 or 2.
  double evaluate(double x, int order = 0) const;

  // CSV with header `x,value` or `x,value,deriv1,deriv2`.
  static GridFunction read_csv(const std::filesystem::path& path);
  static GridFunction parse_csv(std::istream& in, const std::string& origin);
  void write_csv(std::ostream& out) const;

 private:
  double a_;
  double b_;
  std::vector<double> values_;
  std::optional<std::vector<double>> deriv1_;
  std::optional<std::vector<double>> deriv2_;
};

}  // namespace fraclap
