#include "fraclap/grid_function.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

// Quintic Hermite basis on [0, 1], monomial coefficients in t.
constexpr std::array<std::array<double, 6>, 6> kHermite = {{
    {1, 0, 0, -10, 15, -6},       // f0
    {0, 1, 0, -6, 8, -3},         // h f0'
    {0, 0, 0.5, -1.5, 1.5, -0.5}, // h^2 f0''
    {0, 0, 0, 0.5, -1, 0.5},      // h^2 f1''
    {0, 0, 0, -4, 7, -3},         // h f1'
    {0, 0, 0, 10, -15, 6},        // f1
}};

void check_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw ConfigError(std::string("grid function: non-finite ") + what + " sample");
    }
  }
}

std::vector<double> split_numbers(const std::string& line, const std::string& origin,
                                  std::size_t lineno) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed number '" +
                        cell + "'");
    }
  }
  return out;
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && s[i] == ' ') ++i;
  return s.substr(i);
}

}  // namespace

GridFunction::GridFunction(double a, double b, std::vector<double> values,
                           std::optional<std::vector<double>> deriv1,
                           std::optional<std::vector<double>> deriv2)
    : a_(a), b_(b), values_(std::move(values)), deriv1_(std::move(deriv1)),
      deriv2_(std::move(deriv2)) {
  if (!(a_ < b_)) throw ConfigError("grid function: need a < b");
  if (values_.size() < 2) throw ConfigError("grid function: need at least 2 nodes");
  if (deriv1_.has_value() != deriv2_.has_value()) {
    throw ConfigError("grid function: deriv1 and deriv2 must be given together");
  }
  check_finite(values_, "value");
  if (deriv1_) {
    if (deriv1_->size() != values_.size() || deriv2_->size() != values_.size()) {
      throw ConfigError("grid function: derivative columns must match value count");
    }
    check_finite(*deriv1_, "deriv1");
    check_finite(*deriv2_, "deriv2");
  }
}

double GridFunction::node(std::size_t i) const {
  if (i + 1 == size()) return b_;
  return a_ + spacing() * static_cast<double>(i);
}

std::span<const double> GridFunction::deriv1() const {
  return deriv1_ ? std::span<const double>(*deriv1_) : std::span<const double>();
}

std::span<const double> GridFunction::deriv2() const {
  return deriv2_ ? std::span<const double>(*deriv2_) : std::span<const double>();
}

double GridFunction::evaluate(double x, int order) const {
  if (order < 0 || order > 2) throw DomainError("grid function: derivative order must be 0..2");
  if (x <= a_) return order == 0 ? values_.front() : (x == a_ && deriv1_ ? (order == 1 ? deriv1_->front() : deriv2_->front()) : 0.0);
  if (x >= b_) return order == 0 ? values_.back() : (x == b_ && deriv1_ ? (order == 1 ? deriv1_->back() : deriv2_->back()) : 0.0);
  const double h = spacing();
  auto cell = static_cast<std::size_t>((x - a_) / h);
  if (cell >= size() - 1) cell = size() - 2;
  const double t = (x - node(cell)) / h;

  if (!deriv1_) {
    if (order > 0) {
      throw DomainError("grid function: derivatives need deriv1/deriv2 columns");
    }
    return values_[cell] + t * (values_[cell + 1] - values_[cell]);
  }

  const std::array<double, 6> w = {values_[cell],
                                   h * (*deriv1_)[cell],
                                   h * h * (*deriv2_)[cell],
                                   h * h * (*deriv2_)[cell + 1],
                                   h * (*deriv1_)[cell + 1],
                                   values_[cell + 1]};
  std::array<double, 6> poly{};
  for (std::size_t k = 0; k < 6; ++k)
    for (std::size_t p = 0; p < 6; ++p) poly[p] += w[k] * kHermite[k][p];
  for (int d = 0; d < order; ++d) {
    for (std::size_t p = 0; p + 1 < 6; ++p) poly[p] = poly[p + 1] * static_cast<double>(p + 1);
    poly[5] = 0.0;
  }
  double acc = 0.0;
  for (std::size_t p = 6; p-- > 0;) acc = acc * t + poly[p];
  return acc / std::pow(h, order);
}

GridFunction GridFunction::read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read grid CSV '" + path.string() + "'");
  return parse_csv(in, path.string());
}

GridFunction GridFunction::parse_csv(std::istream& in, const std::string& origin) {
  std::string header;
  if (!std::getline(in, header)) throw ConfigError(origin + ": empty CSV");
  header = trim(header);
  bool derivs = false;
  if (header == "x,value") {
    derivs = false;
  } else if (header == "x,value,deriv1,deriv2") {
    derivs = true;
  } else {
    throw ConfigError(origin + ": expected header 'x,value' or 'x,value,deriv1,deriv2'");
  }
  std::vector<double> xs, v, d1, d2;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    auto row = split_numbers(line, origin, lineno);
    if (row.size() != (derivs ? 4u : 2u)) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": wrong column count");
    }
    xs.push_back(row[0]);
    v.push_back(row[1]);
    if (derivs) {
      d1.push_back(row[2]);
      d2.push_back(row[3]);
    }
  }
  if (xs.size() < 2) throw ConfigError(origin + ": need at least 2 rows");
  const double a = xs.front(), b = xs.back();
  if (!(a < b)) throw ConfigError(origin + ": x must be ascending");
  const double h = (b - a) / static_cast<double>(xs.size() - 1);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0 && !(xs[i] > xs[i - 1])) throw ConfigError(origin + ": x must be ascending");
    if (std::abs(xs[i] - (a + h * static_cast<double>(i))) > 1e-9 * (b - a)) {
      throw ConfigError(origin + ": x must be uniformly spaced");
    }
  }
  if (derivs) return GridFunction(a, b, std::move(v), std::move(d1), std::move(d2));
  return GridFunction(a, b, std::move(v));
}

void GridFunction::write_csv(std::ostream& out) const {
  out << (deriv1_ ? "x,value,deriv1,deriv2\n" : "x,value\n");
  char buf[128];
  for (std::size_t i = 0; i < size(); ++i) {
    if (deriv1_) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", node(i), values_[i],
                    (*deriv1_)[i], (*deriv2_)[i]);
    } else {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", node(i), values_[i]);
    }
    out << buf;
  }
}

}  // namespace fraclap
