#pragma once

// Reference data shared by the unit tests and the acceptance runner.

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace oracle {

// (-Delta)^s exp(-x^2) without normalising constant, from the closed form
// 2 Gamma(1/2+s) 4^s / sqrt(pi) 1F1(1/2+s; 1/2; -x^2) / C(1,s), 30 digits.
struct GaussPoint {
  double s, x, value;
};
inline const std::array<GaussPoint, 12> kGauss{{
    {0.25, 0.0, 9.80333361972142116},
    {0.25, 0.5, 6.61718352497200148},
    {0.25, 1.3, -0.735745412741755624},
    {0.25, -2.2, -1.33874915608386253},
    {0.5, 0.0, 7.08981540362206411},
    {0.5, 0.5, 4.08063979401178471},
    {0.5, 1.3, -1.82090242492967167},
    {0.5, -2.2, -1.16164742179995687},
    {0.75, 0.0, 9.6682930885917555},
    {0.75, 0.5, 4.64466759253749755},
    {0.75, 1.3, -3.61854297533640435},
    {0.75, -2.2, -1.24748425284860482},
}};

// Bounded smooth functions with a strict global maximum at `peak`.
struct Bump {
  std::string name;
  std::function<double(double)> f;
  double peak;
};

inline std::vector<Bump> bumps() {
  return {
      {"gauss", [](double x) { return std::exp(-x * x); }, 0.0},
      {"shifted gauss", [](double x) { return std::exp(-(x - 0.7) * (x - 0.7)); }, 0.7},
      {"narrow gauss", [](double x) { return std::exp(-8.0 * x * x); }, 0.0},
      {"lorentzian", [](double x) { return 1.0 / (1.0 + x * x); }, 0.0},
      {"quartic lorentzian", [](double x) { return 1.0 / (1.0 + std::pow(x + 0.3, 4)); }, -0.3},
      {"sech", [](double x) { return 1.0 / std::cosh(x); }, 0.0},
      {"sech squared", [](double x) { return 1.0 / std::pow(std::cosh(2.0 * x - 1.0), 2); }, 0.5},
      {"quartic gauss", [](double x) { return std::exp(-std::pow(x, 4)); }, 0.0},
      {"damped cosine", [](double x) { return std::cos(x) * std::exp(-x * x); }, 0.0},
      {"skewed", [](double x) { return std::exp(-x * x) * (1.0 + 0.5 * std::tanh(x)); }, 0.21578455783151949},
  };
}

}  // namespace oracle
