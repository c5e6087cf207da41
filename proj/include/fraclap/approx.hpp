#pragma once

// C^2 approximation of a target on [-1, 1] by a sum of scaled blocks:
// Chebyshev interpolation to within eps/2, then each monomial c_j x^j is
// replaced by a rescaled derivative-matched block combination whose
// defect is certified to keep the total within eps.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fraclap/bigfloat.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/frackernel.hpp"
#include "fraclap/grid_function.hpp"
#include "fraclap/sbasis.hpp"

namespace fraclap {

// A C^2 function on [-1, 1] with its first two derivatives.
struct Target {
  std::string name;
  RealFunction f;
  RealFunction d1;
  RealFunction d2;

  double eval(double x, int order = 0) const;
  // Throws DomainError if any of f, f', f'' is non-finite on a 4096-point
  // sample of [-1, 1].
  void validate() const;

  static Target analytic(std::string name, RealFunction f, RealFunction d1, RealFunction d2);
  static Target constant(double c);
  // Affine map of [g.a(), g.b()] onto [-1, 1]. Needs derivative columns;
  // throws ConfigError when deriv1 disagrees with the value differences by
  // more than 1e-3 (1 + max|deriv1|).
  static Target from_grid(const GridFunction& g, std::string name);
};

// Built-in targets: x2, sin, exp, gauss, const:<c>, csv:<path>.
Target parse_target(std::string_view spec);

// Chebyshev series sum a_k T_k on [-1, 1], padded to degree >= 3.
class ChebPoly {
 public:
  explicit ChebPoly(std::vector<double> coefficients);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coefficients() const { return coeffs_; }
  double eval(double x, int order = 0) const;
  // sup over the sample grid of max(|p|, |p'|, |p''|).
  double c2_norm(int samples = 4096) const;
  // Exact monomial coefficients c_0..c_N (degree <= 30).
  std::vector<BigFloat> monomial(long bits = 192) const;

 private:
  std::vector<double> coeffs_;
  std::vector<double> d1_;
  std::vector<double> d2_;
};

// max over i <= 2 of the sampled sup of |f^(i) - g^(i)|, uniform points on
// [-1, 1] including the endpoints.
double c2_distance(const std::function<double(double, int)>& f,
                   const std::function<double(double, int)>& g, int samples = 4096);

// Inflation applied to sampled sup norms.
inline constexpr double kSupInflation = 1.05;

struct ChebFit {
  ChebPoly poly;
  double epsilon_poly = 0.0;  // inflated sampled C^2 distance
  int fitted_degree = 0;      // interpolation degree before padding
};

// Interpolates at Chebyshev points of increasing degree until the C^2
// distance is within eps_half. Throws ApproximationError at the cap.
ChebFit cheb_fit(const Target& target, double eps_half, int max_degree = 30,
                 int samples = 4096);

using NodeRule = std::function<std::vector<double>(int J)>;

struct DegreeDiagnostics {
  int j = 0;
  double c_j = 0.0;
  double r_j = 0.0;
  double condition = 0.0;
  double solve_residual = 0.0;
  double sup_bound = 0.0;  // bound on sup |H_j^(N+1)| over (-1, 1)
  long precision_bits = 0;
  double defect_norm = 0.0;  // inflated sampled C^2 norm of the defect
};

struct SharmonicBuild {
  SHCombo combo;
  std::vector<DegreeDiagnostics> degrees;
  std::vector<double> nodes;
  double epsilon_defect = 0.0;
  // C^2 bound of the monomial terms dropped as rounding noise.
  double epsilon_chop = 0.0;
  int halvings = 0;
};

// Throws ConditioningError from the solves, or ApproximationError when
// the defect sum stays above eps_half after `max_halvings` halvings.
SharmonicBuild build_sharmonic(const ChebPoly& poly, double eps_half, double s,
                               const NodeRule& nodes = default_nodes, int max_halvings = 20,
                               int samples = 4096);

struct ApproxConfig {
  double poly_fraction = 0.5;  // share of eps given to the polynomial step
  int max_degree = 30;
  int max_halvings = 20;
  int certify_points = 4096;
  int residual_points = 21;  // 0 skips the residual check
  double residual_extent = 0.9;
  NodeRule nodes = default_nodes;
};

struct ApproxReport {
  std::string target;
  double s = 0.5;
  double epsilon_requested = 0.0;
  double epsilon_poly = 0.0;
  double epsilon_defect = 0.0;
  double epsilon_rounding = 0.0;
  double epsilon_total = 0.0;
  int degree = 0;
  int fitted_degree = 0;
  std::vector<double> chebyshev;
  std::vector<double> monomial;
  double c_eps = 0.0;  // max |c_j|
  std::vector<double> nodes;
  std::vector<DegreeDiagnostics> degrees;
  int halvings = 0;
  std::size_t blocks = 0;
  double residual_max = 0.0;
  double residual_quadrature_error = 0.0;
  double combo_sup = 0.0;
  std::vector<double> residual_x;
  std::vector<double> residual;
  bool success = false;
  std::string stage;  // "done" or the stage that failed
  std::string message;
};

struct ApproxResult {
  SHCombo combo;
  ApproxReport report;
};

// Carries the partial report of a failed run.
class ApproxFailure : public ApproximationError {
 public:
  ApproxFailure(const std::string& what, double best, ApproxReport report)
      : ApproximationError(what, best), report_(std::move(report)) {}
  const ApproxReport& report() const { return report_; }

 private:
  ApproxReport report_;
};

// Runs cheb_fit and build_sharmonic with the eps split of `cfg`. On
// failure throws ApproxFailure; a ConditioningError from the solve is
// reported the same way.
ApproxResult approximate(const Target& target, double eps, double s,
                         const ApproxConfig& cfg = ApproxConfig{});

nlohmann::json report_to_json(const ApproxReport& r);

}  // namespace fraclap
