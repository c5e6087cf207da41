#pragma once

// Fractional Laplacian in one dimension, without normalizing constant:
//
//   (-Delta)^s u(x) = int_R [2u(x) - u(x+y) - u(x-y)] / |y|^{1+2s} dy
//
// plus the two classical mean-value quotients that converge to -u''(x).

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

namespace fraclap {

using RealFunction = std::function<double(double)>;

struct FracParams {
  double s = 0.5;

  // Throws ConfigError unless 0 < s < 1.
  void validate() const;
};

struct QuadConfig {
  double inner_radius = 1e-3;   // delta
  double outer_radius = 1e4;    // R
  int near_points = 64;
  int mid_points = 2048;
  // Growth bound |u(y)| <= C (1+|y|)^gamma; defaults to s when unset.
  std::optional<double> tail_growth_exponent;

  // Throws ConfigError on 0 < delta < R, point-count or gamma < 2s violations.
  void validate(const FracParams& p) const;
  double growth(const FracParams& p) const {
    return tail_growth_exponent.value_or(p.s);
  }
};

struct FracEvaluation {
  double value = 0.0;
  double near = 0.0;             // |y| < delta
  double mid = 0.0;              // delta <= |y| <= R
  double tail = 0.0;             // |y| > R, midpoint of the tail estimate
  double tail_halfwidth = 0.0;   // half-width of the tail estimate
  double tail_envelope = 0.0;    // crude a-priori bound from the growth class
  std::size_t evaluations = 0;
};

// Symmetric second-difference form. `kinks` lists x-locations where u is
// not smooth (e.g. block kinks); quadrature panels are split there.
FracEvaluation frac_laplacian_eval(const RealFunction& u, double x,
                                   const FracParams& p, const QuadConfig& q,
                                   std::span<const double> kinks = {});
double frac_laplacian(const RealFunction& u, double x, const FracParams& p,
                      const QuadConfig& q, std::span<const double> kinks = {});

// Principal-value form 2 P.V. int [u(x) - u(y)] / |x-y|^{1+2s} dy. Uses a
// different near-field rule and integrates the two half-lines separately.
FracEvaluation frac_laplacian_pv_eval(const RealFunction& u, double x,
                                      const FracParams& p, const QuadConfig& q,
                                      std::span<const double> kinks = {});
double frac_laplacian_pv(const RealFunction& u, double x, const FracParams& p,
                         const QuadConfig& q,
                         std::span<const double> kinks = {});

// 6 * mean over B_rho(x) of [u(x) - u(y)] / rho^2.
double mean_value_ball(const RealFunction& u, double x, double rho);
// [2u(x) - u(x+rho) - u(x-rho)] / rho^2.
double mean_value_sphere(const RealFunction& u, double x, double rho);

}  // namespace fraclap
