#pragma once

// Two consequences of the approximation theorem, built from its output.
//
// Harnack failure: an s-harmonic approximant of x^2 shifted down by its
// minimum is nonnegative on (-1, 1), vanishes in [-1/2, 1/2] and is not
// identically zero; no interior Harnack constant can hold for it.
//
// Logistic resource plan: with sigma_eps := mu u_eps the fractional
// logistic equation (-Delta)^s u = (sigma_eps - mu u) u holds on (-1, 1)
// with both sides zero.

#include <string>
#include <vector>

#include "json.hpp"

#include "fraclap/approx.hpp"

namespace fraclap {

struct HarnackWitness {
  SHCombo v;             // the approximant; the witness is u = v - iota
  ApproxReport report;
  double iota = 0.0;
  double argmin = 0.0;
  double v_at_zero = 0.0;
  double v_at_minus_half = 0.0;
  double v_at_plus_half = 0.0;
  double inf_annulus = 0.0;          // inf of v over 1/2 <= |x| < 1, sampled
  double inf_inner = 0.0;            // inf of u over [-1/2, 1/2]
  double sup_inner = 0.0;            // sup of u over [-1/2, 1/2], sampled
  double sup_outer_complement = 0.0; // sup of u over (-1, 1), sampled
  double nonneg_margin = 0.0;        // min of u over the 4096 samples
  double exterior_min = 0.0;         // min of u sampled left of -1 out to the last kink
  double exterior_argmin = 0.0;
  bool chain_holds = false;          // v(0) <= 1/16 and v >= 3/16 on the annulus

  double u(double x) const { return v.eval(x) - iota; }
};

// Throws DomainError for eps > 1/16; approximation failures propagate.
HarnackWitness harnack_counterexample(double s, double eps = 1.0 / 16.0,
                                      const ApproxConfig& cfg = ApproxConfig{});

struct LogisticWitness {
  SHCombo u_eps;
  ApproxReport report;
  double mu_c2 = 0.0;            // sampled C^2 norm of mu
  double eps_prime = 0.0;        // budget handed to the approximation
  double sigma_error = 0.0;      // product-rule bound on ||sigma - sigma_eps||_C2
  double sigma_error_sampled = 0.0;
  double feasibility_margin = 0.0;  // min of u_eps - sigma_eps / mu
  std::vector<double> residual_x{};
  std::vector<double> left{};   // (-Delta)^s u_eps
  std::vector<double> right{};  // (sigma_eps - mu u_eps) u_eps
  double left_max = 0.0;
  double right_max = 0.0;
};

// Throws DomainError unless sigma and mu are positive on [-1, 1].
LogisticWitness logistic_resource_plan(const Target& sigma, const Target& mu, double eps,
                                       double s, const ApproxConfig& cfg = ApproxConfig{});

// sigma_eps = mu u_eps and its derivatives.
double logistic_sigma_eps(const LogisticWitness& w, const Target& mu, double x, int order = 0);

nlohmann::json harnack_to_json(const HarnackWitness& w);
nlohmann::json logistic_to_json(const LogisticWitness& w);

struct MeanValueRow {
  double rho = 0.0;
  double ball = 0.0;
  double sphere = 0.0;
  double ball_error = 0.0;    // against -u''(x)
  double sphere_error = 0.0;
};

// Ball and sphere quotients of `target` at x for each radius.
std::vector<MeanValueRow> mean_value_table(const Target& target, double x,
                                           const std::vector<double>& radii);
// log10(e_k / e_{k+1}) / log10(rho_k / rho_{k+1}), minimised over k.
double observed_order(const std::vector<MeanValueRow>& rows, bool ball);

}  // namespace fraclap
