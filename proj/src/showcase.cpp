#include "fraclap/showcase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fraclap {

namespace {

constexpr int kSamples = 4096;
constexpr double kGolden = 0.6180339887498949;

double open_point(int i, int n) {
  // n points strictly inside (-1, 1).
  return -1.0 + 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
}

double closed_point(int i, int n, double a, double b) {
  if (i == n - 1) return b;
  return a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
}

struct Minimum {
  double x;
  double value;
};

Minimum golden_section(const SHCombo& v, double a, double b, double tol) {
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = v.eval(c), fd = v.eval(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = v.eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = v.eval(d);
    }
  }
  return fc <= fd ? Minimum{c, fc} : Minimum{d, fd};
}

double sampled_c2(const Target& t, int samples) {
  double m = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = closed_point(i, samples, -1.0, 1.0);
    for (int o = 0; o <= 2; ++o) m = std::max(m, std::abs(t.eval(x, o)));
  }
  return m;
}

double sampled_inf(const Target& t, int samples) {
  double m = INFINITY;
  for (int i = 0; i < samples; ++i) m = std::min(m, t.eval(closed_point(i, samples, -1.0, 1.0)));
  return m;
}

}  // namespace

HarnackWitness harnack_counterexample(double s, double eps, const ApproxConfig& cfg) {
  if (!(eps > 0.0 && eps <= 1.0 / 16.0)) {
    throw DomainError("the Harnack construction needs 0 < epsilon <= 1/16");
  }
  ApproxResult res = approximate(parse_target("x2"), eps, s, cfg);
  HarnackWitness w{std::move(res.combo), std::move(res.report)};
  const SHCombo& v = w.v;

  w.v_at_zero = v.eval(0.0);
  w.v_at_minus_half = v.eval(-0.5);
  w.v_at_plus_half = v.eval(0.5);

  // Grid bracket on [-1/2, 1/2], then golden section on the closed form.
  const int n = kSamples + 1;
  int best = 0;
  double best_v = INFINITY;
  for (int i = 0; i < n; ++i) {
    const double fx = v.eval(closed_point(i, n, -0.5, 0.5));
    if (fx < best_v) {
      best_v = fx;
      best = i;
    }
  }
  const double lo = closed_point(std::max(best - 1, 0), n, -0.5, 0.5);
  const double hi = closed_point(std::min(best + 1, n - 1), n, -0.5, 0.5);
  const Minimum m = golden_section(v, lo, hi, 1e-12);
  w.iota = std::min(m.value, best_v);
  w.argmin = m.value <= best_v ? m.x : closed_point(best, n, -0.5, 0.5);

  w.inf_annulus = INFINITY;
  w.sup_inner = -INFINITY;
  w.sup_outer_complement = -INFINITY;
  w.nonneg_margin = INFINITY;
  for (int i = 0; i < kSamples; ++i) {
    const double x = open_point(i, kSamples);
    const double vx = v.eval(x);
    // Every sampled value bounds iota from above.
    w.iota = std::min(w.iota, vx);
    if (std::abs(x) >= 0.5) w.inf_annulus = std::min(w.inf_annulus, vx);
  }
  w.inf_annulus = std::min({w.inf_annulus, w.v_at_minus_half, w.v_at_plus_half});
  for (int i = 0; i < kSamples; ++i) {
    const double x = open_point(i, kSamples);
    const double ux = w.u(x);
    w.nonneg_margin = std::min(w.nonneg_margin, ux);
    w.sup_outer_complement = std::max(w.sup_outer_complement, ux);
    if (std::abs(x) <= 0.5) w.sup_inner = std::max(w.sup_inner, ux);
  }
  w.sup_inner = std::max({w.sup_inner, w.u(-0.5), w.u(0.5)});
  w.inf_inner = w.u(w.argmin);
  w.chain_holds = w.v_at_zero <= 1.0 / 16.0 && w.inf_annulus >= 3.0 / 16.0;

  // Exterior sample on (-t_max, -1), log spaced.
  double reach = 2.0;
  for (double k : v.kinks()) reach = std::max(reach, -k);
  w.exterior_min = INFINITY;
  const int m_ext = kSamples;
  for (int i = 0; i < m_ext; ++i) {
    const double x = -std::exp(std::log(reach) * (static_cast<double>(i) + 0.5) / m_ext);
    const double ux = w.u(x);
    if (ux < w.exterior_min) {
      w.exterior_min = ux;
      w.exterior_argmin = x;
    }
  }
  return w;
}

LogisticWitness logistic_resource_plan(const Target& sigma, const Target& mu, double eps,
                                       double s, const ApproxConfig& cfg) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("epsilon must be positive");
  sigma.validate();
  mu.validate();
  if (!(sampled_inf(sigma, kSamples) > 0.0)) throw DomainError("sigma must be positive on [-1, 1]");
  if (!(sampled_inf(mu, kSamples) > 0.0)) throw DomainError("mu must be positive on [-1, 1]");

  LogisticWitness w{SHCombo(s), {}};
  w.mu_c2 = sampled_c2(mu, kSamples);
  w.eps_prime = eps / (4.0 * (1.0 + w.mu_c2));

  const Target ratio = Target::analytic(
      sigma.name + "/" + mu.name,
      [sigma, mu](double x) { return sigma.eval(x) / mu.eval(x); },
      [sigma, mu](double x) {
        const double m = mu.eval(x);
        return (sigma.eval(x, 1) - sigma.eval(x) / m * mu.eval(x, 1)) / m;
      },
      [sigma, mu](double x) {
        const double m = mu.eval(x), m1 = mu.eval(x, 1);
        const double q = sigma.eval(x) / m;
        const double q1 = (sigma.eval(x, 1) - q * m1) / m;
        return (sigma.eval(x, 2) - 2.0 * q1 * m1 - q * mu.eval(x, 2)) / m;
      });

  ApproxResult res = approximate(ratio, w.eps_prime, s, cfg);
  w.u_eps = std::move(res.combo);
  w.report = std::move(res.report);

  // (mu g)^(i) has at most 2^i terms bounded by ||mu||_C2 ||g||_C2.
  w.sigma_error = 4.0 * w.mu_c2 * w.report.epsilon_total;
  w.sigma_error_sampled =
      kSupInflation *
      c2_distance([&](double x, int o) { return sigma.eval(x, o); },
                  [&](double x, int o) { return logistic_sigma_eps(w, mu, x, o); }, kSamples);

  w.feasibility_margin = INFINITY;
  for (int i = 0; i < kSamples; ++i) {
    const double x = closed_point(i, kSamples, -1.0, 1.0);
    const double u = w.u_eps.eval(x);
    w.feasibility_margin = std::min(w.feasibility_margin, u - logistic_sigma_eps(w, mu, x) / mu.eval(x));
  }

  w.residual_x = w.report.residual_x;
  w.left = w.report.residual;
  for (double x : w.residual_x) {
    const double u = w.u_eps.eval(x);
    w.right.push_back((logistic_sigma_eps(w, mu, x) - mu.eval(x) * u) * u);
  }
  for (double v : w.left) w.left_max = std::max(w.left_max, std::abs(v));
  for (double v : w.right) w.right_max = std::max(w.right_max, std::abs(v));
  return w;
}

double logistic_sigma_eps(const LogisticWitness& w, const Target& mu, double x, int order) {
  switch (order) {
    case 0: return mu.eval(x) * w.u_eps.eval(x);
    case 1: return mu.eval(x, 1) * w.u_eps.eval(x) + mu.eval(x) * w.u_eps.derivative(x, 1);
    case 2:
      return mu.eval(x, 2) * w.u_eps.eval(x) + 2.0 * mu.eval(x, 1) * w.u_eps.derivative(x, 1) +
             mu.eval(x) * w.u_eps.derivative(x, 2);
    default: throw DomainError("derivative order must be 0..2");
  }
}

nlohmann::json harnack_to_json(const HarnackWitness& w) {
  return nlohmann::json{{"iota", w.iota},
                        {"argmin", w.argmin},
                        {"v_at_zero", w.v_at_zero},
                        {"v_at_minus_half", w.v_at_minus_half},
                        {"v_at_plus_half", w.v_at_plus_half},
                        {"inf_annulus", w.inf_annulus},
                        {"inf_inner", w.inf_inner},
                        {"sup_inner", w.sup_inner},
                        {"sup_outer_complement", w.sup_outer_complement},
                        {"nonneg_margin", w.nonneg_margin},
                        {"exterior_min", w.exterior_min},
                        {"exterior_argmin", w.exterior_argmin},
                        {"exterior_negative", w.exterior_min < 0.0},
                        {"chain_holds", w.chain_holds},
                        {"combo", combo_to_json(w.v)},
                        {"report", report_to_json(w.report)}};
}

nlohmann::json logistic_to_json(const LogisticWitness& w) {
  return nlohmann::json{{"mu_c2", w.mu_c2},
                        {"eps_prime", w.eps_prime},
                        {"sigma_error", w.sigma_error},
                        {"sigma_error_sampled", w.sigma_error_sampled},
                        {"feasibility_margin", w.feasibility_margin},
                        {"left_max", w.left_max},
                        {"right_max", w.right_max},
                        {"residual_x", w.residual_x},
                        {"left", w.left},
                        {"right", w.right},
                        {"u_eps", combo_to_json(w.u_eps)},
                        {"report", report_to_json(w.report)}};
}

std::vector<MeanValueRow> mean_value_table(const Target& target, double x,
                                           const std::vector<double>& radii) {
  const double exact = -target.eval(x, 2);
  std::vector<MeanValueRow> rows;
  for (double rho : radii) {
    MeanValueRow r;
    r.rho = rho;
    r.ball = mean_value_ball(target.f, x, rho);
    r.sphere = mean_value_sphere(target.f, x, rho);
    r.ball_error = std::abs(r.ball - exact);
    r.sphere_error = std::abs(r.sphere - exact);
    rows.push_back(r);
  }
  return rows;
}

double observed_order(const std::vector<MeanValueRow>& rows, bool ball) {
  double order = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < rows.size(); ++k) {
    const double e0 = ball ? rows[k].ball_error : rows[k].sphere_error;
    const double e1 = ball ? rows[k + 1].ball_error : rows[k + 1].sphere_error;
    order = std::min(order, std::log10(e0 / e1) / std::log10(rows[k].rho / rows[k + 1].rho));
  }
  return order;
}

}  // namespace fraclap
