#include "fraclap/approx.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

namespace fraclap {

namespace {

constexpr double kMonomialChop = 1e-15;

double grid_point(int i, int n) {
  if (i == n - 1) return 1.0;
  return -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
}

// Coefficient precision for degree j at scale r: enough to carry
// sum|a| r^{-j} down to well below the defect, plus the condition number.
long precision_for(const SHCombo& H, int j, double r, double condition) {
  double mag = 0.0;
  for (const SHBlock& b : H.blocks()) mag += abs(b.c).to_double() * std::pow(b.t + 1.0, H.s());
  const double lg = std::log2(1.0 + mag) + j * std::log2(1.0 / r);
  return 80 + static_cast<long>(std::ceil(lg)) +
         static_cast<long>(std::ceil(std::log2(std::max(condition, 1.0)))) + 16;
}

// Sampled C^2 norm of (block group) - c x^j; the piece is a single group.
double defect_norm(const SHCombo& piece, const BigFloat& c, int j, int samples) {
  const long bits = std::max(piece.precision_bits(), 128L);
  const Exponent se(piece.s());
  const BigFloat sb = se.as_big(bits);
  const BigFloat cj = c.with_precision(bits);
  double m = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double xd = grid_point(i, samples);
    const BigFloat x(xd, bits);
    BigFloat v0(0.0, bits), v1(0.0, bits), v2(0.0, bits);
    double r = 1.0;
    for (const SHBlock& b : piece.blocks()) {
      r = b.r;
      const BigFloat base = BigFloat(b.r, bits) * x + BigFloat(b.t, bits);
      const BigFloat p = b.c.with_precision(bits) * se.apply(base);
      const BigFloat q = p / base;
      v0 += p;
      v1 += q;
      v2 += q / base;
    }
    const BigFloat rb(r, bits);
    v1 *= rb * sb;
    v2 *= rb * rb * sb * (sb - 1.0);
    // Subtract the monomial and its derivatives.
    const BigFloat xj2 = j >= 2 ? pow(x, static_cast<long>(j - 2)) : BigFloat(0.0, bits);
    const BigFloat xj1 = j >= 1 ? pow(x, static_cast<long>(j - 1)) : BigFloat(0.0, bits);
    const BigFloat xj = pow(x, static_cast<long>(j));
    v0 -= cj * xj;
    if (j >= 1) v1 -= cj * xj1 * static_cast<double>(j);
    if (j >= 2) v2 -= cj * xj2 * static_cast<double>(j * (j - 1));
    m = std::max({m, abs(v0).to_double(), abs(v1).to_double(), abs(v2).to_double()});
  }
  return kSupInflation * m;
}

struct DegreeWork {
  int j;
  BigFloat c;
  DerivSpec spec;
  DerivMatch match;
  double r;
  long bits;
  SHCombo piece;
};

}  // namespace

SharmonicBuild build_sharmonic(const ChebPoly& poly, double eps_half, double s,
                               const NodeRule& node_rule, int max_halvings, int samples) {
  if (!(eps_half > 0.0)) throw DomainError("epsilon must be positive");
  FracParams{s}.validate();
  const int N = poly.degree();
  if (N < 3) throw DomainError("polynomial degree must be padded to at least 3");
  const std::vector<BigFloat> c = poly.monomial();

  SharmonicBuild out{SHCombo(s), {}, node_rule(N), 0.0, 0.0, 0};
  BigFloat cmax(0.0, 64);
  for (const auto& cj : c) cmax = abs(cj) > cmax ? abs(cj) : cmax;

  std::vector<DegreeWork> work;
  for (int j = 0; j <= N; ++j) {
    const BigFloat& cj = c[static_cast<std::size_t>(j)];
    if (cj.is_zero()) continue;
    if (abs(cj) <= cmax * kMonomialChop) {
      // sup over [-1, 1] of |x^j|, |j x^{j-1}|, |j (j-1) x^{j-2}|.
      const double growth = std::max({1.0, double(j), double(j) * (j - 1)});
      out.epsilon_chop += abs(cj).to_double() * growth;
      continue;
    }
    DerivSpec spec;
    spec.values.assign(static_cast<std::size_t>(N + 1), BigFloat(0.0, 53));
    BigFloat fact(1.0, cj.precision());
    for (int i = 2; i <= j; ++i) fact *= static_cast<double>(i);
    spec.values[static_cast<std::size_t>(j)] = cj * fact;
    DerivMatch m = solve_derivative_match(spec, out.nodes, s);
    const double S = derivative_sup_bound(m.combo, N + 1);
    // The scale uses the full epsilon, as the polynomial step takes the other half.
    const double r = defect_scale(2.0 * eps_half, N, S);
    work.push_back(DegreeWork{j, cj, std::move(spec), std::move(m), r, 0, SHCombo(s)});
    work.back().bits = 0;
    out.degrees.push_back(DegreeDiagnostics{j, cj.to_double(), r, work.back().match.condition,
                                            work.back().match.residual, S, 0, 0.0});
  }

  for (int attempt = 0;; ++attempt) {
    double total = out.epsilon_chop;
    for (std::size_t k = 0; k < work.size(); ++k) {
      DegreeWork& w = work[k];
      const long bits = precision_for(w.match.combo, w.j, w.r, w.match.condition);
      if (bits > w.match.precision_bits) {
        w.match = solve_derivative_match(w.spec, out.nodes, s, bits);
      }
      w.bits = std::max(bits, w.match.precision_bits);
      w.piece = rescale_with(w.match.combo, w.j, w.r, w.bits);
      DegreeDiagnostics& d = out.degrees[k];
      d.r_j = w.r;
      d.precision_bits = w.bits;
      d.solve_residual = w.match.residual;
      d.defect_norm = defect_norm(w.piece, w.c, w.j, samples);
      total += d.defect_norm;
    }
    out.epsilon_defect = total;
    out.halvings = attempt;
    if (total <= eps_half) break;
    if (attempt >= max_halvings) {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "defect sum %.3g stays above %.3g after %d halvings of the scales",
                    total, eps_half, max_halvings);
      throw ApproximationError(buf, total);
    }
    for (auto& w : work) w.r *= 0.5;
  }

  for (auto& w : work) out.combo = out.combo + w.piece;
  return out;
}

ApproxResult approximate(const Target& target, double eps, double s, const ApproxConfig& cfg) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("epsilon must be positive");
  FracParams{s}.validate();
  if (!(cfg.poly_fraction > 0.0 && cfg.poly_fraction < 1.0)) {
    throw ConfigError("poly_fraction must lie in (0, 1)");
  }
  if (cfg.residual_points < 0) throw ConfigError("residual_points must be non-negative");
  if (cfg.certify_points < 2) throw ConfigError("certify_points must be at least 2");
  if (!(cfg.residual_extent > 0.0 && cfg.residual_extent < 1.0)) {
    throw ConfigError("residual_extent must lie in (0, 1)");
  }

  ApproxReport rep;
  rep.target = target.name;
  rep.s = s;
  rep.epsilon_requested = eps;

  const double eps_poly = cfg.poly_fraction * eps;
  const double eps_defect = eps - eps_poly;

  rep.stage = "chebyshev";
  std::optional<ChebFit> fit;
  try {
    fit.emplace(cheb_fit(target, eps_poly, cfg.max_degree, cfg.certify_points));
  } catch (const ApproximationError& e) {
    rep.message = e.what();
    throw ApproxFailure(e.what(), e.best_bound(), rep);
  }
  rep.epsilon_poly = fit->epsilon_poly;
  rep.degree = fit->poly.degree();
  rep.fitted_degree = fit->fitted_degree;
  rep.chebyshev.assign(fit->poly.coefficients().begin(), fit->poly.coefficients().end());
  for (const auto& c : fit->poly.monomial()) {
    rep.monomial.push_back(c.to_double());
    rep.c_eps = std::max(rep.c_eps, std::abs(rep.monomial.back()));
  }

  rep.stage = "sharmonic";
  std::optional<SharmonicBuild> build;
  try {
    build.emplace(build_sharmonic(fit->poly, eps_defect, s, cfg.nodes, cfg.max_halvings,
                                  cfg.certify_points));
  } catch (const ApproximationError& e) {
    rep.message = e.what();
    throw ApproxFailure(e.what(), rep.epsilon_poly + e.best_bound(), rep);
  } catch (const ConditioningError& e) {
    rep.message = e.what();
    throw ApproxFailure(e.what(), INFINITY, rep);
  }
  rep.nodes = build->nodes;
  rep.degrees = build->degrees;
  rep.halvings = build->halvings;
  rep.blocks = build->combo.size();
  rep.epsilon_defect = build->epsilon_defect;
  // Sampled differences are formed in double precision.
  const double pnorm = fit->poly.c2_norm(cfg.certify_points);
  rep.epsilon_rounding = 16.0 * std::numeric_limits<double>::epsilon() * pnorm;
  rep.epsilon_total = rep.epsilon_poly + rep.epsilon_defect + rep.epsilon_rounding;

  rep.stage = "budget";
  if (!(rep.epsilon_total <= eps)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "certified total %.6g exceeds epsilon %.6g",
                  rep.epsilon_total, eps);
    rep.message = buf;
    throw ApproxFailure(buf, rep.epsilon_total, rep);
  }

  const SHCombo& v = build->combo;
  for (int i = 0; i < cfg.certify_points; ++i) {
    rep.combo_sup = std::max(rep.combo_sup, std::abs(v.eval(grid_point(i, cfg.certify_points))));
  }
  rep.stage = "residual";
  for (int i = 0; i < cfg.residual_points; ++i) {
    const double x = cfg.residual_points == 1
                         ? 0.0
                         : -cfg.residual_extent +
                               2.0 * cfg.residual_extent * i / (cfg.residual_points - 1);
    const MpFracEvaluation r = combo_fraclap_mp(v, x);
    rep.residual_x.push_back(x);
    rep.residual.push_back(r.value);
    rep.residual_max = std::max(rep.residual_max, std::abs(r.value));
    rep.residual_quadrature_error = std::max(rep.residual_quadrature_error, r.error);
  }
  rep.stage = "done";
  rep.success = true;
  return ApproxResult{build->combo, std::move(rep)};
}

nlohmann::json report_to_json(const ApproxReport& r) {
  using nlohmann::json;
  json degrees = json::array();
  for (const auto& d : r.degrees) {
    degrees.push_back(json{{"j", d.j},
                           {"c_j", d.c_j},
                           {"r_j", d.r_j},
                           {"condition", d.condition},
                           {"solve_residual", d.solve_residual},
                           {"sup_bound", d.sup_bound},
                           {"precision_bits", d.precision_bits},
                           {"defect_norm", d.defect_norm}});
  }
  return json{{"target", r.target},
              {"s", r.s},
              {"success", r.success},
              {"stage", r.stage},
              {"message", r.message},
              {"epsilon_requested", r.epsilon_requested},
              {"epsilon_poly", r.epsilon_poly},
              {"epsilon_defect", r.epsilon_defect},
              {"epsilon_rounding", r.epsilon_rounding},
              {"epsilon_total", r.epsilon_total},
              {"degree", r.degree},
              {"fitted_degree", r.fitted_degree},
              {"chebyshev_coefficients", r.chebyshev},
              {"monomial_coefficients", r.monomial},
              {"C_eps", r.c_eps},
              {"nodes", r.nodes},
              {"halvings", r.halvings},
              {"blocks", r.blocks},
              {"per_degree", degrees},
              {"combo_sup", r.combo_sup},
              {"residual_max", r.residual_max},
              {"residual_quadrature_error", r.residual_quadrature_error},
              {"residual_x", r.residual_x},
              {"residual", r.residual}};
}

}  // namespace fraclap
