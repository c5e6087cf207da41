// Acceptance runner: one PASS/FAIL line per criterion.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"

#include "fraclap/approx.hpp"
#include "fraclap/cli.hpp"
#include "fraclap/frackernel.hpp"
#include "fraclap/sbasis.hpp"
#include "fraclap/showcase.hpp"

using namespace fraclap;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

QuadConfig bounded() {
  QuadConfig q;
  q.tail_growth_exponent = 0.0;
  return q;
}

Verdict block_harmonicity() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double s : {0.25, 0.5, 0.75}) {
    for (double t : {1.0, 2.0, 5.0}) {
      const SHBlock b{t, BigFloat(1.0), 1.0};
      QuadConfig q;
      q.tail_growth_exponent = s;
      const double kink = -t;
      for (int i = 0; i < 21; ++i) {
        const double x = -0.9 * t + (5.0 + 0.9 * t) * i / 20.0;
        const double v = frac_laplacian([&](double y) { return block_eval(b, y, s); }, x, FracParams{s}, q,
                                        std::span<const double>(&kink, 1));
        worst = std::max(worst, std::abs(v) / (1e-4 * (1.0 + std::pow(t, s))));
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1.0 && secs <= 5.0,
          fmt("max |residual| / (1e-4 (1+t^s)) = %.3g over 189 points, %.2f s (limit 5 s)", worst, secs)};
}

Verdict approximation_theorem() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Case {
    const char* target;
    double eps;
  };
  bool ok = true;
  std::string detail;
  for (const Case& c : {Case{"x2", 1.0 / 16.0}, Case{"sin", 0.1}, Case{"exp", 0.1}, Case{"const:2.5", 0.1}}) {
    const Target t = parse_target(c.target);
    const ApproxResult r = approximate(t, c.eps, 0.5);
    double e[3] = {0.0, 0.0, 0.0};
    const int n = 8191;
    for (int i = 0; i < n; ++i) {
      const double x = -1.0 + 2.0 * (i + 0.5) / n;
      for (int o = 0; o <= 2; ++o) e[o] = std::max(e[o], std::abs(t.eval(x, o) - r.combo.derivative(x, o)));
    }
    const double resampled = std::max({e[0], e[1], e[2]});
    const bool pass = r.report.epsilon_total <= c.eps && resampled <= 1.01 * r.report.epsilon_total &&
                      r.report.residual_max <= 1e-3;
    ok = ok && pass;
    detail += fmt("%s%s: total %.3g <= %.3g, resampled C0/C1/C2 %.2g/%.2g/%.2g, residual %.2g",
                  detail.empty() ? "" : "; ", c.target, r.report.epsilon_total, c.eps, e[0], e[1], e[2],
                  r.report.residual_max);
  }
  const double secs = seconds_since(t0);
  return {ok && secs <= 30.0, detail + fmt("; %.1f s (limit 30 s)", secs)};
}

Verdict harnack_numbers() {
  const HarnackWitness w = harnack_counterexample(0.5);
  const bool ok = w.v_at_zero <= 1.0 / 16.0 && w.v_at_minus_half >= 3.0 / 16.0 &&
                  w.v_at_plus_half >= 3.0 / 16.0 && w.nonneg_margin >= 0.0 && w.inf_inner <= 1e-10 &&
                  w.sup_outer_complement >= 1.0 / 8.0;
  return {ok, fmt("v(0) = %.3g, v(-1/2) = %.6g, v(1/2) = %.6g, min u on 4096 samples = %.3g, "
                  "inf_inner = %.3g, sup u = %.6g",
                  w.v_at_zero, w.v_at_minus_half, w.v_at_plus_half, w.nonneg_margin, w.inf_inner,
                  w.sup_outer_complement)};
}

Verdict derivative_formula() {
  double worst = 0.0;
  bool nonzero = true;
  for (double s : {0.25, 0.5, 0.75}) {
    for (double t : {1.0, 2.0, 5.0}) {
      for (int j = 0; j <= 4; ++j) {
        const double v = block_derivative_at_zero(t, j, s);
        double fd;
        if (j == 0) {
          fd = std::pow(t, s);
        } else {
          const double h = 1e-3 * t;
          const SHBlock b{t, BigFloat(1.0), 1.0};
          auto g = [&](double x) { return block_derivative(b, x, j - 1, s); };
          fd = (g(-2 * h) - 8 * g(-h) + 8 * g(h) - g(2 * h)) / (12 * h);
        }
        worst = std::max(worst, std::abs(v - fd) / std::abs(v));
        if (j >= 1 && v == 0.0) nonzero = false;
      }
    }
  }
  return {worst <= 1e-5 && nonzero,
          fmt("max relative deviation from finite differences %.2g (limit 1e-5), nonzero for j >= 1: %s", worst,
              nonzero ? "yes" : "no")};
}

Verdict derivative_matching() {
  double worst_res = 0.0, worst_vdm = 0.0;
  for (double s : {0.25, 0.5, 0.75}) {
    for (int J = 0; J <= 8; ++J) {
      const auto nodes = default_nodes(J);
      std::vector<double> d(static_cast<std::size_t>(J + 1));
      double dmax = 0.0;
      for (int i = 0; i <= J; ++i) {
        d[i] = std::sin(0.7 * i + s) * std::pow(2.0, i);
        dmax = std::max(dmax, std::abs(d[i]));
      }
      const DerivMatch m = solve_derivative_match(DerivSpec::from_doubles(d), nodes, s);
      worst_res = std::max(worst_res, m.residual / (1e-8 * (1.0 + dmax)));
      const auto M = scaled_system_matrix(nodes, s);
      for (int i = 0; i <= J; ++i)
        for (int k = 0; k <= J; ++k) worst_vdm = std::max(worst_vdm, std::abs(M[i][k] - std::pow(1.0 / nodes[k], i)));
    }
  }
  return {worst_res <= 1.0 && worst_vdm <= 1e-12,
          fmt("max residual / (1e-8 (1+max|d|)) = %.2g, max Vandermonde deviation %.2g (limit 1e-12)", worst_res,
              worst_vdm)};
}

Verdict mean_value() {
  const RealFunction sq = [](double x) { return x * x; };
  const double ball = mean_value_ball(sq, 0.3, 1e-2);
  double sphere_dev = 0.0;
  for (double rho : {1e-1, 1e-2, 1e-3}) {
    sphere_dev = std::max(sphere_dev, std::abs(mean_value_sphere(sq, 0.0, rho) + 2.0));
    // Away from the origin the quotient is exact up to rounding of u.
    const double slack = 8.0 * 2.220446049250313e-16 * (0.3 + rho) * (0.3 + rho) / (rho * rho);
    sphere_dev = std::max(sphere_dev, std::abs(mean_value_sphere(sq, 0.3, rho) + 2.0) - slack);
  }
  const auto rows = mean_value_table(parse_target("sin"), 0.3, {1e-1, 1e-2, 1e-3});
  const double ob = observed_order(rows, true), os = observed_order(rows, false);
  return {std::abs(ball + 2.0) <= 1e-6 && sphere_dev <= 0.0 && ob >= 1.9 && os >= 1.9,
          fmt("ball(x^2, 1e-2) + 2 = %.2g, sphere excess over rounding %.2g, sin order ball %.3f sphere %.3f",
              ball + 2.0, sphere_dev, ob, os)};
}

Verdict operator_identities() {
  const RealFunction gauss = [](double x) { return std::exp(-x * x); };
  double dv = 0.0, sc = 0.0;
  for (double s : {0.25, 0.5, 0.75}) {
    for (double x : {-1.2, 0.0, 0.4, 2.0}) {
      dv = std::max(dv, rel(frac_laplacian(gauss, x, FracParams{s}, bounded()),
                            frac_laplacian_pv(gauss, x, FracParams{s}, bounded())));
    }
    for (double r : {0.5, 2.0}) {
      const RealFunction g = [r](double x) { return std::exp(-r * r * x * x); };
      for (double x : {0.0, 0.3, 1.1}) {
        sc = std::max(sc, rel(frac_laplacian(g, x, FracParams{s}, bounded()),
                              std::pow(r, 2.0 * s) * frac_laplacian(gauss, r * x, FracParams{s}, bounded())));
      }
    }
  }
  int positive = 0, total = 0;
  for (const auto& b : oracle::bumps()) {
    for (double s : {0.25, 0.5, 0.75}) {
      ++total;
      if (frac_laplacian(b.f, b.peak, FracParams{s}, bounded()) > 0.0) ++positive;
    }
  }
  return {dv <= 1e-8 && sc <= 1e-6 && positive == total,
          fmt("singular vs principal-value %.2g (limit 1e-8), scaling %.2g (limit 1e-6), positive at maxima %d/%d",
              dv, sc, positive, total)};
}

Verdict logistic() {
  const Target one = parse_target("const:1");
  const LogisticWitness w = logistic_resource_plan(one, one, 0.05, 0.5);
  const bool ok = w.sigma_error <= 0.05 && w.feasibility_margin >= 0.0 && w.left.size() == 21 &&
                  w.left_max <= 1e-3 && w.right_max <= 1e-3;
  return {ok, fmt("sigma_error %.3g (limit 0.05), feasibility margin %.3g, |left| <= %.2g, |right| <= %.2g at %zu points",
                  w.sigma_error, w.feasibility_margin, w.left_max, w.right_max, w.left.size())};
}

std::map<std::string, std::string> run_commands(const fs::path& dir) {
  const fs::path old = fs::current_path();
  fs::create_directories(dir);
  fs::current_path(dir);
  const std::vector<std::vector<std::string>> commands = {
      {"fraclap", "--target", "gauss", "--s", "0.4", "--grid", "11"},
      {"fraclap", "--target", "block:t=2,c=1.5,r=1", "--s", "0.6", "--grid", "11", "--output", "block.csv"},
      {"approximate", "--target", "sin", "--epsilon", "0.1", "--s", "0.5"},
      {"approximate", "--target", "exp", "--epsilon", "1e-12", "--max-degree", "3", "--output", "fail"},
      {"demo", "harnack", "--s", "0.5"},
      {"demo", "logistic", "--sigma", "const:1", "--mu", "const:1", "--epsilon", "0.05"},
      {"demo", "meanvalue", "--target", "sin"},
  };
  std::map<std::string, std::string> files;
  for (const auto& c : commands) {
    std::ostringstream out, err;
    const int code = cli::run(c, out, err);
    files["exit:" + c[0] + (c.size() > 1 ? c[1] : "")] += std::to_string(code) + out.str();
  }
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    files[e.path().filename().string()] = std::string(std::istreambuf_iterator<char>(in), {});
  }
  fs::current_path(old);
  return files;
}

Verdict determinism() {
  const fs::path base = fs::temp_directory_path() / ("fraclap_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(base);
  const auto a = run_commands(base / "a");
  const auto b = run_commands(base / "b");
  fs::remove_all(base);
  std::size_t artifacts = 0;
  bool same = a.size() == b.size();
  for (const auto& [k, v] : a) {
    if (!k.starts_with("exit:")) ++artifacts;
    const auto it = b.find(k);
    if (it == b.end() || it->second != v) same = false;
  }
  return {same && artifacts >= 10,
          fmt("%zu artifacts from 7 commands compared byte for byte: %s", artifacts, same ? "identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"block s-harmonicity", block_harmonicity},
      {"C2 approximation by s-harmonic functions", approximation_theorem},
      {"Harnack counterexample inequalities", harnack_numbers},
      {"block derivative formula", derivative_formula},
      {"derivative-matching solve", derivative_matching},
      {"mean-value oracles", mean_value},
      {"operator identities", operator_identities},
      {"logistic resource plan", logistic},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("%s %zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
