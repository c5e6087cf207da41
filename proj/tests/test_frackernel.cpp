#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"

#include "fraclap/errors.hpp"
#include "fraclap/frackernel.hpp"
#include "fraclap/sbasis.hpp"

using namespace fraclap;

namespace {

const RealFunction gauss = [](double x) { return std::exp(-x * x); };

QuadConfig bounded() {
  QuadConfig q;
  q.tail_growth_exponent = 0.0;
  return q;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("Gaussian matches the hypergeometric closed form") {
  for (const auto& p : oracle::kGauss) {
    CAPTURE(p.s);
    CAPTURE(p.x);
    const double v = frac_laplacian(gauss, p.x, FracParams{p.s}, bounded());
    CHECK(rel(v, p.value) < 1e-8);
  }
}

TEST_CASE("block to the left of its kink matches the beta integral") {
  // For x < -t the block vanishes at x, so the value is
  // -2 int_0^inf w^s (w + d)^(-1-2s) dw = -2 B(1+s, s) d^(-s), d = -t - x.
  for (double s : {0.25, 0.5, 0.75}) {
    const double t = 2.0, x = -3.5, d = -t - x;
    const SHBlock b{t, BigFloat(1.0), 1.0};
    QuadConfig q;
    q.tail_growth_exponent = s;
    const double kink = -t;
    const double v = frac_laplacian([&](double y) { return block_eval(b, y, s); }, x, FracParams{s}, q,
                                    std::span<const double>(&kink, 1));
    const double exact = -2.0 * std::beta(1.0 + s, s) * std::pow(d, -s);
    CAPTURE(s);
    CHECK(rel(v, exact) < 1e-7);
  }
}

TEST_CASE("blocks are s-harmonic right of the kink") {
  for (double s : {0.25, 0.5, 0.75}) {
    for (double t : {1.0, 2.0, 5.0}) {
      const SHBlock b{t, BigFloat(1.0), 1.0};
      QuadConfig q;
      q.tail_growth_exponent = s;
      const double kink = -t;
      for (double x : {-0.9 * t, -0.5 * t, 0.0, 2.0, 5.0}) {
        const double v = frac_laplacian([&](double y) { return block_eval(b, y, s); }, x, FracParams{s},
                                        q, std::span<const double>(&kink, 1));
        CHECK(std::abs(v) <= 1e-4 * (1.0 + std::pow(t, s)));
      }
    }
  }
}

TEST_CASE("singular-integral and principal-value forms agree") {
  for (double s : {0.25, 0.5, 0.75}) {
    for (double x : {-1.0, 0.0, 0.4}) {
      const double a = frac_laplacian(gauss, x, FracParams{s}, bounded());
      const double b = frac_laplacian_pv(gauss, x, FracParams{s}, bounded());
      CHECK(rel(a, b) < 1e-8);
    }
  }
}

TEST_CASE("scaling and translation") {
  for (double s : {0.25, 0.5, 0.75}) {
    for (double r : {0.5, 2.0}) {
      const RealFunction scaled = [r](double x) { return std::exp(-r * r * x * x); };
      for (double x : {0.0, 0.3, 1.1}) {
        const double lhs = frac_laplacian(scaled, x, FracParams{s}, bounded());
        const double rhs = std::pow(r, 2.0 * s) * frac_laplacian(gauss, r * x, FracParams{s}, bounded());
        CHECK(rel(lhs, rhs) < 1e-6);
      }
    }
    const RealFunction shifted = [](double x) { return std::exp(-(x - 0.8) * (x - 0.8)); };
    CHECK(rel(frac_laplacian(shifted, 1.1, FracParams{s}, bounded()),
              frac_laplacian(gauss, 0.3, FracParams{s}, bounded())) < 1e-8);
  }
}

TEST_CASE("linearity") {
  const RealFunction g2 = [](double x) { return 1.0 / (1.0 + x * x); };
  const RealFunction mix = [&](double x) { return 3.0 * gauss(x) - 0.5 * g2(x) + 7.0; };
  const FracParams p{0.6};
  for (double x : {-0.7, 0.2}) {
    const double lhs = frac_laplacian(mix, x, p, bounded());
    const double rhs = 3.0 * frac_laplacian(gauss, x, p, bounded()) - 0.5 * frac_laplacian(g2, x, p, bounded());
    CHECK(std::abs(lhs - rhs) < 1e-8 * std::abs(rhs));
  }
}

TEST_CASE("constants are annihilated") {
  const RealFunction one = [](double) { return 1.0; };
  for (double s : {0.1, 0.5, 0.9}) CHECK(frac_laplacian(one, 0.3, FracParams{s}, bounded()) == 0.0);
}

TEST_CASE("positive at strict maxima, negative at a strict minimum") {
  for (const auto& b : oracle::bumps()) {
    for (double s : {0.25, 0.75}) {
      CAPTURE(b.name);
      CHECK(frac_laplacian(b.f, b.peak, FracParams{s}, bounded()) > 0.0);
    }
  }
  const RealFunction well = [](double x) { return 1.0 - std::exp(-x * x); };
  CHECK(frac_laplacian(well, 0.0, FracParams{0.5}, bounded()) < 0.0);
}

TEST_CASE("refinement converges") {
  const FracParams p{0.5};
  const double exact = oracle::kGauss[5].value;  // s = 0.5, x = 0.5
  double prev = std::numeric_limits<double>::infinity();
  for (int m : {256, 1024, 4096}) {
    QuadConfig q = bounded();
    q.mid_points = m;
    const double err = std::abs(frac_laplacian(gauss, 0.5, p, q) - exact);
    // Stops improving at the rounding floor near 1e-12.
    CHECK(err <= prev * 1.01 + 1e-11);
    prev = err;
  }
  CHECK(prev < 1e-9);
}

TEST_CASE("evaluation breakdown and tail bounds") {
  const FracEvaluation ev = frac_laplacian_eval(gauss, 0.2, FracParams{0.5}, bounded());
  CHECK(ev.value == doctest::Approx(ev.near + ev.mid + ev.tail).epsilon(1e-14));
  CHECK(ev.tail_halfwidth >= 0.0);
  CHECK(std::abs(ev.tail) <= ev.tail_envelope);
  CHECK(ev.evaluations > 0);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(frac_laplacian(gauss, 0.0, FracParams{1.0}, bounded()), ConfigError);
  CHECK_THROWS_AS(frac_laplacian(gauss, 0.0, FracParams{0.0}, bounded()), ConfigError);
  QuadConfig steep;
  steep.tail_growth_exponent = 1.0;
  CHECK_THROWS_AS(frac_laplacian(gauss, 0.0, FracParams{0.5}, steep), ConfigError);
  const RealFunction bad = [](double x) { return x > 3.0 ? std::nan("") : 0.0; };
  CHECK_THROWS_AS(frac_laplacian(bad, 0.0, FracParams{0.5}, bounded()), EvaluationError);
  const double kink = 0.0;
  CHECK_THROWS_AS(frac_laplacian(gauss, 0.0, FracParams{0.5}, bounded(), std::span<const double>(&kink, 1)),
                  DomainError);
}

TEST_CASE("mean-value quotients") {
  const RealFunction sq = [](double x) { return x * x; };
  CHECK(std::abs(mean_value_ball(sq, 0.3, 1e-2) + 2.0) < 1e-6);
  CHECK(mean_value_sphere(sq, 0.0, 1e-3) == -2.0);
  CHECK(std::abs(mean_value_sphere(sq, 0.3, 1e-3) + 2.0) < 1e-9);

  const RealFunction sn = [](double x) { return std::sin(x); };
  const double x = 0.3, exact = std::sin(x);
  std::vector<double> eb, es;
  for (double rho : {1e-1, 1e-2, 1e-3}) {
    eb.push_back(std::abs(mean_value_ball(sn, x, rho) - exact));
    es.push_back(std::abs(mean_value_sphere(sn, x, rho) - exact));
  }
  for (int k = 0; k < 2; ++k) {
    CHECK(std::log10(eb[k] / eb[k + 1]) >= 1.9);
    CHECK(std::log10(es[k] / es[k + 1]) >= 1.9);
  }
}
