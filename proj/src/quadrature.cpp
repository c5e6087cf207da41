#include "fraclap/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace fraclap {

GaussRule gauss_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

const GaussRule& gauss_legendre_8() {
  static const GaussRule rule = gauss_legendre(8);
  return rule;
}

const GaussRule& gauss_legendre_16() {
  static const GaussRule rule = gauss_legendre(16);
  return rule;
}

TanhSinh::TanhSinh(long bits, int max_level)
    : bits_(bits), max_level_(max_level) {
  // Beyond t_max the distance to the endpoint drops below 2^-bits.
  t_max_ = std::asinh(static_cast<double>(bits + 8) * std::numbers::ln2 /
                      std::numbers::pi) +
           0.25;
}

const std::vector<TanhSinh::Node>& TanhSinh::level(int k) const {
  while (static_cast<int>(levels_.size()) <= k) {
    const int lev = static_cast<int>(levels_.size());
    const long work = bits_ + 16;
    const BigFloat half_pi = ldexp(BigFloat::pi(work), -1);
    std::vector<Node> nodes;
    const double h = std::ldexp(1.0, -lev);
    const long count = static_cast<long>(std::ceil(t_max_ / h));
    const long step = lev == 0 ? 1 : 2;
    for (long j = lev == 0 ? 0 : 1; j <= count; j += step) {
      BigFloat t(static_cast<double>(j) * h, work);
      // x = tanh(v), v = (pi/2) sinh t; keep 1 - x = 2 / (1 + e^{2v}).
      const BigFloat e2v = exp(ldexp(half_pi * sinh(t), 1));
      const BigFloat one_plus = e2v + 1.0;
      BigFloat complement = 2.0 / one_plus;
      // dx/dt = (pi/2) cosh t / cosh^2 v = 2 pi cosh t e^{2v} / (1+e^{2v})^2
      BigFloat weight = ldexp(half_pi, 2) * cosh(t) * e2v / (one_plus * one_plus);
      nodes.push_back(Node{std::move(t), std::move(complement), std::move(weight)});
    }
    levels_.push_back(std::move(nodes));
  }
  return levels_[static_cast<std::size_t>(k)];
}

TanhSinh::Result TanhSinh::integrate(
    const std::function<BigFloat(const BigFloat&)>& f, const BigFloat& a,
    const BigFloat& b, double tolerance) const {
  const long work = bits_ + 16;
  const BigFloat A = a.with_precision(work);
  const BigFloat B = b.with_precision(work);
  const BigFloat half_width = ldexp(B - A, -1);

  Result res;
  BigFloat sum(0.0, work);
  BigFloat previous(0.0, work);
  for (int k = 0; k <= max_level_; ++k) {
    for (const Node& n : level(k)) {
      const BigFloat offset = half_width * n.complement;
      const bool centre = n.t.is_zero();
      // x >= 0 side sits near b, x < 0 side near a.
      BigFloat term = f(B - offset) * n.weight;
      ++res.evaluations;
      if (!centre) {
        term += f(A + offset) * n.weight;
        ++res.evaluations;
      }
      sum += term;
    }
    BigFloat current = ldexp(sum * half_width, -k);
    res.levels = k;
    if (k > 0) {
      res.error = abs(current - previous).to_double();
      if (res.error <= tolerance && k >= 3) {
        res.value = std::move(current);
        return res;
      }
    }
    previous = std::move(current);
  }
  res.value = std::move(previous);
  return res;
}

}  // namespace fraclap
