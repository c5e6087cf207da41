#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>

#include "fraclap/errors.hpp"
#include "fraclap/quadrature.hpp"
#include "fraclap/sbasis.hpp"

namespace fraclap {

namespace {

constexpr long kGuardBits = 32;
constexpr int kMaxLevel = 9;
// Absolute accuracy aimed at for each group's contribution.
constexpr double kGroupTarget = 1e-14;

const TanhSinh& rule_for(long bits) {
  thread_local std::map<long, std::unique_ptr<TanhSinh>> cache;
  auto& slot = cache[bits];
  if (!slot) slot = std::make_unique<TanhSinh>(bits, kMaxLevel);
  return *slot;
}

struct UnitGroup {
  std::vector<BigFloat> c;
  std::vector<BigFloat> a;  // y0 + t_b, distance from the evaluation point to each kink
  Exponent s;
  long bits;

  // sum_b c_b (a_b + z)_+^s
  BigFloat shifted(const BigFloat& z) const {
    BigFloat acc(0.0, bits);
    for (std::size_t b = 0; b < c.size(); ++b) {
      const BigFloat base = a[b] + z;
      if (base.sign() > 0) acc += c[b] * s.apply(base);
    }
    return acc;
  }
};

}  // namespace

MpFracEvaluation combo_fraclap_mp(const SHCombo& v, double x) {
  MpFracEvaluation out;
  const double s = v.s();
  const Exponent se(s);
  const Exponent two_s(2.0 * s);
  const Exponent tail_map = se.reciprocal_negated();

  for (std::size_t gi = 0; gi < v.groups().size(); ++gi) {
    const SHCombo::Group& g = v.groups()[gi];
    const long bits = std::max(g.precision, 96L) + kGuardBits;
    UnitGroup u{{}, {}, se, bits};
    // The group is sum c_b (r x + t_b)_+^s = G(r x); its fractional
    // Laplacian at x is r^{2s} times that of G at y0 = r x.
    const BigFloat y0 = BigFloat(g.r, bits) * BigFloat(x, bits);
    for (std::size_t m : g.members) {
      const SHBlock& b = v.blocks()[m];
      BigFloat a = y0 + BigFloat(b.t, bits);
      if (a.sign() <= 0) {
        throw DomainError("residual requested at or left of the kink " +
                          std::to_string(-b.t / b.r));
      }
      u.c.push_back(b.c.with_precision(bits));
      u.a.push_back(std::move(a));
    }
    const double rs = std::pow(g.r, 2.0 * s);
    // The accuracy budget is shared by the core, the segments and the tail.
    std::vector<BigFloat> offsets = u.a;
    std::sort(offsets.begin(), offsets.end(),
              [](const BigFloat& p, const BigFloat& q) { return p < q; });
    offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
    const double tol = kGroupTarget / (2.0 * rs * static_cast<double>(offsets.size() + 2));

    const BigFloat zero(0.0, bits);
    const BigFloat G0 = u.shifted(zero);
    const BigFloat twoG0 = ldexp(G0, 1);

    // Core [0, zc]: 2G0 - G(y0+z) - G(y0-z) = -2 sum_m G^{(2m)}(y0) z^{2m}/(2m)!
    // integrated term by term against z^{-1-2s}.
    const BigFloat zc = ldexp(offsets.front(), -1);
    BigFloat core(0.0, bits);
    {
      std::vector<BigFloat> weight;  // c_b a_b^s, times q_b^m as m grows
      std::vector<BigFloat> q;
      BigFloat scale(0.0, bits);
      for (std::size_t b = 0; b < u.c.size(); ++b) {
        weight.push_back(u.c[b] * se.apply(u.a[b]));
        const BigFloat ratio = zc / u.a[b];
        q.push_back(ratio * ratio);
        scale += abs(weight.back());
      }
      const BigFloat sb = se.as_big(bits);
      BigFloat binom(1.0, bits);  // binom(s, 2m)
      const double stop = tol * 1e-3;
      BigFloat qmax(0.25, bits);
      for (const auto& qq : q) qmax = qq > qmax ? qq : qmax;
      BigFloat bound = scale;
      for (long m = 1; m < 100000; ++m) {
        const double k = 2.0 * static_cast<double>(m);
        binom *= (sb - (k - 2.0)) * (sb - (k - 1.0)) / ((k - 1.0) * k);
        BigFloat sum(0.0, bits);
        for (std::size_t b = 0; b < weight.size(); ++b) {
          weight[b] *= q[b];
          sum += weight[b];
        }
        core += binom * sum / (k - 2.0 * s);
        bound *= qmax;
        if (bound.to_double() < stop) break;
      }
      // The series carries a_b^s (z_c / a_b)^{2m}; restore z_c^{-2s}.
      core = ldexp(core, 1) / two_s.apply(zc);
      core = -core;
    }
    ++out.evaluations;

    const TanhSinh& rule = rule_for(bits);
    auto kernel = [&](const BigFloat& z) {
      // z^{-1-2s}
      return BigFloat(1.0, bits) / (z * two_s.apply(z));
    };
    auto D = [&](const BigFloat& z) { return twoG0 - u.shifted(z) - u.shifted(-z); };

    BigFloat total = core;
    BigFloat lo = zc;
    for (const BigFloat& hi : offsets) {
      const auto r = rule.integrate([&](const BigFloat& z) { return D(z) * kernel(z); }, lo, hi, tol);
      total += r.value;
      out.error += 2.0 * rs * r.error;
      out.evaluations += r.evaluations;
      lo = hi;
    }
    // Tail [Z, inf) with z = Z tau^{-1/s}: the measure becomes
    // (Z^{-2s} / s) tau dtau on (0, 1]. Past the last kink only the
    // right-shifted blocks remain.
    {
      const BigFloat Z = lo;
      auto f = [&](const BigFloat& tau) {
        const BigFloat z = Z * tail_map.apply(tau);
        return (twoG0 - u.shifted(z)) * tau;
      };
      const BigFloat pre = BigFloat(1.0, bits) / (two_s.apply(Z) * se.as_big(bits));
      const auto r = rule.integrate(f, zero, BigFloat(1.0, bits), tol / pre.to_double());
      total += pre * r.value;
      out.error += 2.0 * rs * pre.to_double() * r.error;
      out.evaluations += r.evaluations;
    }
    out.value += 2.0 * rs * total.to_double();
  }
  return out;
}

}  // namespace fraclap
