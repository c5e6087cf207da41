#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <numbers>
#include <string>

#include "fraclap/approx.hpp"

namespace fraclap {

namespace {

constexpr int kMonomialCap = 30;
// Relative threshold below which interpolation coefficients are rounding noise.
constexpr double kChop = 1e-15;

double parse_number(std::string_view text, std::string_view what) {
  const std::string buf(text);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size() || !std::isfinite(v)) {
    throw ConfigError("malformed number '" + buf + "' in " + std::string(what));
  }
  return v;
}

double sample_point(int i, int samples) {
  if (i == samples - 1) return 1.0;
  return -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(samples - 1);
}

std::vector<double> derivative_series(const std::vector<double>& a) {
  const std::size_t n = a.size();
  if (n <= 1) return {0.0};
  std::vector<double> b(n + 1, 0.0);
  for (std::size_t k = n - 1; k >= 1; --k) b[k - 1] = b[k + 1] + 2.0 * static_cast<double>(k) * a[k];
  b[0] *= 0.5;
  b.resize(n - 1);
  return b;
}

double clenshaw(const std::vector<double>& a, double x) {
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t k = a.size(); k-- > 1;) {
    const double b0 = 2.0 * x * b1 - b2 + a[k];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + a[0];
}

std::vector<double> interpolate(const Target& t, int n) {
  const int m = n + 1;
  std::vector<double> fx(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) fx[k] = t.eval(std::cos(std::numbers::pi * (k + 0.5) / m));
  std::vector<double> a(static_cast<std::size_t>(m));
  double amax = 0.0;
  for (int j = 0; j < m; ++j) {
    double acc = 0.0;
    for (int k = 0; k < m; ++k) acc += fx[k] * std::cos(std::numbers::pi * j * (k + 0.5) / m);
    a[j] = (j == 0 ? 1.0 : 2.0) * acc / m;
    amax = std::max(amax, std::abs(a[j]));
  }
  for (double& v : a)
    if (std::abs(v) <= kChop * amax) v = 0.0;
  return a;
}

}  // namespace

double Target::eval(double x, int order) const {
  switch (order) {
    case 0: return f(x);
    case 1: return d1(x);
    case 2: return d2(x);
    default: throw DomainError("target derivative order must be 0..2");
  }
}

void Target::validate() const {
  if (!f || !d1 || !d2) throw DomainError("target needs f, f' and f''");
  for (int i = 0; i < 4096; ++i) {
    const double x = sample_point(i, 4096);
    for (int o = 0; o <= 2; ++o) {
      if (!std::isfinite(eval(x, o))) {
        throw DomainError("target '" + name + "' is not finite at x = " + std::to_string(x));
      }
    }
  }
}

Target Target::analytic(std::string name, RealFunction f, RealFunction d1, RealFunction d2) {
  return Target{std::move(name), std::move(f), std::move(d1), std::move(d2)};
}

Target Target::constant(double c) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "const:%.17g", c);
  return Target{buf, [c](double) { return c; }, [](double) { return 0.0; },
                [](double) { return 0.0; }};
}

Target Target::from_grid(const GridFunction& g, std::string name) {
  if (!g.has_derivatives()) {
    throw ConfigError("grid target '" + name + "' needs deriv1 and deriv2 columns");
  }
  const auto v = g.values();
  const auto d = g.deriv1();
  double dmax = 0.0;
  for (double x : d) dmax = std::max(dmax, std::abs(x));
  const double h = g.spacing();
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    const double slope = (v[i + 1] - v[i]) / h;
    const double mean = 0.5 * (d[i] + d[i + 1]);
    if (std::abs(slope - mean) > 1e-3 * (1.0 + dmax)) {
      throw ConfigError("grid target '" + name + "': deriv1 inconsistent with values near x = " +
                        std::to_string(g.node(i)));
    }
  }
  const double a = g.a(), half = 0.5 * (g.b() - g.a());
  auto G = std::make_shared<GridFunction>(g);
  auto at = [a, half](double xi) { return a + (xi + 1.0) * half; };
  return Target{std::move(name), [G, at](double xi) { return G->evaluate(at(xi), 0); },
                [G, at, half](double xi) { return G->evaluate(at(xi), 1) * half; },
                [G, at, half](double xi) { return G->evaluate(at(xi), 2) * half * half; }};
}

Target parse_target(std::string_view spec) {
  const std::string name(spec);
  if (spec == "x2") {
    return Target::analytic(name, [](double x) { return x * x; }, [](double x) { return 2.0 * x; },
                            [](double) { return 2.0; });
  }
  if (spec == "sin") {
    return Target::analytic(name, [](double x) { return std::sin(x); },
                            [](double x) { return std::cos(x); },
                            [](double x) { return -std::sin(x); });
  }
  if (spec == "exp") {
    auto e = [](double x) { return std::exp(x); };
    return Target::analytic(name, e, e, e);
  }
  if (spec == "gauss") {
    return Target::analytic(
        name, [](double x) { return std::exp(-x * x); },
        [](double x) { return -2.0 * x * std::exp(-x * x); },
        [](double x) { return (4.0 * x * x - 2.0) * std::exp(-x * x); });
  }
  if (spec.starts_with("const:")) {
    const double c = parse_number(spec.substr(6), "const target");
    Target t = Target::constant(c);
    t.name = name;
    return t;
  }
  if (spec.starts_with("csv:")) {
    const std::string path(spec.substr(4));
    return Target::from_grid(GridFunction::read_csv(path), name);
  }
  throw ConfigError("unknown target '" + name + "' (expected x2, sin, exp, gauss, const:<c> or csv:<path>)");
}

ChebPoly::ChebPoly(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.size() < 4) coeffs_.resize(4, 0.0);
  for (double c : coeffs_)
    if (!std::isfinite(c)) throw DomainError("Chebyshev coefficients must be finite");
  d1_ = derivative_series(coeffs_);
  d2_ = derivative_series(d1_);
}

double ChebPoly::eval(double x, int order) const {
  switch (order) {
    case 0: return clenshaw(coeffs_, x);
    case 1: return clenshaw(d1_, x);
    case 2: return clenshaw(d2_, x);
    default: throw DomainError("derivative order must be 0..2");
  }
}

double ChebPoly::c2_norm(int samples) const {
  double m = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = sample_point(i, samples);
    for (int o = 0; o <= 2; ++o) m = std::max(m, std::abs(eval(x, o)));
  }
  return m;
}

std::vector<BigFloat> ChebPoly::monomial(long bits) const {
  const int N = degree();
  if (N > kMonomialCap) throw DomainError("monomial conversion is limited to degree 30");
  // Integer coefficients of T_n by T_{n+1} = 2x T_n - T_{n-1}.
  std::vector<std::vector<std::int64_t>> T(static_cast<std::size_t>(N + 1));
  T[0] = {1};
  if (N >= 1) T[1] = {0, 1};
  for (int n = 1; n < N; ++n) {
    std::vector<std::int64_t> next(static_cast<std::size_t>(n + 2), 0);
    for (int k = 0; k <= n; ++k) next[k + 1] += 2 * T[n][k];
    for (int k = 0; k < n; ++k) next[k] -= T[n - 1][k];
    T[n + 1] = std::move(next);
  }
  std::vector<BigFloat> c(static_cast<std::size_t>(N + 1), BigFloat(0.0, bits));
  for (int n = 0; n <= N; ++n) {
    if (coeffs_[n] == 0.0) continue;
    const BigFloat a(coeffs_[n], bits);
    for (int k = 0; k <= n; ++k) {
      if (T[n][k] != 0) c[k] += a * BigFloat::from_int(static_cast<long>(T[n][k]), bits);
    }
  }
  return c;
}

double c2_distance(const std::function<double(double, int)>& f,
                   const std::function<double(double, int)>& g, int samples) {
  double m = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double x = sample_point(i, samples);
    for (int o = 0; o <= 2; ++o) m = std::max(m, std::abs(f(x, o) - g(x, o)));
  }
  return m;
}

ChebFit cheb_fit(const Target& target, double eps_half, int max_degree, int samples) {
  if (!(eps_half > 0.0)) throw DomainError("epsilon must be positive");
  if (max_degree < 0 || max_degree > kMonomialCap) throw DomainError("degree cap must lie in 0..30");
  if (samples < 2) throw DomainError("need at least 2 sample points");
  target.validate();
  std::vector<double> xs(static_cast<std::size_t>(samples));
  std::vector<std::array<double, 3>> fv(xs.size());
  for (int i = 0; i < samples; ++i) {
    xs[i] = sample_point(i, samples);
    for (int o = 0; o <= 2; ++o) fv[i][o] = target.eval(xs[i], o);
  }
  double best = INFINITY;
  for (int n = 0; n <= max_degree; ++n) {
    ChebPoly p(interpolate(target, n));
    double m = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (int o = 0; o <= 2; ++o) m = std::max(m, std::abs(fv[i][o] - p.eval(xs[i], o)));
    const double bound = kSupInflation * m;
    if (bound <= eps_half) return ChebFit{std::move(p), bound, n};
    best = std::min(best, bound);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "no Chebyshev interpolant up to degree %d reaches C2 error %.3g (best %.3g); "
                "try a larger epsilon",
                max_degree, eps_half, best);
  throw ApproximationError(buf, best);
}

}  // namespace fraclap
