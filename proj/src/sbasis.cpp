#include "fraclap/sbasis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

constexpr long kFastBits = 53;
// Working precision floor for groups evaluated in multiprecision.
constexpr long kMinWorkBits = 128;

using Matrix = std::vector<std::vector<BigFloat>>;

void check_block(const SHBlock& b, double margin) {
  if (!(b.t > 0.0) || !std::isfinite(b.t)) {
    throw DomainError("block shift t must be positive and finite");
  }
  if (!(b.r > 0.0 && b.r <= 1.0)) throw DomainError("block scale r must lie in (0, 1]");
  if (!b.c.is_finite()) throw DomainError("block coefficient must be finite");
  if (!(b.t / b.r > margin)) {
    throw DomainError("block kink -t/r = " + std::to_string(-b.t / b.r) +
                      " must lie left of the working interval");
  }
}

struct Factorization {
  Matrix lu;
  std::vector<std::size_t> perm;
};

Factorization lu_factor(Matrix a) {
  const std::size_t n = a.size();
  Factorization f;
  f.perm.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (abs(a[i][c]) > abs(a[piv][c])) piv = i;
    if (a[piv][c].is_zero()) throw ConditioningError("singular derivative-matching matrix", INFINITY);
    std::swap(a[c], a[piv]);
    std::swap(f.perm[c], f.perm[piv]);
    for (std::size_t i = c + 1; i < n; ++i) {
      a[i][c] /= a[c][c];
      const BigFloat m = a[i][c];
      for (std::size_t j = c + 1; j < n; ++j) a[i][j] -= m * a[c][j];
    }
  }
  f.lu = std::move(a);
  return f;
}

std::vector<BigFloat> lu_solve(const Factorization& f, const std::vector<BigFloat>& b) {
  const std::size_t n = b.size();
  std::vector<BigFloat> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    BigFloat acc = b[f.perm[i]];
    for (std::size_t j = 0; j < i; ++j) acc -= f.lu[i][j] * x[j];
    x[i] = std::move(acc);
  }
  for (std::size_t i = n; i-- > 0;) {
    BigFloat acc = x[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= f.lu[i][j] * x[j];
    x[i] = acc / f.lu[i][i];
  }
  return x;
}

double norm1(const Matrix& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    BigFloat col(0.0, 64);
    for (std::size_t i = 0; i < a.size(); ++i) col += abs(a[i][j]);
    best = std::max(best, col.to_double());
  }
  return best;
}

// Vandermonde matrix in 1/t_k at the given precision.
Matrix vandermonde(std::span<const double> nodes, long bits) {
  const std::size_t n = nodes.size();
  Matrix v(n, std::vector<BigFloat>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const BigFloat inv = BigFloat(1.0, bits) / BigFloat(nodes[k], bits);
    BigFloat p(1.0, bits);
    for (std::size_t i = 0; i < n; ++i) {
      v[i][k] = p;
      p *= inv;
    }
  }
  return v;
}

struct Solved {
  std::vector<BigFloat> coeffs;  // a_k
  double condition;
};

Solved solve_at(const DerivSpec& spec, std::span<const double> nodes, const Exponent& s,
                long bits) {
  const std::size_t n = nodes.size();
  const Matrix v = vandermonde(nodes, bits);
  const Factorization f = lu_factor(v);

  std::vector<BigFloat> rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    rhs[i] = spec.values[i].with_precision(bits) /
             falling_factorial(s, static_cast<int>(i), bits);
  }
  std::vector<BigFloat> y = lu_solve(f, rhs);
  // One step of iterative refinement.
  std::vector<BigFloat> res(n);
  for (std::size_t i = 0; i < n; ++i) {
    BigFloat acc = rhs[i];
    for (std::size_t k = 0; k < n; ++k) acc -= v[i][k] * y[k];
    res[i] = std::move(acc);
  }
  const std::vector<BigFloat> dy = lu_solve(f, res);
  for (std::size_t k = 0; k < n; ++k) y[k] += dy[k];

  // Explicit inverse for the 1-norm condition number.
  Matrix inv(n, std::vector<BigFloat>(n));
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<BigFloat> e(n, BigFloat(0.0, bits));
    e[c] = BigFloat(1.0, bits);
    const auto col = lu_solve(f, e);
    for (std::size_t i = 0; i < n; ++i) inv[i][c] = col[i];
  }
  Solved out;
  out.condition = norm1(v) * norm1(inv);
  out.coeffs.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.coeffs[k] = y[k] / s.apply(BigFloat(nodes[k], bits));
  }
  return out;
}

}  // namespace

SHCombo::SHCombo(double s, std::vector<SHBlock> blocks, double a, double b)
    : s_(s), a_(a), b_(b), blocks_(std::move(blocks)) {
  FracParams{s}.validate();
  if (!(a_ < b_) || !std::isfinite(a_) || !std::isfinite(b_)) {
    throw DomainError("working interval needs a < b");
  }
  const double margin = std::max(std::abs(a_), std::abs(b_));
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    check_block(blocks_[i], margin);
    const SHBlock& blk = blocks_[i];
    const bool fast = blk.c.precision() <= kFastBits;
    auto it = std::find_if(groups_.begin(), groups_.end(),
                           [&](const Group& g) { return g.r == blk.r && g.fast == fast; });
    if (it == groups_.end()) {
      groups_.push_back(Group{blk.r, blk.c.precision(), fast, {i}});
    } else {
      it->precision = std::max(it->precision, blk.c.precision());
      it->members.push_back(i);
    }
  }
}

long SHCombo::precision_bits() const {
  long p = 0;
  for (const auto& b : blocks_) p = std::max(p, b.c.precision());
  return p;
}

std::vector<double> SHCombo::kinks() const {
  std::vector<double> out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(-b.t / b.r);
  return out;
}

BigFloat SHCombo::group_derivative(std::size_t gi, double x, int i) const {
  const Group& g = groups_.at(gi);
  const long bits = std::max(g.precision, kMinWorkBits);
  const Exponent se(s_);
  const BigFloat y = BigFloat(g.r, bits) * BigFloat(x, bits);
  BigFloat acc(0.0, bits);
  for (std::size_t m : g.members) {
    const SHBlock& b = blocks_[m];
    const BigFloat base = y + BigFloat(b.t, bits);
    if (base.sign() <= 0) {
      if (i == 0) continue;
      throw DomainError("derivative requested at or left of the kink " +
                        std::to_string(-b.t / b.r));
    }
    BigFloat term = se.apply(base);
    if (i > 0) term /= pow(base, static_cast<long>(i));
    acc += b.c.with_precision(bits) * term;
  }
  if (i > 0) acc *= falling_factorial(se, i, bits) * pow(BigFloat(g.r, bits), static_cast<long>(i));
  return acc;
}

double SHCombo::derivative(double x, int i) const {
  if (i < 0) throw DomainError("derivative order must be non-negative");
  double total = 0.0;
  for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
    const Group& g = groups_[gi];
    if (g.fast) {
      for (std::size_t m : g.members) total += block_derivative(blocks_[m], x, i, s_);
    } else {
      total += group_derivative(gi, x, i).to_double();
    }
  }
  return total;
}

SHCombo SHCombo::operator+(const SHCombo& other) const {
  if (other.s_ != s_ || other.a_ != a_ || other.b_ != b_) {
    throw DomainError("combos must share s and the working interval");
  }
  std::vector<SHBlock> all = blocks_;
  all.insert(all.end(), other.blocks_.begin(), other.blocks_.end());
  return SHCombo(s_, std::move(all), a_, b_);
}

BigFloat falling_factorial(const Exponent& s, int j, long bits) {
  const BigFloat sv = s.as_big(bits);
  BigFloat p(1.0, bits);
  for (int l = 0; l < j; ++l) p *= sv - static_cast<double>(l);
  return p;
}

double block_derivative(const SHBlock& b, double x, int j, double s) {
  if (j < 0) throw DomainError("derivative order must be non-negative");
  if (b.c.precision() <= kFastBits) {
    const double base = b.r * x + b.t;
    if (base <= 0.0) {
      if (j == 0) return 0.0;
      throw DomainError("derivative requested at or left of the kink " +
                        std::to_string(-b.t / b.r));
    }
    double ff = 1.0;
    for (int l = 0; l < j; ++l) ff *= s - l;
    return b.c.to_double() * std::pow(b.r, j) * ff * std::pow(base, s - j);
  }
  SHCombo one(s, {b}, -std::min(1.0, 0.5 * b.t / b.r), std::min(1.0, 0.5 * b.t / b.r));
  return one.group_derivative(0, x, j).to_double();
}

double block_eval(const SHBlock& b, double x, double s) { return block_derivative(b, x, 0, s); }

BigFloat block_derivative_at_zero_mp(double t, int j, const Exponent& s, long bits) {
  if (!(t > 0.0)) throw DomainError("block shift t must be positive");
  if (j < 0) throw DomainError("derivative order must be non-negative");
  const BigFloat tb(t, bits);
  BigFloat v = falling_factorial(s, j, bits) * s.apply(tb);
  if (j > 0) v /= pow(tb, static_cast<long>(j));
  return v;
}

double block_derivative_at_zero(double t, int j, double s) {
  return block_derivative_at_zero_mp(t, j, Exponent(s), kMinWorkBits).to_double();
}

double combo_eval(const SHCombo& v, double x) { return v.eval(x); }

double combo_derivative(const SHCombo& v, double x, int i) { return v.derivative(x, i); }

void DerivSpec::validate() const {
  if (values.empty()) throw DomainError("derivative spec needs at least d_0");
  for (const auto& d : values)
    if (!d.is_finite()) throw DomainError("derivative spec values must be finite");
}

DerivSpec DerivSpec::from_doubles(std::span<const double> d) {
  DerivSpec spec;
  for (double v : d) spec.values.emplace_back(v, kFastBits);
  return spec;
}

std::vector<double> default_nodes(int J) {
  if (J < 0) throw DomainError("order J must be non-negative");
  std::vector<double> t;
  for (int k = 0; k <= J; ++k) t.push_back(J == 0 ? 2.0 : 2.0 + static_cast<double>(k) / J);
  return t;
}

std::vector<std::vector<double>> scaled_system_matrix(std::span<const double> nodes,
                                                      double s) {
  const std::size_t n = nodes.size();
  const Exponent se(s);
  const long bits = 128;
  std::vector<std::vector<double>> m(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const BigFloat ff = falling_factorial(se, static_cast<int>(i), bits);
    for (std::size_t k = 0; k < n; ++k) {
      const BigFloat entry = block_derivative_at_zero_mp(nodes[k], static_cast<int>(i), se, bits);
      m[i][k] = (entry / ff / se.apply(BigFloat(nodes[k], bits))).to_double();
    }
  }
  return m;
}

DerivMatch solve_derivative_match(const DerivSpec& spec, std::span<const double> nodes,
                                  double s, long bits) {
  FracParams{s}.validate();
  spec.validate();
  const int J = spec.order();
  if (nodes.size() != spec.values.size()) {
    throw DomainError("need J + 1 = " + std::to_string(J + 1) + " nodes, got " +
                      std::to_string(nodes.size()));
  }
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (!(nodes[k] > 1.0) || !std::isfinite(nodes[k])) {
      throw DomainError("nodes must be finite and greater than 1");
    }
    if (k > 0 && nodes[k] == nodes[k - 1]) throw DomainError("duplicate node " + std::to_string(nodes[k]));
    if (k > 0 && nodes[k] < nodes[k - 1]) throw DomainError("nodes must be strictly increasing");
  }
  const Exponent se(s);
  const bool automatic = bits <= 0;
  long work = automatic ? 128 + 4L * J : bits;
  Solved sol = solve_at(spec, nodes, se, work);
  if (automatic && std::log2(sol.condition) + 64.0 > static_cast<double>(work)) {
    work = static_cast<long>(std::ceil(std::log2(sol.condition))) + 96;
    sol = solve_at(spec, nodes, se, work);
  }

  std::vector<SHBlock> blocks;
  for (std::size_t k = 0; k < nodes.size(); ++k) blocks.push_back(SHBlock{nodes[k], sol.coeffs[k], 1.0});
  SHCombo combo(s, std::move(blocks));

  double dmax = 0.0, residual = 0.0;
  for (int i = 0; i <= J; ++i) {
    BigFloat h(0.0, work);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      h += sol.coeffs[k] * block_derivative_at_zero_mp(nodes[k], i, se, work);
    }
    const BigFloat& d = spec.values[static_cast<std::size_t>(i)];
    dmax = std::max(dmax, abs(d).to_double());
    residual = std::max(residual, abs(h - d).to_double());
  }
  if (!(residual <= 1e-8 * (1.0 + dmax))) {
    throw ConditioningError("derivative-matching residual " + std::to_string(residual) +
                                " above tolerance; condition estimate " +
                                std::to_string(sol.condition),
                            sol.condition);
  }
  return DerivMatch{std::move(combo), residual, sol.condition, work};
}

double defect_scale(double eps, int N, double S) {
  if (!(eps > 0.0)) throw DomainError("epsilon must be positive");
  if (N < 1) throw DomainError("padding degree N must be positive");
  if (std::isnan(S) || S < 0.0) throw DomainError("derivative bound S must be non-negative");
  if (std::isinf(S)) return std::numeric_limits<double>::min();
  BigFloat den(10.0, 128);
  den *= static_cast<double>(N) * static_cast<double>(N);
  den *= BigFloat(1.0, 128) + BigFloat(S, 128);
  const double r = (BigFloat(eps, 128) / den).to_double_toward_zero();
  return std::clamp(r, std::numeric_limits<double>::min(), 1.0);
}

double derivative_sup_bound(const SHCombo& H, int n) {
  if (n < 0) throw DomainError("derivative order must be non-negative");
  const Exponent se(H.s());
  const long bits = std::max(H.precision_bits(), kMinWorkBits);
  const BigFloat ff = abs(falling_factorial(se, n, bits));
  BigFloat total(0.0, bits);
  for (const SHBlock& b : H.blocks()) {
    // (r x + t)^{s-n} is increasing for n = 0 and decreasing otherwise.
    const double x = n == 0 ? H.b() : H.a();
    const BigFloat base = BigFloat(b.r, bits) * BigFloat(x, bits) + BigFloat(b.t, bits);
    BigFloat term = se.apply(base);
    if (n > 0) term /= pow(base, static_cast<long>(n));
    total += abs(b.c) * pow(BigFloat(b.r, bits), static_cast<long>(n)) * term;
  }
  total *= ff;
  // Round the bound up.
  const double d = total.to_double();
  return d * (1.0 + 4.0 * std::numeric_limits<double>::epsilon());
}

SHCombo rescale_with(const SHCombo& H, int j, double r, long bits) {
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("scale r must lie in (0, 1]");
  std::vector<SHBlock> out;
  for (const SHBlock& b : H.blocks()) {
    const long p = bits > 0 ? bits : b.c.precision();
    const BigFloat factor = pow(BigFloat(r, p), -static_cast<long>(j));
    out.push_back(SHBlock{b.t, b.c.with_precision(p) * factor, b.r * r});
  }
  return SHCombo(H.s(), std::move(out), H.a(), H.b());
}

Rescaled rescale_for_defect(const SHCombo& H, int j, int N, double eps, long bits) {
  if (N < 3) throw DomainError("padding degree N must be at least 3");
  if (j < 0 || j > N) throw DomainError("monomial degree j must lie in 0..N");
  const double S = derivative_sup_bound(H, N + 1);
  const double r = defect_scale(eps, N, S);
  return Rescaled{rescale_with(H, j, r, bits), r, S};
}

FracEvaluation combo_fraclap(const SHCombo& v, double x, const QuadConfig& q) {
  QuadConfig qc = q;
  if (!qc.tail_growth_exponent) qc.tail_growth_exponent = v.s();
  const auto kinks = v.kinks();
  return frac_laplacian_eval([&](double y) { return v.eval(y); }, x, FracParams{v.s()}, qc,
                             kinks);
}

}  // namespace fraclap
