#pragma once

// Blocks c (r x + t)_+^s, which are s-harmonic on {r x + t > 0}, and
// finite sums of them.
//
// Coefficients are multiprecision. The combinations produced by the
// approximation pipeline carry coefficients many orders of magnitude
// larger than the values they sum to, so evaluation runs at the precision
// stored with the coefficients and only the final group sums are rounded
// to double.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "json.hpp"

#include "fraclap/bigfloat.hpp"
#include "fraclap/frackernel.hpp"

namespace fraclap {

struct SHBlock {
  double t = 1.0;
  BigFloat c{1.0};
  double r = 1.0;
};

class SHCombo {
 public:
  // Blocks sharing a scale r are evaluated together at the largest
  // coefficient precision among them.
  struct Group {
    double r;
    long precision;
    bool fast;  // all coefficients are plain doubles
    std::vector<std::size_t> members;
  };

  // Throws DomainError unless every block has t > 0, r in (0, 1] and
  // t / r > max(|a|, |b|).
  SHCombo(double s, std::vector<SHBlock> blocks = {}, double a = -1.0, double b = 1.0);

  double s() const { return s_; }
  double a() const { return a_; }
  double b() const { return b_; }
  std::span<const SHBlock> blocks() const { return blocks_; }
  std::span<const Group> groups() const { return groups_; }
  bool empty() const { return blocks_.empty(); }
  std::size_t size() const { return blocks_.size(); }
  // Largest coefficient precision, in bits.
  long precision_bits() const;
  // Kink locations -t/r, one per block.
  std::vector<double> kinks() const;

  // i-th derivative at x; i = 0 is the value (vanishes left of a kink).
  double derivative(double x, int i) const;
  double eval(double x) const { return derivative(x, 0); }

  // Sum of the blocks in one group, at the group precision.
  BigFloat group_derivative(std::size_t g, double x, int i) const;

  // Concatenation; both combos must share s and the working interval.
  SHCombo operator+(const SHCombo& other) const;

 private:
  double s_;
  double a_;
  double b_;
  std::vector<SHBlock> blocks_;
  std::vector<Group> groups_;
};

// prod_{l<j} (s - l); the empty product is 1.
BigFloat falling_factorial(const Exponent& s, int j, long bits);

// c (r x + t)^s when r x + t > 0, else 0. Exact-double coefficients at
// no more than 53 bits take a plain double path.
double block_eval(const SHBlock& b, double x, double s);
// j-th x-derivative of the block; DomainError at or left of the kink.
double block_derivative(const SHBlock& b, double x, int j, double s);
// prod_{i<j}(s - i) t^{s-j}; DomainError for t <= 0 or j < 0.
double block_derivative_at_zero(double t, int j, double s);
BigFloat block_derivative_at_zero_mp(double t, int j, const Exponent& s, long bits);

double combo_eval(const SHCombo& v, double x);
// DomainError when x is at or left of a kink of some block.
double combo_derivative(const SHCombo& v, double x, int i);

struct DerivSpec {
  std::vector<BigFloat> values;  // d_0 .. d_J
  int order() const { return static_cast<int>(values.size()) - 1; }
  // Throws DomainError when empty or non-finite.
  void validate() const;
  static DerivSpec from_doubles(std::span<const double> d);
};

struct DerivMatch {
  SHCombo combo;
  double residual = 0.0;   // max_i |H^(i)(0) - d_i|
  double condition = 0.0;  // 1-norm condition of the Vandermonde matrix in 1/t_k
  long precision_bits = 0;
};

// t_k = 2 + k / J for k = 0..J ({2} for J = 0).
std::vector<double> default_nodes(int J);

// Row i, column k of the derivative-matching matrix after row scaling by
// 1 / prod(s - l) and column scaling by t_k^{-s}; algebraically (1/t_k)^i.
std::vector<std::vector<double>> scaled_system_matrix(std::span<const double> nodes,
                                                      double s);

// Blocks sum_k a_k (x + t_k)_+^s with H^(i)(0) = d_i, i = 0..J. Nodes must
// be strictly increasing and > 1. bits = 0 picks a precision from J and
// the condition number. Throws ConditioningError when the read-back
// residual exceeds 1e-8 (1 + max|d_i|).
DerivMatch solve_derivative_match(const DerivSpec& spec, std::span<const double> nodes,
                                  double s, long bits = 0);

// r = eps / (10 N^2 (1 + S)), rounded toward zero and clamped to (0, 1].
double defect_scale(double eps, int N, double S);

struct Rescaled {
  SHCombo combo;
  double r = 1.0;
  double sup_bound = 0.0;  // S, bound on sup |H^(N+1)| over the interval
};

// Maps each block (t, a, 1) to (t, a r^{-j}, r), i.e. x -> r^{-j} H(r x).
// Coefficients are carried at `bits` (0 keeps the input precision).
Rescaled rescale_for_defect(const SHCombo& H, int j, int N, double eps, long bits = 0);
// Same map with a given scale, for callers that tighten r further.
SHCombo rescale_with(const SHCombo& H, int j, double r, long bits = 0);

// Bound on sup over [a, b] of |H^(n)| from per-block endpoint maxima.
double derivative_sup_bound(const SHCombo& H, int n);

// Fractional Laplacian of the combo by the double-precision kernel, panels
// split at the kinks, growth exponent s.
FracEvaluation combo_fraclap(const SHCombo& v, double x,
                             const QuadConfig& q = QuadConfig{});

// Fractional Laplacian of the combo in multiprecision: every group is
// mapped to unit scale, its near core summed from the Taylor series and
// the remaining half-line split at the kinks and integrated by tanh-sinh.
struct MpFracEvaluation {
  double value = 0.0;
  double error = 0.0;  // sum of the tanh-sinh level differences
  std::size_t evaluations = 0;
};
MpFracEvaluation combo_fraclap_mp(const SHCombo& v, double x);

nlohmann::json combo_to_json(const SHCombo& v);
SHCombo combo_from_json(const nlohmann::json& j);
void write_combo_json(const SHCombo& v, std::ostream& out);
SHCombo read_combo_json(std::istream& in);

}  // namespace fraclap
