#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fraclap/bigfloat.hpp"

namespace fraclap {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int n);
const GaussRule& gauss_legendre_8();
const GaussRule& gauss_legendre_16();

// Double-exponential (tanh-sinh) quadrature in multiprecision arithmetic.
// Integrands may carry algebraic singularities at either endpoint; the
// rule never evaluates at the endpoints themselves. Abscissas are stored
// as distances to the nearest endpoint so that nodes crowding an endpoint
// keep full relative accuracy.
class TanhSinh {
 public:
  struct Result {
    BigFloat value;
    double error = 0.0;  // |I_k - I_{k-1}| at the final level
    int levels = 0;
    std::size_t evaluations = 0;
  };

  explicit TanhSinh(long bits, int max_level = 10);

  long precision() const { return bits_; }

  // Integral of f over [a, b]; refinement stops once successive levels
  // agree to within `tolerance` (absolute).
  Result integrate(const std::function<BigFloat(const BigFloat&)>& f,
                   const BigFloat& a, const BigFloat& b,
                   double tolerance) const;

 private:
  struct Node {
    BigFloat t;           // sample parameter (>= 0; mirrored for t < 0)
    BigFloat complement;  // 1 - x(t), the distance to the endpoint
    BigFloat weight;      // dx/dt
  };

  const std::vector<Node>& level(int k) const;

  long bits_;
  int max_level_;
  double t_max_;
  mutable std::vector<std::vector<Node>> levels_;
};

}  // namespace fraclap
