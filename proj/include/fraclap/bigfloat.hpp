#pragma once

// Thin RAII wrapper over an MPFR number with an explicit, per-value
// precision. Binary operations produce a result at the larger of the two
// operand precisions, so no process-wide precision state is involved and
// values can be shared freely across threads.

#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace fraclap {

inline constexpr long kDefaultPrecisionBits = 128;

class BigFloat {
 public:
  BigFloat();
  explicit BigFloat(double value, long bits = kDefaultPrecisionBits);
  static BigFloat from_int(long value, long bits = kDefaultPrecisionBits);
  // Parses a decimal string ("1.25e-3"). Throws DomainError on bad input.
  static BigFloat parse(std::string_view text, long bits);
  static BigFloat pi(long bits);

  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  long precision() const { return static_cast<long>(mpfr_get_prec(v_)); }
  // Copy rounded (or widened) to the given precision.
  BigFloat with_precision(long bits) const;

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  double to_double_toward_zero() const { return mpfr_get_d(v_, MPFR_RNDZ); }
  // True when the value is exactly representable as an IEEE double.
  bool is_exact_double() const;
  // Shortest decimal form ("%Rg" with enough digits to round-trip at the
  // value's precision).
  std::string to_string() const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  // Binary exponent e with 2^(e-1) <= |x| < 2^e; 0 for zero.
  long exponent2() const;

  BigFloat& operator+=(const BigFloat& o);
  BigFloat& operator-=(const BigFloat& o);
  BigFloat& operator*=(const BigFloat& o);
  BigFloat& operator/=(const BigFloat& o);
  BigFloat& operator+=(double o);
  BigFloat& operator-=(double o);
  BigFloat& operator*=(double o);
  BigFloat& operator/=(double o);

  friend BigFloat operator+(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator*(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b);
  friend BigFloat operator+(const BigFloat& a, double b);
  friend BigFloat operator-(const BigFloat& a, double b);
  friend BigFloat operator*(const BigFloat& a, double b);
  friend BigFloat operator/(const BigFloat& a, double b);
  friend BigFloat operator+(double a, const BigFloat& b) { return b + a; }
  friend BigFloat operator-(double a, const BigFloat& b);
  friend BigFloat operator*(double a, const BigFloat& b) { return b * a; }
  friend BigFloat operator/(double a, const BigFloat& b);
  BigFloat operator-() const;

  friend bool operator==(const BigFloat& a, const BigFloat& b) {
    return mpfr_equal_p(a.v_, b.v_) != 0;
  }
  friend std::partial_ordering operator<=>(const BigFloat& a,
                                           const BigFloat& b);
  friend bool operator==(const BigFloat& a, double b) {
    return mpfr_cmp_d(a.v_, b) == 0;
  }
  friend std::partial_ordering operator<=>(const BigFloat& a, double b);

  friend BigFloat abs(const BigFloat& x);
  friend BigFloat sqrt(const BigFloat& x);
  friend BigFloat log(const BigFloat& x);
  friend BigFloat exp(const BigFloat& x);
  friend BigFloat sinh(const BigFloat& x);
  friend BigFloat cosh(const BigFloat& x);
  friend BigFloat pow(const BigFloat& x, const BigFloat& y);
  friend BigFloat pow(const BigFloat& x, long n);
  friend BigFloat rootn(const BigFloat& x, unsigned long k);
  // x * 2^k, exact.
  friend BigFloat ldexp(const BigFloat& x, long k);

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

 private:
  struct Uninit {};
  BigFloat(Uninit, long bits);
  mpfr_t v_;
};

// A fixed real exponent applied repeatedly to positive bases. When the
// exponent is a ratio p/q with small q it is evaluated with an integer
// root and an integer power, which MPFR does far faster than a general
// pow. The ratio is detected from the double value: 0.5 -> 1/2,
// 0.75 -> 3/4, 0.6 -> 3/5.
class Exponent {
 public:
  explicit Exponent(double value);
  static Exponent ratio(long num, unsigned long den);

  double value() const { return value_; }
  bool is_rational() const { return den_ != 0; }
  long numerator() const { return num_; }
  unsigned long denominator() const { return den_; }

  // The exponent itself as a number at the requested precision: the exact
  // ratio when rational, otherwise the exact double.
  BigFloat as_big(long bits) const;
  // x^e for x > 0 (x == 0 gives 0 for e > 0).
  BigFloat apply(const BigFloat& x) const;
  // The exponent -1/e.
  Exponent reciprocal_negated() const;

 private:
  double value_ = 0.0;
  long num_ = 0;
  unsigned long den_ = 0;
};

}  // namespace fraclap
