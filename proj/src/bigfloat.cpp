#include "fraclap/bigfloat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "fraclap/errors.hpp"

namespace fraclap {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

long max_prec(const BigFloat& a, const BigFloat& b) {
  return std::max(a.precision(), b.precision());
}

// Precision wide enough to hold a double exactly next to a value.
long prec_with_double(const BigFloat& a) {
  return std::max<long>(a.precision(), 53);
}

}  // namespace

BigFloat::BigFloat(Uninit, long bits) {
  mpfr_init2(v_, static_cast<mpfr_prec_t>(std::max<long>(bits, MPFR_PREC_MIN)));
}

BigFloat::BigFloat() : BigFloat(Uninit{}, kDefaultPrecisionBits) {
  mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(double value, long bits) : BigFloat(Uninit{}, bits) {
  mpfr_set_d(v_, value, kRnd);
}

BigFloat BigFloat::from_int(long value, long bits) {
  BigFloat r(Uninit{}, bits);
  mpfr_set_si(r.v_, value, kRnd);
  return r;
}

BigFloat BigFloat::parse(std::string_view text, long bits) {
  BigFloat r(Uninit{}, bits);
  std::string buf(text);
  char* end = nullptr;
  if (!buf.empty()) mpfr_strtofr(r.v_, buf.c_str(), &end, 10, kRnd);
  if (buf.empty() || end == buf.c_str() || *end != '\0') {
    throw DomainError("not a decimal number: '" + buf + "'");
  }
  return r;
}

BigFloat BigFloat::pi(long bits) {
  BigFloat r(Uninit{}, bits);
  mpfr_const_pi(r.v_, kRnd);
  return r;
}

BigFloat::BigFloat(const BigFloat& other) : BigFloat(Uninit{}, other.precision()) {
  mpfr_set(v_, other.v_, kRnd);
}

BigFloat::BigFloat(BigFloat&& other) noexcept : BigFloat(Uninit{}, MPFR_PREC_MIN) {
  mpfr_swap(v_, other.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, kRnd);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

BigFloat BigFloat::with_precision(long bits) const {
  BigFloat r(Uninit{}, bits);
  mpfr_set(r.v_, v_, kRnd);
  return r;
}

bool BigFloat::is_exact_double() const {
  if (!is_finite()) return false;
  const double d = to_double();
  return mpfr_cmp_d(v_, d) == 0;
}

std::string BigFloat::to_string() const {
  if (is_zero()) return "0";
  // Digits needed so that the decimal string rounds back to the same value.
  const int digits =
      static_cast<int>(std::ceil(static_cast<double>(precision()) * 0.30102999566398120)) + 1;
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Rg", digits, v_);
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

long BigFloat::exponent2() const {
  if (is_zero() || !is_finite()) return 0;
  return static_cast<long>(mpfr_get_exp(v_));
}

BigFloat& BigFloat::operator+=(const BigFloat& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), kRnd);
  mpfr_add(v_, v_, o.v_, kRnd);
  return *this;
}
BigFloat& BigFloat::operator-=(const BigFloat& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), kRnd);
  mpfr_sub(v_, v_, o.v_, kRnd);
  return *this;
}
BigFloat& BigFloat::operator*=(const BigFloat& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), kRnd);
  mpfr_mul(v_, v_, o.v_, kRnd);
  return *this;
}
BigFloat& BigFloat::operator/=(const BigFloat& o) {
  if (o.precision() > precision()) mpfr_prec_round(v_, o.precision(), kRnd);
  mpfr_div(v_, v_, o.v_, kRnd);
  return *this;
}
BigFloat& BigFloat::operator+=(double o) {
  mpfr_add_d(v_, v_, o, kRnd);
  return *this;
}
BigFloat& BigFloat::operator-=(double o) {
  mpfr_sub_d(v_, v_, o, kRnd);
  return *this;
}
BigFloat& BigFloat::operator*=(double o) {
  mpfr_mul_d(v_, v_, o, kRnd);
  return *this;
}
BigFloat& BigFloat::operator/=(double o) {
  mpfr_div_d(v_, v_, o, kRnd);
  return *this;
}

BigFloat operator+(const BigFloat& a, const BigFloat& b) {
  BigFloat r(BigFloat::Uninit{}, max_prec(a, b));
  mpfr_add(r.v_, a.v_, b.v_, kRnd);
  return r;
}
BigFloat operator-(const BigFloat& a, const BigFloat& b) {
  BigFloat r(BigFloat::Uninit{}, max_prec(a, b));
  mpfr_sub(r.v_, a.v_, b.v_, kRnd);
  return r;
}
BigFloat operator*(const BigFloat& a, const BigFloat& b) {
  BigFloat r(BigFloat::Uninit{}, max_prec(a, b));
  mpfr_mul(r.v_, a.v_, b.v_, kRnd);
  return r;
}
BigFloat operator/(const BigFloat& a, const BigFloat& b) {
  BigFloat r(BigFloat::Uninit{}, max_prec(a, b));
  mpfr_div(r.v_, a.v_, b.v_, kRnd);
  return r;
}
BigFloat operator+(const BigFloat& a, double b) {
  BigFloat r(BigFloat::Uninit{}, prec_with_double(a));
  mpfr_add_d(r.v_, a.v_, b, kRnd);
  return r;
}
BigFloat operator-(const BigFloat& a, double b) {
  BigFloat r(BigFloat::Uninit{}, prec_with_double(a));
  mpfr_sub_d(r.v_, a.v_, b, kRnd);
  return r;
}
BigFloat operator*(const BigFloat& a, double b) {
  BigFloat r(BigFloat::Uninit{}, prec_with_double(a));
  mpfr_mul_d(r.v_, a.v_, b, kRnd);
  return r;
}
BigFloat operator/(const BigFloat& a, double b) {
  BigFloat r(BigFloat::Uninit{}, prec_with_double(a));
  mpfr_div_d(r.v_, a.v_, b, kRnd);
  return r;
}
BigFloat operator-(double a, const BigFloat& b) {
  BigFloat r(BigFloat::Uninit{}, prec_with_double(b));
  mpfr_d_sub(r.v_, a, b.v_, kRnd);
  return r;
}
BigFloat operator/(double a, const BigFloat& b) {
  BigFloat r(BigFloat::Uninit{}, prec_with_double(b));
  mpfr_d_div(r.v_, a, b.v_, kRnd);
  return r;
}

BigFloat BigFloat::operator-() const {
  BigFloat r(Uninit{}, precision());
  mpfr_neg(r.v_, v_, kRnd);
  return r;
}

std::partial_ordering operator<=>(const BigFloat& a, const BigFloat& b) {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.v_, b.v_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater
                        : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const BigFloat& a, double b) {
  if (mpfr_nan_p(a.v_) || std::isnan(b)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_d(a.v_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater
                        : std::partial_ordering::equivalent);
}

BigFloat abs(const BigFloat& x) {
  BigFloat r(BigFloat::Uninit{}, x.precision());
  mpfr_abs(r.v_, x.v_, kRnd);
  return r;
}
BigFloat sqrt(const BigFloat& x) {
  BigFloat r(BigFloat::Uninit{}, x.precision());
  mpfr_sqrt(r.v_, x.v_, kRnd);
  return r;
}
BigFloat log(const BigFloat& x) {
  BigFloat r(BigFloat::Uninit{}, x.precision());
  mpfr_log(r.v_, x.v_, kRnd);
  return r;
}
BigFloat exp(const BigFloat& x) {
  BigFloat r(BigFloat::Uninit{}, x.precision());
  mpfr_exp(r.v_, x.v_, kRnd);
  return r;
}
BigFloat sinh(const BigFloat& x) {
  BigFloat r(BigFloat::Uninit{}, x.precision());
  mpfr_sinh(r.v_, x.v_, kRnd);
  return r;
}
BigFloat cosh(const BigFloat& x) {
  BigFloat r(BigFloat::Uninit{}, x.precision());
  mpfr_cosh(r.v_, x.v_, kRnd);
  return r;
}
BigFloat pow(const BigFloat& x, const BigFloat& y) {
  BigFloat r(BigFloat::Uninit{}, max_prec(x, y));
  mpfr_pow(r.v_, x.v_, y.v_, kRnd);
  return r;
}
BigFloat pow(const BigFloat& x, long n) {
  BigFloat r(BigFloat::Uninit{}, x.precision());
  mpfr_pow_si(r.v_, x.v_, n, kRnd);
  return r;
}
BigFloat rootn(const BigFloat& x, unsigned long k) {
  BigFloat r(BigFloat::Uninit{}, x.precision());
  mpfr_rootn_ui(r.v_, x.v_, k, kRnd);
  return r;
}
BigFloat ldexp(const BigFloat& x, long k) {
  BigFloat r(BigFloat::Uninit{}, x.precision());
  mpfr_mul_2si(r.v_, x.v_, k, kRnd);
  return r;
}

Exponent::Exponent(double value) : value_(value) {
  for (unsigned long q = 1; q <= 64; ++q) {
    const double p = std::round(value * static_cast<double>(q));
    if (std::abs(p) > 1e6) break;
    if (p / static_cast<double>(q) == value) {
      num_ = static_cast<long>(p);
      den_ = q;
      return;
    }
  }
}

Exponent Exponent::ratio(long num, unsigned long den) {
  Exponent e(static_cast<double>(num) / static_cast<double>(den));
  e.num_ = num;
  e.den_ = den;
  return e;
}

BigFloat Exponent::as_big(long bits) const {
  if (!is_rational()) return BigFloat(value_, bits);
  BigFloat r = BigFloat::from_int(num_, bits);
  r /= BigFloat::from_int(static_cast<long>(den_), bits);
  return r;
}

BigFloat Exponent::apply(const BigFloat& x) const {
  if (x.is_zero()) return BigFloat(0.0, x.precision());
  if (!is_rational()) return pow(x, BigFloat(value_, x.precision()));
  if (den_ == 1) return pow(x, num_);
  BigFloat root = den_ == 2 ? sqrt(x) : rootn(x, den_);
  if (num_ == 1) return root;
  return pow(root, num_);
}

Exponent Exponent::reciprocal_negated() const {
  if (is_rational() && num_ != 0) {
    const long q = static_cast<long>(den_);
    if (num_ > 0) return Exponent::ratio(-q, static_cast<unsigned long>(num_));
    return Exponent::ratio(q, static_cast<unsigned long>(-num_));
  }
  Exponent e(-1.0 / value_);
  e.num_ = 0;
  e.den_ = 0;
  return e;
}

}  // namespace fraclap
