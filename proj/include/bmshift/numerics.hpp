#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>
#include <mpfr.h>

namespace bmshift {

using BigInt = mpz_class;
using Rational = mpq_class;

// Precision schedule for the interval tier: start at start_bits, double
// on every failed decision, give up past max_bits.
struct PrecisionPolicy {
  mpfr_prec_t start_bits = 128;
  mpfr_prec_t max_bits = 8192;
};

// Owning wrapper around an mpfr_t.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t bits = 128);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(value_, rnd); }
  bool is_finite() const { return mpfr_number_p(value_) != 0; }
  // Floor of a finite value.
  BigInt floor() const;
  std::string to_string(int digits = 20) const;

 private:
  mpfr_t value_;
};

// Closed enclosure lo <= x <= hi. Infinite endpoints are allowed and mean
// "no information yet".
struct Enclosure {
  BigFloat lo;
  BigFloat hi;

  explicit Enclosure(mpfr_prec_t bits = 128) : lo(bits), hi(bits) {}
};

// Deterministic function precision -> enclosure. Higher precision must not
// produce a wider enclosure than the caller can tolerate; IntervalReal
// intersects successive enclosures so refinement is monotone regardless.
using Refiner = std::function<Enclosure(mpfr_prec_t)>;

// a + b*sqrt(radicand), radicand square-free and >= 2, b != 0.
struct QuadraticSurd {
  Rational a;
  Rational b;
  long radicand = 2;
};

class IntervalReal {
 public:
  explicit IntervalReal(Refiner refiner, mpfr_prec_t bits = 128);

  const BigFloat& lo() const { return enclosure_->lo; }
  const BigFloat& hi() const { return enclosure_->hi; }
  mpfr_prec_t bits() const { return bits_; }

  // New value at twice the precision; its enclosure is a sub-interval of
  // this one.
  IntervalReal refined() const;
  Enclosure enclose(mpfr_prec_t bits) const { return (*refiner_)(bits); }
  const std::shared_ptr<const Refiner>& refiner() const { return refiner_; }

 private:
  IntervalReal(std::shared_ptr<const Refiner> refiner, mpfr_prec_t bits,
               std::shared_ptr<const Enclosure> enclosure)
      : refiner_(std::move(refiner)), bits_(bits), enclosure_(std::move(enclosure)) {}

  std::shared_ptr<const Refiner> refiner_;
  mpfr_prec_t bits_;
  std::shared_ptr<const Enclosure> enclosure_;
};

// A real parameter in one of three canonical representations:
//   rational      exact, lowest terms, positive denominator
//   surd          a + b*sqrt(d), exact, b != 0, d square-free
//   interval      computable real given by a refiner
// Values are immutable. Arithmetic stays exact whenever the result lies in
// Q or in a single Q(sqrt d); otherwise it produces an interval whose
// refiner combines the operands' enclosures.
class RealParam {
 public:
  enum class Kind { rational, surd, interval };

  RealParam() : value_(Rational(0)) {}
  RealParam(long v) : value_(Rational(v)) {}  // NOLINT: integers are reals
  RealParam(Rational v);                       // NOLINT
  explicit RealParam(IntervalReal v) : value_(std::move(v)) {}

  // a + b*sqrt(d) normalized: square factors of d are pulled into b,
  // perfect squares and b == 0 collapse to a rational.
  static RealParam surd(Rational a, Rational b, long d);
  static RealParam sqrt_of(const Rational& q);
  static RealParam from_refiner(Refiner refiner);

  Kind kind() const { return static_cast<Kind>(value_.index()); }
  bool is_rational() const { return kind() == Kind::rational; }
  bool is_surd() const { return kind() == Kind::surd; }
  bool is_exact() const { return kind() != Kind::interval; }
  bool is_integer() const;

  const Rational& rational() const;
  const QuadraticSurd& quadratic_surd() const;
  const IntervalReal& interval() const;

  Enclosure enclose(mpfr_prec_t bits) const;
  double to_double() const;
  std::string to_string() const;

  // -1, 0, +1. Exact tiers decide always; intervals may throw
  // PrecisionExhausted when the value cannot be separated from zero.
  int sign(const PrecisionPolicy& policy = {}) const;
  int compare(const RealParam& other, const PrecisionPolicy& policy = {}) const;
  BigInt floor(const PrecisionPolicy& policy = {}) const;

  RealParam operator-() const;
  RealParam abs(const PrecisionPolicy& policy = {}) const;
  RealParam reciprocal() const;
  RealParam pow(unsigned exponent) const;

  friend RealParam operator+(const RealParam& x, const RealParam& y);
  friend RealParam operator-(const RealParam& x, const RealParam& y);
  friend RealParam operator*(const RealParam& x, const RealParam& y);
  friend RealParam operator/(const RealParam& x, const RealParam& y);

  // Structural equality of canonical forms (not numeric comparison for
  // intervals).
  bool same_exact_value(const RealParam& other) const;

 private:
  explicit RealParam(QuadraticSurd s) : value_(std::move(s)) {}

  std::variant<Rational, QuadraticSurd, IntervalReal> value_;
};

// floor(tau * k + eta), exact.
BigInt floor_linear(const RealParam& tau, std::int64_t k, const RealParam& eta,
                    const PrecisionPolicy& policy = {});

// x - floor(x), in the representation family of x.
RealParam frac(const RealParam& x, const PrecisionPolicy& policy = {});

std::uint64_t gcd_pair(std::uint64_t p, std::uint64_t q);

// Grammar: sums/products/quotients of decimal literals, integers,
// rationals, parentheses and sqrt(<non-negative rational expression>),
// e.g. "3", "7/2", "-0.25", "1+2*sqrt(5)/3", "(1+sqrt(5))/2".
RealParam parse_real(std::string_view text);

}  // namespace bmshift
