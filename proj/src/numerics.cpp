#include "bmshift/numerics.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include "bmshift/errors.hpp"

namespace bmshift {

// ---------------------------------------------------------------- BigFloat

BigFloat::BigFloat(mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  mpfr_init2(value_, other.precision());
  mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

BigInt BigFloat::floor() const {
  BigInt out;
  mpfr_get_z(out.get_mpz_t(), value_, MPFR_RNDD);
  return out;
}

std::string BigFloat::to_string(int digits) const {
  char* raw = nullptr;
  mpfr_asprintf(&raw, "%.*Rg", digits, value_);
  std::string out(raw);
  mpfr_free_str(raw);
  return out;
}

namespace {

void set_unbounded(Enclosure& e) {
  mpfr_set_inf(e.lo.get(), -1);
  mpfr_set_inf(e.hi.get(), 1);
}

bool finite(const Enclosure& e) { return e.lo.is_finite() && e.hi.is_finite(); }

// Interval arithmetic on enclosures with outward rounding.
Enclosure enc_add(const Enclosure& x, const Enclosure& y, mpfr_prec_t bits) {
  Enclosure out(bits);
  if (!finite(x) || !finite(y)) {
    set_unbounded(out);
    return out;
  }
  mpfr_add(out.lo.get(), x.lo.get(), y.lo.get(), MPFR_RNDD);
  mpfr_add(out.hi.get(), x.hi.get(), y.hi.get(), MPFR_RNDU);
  return out;
}

Enclosure enc_neg(const Enclosure& x, mpfr_prec_t bits) {
  Enclosure out(bits);
  mpfr_neg(out.lo.get(), x.hi.get(), MPFR_RNDD);
  mpfr_neg(out.hi.get(), x.lo.get(), MPFR_RNDU);
  return out;
}

Enclosure enc_mul(const Enclosure& x, const Enclosure& y, mpfr_prec_t bits) {
  Enclosure out(bits);
  if (!finite(x) || !finite(y)) {
    set_unbounded(out);
    return out;
  }
  BigFloat p(bits);
  bool first = true;
  for (const BigFloat* a : {&x.lo, &x.hi}) {
    for (const BigFloat* b : {&y.lo, &y.hi}) {
      mpfr_mul(p.get(), a->get(), b->get(), MPFR_RNDD);
      if (first || mpfr_less_p(p.get(), out.lo.get())) mpfr_set(out.lo.get(), p.get(), MPFR_RNDD);
      mpfr_mul(p.get(), a->get(), b->get(), MPFR_RNDU);
      if (first || mpfr_greater_p(p.get(), out.hi.get())) mpfr_set(out.hi.get(), p.get(), MPFR_RNDU);
      first = false;
    }
  }
  return out;
}

Enclosure enc_reciprocal(const Enclosure& x, mpfr_prec_t bits) {
  Enclosure out(bits);
  if (!finite(x) || mpfr_sgn(x.lo.get()) * mpfr_sgn(x.hi.get()) <= 0) {
    set_unbounded(out);
    return out;
  }
  mpfr_ui_div(out.lo.get(), 1, x.hi.get(), MPFR_RNDD);
  mpfr_ui_div(out.hi.get(), 1, x.lo.get(), MPFR_RNDU);
  return out;
}

int surd_sign(const Rational& a, const Rational& b, long d) {
  const int sa = sgn(a);
  const int sb = sgn(b);
  if (sb == 0) return sa;
  if (sa >= 0 && sb > 0) return 1;
  if (sa <= 0 && sb < 0) return -1;
  // Opposite signs: compare a^2 with b^2 d. They are never equal since d is
  // not a rational square.
  const Rational a2 = a * a;
  const Rational b2d = b * b * d;
  const int cmp_sign = cmp(a2, b2d) > 0 ? 1 : -1;
  return sa > 0 ? cmp_sign : -cmp_sign;
}

// d = s^2 * core with core square-free.
std::pair<long, long> square_free_split(long d) {
  long s = 1;
  long core = d;
  for (long p = 2; p * p <= core; ++p) {
    while (core % (p * p) == 0) {
      core /= p * p;
      s *= p;
    }
  }
  return {s, core};
}

RealParam composite(const RealParam& x, const RealParam& y, char op) {
  Refiner refiner = [x, y, op](mpfr_prec_t bits) {
    const mpfr_prec_t work = bits + 16;
    const Enclosure ex = x.enclose(work);
    switch (op) {
      case '+': return enc_add(ex, y.enclose(work), bits);
      case '-': return enc_add(ex, enc_neg(y.enclose(work), work), bits);
      case '*': return enc_mul(ex, y.enclose(work), bits);
      case '/': return enc_mul(ex, enc_reciprocal(y.enclose(work), work), bits);
      case 'n': return enc_neg(ex, bits);
      case 'r': return enc_reciprocal(ex, bits);
      default: break;
    }
    throw Error("unknown composite operation");
  };
  return RealParam::from_refiner(std::move(refiner));
}

}  // namespace

// ------------------------------------------------------------ IntervalReal

IntervalReal::IntervalReal(Refiner refiner, mpfr_prec_t bits)
    : refiner_(std::make_shared<const Refiner>(std::move(refiner))), bits_(bits) {
  auto e = std::make_shared<Enclosure>((*refiner_)(bits));
  if (mpfr_nan_p(e->lo.get()) || mpfr_nan_p(e->hi.get()) ||
      mpfr_greater_p(e->lo.get(), e->hi.get())) {
    throw NumericError("refiner produced an invalid enclosure");
  }
  enclosure_ = std::move(e);
}

IntervalReal IntervalReal::refined() const {
  const mpfr_prec_t bits = bits_ * 2;
  Enclosure next = (*refiner_)(bits);
  auto out = std::make_shared<Enclosure>(bits);
  mpfr_max(out->lo.get(), next.lo.get(), enclosure_->lo.get(), MPFR_RNDD);
  mpfr_min(out->hi.get(), next.hi.get(), enclosure_->hi.get(), MPFR_RNDU);
  if (mpfr_greater_p(out->lo.get(), out->hi.get())) {
    throw NumericError("refiner is inconsistent: enclosures do not intersect");
  }
  return IntervalReal(refiner_, bits, std::move(out));
}

// --------------------------------------------------------------- RealParam

RealParam::RealParam(Rational v) : value_(std::move(v)) {
  std::get<Rational>(value_).canonicalize();
}

RealParam RealParam::surd(Rational a, Rational b, long d) {
  a.canonicalize();
  b.canonicalize();
  if (d < 0) throw ValidationError("square root of a negative number");
  if (d == 0 || sgn(b) == 0) return RealParam(std::move(a));
  const auto [s, core] = square_free_split(d);
  b *= s;
  if (core == 1) return RealParam(Rational(a + b));
  return RealParam(QuadraticSurd{std::move(a), std::move(b), core});
}

RealParam RealParam::sqrt_of(const Rational& q) {
  if (sgn(q) < 0) throw ValidationError("square root of a negative number");
  const BigInt prod = q.get_num() * q.get_den();
  if (!prod.fits_slong_p()) throw ValidationError("radicand too large: " + q.get_str());
  // sqrt(p/r) = sqrt(p r) / r
  return surd(Rational(0), Rational(1, 1) / Rational(q.get_den()), prod.get_si());
}

RealParam RealParam::from_refiner(Refiner refiner) {
  return RealParam(IntervalReal(std::move(refiner)));
}

bool RealParam::is_integer() const {
  return is_rational() && rational().get_den() == 1;
}

const Rational& RealParam::rational() const {
  if (!is_rational()) throw NotRational("value is not rational: " + to_string());
  return std::get<Rational>(value_);
}

const QuadraticSurd& RealParam::quadratic_surd() const {
  if (!is_surd()) throw ValidationError("value is not a quadratic surd: " + to_string());
  return std::get<QuadraticSurd>(value_);
}

const IntervalReal& RealParam::interval() const {
  if (kind() != Kind::interval) throw ValidationError("value is exact: " + to_string());
  return std::get<IntervalReal>(value_);
}

Enclosure RealParam::enclose(mpfr_prec_t bits) const {
  switch (kind()) {
    case Kind::rational: {
      Enclosure e(bits);
      const auto& q = std::get<Rational>(value_);
      mpfr_set_q(e.lo.get(), q.get_mpq_t(), MPFR_RNDD);
      mpfr_set_q(e.hi.get(), q.get_mpq_t(), MPFR_RNDU);
      return e;
    }
    case Kind::surd: {
      const auto& s = std::get<QuadraticSurd>(value_);
      Enclosure root(bits + 8);
      mpfr_set_si(root.lo.get(), s.radicand, MPFR_RNDN);
      mpfr_sqrt(root.lo.get(), root.lo.get(), MPFR_RNDD);
      mpfr_set_si(root.hi.get(), s.radicand, MPFR_RNDN);
      mpfr_sqrt(root.hi.get(), root.hi.get(), MPFR_RNDU);
      Enclosure e(bits);
      const bool positive = sgn(s.b) > 0;
      mpfr_mul_q(e.lo.get(), (positive ? root.lo : root.hi).get(), s.b.get_mpq_t(), MPFR_RNDD);
      mpfr_mul_q(e.hi.get(), (positive ? root.hi : root.lo).get(), s.b.get_mpq_t(), MPFR_RNDU);
      mpfr_add_q(e.lo.get(), e.lo.get(), s.a.get_mpq_t(), MPFR_RNDD);
      mpfr_add_q(e.hi.get(), e.hi.get(), s.a.get_mpq_t(), MPFR_RNDU);
      return e;
    }
    case Kind::interval:
      return std::get<IntervalReal>(value_).enclose(bits);
  }
  throw Error("unreachable");
}

double RealParam::to_double() const {
  if (is_rational()) return rational().get_d();
  const Enclosure e = enclose(96);
  if (!finite(e)) throw PrecisionExhausted("enclosure is unbounded at 96 bits");
  BigFloat mid(96);
  mpfr_add(mid.get(), e.lo.get(), e.hi.get(), MPFR_RNDN);
  mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
  return mid.to_double();
}

std::string RealParam::to_string() const {
  switch (kind()) {
    case Kind::rational:
      return rational().get_str();
    case Kind::surd: {
      const auto& s = quadratic_surd();
      std::ostringstream out;
      if (sgn(s.a) != 0) out << s.a.get_str();
      const Rational mag = ::abs(s.b);
      out << (sgn(s.b) < 0 ? "-" : (sgn(s.a) != 0 ? "+" : ""));
      if (mag != 1) out << mag.get_str() << "*";
      out << "sqrt(" << s.radicand << ")";
      return out.str();
    }
    case Kind::interval: {
      const auto& iv = interval();
      return "[" + iv.lo().to_string() + "," + iv.hi().to_string() + "]";
    }
  }
  return {};
}

int RealParam::sign(const PrecisionPolicy& policy) const {
  switch (kind()) {
    case Kind::rational:
      return sgn(rational());
    case Kind::surd: {
      const auto& s = quadratic_surd();
      return surd_sign(s.a, s.b, s.radicand);
    }
    case Kind::interval:
      break;
  }
  for (mpfr_prec_t bits = policy.start_bits; bits <= policy.max_bits; bits *= 2) {
    const Enclosure e = enclose(bits);
    if (mpfr_sgn(e.lo.get()) > 0) return 1;
    if (mpfr_sgn(e.hi.get()) < 0) return -1;
    if (mpfr_zero_p(e.lo.get()) && mpfr_zero_p(e.hi.get())) return 0;
  }
  throw PrecisionExhausted("cannot decide the sign of " + to_string() + " below " +
                           std::to_string(policy.max_bits) + " bits");
}

int RealParam::compare(const RealParam& other, const PrecisionPolicy& policy) const {
  if (is_rational() && other.is_rational()) {
    const int c = cmp(rational(), other.rational());
    return (c > 0) - (c < 0);
  }
  return (*this - other).sign(policy);
}

BigInt RealParam::floor(const PrecisionPolicy& policy) const {
  switch (kind()) {
    case Kind::rational: {
      const auto& q = rational();
      BigInt out;
      mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
      return out;
    }
    case Kind::surd: {
      const auto& s = quadratic_surd();
      const Enclosure e = enclose(128);
      BigInt n = e.lo.floor();
      // n <= x < n + 1 by exact comparison
      while (surd_sign(Rational(s.a - (n + 1)), s.b, s.radicand) >= 0) ++n;
      while (surd_sign(Rational(s.a - n), s.b, s.radicand) < 0) --n;
      return n;
    }
    case Kind::interval:
      break;
  }
  for (mpfr_prec_t bits = policy.start_bits; bits <= policy.max_bits; bits *= 2) {
    const Enclosure e = enclose(bits);
    if (!finite(e)) continue;
    BigInt lo = e.lo.floor();
    if (lo == e.hi.floor()) return lo;
  }
  throw PrecisionExhausted("floor of " + to_string() + " undecided at " +
                           std::to_string(policy.max_bits) +
                           " bits; the value may be an integer and needs an exact form");
}

RealParam RealParam::operator-() const {
  switch (kind()) {
    case Kind::rational:
      return RealParam(Rational(-rational()));
    case Kind::surd: {
      const auto& s = quadratic_surd();
      return RealParam(QuadraticSurd{-s.a, -s.b, s.radicand});
    }
    case Kind::interval:
      break;
  }
  return composite(*this, RealParam(), 'n');
}

RealParam RealParam::abs(const PrecisionPolicy& policy) const {
  return sign(policy) < 0 ? -*this : *this;
}

RealParam RealParam::reciprocal() const {
  switch (kind()) {
    case Kind::rational:
      if (sgn(rational()) == 0) throw ValidationError("division by zero");
      return RealParam(Rational(1 / rational()));
    case Kind::surd: {
      const auto& s = quadratic_surd();
      const Rational norm = s.a * s.a - s.b * s.b * s.radicand;
      return surd(Rational(s.a / norm), Rational(-s.b / norm), s.radicand);
    }
    case Kind::interval:
      break;
  }
  return composite(*this, RealParam(), 'r');
}

RealParam RealParam::pow(unsigned exponent) const {
  RealParam result(1L);
  RealParam base = *this;
  while (exponent > 0) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return result;
}

RealParam operator+(const RealParam& x, const RealParam& y) {
  using K = RealParam::Kind;
  if (x.kind() == K::rational && y.kind() == K::rational) {
    return RealParam(Rational(x.rational() + y.rational()));
  }
  if (x.kind() == K::surd && y.kind() == K::rational) {
    const auto& s = x.quadratic_surd();
    return RealParam::surd(s.a + y.rational(), s.b, s.radicand);
  }
  if (x.kind() == K::rational && y.kind() == K::surd) return y + x;
  if (x.kind() == K::surd && y.kind() == K::surd &&
      x.quadratic_surd().radicand == y.quadratic_surd().radicand) {
    const auto& s = x.quadratic_surd();
    const auto& t = y.quadratic_surd();
    return RealParam::surd(s.a + t.a, s.b + t.b, s.radicand);
  }
  return composite(x, y, '+');
}

RealParam operator-(const RealParam& x, const RealParam& y) {
  if (y.is_exact()) return x + (-y);
  return composite(x, y, '-');
}

RealParam operator*(const RealParam& x, const RealParam& y) {
  using K = RealParam::Kind;
  if (x.kind() == K::rational && y.kind() == K::rational) {
    return RealParam(Rational(x.rational() * y.rational()));
  }
  if (x.kind() == K::surd && y.kind() == K::rational) {
    const auto& s = x.quadratic_surd();
    return RealParam::surd(s.a * y.rational(), s.b * y.rational(), s.radicand);
  }
  if (x.kind() == K::rational && y.kind() == K::surd) return y * x;
  if (x.kind() == K::surd && y.kind() == K::surd) {
    const auto& s = x.quadratic_surd();
    const auto& t = y.quadratic_surd();
    if (s.radicand == t.radicand) {
      return RealParam::surd(s.a * t.a + s.b * t.b * s.radicand, s.a * t.b + s.b * t.a,
                             s.radicand);
    }
    if (sgn(s.a) == 0 && sgn(t.a) == 0) {
      const BigInt prod = BigInt(s.radicand) * t.radicand;
      if (prod.fits_slong_p()) return RealParam::surd(Rational(0), s.b * t.b, prod.get_si());
    }
  }
  return composite(x, y, '*');
}

RealParam operator/(const RealParam& x, const RealParam& y) {
  if (y.is_exact()) return x * y.reciprocal();
  return composite(x, y, '/');
}

bool RealParam::same_exact_value(const RealParam& other) const {
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::rational:
      return rational() == other.rational();
    case Kind::surd: {
      const auto& s = quadratic_surd();
      const auto& t = other.quadratic_surd();
      return s.radicand == t.radicand && s.a == t.a && s.b == t.b;
    }
    case Kind::interval:
      return interval().refiner() == other.interval().refiner();
  }
  return false;
}

// ---------------------------------------------------------- free functions

BigInt floor_linear(const RealParam& tau, std::int64_t k, const RealParam& eta,
                    const PrecisionPolicy& policy) {
  return (tau * RealParam(Rational(BigInt(static_cast<long>(k)))) + eta).floor(policy);
}

RealParam frac(const RealParam& x, const PrecisionPolicy& policy) {
  const BigInt n = x.floor(policy);
  return x - RealParam(Rational(n));
}

std::uint64_t gcd_pair(std::uint64_t p, std::uint64_t q) { return std::gcd(p, q); }

// ------------------------------------------------------------------ parser

namespace {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  RealParam parse() {
    RealParam v = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " at position " + std::to_string(pos_) + " in \"" +
                     std::string(text_) + "\"");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RealParam expr() {
    RealParam v = term();
    for (;;) {
      if (accept('+')) {
        v = v + term();
      } else if (accept('-')) {
        v = v - term();
      } else {
        return v;
      }
    }
  }

  RealParam term() {
    RealParam v = factor();
    for (;;) {
      if (accept('*')) {
        v = v * factor();
      } else if (accept('/')) {
        RealParam d = factor();
        if (d.sign() == 0) fail("division by zero");
        v = v / d;
      } else {
        return v;
      }
    }
  }

  RealParam factor() {
    if (accept('-')) return -factor();
    if (accept('+')) return factor();
    if (accept('(')) {
      RealParam v = expr();
      if (!accept(')')) fail("expected ')'");
      return v;
    }
    skip_space();
    if (text_.substr(pos_, 4) == "sqrt") {
      pos_ += 4;
      if (!accept('(')) fail("expected '(' after sqrt");
      RealParam inner = expr();
      if (!accept(')')) fail("expected ')'");
      if (!inner.is_rational()) fail("sqrt argument must be rational");
      if (sgn(inner.rational()) < 0) fail("sqrt of a negative number");
      return RealParam::sqrt_of(inner.rational());
    }
    return number();
  }

  RealParam number() {
    skip_space();
    const std::size_t start = pos_;
    std::string digits;
    long frac_digits = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      digits += text_[pos_++];
    }
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits += text_[pos_++];
        ++frac_digits;
      }
    }
    if (digits.empty()) {
      pos_ = start;
      fail("expected a number");
    }
    long exponent = 0;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      bool negative = false;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        negative = text_[pos_++] == '-';
      }
      std::string exp_digits;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        exp_digits += text_[pos_++];
      }
      if (exp_digits.empty() || exp_digits.size() > 6) fail("bad exponent");
      exponent = std::stol(exp_digits) * (negative ? -1 : 1);
    }
    const long shift = exponent - frac_digits;
    BigInt mantissa(digits, 10);
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
    Rational q = shift < 0 ? Rational(mantissa, scale) : Rational(mantissa * scale);
    return RealParam(q);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

RealParam parse_real(std::string_view text) {
  if (text.empty()) throw ParseError("empty number");
  return ExprParser(text).parse();
}

}  // namespace bmshift
