#include "bmshift/beatty.hpp"

#include <cmath>
#include <limits>

#include "bmshift/errors.hpp"

namespace bmshift {
namespace {

constexpr std::int64_t kValueLimit = std::int64_t{1} << 62;

// Nearest double to the exact value and an upper bound on the distance.
std::pair<double, double> double_with_error(const RealParam& x) {
  const Enclosure e = x.enclose(160);
  BigFloat mid(160);
  mpfr_add(mid.get(), e.lo.get(), e.hi.get(), MPFR_RNDN);
  mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
  const double d = mid.to_double();
  BigFloat dist(160), tmp(160);
  mpfr_sub_d(dist.get(), e.hi.get(), d, MPFR_RNDU);
  mpfr_d_sub(tmp.get(), d, e.lo.get(), MPFR_RNDU);
  mpfr_max(dist.get(), dist.get(), tmp.get(), MPFR_RNDU);
  return {d, std::abs(dist.to_double(MPFR_RNDU))};
}

// binary128 approximation built from a double-double split.
std::pair<__float128, __float128> quad_with_error(const RealParam& x) {
  const Enclosure e = x.enclose(200);
  BigFloat mid(200);
  mpfr_add(mid.get(), e.lo.get(), e.hi.get(), MPFR_RNDN);
  mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
  const double hi = mid.to_double();
  BigFloat rest(200);
  mpfr_sub_d(rest.get(), mid.get(), hi, MPFR_RNDN);
  const double lo = rest.to_double();
  const __float128 q = static_cast<__float128>(hi) + static_cast<__float128>(lo);
  // |x - q| <= |x - mid| + |mid - (hi + lo)| + rounding of the sum
  BigFloat dist(200), tmp(200);
  mpfr_sub(dist.get(), e.hi.get(), e.lo.get(), MPFR_RNDU);
  mpfr_sub_d(tmp.get(), rest.get(), lo, MPFR_RNDU);
  mpfr_abs(tmp.get(), tmp.get(), MPFR_RNDU);
  mpfr_add(dist.get(), dist.get(), tmp.get(), MPFR_RNDU);
  const double bound = dist.to_double(MPFR_RNDU);
  const __float128 rel = static_cast<__float128>(std::abs(hi)) * std::ldexp(1.0, -110);
  return {q, static_cast<__float128>(bound) + rel};
}

std::int64_t floor_to_int(__float128 v) {
  auto t = static_cast<__int128>(v);
  if (static_cast<__float128>(t) > v) --t;
  return static_cast<std::int64_t>(t);
}

__int128 floor_div(__int128 a, __int128 b) {
  // b > 0
  __int128 q = a / b;
  if ((a % b != 0) && (a < 0)) --q;
  return q;
}

bool small(const BigInt& v) { return abs(v) < (BigInt(1) << 30); }

}  // namespace

BeattySequence::BeattySequence(RealParam slope, RealParam shift, PrecisionPolicy policy)
    : slope_(std::move(slope)), shift_(std::move(shift)), policy_(policy) {
  if (slope_.compare(RealParam(1L), policy_) < 0) {
    throw ValidationError("Beatty slope must be >= 1, got " + slope_.to_string());
  }
  std::tie(slope_d_, slope_err_d_) = double_with_error(slope_);
  std::tie(shift_d_, shift_err_d_) = double_with_error(shift_);
  std::tie(slope_q_, slope_err_q_) = quad_with_error(slope_);
  std::tie(shift_q_, shift_err_q_) = quad_with_error(shift_);
  max_safe_index_ =
      static_cast<std::int64_t>(static_cast<double>(kValueLimit) / (slope_d_ + 1.0)) -
      static_cast<std::int64_t>(std::abs(shift_d_)) - 2;

  if (slope_.is_rational() && shift_.is_rational()) {
    const Rational& s = slope_.rational();
    const Rational& h = shift_.rational();
    big_scale_ = s.get_num() * h.get_den();
    big_offset_ = h.get_num() * s.get_den();
    big_den_ = s.get_den() * h.get_den();
    if (small(s.get_num()) && small(s.get_den()) && small(h.get_num()) && small(h.get_den())) {
      path_ = Path::small_rational;
      scale_ = static_cast<__int128>(big_scale_.get_si());
      offset_ = static_cast<__int128>(big_offset_.get_si());
      den_ = static_cast<__int128>(big_den_.get_si());
    } else {
      path_ = Path::big_rational;
    }
  }
}

std::int64_t BeattySequence::exact_at(std::int64_t k) const {
  const BigInt v = floor_linear(slope_, k, shift_, policy_);
  if (abs(v) >= BigInt(static_cast<long>(kValueLimit))) {
    throw NumericError("Beatty value exceeds 62 bits at k = " + std::to_string(k));
  }
  return v.get_si();
}

std::int64_t BeattySequence::at(std::int64_t k) const {
  switch (path_) {
    case Path::small_rational: {
      const __int128 v = floor_div(scale_ * k + offset_, den_);
      if (v >= kValueLimit || v <= -kValueLimit) {
        throw NumericError("Beatty value exceeds 62 bits at k = " + std::to_string(k));
      }
      return static_cast<std::int64_t>(v);
    }
    case Path::big_rational: {
      BigInt v;
      const BigInt num = big_scale_ * static_cast<long>(k) + big_offset_;
      mpz_fdiv_q(v.get_mpz_t(), num.get_mpz_t(), big_den_.get_mpz_t());
      if (abs(v) >= BigInt(static_cast<long>(kValueLimit))) {
        throw NumericError("Beatty value exceeds 62 bits at k = " + std::to_string(k));
      }
      return v.get_si();
    }
    case Path::approximate:
      break;
  }

  if (std::abs(k) < (std::int64_t{1} << 52)) {
    const double kd = static_cast<double>(k);
    const double prod = slope_d_ * kd;
    const double v = prod + shift_d_;
    const double err = std::abs(kd) * slope_err_d_ + shift_err_d_ +
                       (std::abs(prod) + std::abs(shift_d_)) * 0x1p-50 + 0x1p-1000;
    if (std::abs(v) + err < 0x1p52) {
      const double lo = std::floor(v - err);
      if (lo == std::floor(v + err)) return static_cast<std::int64_t>(lo);
    }
  }
  {
    const __float128 kq = static_cast<__float128>(k);
    const __float128 prod = slope_q_ * kq;
    const __float128 v = prod + shift_q_;
    const __float128 ak = kq < 0 ? -kq : kq;
    const __float128 ap = prod < 0 ? -prod : prod;
    const __float128 as = shift_q_ < 0 ? -shift_q_ : shift_q_;
    const __float128 err =
        ak * slope_err_q_ + shift_err_q_ + (ap + as) * static_cast<__float128>(0x1p-108);
    const __float128 av = v < 0 ? -v : v;
    if (av + err < static_cast<__float128>(kValueLimit)) {
      const std::int64_t lo = floor_to_int(v - err);
      if (lo == floor_to_int(v + err)) return lo;
    }
  }
  return exact_at(k);
}

std::optional<std::int64_t> BeattySequence::index_of(std::int64_t x) const {
  // smallest k with slope k + shift >= x, i.e. ceil((x - shift) / slope)
  std::int64_t k;
  if (std::abs(x) < (std::int64_t{1} << 50)) {
    k = static_cast<std::int64_t>(std::ceil((static_cast<double>(x) - shift_d_) / slope_d_));
  } else {
    const __float128 g = (static_cast<__float128>(x) - shift_q_) / slope_q_;
    k = floor_to_int(g) + 1;
  }
  if (k < 1) k = 1;
  while (k > 1 && at(k - 1) >= x) --k;
  while (at(k) < x) ++k;
  if (at(k) == x) return k;
  return std::nullopt;
}

// ------------------------------------------------------------- ParamTuple

ParamTuple::ParamTuple(RealParam alpha, RealParam beta, RealParam gamma, RealParam delta,
                       PrecisionPolicy policy)
    : alpha_(std::move(alpha)),
      beta_(std::move(beta)),
      gamma_(std::move(gamma)),
      delta_(std::move(delta)),
      ratio_(gamma_ / alpha_),
      chain_bound_((RealParam(1L) + beta_.abs(policy) + delta_.abs(policy)) * alpha_ /
                   (gamma_ - alpha_)),
      trajectory_bound_((gamma_ * (RealParam(1L) + beta_.abs(policy)) + alpha_ * delta_.abs(policy)) /
                        (gamma_ - alpha_)),
      policy_(policy),
      source_(alpha_, beta_, policy),
      target_(gamma_, delta_, policy) {
  ratio_d_ = ratio_.to_double();
  chain_bound_d_ = chain_bound_.to_double();
}

ParamTuple ParamTuple::make(RealParam alpha, RealParam beta, RealParam gamma, RealParam delta,
                            PrecisionPolicy policy) {
  if (alpha.compare(RealParam(1L), policy) < 0) {
    throw ValidationError("alpha must be >= 1, got " + alpha.to_string());
  }
  if (alpha.compare(gamma, policy) >= 0) {
    throw ValidationError("alpha must be < gamma, got alpha=" + alpha.to_string() +
                          " gamma=" + gamma.to_string());
  }
  return ParamTuple(std::move(alpha), std::move(beta), std::move(gamma), std::move(delta),
                    policy);
}

bool ParamTuple::all_integer() const {
  return alpha_.is_integer() && beta_.is_integer() && gamma_.is_integer() &&
         delta_.is_integer();
}

std::string ParamTuple::to_string() const {
  return "(" + alpha_.to_string() + ", " + beta_.to_string() + ", " + gamma_.to_string() +
         ", " + delta_.to_string() + ")";
}

// ------------------------------------------------------------- operations

std::optional<std::int64_t> member(std::int64_t x, const RealParam& tau, const RealParam& eta) {
  if (x < 1) return std::nullopt;
  return BeattySequence(tau, eta).index_of(x);
}

std::int64_t f_map(std::int64_t x, const ParamTuple& p) {
  const auto k = x >= 1 ? p.source().index_of(x) : std::nullopt;
  if (!k) throw NotInDomain(std::to_string(x) + " is not in S(alpha, beta)");
  const std::int64_t y = p.target().at(*k);
  if (y < 1) {
    throw NonPositiveImage("f(" + std::to_string(x) + ") = " + std::to_string(y) + " < 1");
  }
  return y;
}

std::vector<std::pair<std::int64_t, std::int64_t>> constraint_edges(const ParamTuple& p,
                                                                     std::int64_t n) {
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
  for (std::int64_t k = 1;; ++k) {
    const std::int64_t v = p.target().at(k);
    if (v > n) break;
    const std::int64_t u = p.source().at(k);
    if (u >= 1 && v >= 1 && u <= n) edges.emplace_back(u, v);
  }
  return edges;
}

}  // namespace bmshift
