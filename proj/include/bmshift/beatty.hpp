#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "bmshift/numerics.hpp"

namespace bmshift {

// The Beatty sequence k -> floor(slope * k + shift), k = 1, 2, ..., slope >= 1.
//
// Evaluation is exact. Small rationals go through 128-bit integer
// arithmetic; everything else is first tried in double and then binary128
// with a rigorous error radius, and only values that land within that
// radius of an integer fall back to exact GMP/MPFR evaluation.
class BeattySequence {
 public:
  BeattySequence(RealParam slope, RealParam shift, PrecisionPolicy policy = {});

  // floor(slope * k + shift). Throws NumericError if the value does not fit
  // in 62 bits.
  std::int64_t at(std::int64_t k) const;

  // The unique k >= 1 with at(k) == x, if any. Uniqueness holds because
  // slope >= 1 makes at() strictly increasing.
  std::optional<std::int64_t> index_of(std::int64_t x) const;
  bool contains(std::int64_t x) const { return index_of(x).has_value(); }

  // Largest k for which at(k) is guaranteed to fit (conservative).
  std::int64_t max_safe_index() const { return max_safe_index_; }

  const RealParam& slope() const { return slope_; }
  const RealParam& shift() const { return shift_; }
  double slope_approx() const { return slope_d_; }
  double shift_approx() const { return shift_d_; }

 private:
  std::int64_t exact_at(std::int64_t k) const;

  RealParam slope_;
  RealParam shift_;
  PrecisionPolicy policy_;

  enum class Path { small_rational, big_rational, approximate };
  Path path_ = Path::approximate;

  // small_rational: floor((scale * k + offset) / den)
  __int128 scale_ = 0;
  __int128 offset_ = 0;
  __int128 den_ = 1;
  BigInt big_scale_, big_offset_, big_den_;

  double slope_d_ = 0, shift_d_ = 0, slope_err_d_ = 0, shift_err_d_ = 0;
  __float128 slope_q_ = 0, shift_q_ = 0, slope_err_q_ = 0, shift_err_q_ = 0;
  std::int64_t max_safe_index_ = 0;
};

// (alpha, beta, gamma, delta) with 1 <= alpha < gamma, together with the
// derived constants gamma/alpha and C = (1 + |beta| + |delta|) alpha / (gamma - alpha).
class ParamTuple {
 public:
  static ParamTuple make(RealParam alpha, RealParam beta, RealParam gamma, RealParam delta,
                         PrecisionPolicy policy = {});

  const RealParam& alpha() const { return alpha_; }
  const RealParam& beta() const { return beta_; }
  const RealParam& gamma() const { return gamma_; }
  const RealParam& delta() const { return delta_; }
  const RealParam& ratio() const { return ratio_; }
  const RealParam& chain_bound() const { return chain_bound_; }
  double ratio_approx() const { return ratio_d_; }
  double chain_bound_approx() const { return chain_bound_d_; }
  // (gamma (1 + |beta|) + alpha |delta|) / (gamma - alpha): a constant D with
  // (gamma/alpha)^l (x - D) < f^l(x) < (gamma/alpha)^l (x + D) for every x in the source.
  const RealParam& trajectory_bound() const { return trajectory_bound_; }
  const PrecisionPolicy& policy() const { return policy_; }

  // floor(alpha k + beta) and floor(gamma k + delta)
  const BeattySequence& source() const { return source_; }
  const BeattySequence& target() const { return target_; }

  bool all_integer() const;
  std::string to_string() const;

 private:
  ParamTuple(RealParam alpha, RealParam beta, RealParam gamma, RealParam delta,
             PrecisionPolicy policy);

  RealParam alpha_, beta_, gamma_, delta_, ratio_, chain_bound_, trajectory_bound_;
  double ratio_d_ = 0, chain_bound_d_ = 0;
  PrecisionPolicy policy_;
  BeattySequence source_, target_;
};

// k >= 1 with floor(tau k + eta) == x, or nothing.
std::optional<std::int64_t> member(std::int64_t x, const RealParam& tau, const RealParam& eta);

// f(floor(alpha k + beta)) = floor(gamma k + delta). Throws NotInDomain when
// x is not in S(alpha, beta) and NonPositiveImage when the image is < 1.
std::int64_t f_map(std::int64_t x, const ParamTuple& p);

// Pairs (floor(alpha k + beta), floor(gamma k + delta)) with both entries in
// [1, n], in increasing k.
std::vector<std::pair<std::int64_t, std::int64_t>> constraint_edges(const ParamTuple& p,
                                                                     std::int64_t n);

}  // namespace bmshift
