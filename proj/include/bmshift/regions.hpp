#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>

#include "bmshift/beatty.hpp"
#include "bmshift/density.hpp"

namespace bmshift {

enum class Region { R1, R2, R3, R4, R5, R6Open, R7, R8, R9, R10, Unknown };

std::string to_string(Region r);

struct RegionId {
  Region id = Region::Unknown;
  // Which predicates fired, in order, e.g. "all-integer; gcd(2,4)=2 does not divide 1".
  std::string certificate;
};

RegionId classify_region(const ParamTuple& p);

// {floor(beta + b h / a) mod b : 0 <= h < a}
std::set<std::int64_t> residue_set(std::int64_t a, std::int64_t b, const RealParam& beta);

// Density of (a N + i) cap (b N + j): gcd(a,b)/(ab) if gcd(a,b) | (i - j), else 0.
Rational g_density(std::int64_t a, std::int64_t b, std::int64_t i, std::int64_t j);

// alpha = b/a and gamma = d/c in lowest terms together with the residue
// sets of S(alpha, beta) mod b and S(gamma, delta) mod d.
struct ResidueCover {
  std::int64_t a = 1, b = 1, c = 1, d = 1;
  std::set<std::int64_t> rab;
  std::set<std::int64_t> rcd;

  static ResidueCover from(const ParamTuple& p);
  std::set<std::int64_t> rab_complement() const;
  std::set<std::int64_t> rcd_complement() const;
};

// Residue-class densities for rational alpha, gamma.
DensityVector rational_d(const ParamTuple& p, std::size_t K = 40);

// The integer-tuple formulas for regions 7-10.
DensityVector integer_closed_form_d(const ParamTuple& p, Region r, std::size_t K = 40);

DensityVector closed_form_d(const ParamTuple& p, const RegionId& r, std::size_t K = 40);
DensityVector closed_form_d(const ParamTuple& p, std::size_t K = 40);

}  // namespace bmshift
