#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bmshift/beatty.hpp"
#include "bmshift/numerics.hpp"

namespace bmshift {

struct ClosedFormSource {
  std::string region;
};

struct EmpiricalSource {
  std::vector<std::pair<std::int64_t, std::int64_t>> windows;
  std::int64_t horizon = 0;
  // max |d_hat(w) - d_hat(w')| over tracked entries for the two largest windows
  double diagnostic = 0;
  // mass that moved from the infinity class to finite classes when the
  // horizon was doubled
  double horizon_shift = 0;
};

// (d_1, ..., d_K, d_inf). Entries past K follow tail_ratio geometrically
// when it is set (closed forms); empirical vectors instead carry the
// measured mass of finite classes beyond K in tail_mass.
struct DensityVector {
  std::vector<RealParam> finite;  // finite[i - 1] = d_i
  RealParam d_inf;
  std::optional<RealParam> tail_ratio;
  RealParam tail_mass;
  std::variant<ClosedFormSource, EmpiricalSource> source;
  // d_{i,j} keyed by (i, j), 1 <= j <= i
  std::optional<std::map<std::pair<std::size_t, std::size_t>, RealParam>> dij;

  std::size_t K() const { return finite.size(); }
  bool is_closed_form() const { return std::holds_alternative<ClosedFormSource>(source); }
  bool is_exact() const;

  // d_i for any i >= 1, extending by tail_ratio past K (0 if unset).
  RealParam value(std::size_t i) const;
  // Double versions of the above; value_d avoids building exact powers.
  double value_d(std::size_t i) const;
  // sum_{j > i} d_j, including tail_mass. Geometric tails are summed in
  // closed form.
  double tail_sum_d(std::size_t i) const;
  // sum_i d_i + d_inf
  double total_mass() const;

  // Throws InvalidDensity on negative entries or total mass > 1 + tol.
  void validate(double tol = 1e-9) const;
};

// Fills dij for 1 <= i <= max_i (default K) with
//   d_{i,j} = d_i ((a/g)^(j-1) - (a/g)^j),  j < i
//   d_{i,i} = d_i (a/g)^(i-1)
// where a/g = alpha/gamma.
DensityVector derived_dij(DensityVector d, const ParamTuple& p, std::size_t max_i = 0);

}  // namespace bmshift
