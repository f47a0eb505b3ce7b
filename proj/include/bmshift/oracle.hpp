#pragma once

#include <cstdint>

#include "bmshift/beatty.hpp"
#include "bmshift/chains.hpp"
#include "bmshift/matrix.hpp"
#include "bmshift/numerics.hpp"

namespace bmshift {

struct PatternCount {
  enum class Method { component_dp, exhaustive };
  std::int64_t n = 0;
  BigInt count;
  Method method = Method::component_dp;
  std::int64_t components = 0;  // including isolated sites
  std::int64_t cycles = 0;
};

// Admissible words on [1, n]: union-find over constraint_edges, then a
// transfer DP along every component (paths, or cycles when f has a
// periodic orbit inside the window).
PatternCount count_patterns(const ParamTuple& p, const BinaryMatrix& A, std::int64_t n);
PatternCount count_patterns_serial(const ParamTuple& p, const BinaryMatrix& A, std::int64_t n);

// Backtracking over all words; requires m^n <= cap.
BigInt exhaustive_count(const ParamTuple& p, const BinaryMatrix& A, std::int64_t n,
                        std::uint64_t cap = std::uint64_t{1} << 24);

// log_m(count_patterns) / n
double finite_scale_logcount(const ParamTuple& p, const BinaryMatrix& A, std::int64_t n);

// Product over chains of |A^(L-1)| per run of L consecutive visible chain
// positions, times the contribution of the residual set's own f-edges.
BigInt chain_product_count(const ParamTuple& p, const BinaryMatrix& A,
                           const ChainDecomposition& dec);

}  // namespace bmshift
