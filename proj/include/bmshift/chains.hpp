#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <utility>
#include <vector>

#include "bmshift/beatty.hpp"
#include "bmshift/density.hpp"

namespace bmshift {

struct ChainClass {
  enum class Tag {
    not_head,            // x in S(gamma, delta)
    a1,                  // x in neither sequence
    finite,              // x in A_i, i = length
    infinity_candidate,  // survived `length` steps without exiting
    residual,            // f(x) < 1: x starts no chain inside N
  };
  Tag tag = Tag::not_head;
  std::int64_t length = 0;

  static ChainClass finite_of(std::int64_t i) { return {Tag::finite, i}; }
  bool is_head() const { return tag == Tag::a1 || tag == Tag::finite || tag == Tag::infinity_candidate; }
  friend bool operator==(const ChainClass&, const ChainClass&) = default;
};

std::ostream& operator<<(std::ostream& os, const ChainClass& c);

// Compact per-x class codes used by the scan kernels.
namespace code {
inline constexpr std::uint16_t not_head = 0;
inline constexpr std::uint16_t a1 = 1;  // Finite(i) is stored as i >= 2
inline constexpr std::uint16_t residual = 0xFFFE;
inline constexpr std::uint16_t infinity = 0xFFFF;
inline constexpr std::int64_t max_horizon = 60000;
}  // namespace code

std::uint16_t encode(const ChainClass& c);
ChainClass decode(std::uint16_t c, std::int64_t horizon);

// ceil(log_{gamma/alpha}(10 n)) + 8
std::int64_t default_horizon(const ParamTuple& p, std::int64_t n);

ChainClass classify_head(std::int64_t x, const ParamTuple& p, std::int64_t horizon);

// Class codes for x = lo, ..., hi. The parallel version splits the range
// into fixed blocks; its output is identical to the serial one.
std::vector<std::uint16_t> classify_range_serial(const ParamTuple& p, std::int64_t lo,
                                                 std::int64_t hi, std::int64_t horizon);
std::vector<std::uint16_t> classify_range_parallel(const ParamTuple& p, std::int64_t lo,
                                                   std::int64_t hi, std::int64_t horizon);

struct ChainDecomposition {
  struct Member {
    std::int64_t value;
    std::int64_t position;  // index along the chain, head = 0
  };

  std::int64_t n = 0;
  std::int64_t horizon = 0;
  std::vector<std::int64_t> heads;
  std::vector<ChainClass> classes;
  // members of chain c are members[offsets[c] .. offsets[c + 1]), values <= n
  std::vector<std::size_t> offsets{0};
  std::vector<Member> members;
  std::vector<std::int64_t> residual;  // sorted
  // (i, j) -> |A_{i,j}(n)|
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> counts;

  std::size_t chain_count() const { return heads.size(); }
  std::pair<const Member*, const Member*> chain(std::size_t c) const {
    return {members.data() + offsets[c], members.data() + offsets[c + 1]};
  }
};

// horizon <= 0 selects default_horizon(p, n).
ChainDecomposition decompose(const ParamTuple& p, std::int64_t n, std::int64_t horizon = 0,
                             bool parallel = true);

// CSV: x,class,chain_id,position_in_chain. Residual elements have
// class R and chain_id -1.
void write_decomposition_csv(std::ostream& os, const ChainDecomposition& dec);

struct EmpiricalOptions {
  std::int64_t horizon = 0;  // <= 0: default_horizon over the largest window
  std::size_t K = 40;
  double stability_threshold = 1e-3;
  bool parallel = true;
};

// Window ratios |A_i cap [n1, n2]| / (n2 - n1). The vector is taken from
// the last window; the diagnostic compares it with the one before.
DensityVector empirical_densities(const ParamTuple& p,
                                  const std::vector<std::pair<std::int64_t, std::int64_t>>& windows,
                                  const EmpiricalOptions& options = {});

// Windows [1, n/2] and [1, n].
DensityVector empirical_densities(const ParamTuple& p, std::int64_t n,
                                  const EmpiricalOptions& options = {});

}  // namespace bmshift
