#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "bmshift/numerics.hpp"

namespace bmshift {

// m x m transition matrix over {0, 1}. Immutable; copies share the power-sum
// cache, which is filled lazily under a lock.
class BinaryMatrix {
 public:
  BinaryMatrix(std::size_t m, std::vector<std::uint8_t> entries);

  // Rows of '0'/'1' separated by ';' or newlines, e.g. "11;10".
  static BinaryMatrix parse(std::string_view text);
  static BinaryMatrix all_ones(std::size_t m);
  static BinaryMatrix golden_mean();

  std::size_t size() const { return m_; }
  int operator()(std::size_t i, std::size_t j) const { return entries_[i * m_ + j]; }
  const std::vector<std::uint8_t>& entries() const { return entries_; }
  const std::vector<unsigned>& row_sums() const { return row_sums_; }

  // |A^ell|, the sum of all entries of A^ell. |A^0| = m.
  BigInt power_sum(std::size_t ell) const;
  // |A^0|, ..., |A^(count-1)|.
  std::vector<BigInt> power_sums(std::size_t count) const;
  // trace(A^len): admissible colourings of a directed cycle of len vertices.
  BigInt closed_walks(std::size_t len) const;

  bool is_irreducible() const;
  bool is_primitive() const;
  bool row_sums_equal() const;

  std::string to_string() const;

 private:
  struct PowerCache {
    std::mutex mutex;
    std::vector<BigInt> sums;     // sums[l] = |A^l|
    std::vector<BigInt> current;  // A^(sums.size()-1), row major
  };

  void extend_cache(std::size_t count) const;

  std::size_t m_;
  std::vector<std::uint8_t> entries_;
  std::vector<unsigned> row_sums_;
  std::shared_ptr<PowerCache> cache_;
};

}  // namespace bmshift
