#include "bmshift/matrix.hpp"

#include <algorithm>
#include <queue>

#include "bmshift/errors.hpp"

namespace bmshift {

BinaryMatrix::BinaryMatrix(std::size_t m, std::vector<std::uint8_t> entries)
    : m_(m), entries_(std::move(entries)), cache_(std::make_shared<PowerCache>()) {
  if (m_ < 2) throw ValidationError("matrix dimension must be at least 2");
  if (entries_.size() != m_ * m_) throw ValidationError("matrix entry count is not m*m");
  row_sums_.assign(m_, 0);
  for (std::size_t i = 0; i < m_; ++i) {
    for (std::size_t j = 0; j < m_; ++j) {
      const auto v = entries_[i * m_ + j];
      if (v > 1) throw ValidationError("matrix entries must be 0 or 1");
      row_sums_[i] += v;
    }
  }
}

BinaryMatrix BinaryMatrix::parse(std::string_view text) {
  std::vector<std::string> rows;
  std::string row;
  auto flush = [&] {
    if (!row.empty()) rows.push_back(row);
    row.clear();
  };
  for (char c : text) {
    if (c == ';' || c == '\n') {
      flush();
    } else if (c == '0' || c == '1') {
      row += c;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      continue;
    } else {
      throw ParseError(std::string("matrix: unexpected character '") + c + "'");
    }
  }
  flush();
  const std::size_t m = rows.size();
  if (m < 2) throw ParseError("matrix: need at least two rows");
  std::vector<std::uint8_t> entries;
  entries.reserve(m * m);
  for (const auto& r : rows) {
    if (r.size() != m) throw ParseError("matrix: row \"" + r + "\" does not have " +
                                        std::to_string(m) + " entries");
    for (char c : r) entries.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return BinaryMatrix(m, std::move(entries));
}

BinaryMatrix BinaryMatrix::all_ones(std::size_t m) {
  return BinaryMatrix(m, std::vector<std::uint8_t>(m * m, 1));
}

BinaryMatrix BinaryMatrix::golden_mean() { return BinaryMatrix(2, {1, 1, 1, 0}); }

void BinaryMatrix::extend_cache(std::size_t count) const {
  // caller holds the lock
  auto& c = *cache_;
  if (c.sums.empty()) {
    c.current.assign(m_ * m_, BigInt(0));
    for (std::size_t i = 0; i < m_; ++i) c.current[i * m_ + i] = 1;
    c.sums.emplace_back(static_cast<unsigned long>(m_));
  }
  std::vector<BigInt> next(m_ * m_);
  while (c.sums.size() < count) {
    BigInt total = 0;
    // next = current * A; A is 0/1 so each entry is a sum of selected terms
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < m_; ++j) {
        BigInt acc = 0;
        for (std::size_t k = 0; k < m_; ++k) {
          if (entries_[k * m_ + j]) acc += c.current[i * m_ + k];
        }
        total += acc;
        next[i * m_ + j] = std::move(acc);
      }
    }
    c.current.swap(next);
    c.sums.push_back(std::move(total));
  }
}

BigInt BinaryMatrix::power_sum(std::size_t ell) const {
  std::lock_guard lock(cache_->mutex);
  extend_cache(ell + 1);
  return cache_->sums[ell];
}

std::vector<BigInt> BinaryMatrix::power_sums(std::size_t count) const {
  std::lock_guard lock(cache_->mutex);
  extend_cache(count);
  return {cache_->sums.begin(), cache_->sums.begin() + static_cast<std::ptrdiff_t>(count)};
}

BigInt BinaryMatrix::closed_walks(std::size_t len) const {
  BigInt trace = 0;
  std::vector<BigInt> vec(m_), next(m_);
  for (std::size_t start = 0; start < m_; ++start) {
    std::fill(vec.begin(), vec.end(), BigInt(0));
    vec[start] = 1;
    for (std::size_t step = 0; step < len; ++step) {
      for (std::size_t j = 0; j < m_; ++j) {
        next[j] = 0;
        for (std::size_t i = 0; i < m_; ++i) {
          if (entries_[i * m_ + j]) next[j] += vec[i];
        }
      }
      vec.swap(next);
    }
    trace += vec[start];
  }
  return trace;
}

bool BinaryMatrix::is_irreducible() const {
  // strongly connected iff every vertex is reachable from 0 in the graph and
  // in its transpose
  auto reaches_all = [&](bool transpose) {
    std::vector<char> seen(m_, 0);
    std::queue<std::size_t> todo;
    todo.push(0);
    seen[0] = 1;
    while (!todo.empty()) {
      const auto u = todo.front();
      todo.pop();
      for (std::size_t v = 0; v < m_; ++v) {
        const bool edge = transpose ? entries_[v * m_ + u] : entries_[u * m_ + v];
        if (edge && !seen[v]) {
          seen[v] = 1;
          todo.push(v);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char s) { return s != 0; });
  };
  return reaches_all(false) && reaches_all(true);
}

bool BinaryMatrix::is_primitive() const {
  if (!is_irreducible()) return false;
  const std::size_t wielandt = m_ * m_ - 2 * m_ + 2;
  std::vector<std::uint8_t> power = entries_;
  std::vector<std::uint8_t> next(m_ * m_);
  for (std::size_t k = 1;; ++k) {
    if (std::all_of(power.begin(), power.end(), [](std::uint8_t v) { return v != 0; })) return true;
    if (k >= wielandt) return false;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < m_; ++j) {
        std::uint8_t v = 0;
        for (std::size_t l = 0; l < m_ && !v; ++l) v = power[i * m_ + l] & entries_[l * m_ + j];
        next[i * m_ + j] = v;
      }
    }
    power.swap(next);
  }
}

bool BinaryMatrix::row_sums_equal() const {
  return std::all_of(row_sums_.begin(), row_sums_.end(),
                     [&](unsigned s) { return s == row_sums_.front(); });
}

std::string BinaryMatrix::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < m_; ++i) {
    if (i) out += ';';
    for (std::size_t j = 0; j < m_; ++j) out += entries_[i * m_ + j] ? '1' : '0';
  }
  return out;
}

}  // namespace bmshift
