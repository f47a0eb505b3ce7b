#include "bmshift/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <vector>

#include <omp.h>

#include "bmshift/errors.hpp"

namespace bmshift {
namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t size) : parent_(size), rank_(size, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<unsigned char> rank_;
};

struct Component {
  std::int64_t start;
  std::int64_t length;
  bool cycle;
};

// Words x_1..x_L with A(x_k, x_{k+1}) = 1.
BigInt path_dp(const BinaryMatrix& A, std::int64_t length) {
  const std::size_t m = A.size();
  std::vector<BigInt> v(m, BigInt(1)), w(m);
  for (std::int64_t step = 1; step < length; ++step) {
    for (std::size_t b = 0; b < m; ++b) {
      w[b] = 0;
      for (std::size_t a = 0; a < m; ++a) {
        if (A(a, b)) w[b] += v[a];
      }
    }
    v.swap(w);
  }
  BigInt total = 0;
  for (const auto& x : v) total += x;
  return total;
}

// Closed walks of the given length.
BigInt cycle_dp(const BinaryMatrix& A, std::int64_t length) {
  const std::size_t m = A.size();
  BigInt total = 0;
  std::vector<BigInt> v(m), w(m);
  for (std::size_t s = 0; s < m; ++s) {
    std::fill(v.begin(), v.end(), BigInt(0));
    v[s] = 1;
    for (std::int64_t step = 0; step < length; ++step) {
      for (std::size_t b = 0; b < m; ++b) {
        w[b] = 0;
        for (std::size_t a = 0; a < m; ++a) {
          if (A(a, b)) w[b] += v[a];
        }
      }
      v.swap(w);
    }
    total += v[s];
  }
  return total;
}

BigInt product_tree(std::vector<BigInt>& xs, std::size_t lo, std::size_t hi) {
  if (hi - lo == 0) return BigInt(1);
  if (hi - lo == 1) return xs[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return product_tree(xs, lo, mid) * product_tree(xs, mid, hi);
}

std::vector<Component> components(const ParamTuple& p, std::int64_t n) {
  const auto edges = constraint_edges(p, n);
  const auto N = static_cast<std::size_t>(n) + 1;
  std::vector<std::int64_t> next(N, 0), prev(N, 0);
  UnionFind uf(N);
  for (const auto& [u, v] : edges) {
    if (next[static_cast<std::size_t>(u)] != 0 || prev[static_cast<std::size_t>(v)] != 0) {
      throw NonPathComponent("vertex of degree > 2 at edge (" + std::to_string(u) + ", " +
                             std::to_string(v) + ")");
    }
    next[static_cast<std::size_t>(u)] = v;
    prev[static_cast<std::size_t>(v)] = u;
    uf.unite(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
  }
  std::vector<std::int64_t> size(N, 0);
  for (std::int64_t x = 1; x <= n; ++x) ++size[uf.find(static_cast<std::size_t>(x))];

  std::vector<Component> out;
  std::vector<char> done(N, 0);
  auto walk = [&](std::int64_t start, bool cycle) {
    std::int64_t length = 0;
    std::int64_t x = start;
    do {
      done[static_cast<std::size_t>(x)] = 1;
      ++length;
      x = next[static_cast<std::size_t>(x)];
    } while (x != 0 && x != start);
    if (length != size[uf.find(static_cast<std::size_t>(start))]) {
      throw NonPathComponent("component at " + std::to_string(start) +
                             " is neither a path nor a cycle");
    }
    out.push_back({start, length, cycle});
  };
  for (std::int64_t x = 1; x <= n; ++x) {
    if (prev[static_cast<std::size_t>(x)] == 0) walk(x, false);
  }
  for (std::int64_t x = 1; x <= n; ++x) {
    if (!done[static_cast<std::size_t>(x)]) walk(x, true);
  }
  return out;
}

PatternCount count_impl(const ParamTuple& p, const BinaryMatrix& A, std::int64_t n,
                        bool parallel) {
  if (n < 1) throw ValidationError("pattern window needs n >= 1");
  const auto comps = components(p, n);
  std::vector<BigInt> factors(comps.size());
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto count = static_cast<std::int64_t>(comps.size());
#pragma omp parallel for schedule(dynamic, 64) if (parallel)
  for (std::int64_t c = 0; c < count; ++c) {
    try {
      const Component& comp = comps[static_cast<std::size_t>(c)];
      factors[static_cast<std::size_t>(c)] =
          comp.cycle ? cycle_dp(A, comp.length) : path_dp(A, comp.length);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  PatternCount pc;
  pc.n = n;
  pc.method = PatternCount::Method::component_dp;
  pc.components = count;
  pc.cycles = std::count_if(comps.begin(), comps.end(), [](const Component& c) { return c.cycle; });
  if (parallel) {
    pc.count = product_tree(factors, 0, factors.size());
  } else {
    pc.count = 1;
    for (const auto& f : factors) pc.count *= f;
  }
  return pc;
}

}  // namespace

PatternCount count_patterns(const ParamTuple& p, const BinaryMatrix& A, std::int64_t n) {
  return count_impl(p, A, n, true);
}

PatternCount count_patterns_serial(const ParamTuple& p, const BinaryMatrix& A, std::int64_t n) {
  return count_impl(p, A, n, false);
}

BigInt exhaustive_count(const ParamTuple& p, const BinaryMatrix& A, std::int64_t n,
                        std::uint64_t cap) {
  if (n < 1) throw ValidationError("pattern window needs n >= 1");
  const std::uint64_t m = A.size();
  std::uint64_t words = 1;
  for (std::int64_t i = 0; i < n; ++i) {
    if (words > cap / m) {
      throw CapExceeded(std::to_string(m) + "^" + std::to_string(n) + " words exceed the cap");
    }
    words *= m;
  }
  // checks[t] lists the partner u of every constraint whose later endpoint is t,
  // with a flag telling whether t is the source or the target.
  struct Check {
    std::int64_t other;
    bool t_is_source;
  };
  std::vector<std::vector<Check>> checks(static_cast<std::size_t>(n) + 1);
  for (const auto& [u, v] : constraint_edges(p, n)) {
    if (u >= v) {
      checks[static_cast<std::size_t>(u)].push_back({v, true});
    } else {
      checks[static_cast<std::size_t>(v)].push_back({u, false});
    }
  }
  std::vector<std::size_t> word(static_cast<std::size_t>(n) + 1, 0);
  std::uint64_t total = 0;
  auto admissible = [&](std::int64_t t) {
    const std::size_t s = word[static_cast<std::size_t>(t)];
    for (const Check& c : checks[static_cast<std::size_t>(t)]) {
      const std::size_t o = word[static_cast<std::size_t>(c.other)];
      if (!(c.t_is_source ? A(s, o) : A(o, s))) return false;
    }
    return true;
  };
  // iterative depth-first search over positions 1..n
  std::int64_t t = 1;
  word[1] = 0;
  while (t >= 1) {
    const auto ts = static_cast<std::size_t>(t);
    if (word[ts] >= m) {
      --t;
      if (t >= 1) ++word[static_cast<std::size_t>(t)];
      continue;
    }
    if (!admissible(t)) {
      ++word[ts];
      continue;
    }
    if (t == n) {
      ++total;
      ++word[ts];
      continue;
    }
    ++t;
    word[static_cast<std::size_t>(t)] = 0;
  }
  return BigInt(std::to_string(total));
}

double finite_scale_logcount(const ParamTuple& p, const BinaryMatrix& A, std::int64_t n) {
  BigInt c = count_patterns(p, A, n).count;
  if (sgn(c) <= 0) return -INFINITY;
  // c = m^whole * rest, so full shifts come out exact
  const BigInt m = static_cast<unsigned long>(A.size());
  const auto whole = static_cast<double>(mpz_remove(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t()));
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, c.get_mpz_t());
  const double log2rest = std::log2(mant) + static_cast<double>(exp);
  return (whole + log2rest / std::log2(static_cast<double>(A.size()))) / static_cast<double>(n);
}

BigInt chain_product_count(const ParamTuple& p, const BinaryMatrix& A,
                           const ChainDecomposition& dec) {
  std::map<std::int64_t, unsigned long> runs;  // run length -> multiplicity
  for (std::size_t c = 0; c < dec.chain_count(); ++c) {
    auto [first, last] = dec.chain(c);
    std::vector<std::int64_t> positions;
    for (auto it = first; it != last; ++it) positions.push_back(it->position);
    std::sort(positions.begin(), positions.end());
    std::size_t i = 0;
    while (i < positions.size()) {
      std::size_t j = i + 1;
      while (j < positions.size() && positions[j] == positions[j - 1] + 1) ++j;
      ++runs[static_cast<std::int64_t>(j - i)];
      i = j;
    }
  }

  // f restricted to the residual set: paths and cycles
  const auto& R = dec.residual;
  std::map<std::int64_t, std::int64_t> next;
  std::map<std::int64_t, std::int64_t> prev;
  auto in_residual = [&](std::int64_t y) { return std::binary_search(R.begin(), R.end(), y); };
  for (std::int64_t r : R) {
    const auto k = p.source().index_of(r);
    if (!k || *k > p.target().max_safe_index()) continue;
    const std::int64_t y = p.target().at(*k);
    if (y >= 1 && y <= dec.n && in_residual(y)) {
      next[r] = y;
      prev[y] = r;
    }
  }
  std::map<std::int64_t, unsigned long> cycles;
  std::map<std::int64_t, char> seen;
  for (std::int64_t r : R) {
    if (prev.count(r)) continue;
    std::int64_t length = 0;
    for (std::int64_t x = r;; ) {
      seen[x] = 1;
      ++length;
      auto it = next.find(x);
      if (it == next.end()) break;
      x = it->second;
    }
    ++runs[length];
  }
  for (std::int64_t r : R) {
    if (seen.count(r)) continue;
    std::int64_t length = 0;
    std::int64_t x = r;
    do {
      seen[x] = 1;
      ++length;
      x = next.at(x);
    } while (x != r);
    ++cycles[length];
  }

  BigInt total = 1;
  BigInt factor;
  for (const auto& [length, mult] : runs) {
    const BigInt base = A.power_sum(static_cast<std::size_t>(length - 1));
    mpz_pow_ui(factor.get_mpz_t(), base.get_mpz_t(), mult);
    total *= factor;
  }
  for (const auto& [length, mult] : cycles) {
    const BigInt base = A.closed_walks(static_cast<std::size_t>(length));
    mpz_pow_ui(factor.get_mpz_t(), base.get_mpz_t(), mult);
    total *= factor;
  }
  return total;
}

}  // namespace bmshift
