#pragma once

// Reference computations used only by the tests. None of them call into
// the library's floor, membership or dimension code.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include <gmpxx.h>

namespace oracle {

// r + s*sqrt(d) with rational r, s and square-free d (s may be 0).
struct Surd {
  mpq_class r;
  mpq_class s;
  long d = 2;
};

// floor(s * sqrt(d)) via integer square roots.
inline mpz_class floor_sqrt_part(const mpq_class& s, long d, const mpz_class& w) {
  // floor(w * s * sqrt(d)) for integer w > 0
  mpq_class ws = s * w;
  ws.canonicalize();
  if (ws == 0) return 0;
  const bool negative = ws < 0;
  const mpz_class p = abs(ws.get_num());
  const mpz_class q = ws.get_den();
  mpz_class radicand = p * p * d;
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), root.get_mpz_t(), q.get_mpz_t());  // floor(|ws| sqrt d)
  return negative ? mpz_class(-fl - 1) : fl;
}

// floor(r + s sqrt(d)), s sqrt(d) irrational or zero.
inline mpz_class floor_surd(const Surd& x) {
  mpq_class r = x.r;
  r.canonicalize();
  if (x.s == 0) {
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return f;
  }
  const mpz_class w = r.get_den();
  const mpz_class u = r.get_num();
  const mpz_class X = floor_sqrt_part(x.s, x.d, w);
  mpz_class f;
  const mpz_class top = u + X;
  mpz_fdiv_q(f.get_mpz_t(), top.get_mpz_t(), w.get_mpz_t());
  return f;
}

// floor(tau k + eta) for tau, eta in one field Q(sqrt d).
inline std::int64_t beatty(const Surd& tau, std::int64_t k, const Surd& eta) {
  Surd v{tau.r * k + eta.r, tau.s * k + eta.s, tau.d};
  return floor_surd(v).get_si();
}

// Members of S(tau, eta) in [1, limit], by enumeration of k.
inline std::set<std::int64_t> beatty_set(const Surd& tau, const Surd& eta, std::int64_t limit) {
  std::set<std::int64_t> out;
  for (std::int64_t k = 1;; ++k) {
    const std::int64_t v = beatty(tau, k, eta);
    if (v > limit) break;
    if (v >= 1) out.insert(v);
  }
  return out;
}

// Unique positive root of t^3 = t + 1 by bisection.
inline double plastic_root() {
  double lo = 1.0, hi = 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid * mid * mid - mid - 1 > 0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Entry sum of A^ell by plain repeated multiplication.
inline mpz_class power_entry_sum(const std::vector<std::vector<int>>& A, int ell) {
  const std::size_t m = A.size();
  std::vector<std::vector<mpz_class>> P(m, std::vector<mpz_class>(m, 0));
  for (std::size_t i = 0; i < m; ++i) P[i][i] = 1;
  for (int s = 0; s < ell; ++s) {
    std::vector<std::vector<mpz_class>> Q(m, std::vector<mpz_class>(m, 0));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k)
        if (P[i][k] != 0)
          for (std::size_t j = 0; j < m; ++j)
            if (A[k][j]) Q[i][j] += P[i][k];
    P.swap(Q);
  }
  mpz_class total = 0;
  for (auto& row : P)
    for (auto& v : row) total += v;
  return total;
}

inline double log_mpz(const mpz_class& v) {
  long e = 0;
  const double m = mpz_get_d_2exp(&e, v.get_mpz_t());
  return std::log(m) + e * std::log(2.0);
}

// (q-1)^2 sum_{i>=1} log_m |A^(i-1)| / q^(i+1), summed until terms vanish.
inline double multiplicative_minkowski(const std::vector<std::vector<int>>& A, double q) {
  const double lm = std::log(static_cast<double>(A.size()));
  double sum = 0;
  for (int i = 1; i < 200; ++i) {
    sum += log_mpz(power_entry_sum(A, i - 1)) / lm / std::pow(q, i + 1);
  }
  return (q - 1) * (q - 1) * sum;
}

// Random irreducible 0/1 matrix: random entries plus a Hamiltonian cycle.
inline std::vector<std::vector<int>> random_irreducible(std::mt19937_64& rng, std::size_t m,
                                                        double density) {
  std::bernoulli_distribution coin(density);
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<int>> A(m, std::vector<int>(m, 0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) A[i][j] = coin(rng) ? 1 : 0;
  for (std::size_t i = 0; i < m; ++i) A[order[i]][order[(i + 1) % m]] = 1;
  return A;
}

inline std::string to_text(const std::vector<std::vector<int>>& A) {
  std::string s;
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (i) s += ';';
    for (int v : A[i]) s += v ? '1' : '0';
  }
  return s;
}

// Strong connectivity by Floyd-Warshall closure.
inline bool strongly_connected(const std::vector<std::vector<int>>& A) {
  const std::size_t m = A.size();
  auto R = A;
  for (std::size_t i = 0; i < m; ++i) R[i][i] = 1;
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (R[i][k] && R[k][j]) R[i][j] = 1;
  for (auto& row : R)
    for (int v : row)
      if (!v) return false;
  return true;
}

// Head classes by set lookups: 0 not head, 1 A1, i finite, -1 survived `horizon`.
inline int classify_by_sets(std::int64_t x, const std::set<std::int64_t>& S,
                            const std::set<std::int64_t>& T,
                            const std::map<std::int64_t, std::int64_t>& f, int horizon) {
  if (T.count(x)) return 0;
  if (!S.count(x)) return 1;
  std::int64_t y = x;
  for (int step = 1; step <= horizon; ++step) {
    y = f.at(y);
    if (!S.count(y)) return step + 1;
  }
  return -1;
}

}  // namespace oracle
