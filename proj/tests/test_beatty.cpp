#include <doctest.h>

#include <random>
#include <set>

#include "bmshift/beatty.hpp"
#include "bmshift/errors.hpp"
#include "oracles.hpp"

using namespace bmshift;

namespace {

ParamTuple tuple(const char* a, const char* b, const char* c, const char* d) {
  return ParamTuple::make(parse_real(a), parse_real(b), parse_real(c), parse_real(d));
}

}  // namespace

TEST_CASE("member examples") {
  CHECK(member(4, RealParam::sqrt_of(2), RealParam(0L)) == std::optional<std::int64_t>(3));
  CHECK_FALSE(member(3, RealParam(2L), RealParam(0L)).has_value());
  CHECK(member(7, RealParam(Rational(3, 2)), RealParam(Rational(1, 3))) ==
        std::optional<std::int64_t>(5));
}

TEST_CASE("f_map examples and errors") {
  CHECK(f_map(3, tuple("1", "0", "2", "0")) == 6);
  CHECK(f_map(4, tuple("2", "0", "3", "0")) == 6);
  CHECK(f_map(4, tuple("sqrt(2)", "0", "2*sqrt(2)", "0")) == 8);
  CHECK_THROWS_AS(f_map(3, tuple("2", "0", "3", "0")), NotInDomain);
  CHECK_THROWS_AS(f_map(1, tuple("1", "0", "2", "-5")), NonPositiveImage);
}

TEST_CASE("constraint_edges examples") {
  using E = std::vector<std::pair<std::int64_t, std::int64_t>>;
  CHECK(constraint_edges(tuple("1", "0", "2", "0"), 5) == E{{1, 2}, {2, 4}});
  CHECK(constraint_edges(tuple("2", "0", "3", "0"), 9) == E{{2, 3}, {4, 6}, {6, 9}});
  CHECK(constraint_edges(tuple("2", "0", "3", "0"), 1).empty());
  // floor(alpha k + beta) <= 0 is skipped
  CHECK(constraint_edges(tuple("2", "-3", "3", "0"), 6) == E{{1, 6}});
}

TEST_CASE("ParamTuple validation and derived constants") {
  CHECK_THROWS_AS(tuple("3", "0", "2", "0"), ValidationError);
  CHECK_THROWS_AS(tuple("2", "0", "2", "0"), ValidationError);
  CHECK_THROWS_AS(tuple("1/2", "0", "2", "0"), ValidationError);
  const ParamTuple p = tuple("2", "-1", "5", "1/2");
  CHECK(p.ratio().same_exact_value(RealParam(Rational(5, 2))));
  // (1 + 1 + 1/2) * 2 / 3
  CHECK(p.chain_bound().same_exact_value(RealParam(Rational(5, 3))));
  CHECK(tuple("sqrt(2)", "0", "sqrt(3)", "0").ratio().to_double() ==
        doctest::Approx(std::sqrt(1.5)));
}

TEST_CASE("Beatty evaluation agrees with the oracle on every tier") {
  struct Case {
    oracle::Surd tau, eta;
  };
  const std::vector<Case> cases{
      {{Rational(3, 2), 0, 2}, {Rational(1, 3), 0, 2}},
      {{0, 1, 2}, {0, 0, 2}},
      {{Rational(1, 2), Rational(1, 2), 5}, {Rational(-7, 3), 0, 5}},
      {{3, -1, 3}, {0, Rational(1, 2), 3}},
      {{Rational(1000000007, 1000000000), 0, 2}, {Rational(-12345678901, 10000), 0, 2}},
  };
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::int64_t> big(1, std::int64_t{1} << 40);
  for (const auto& c : cases) {
    const RealParam tau = RealParam::surd(c.tau.r, c.tau.s, c.tau.d);
    const RealParam eta = RealParam::surd(c.eta.r, c.eta.s, c.eta.d);
    const BeattySequence seq(tau, eta);
    for (std::int64_t k = 1; k <= 3000; ++k) {
      REQUIRE(seq.at(k) == oracle::beatty(c.tau, k, c.eta));
    }
    for (int t = 0; t < 300; ++t) {
      const std::int64_t k = big(rng);
      REQUIRE(seq.at(k) == oracle::beatty(c.tau, k, c.eta));
      const std::int64_t x = seq.at(k);
      REQUIRE(seq.index_of(x) == std::optional<std::int64_t>(k));
    }
  }
}

TEST_CASE("injectivity of k -> floor(tau k + eta)") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> num(1, 60), den(1, 20), sh(-30, 30);
  const long radicands[] = {2, 3, 5, 7};
  for (int trial = 0; trial < 40; ++trial) {
    RealParam tau = trial % 2 ? RealParam(Rational(num(rng), den(rng)))
                              : RealParam::surd(Rational(num(rng), den(rng)),
                                                Rational(num(rng), den(rng)),
                                                radicands[trial % 4]);
    if (tau.compare(RealParam(1L)) < 0) tau = tau + RealParam(1L);
    const BeattySequence seq(tau, RealParam(Rational(sh(rng), den(rng))));
    std::set<std::int64_t> seen;
    std::int64_t last = seq.at(1) - 1;
    for (std::int64_t k = 1; k <= 10000; ++k) {
      const std::int64_t v = seq.at(k);
      CHECK(v > last);  // strictly increasing, hence injective
      last = v;
      seen.insert(v);
    }
    CHECK(seen.size() == 10000);
  }
}

TEST_CASE("member and f_map are consistent with floor_linear") {
  for (const auto& p : {tuple("sqrt(2)", "1/3", "3", "-1"), tuple("3/2", "0", "7/3", "1/2"),
                        tuple("(1+sqrt(5))/2", "0", "(3+sqrt(5))/2", "0")}) {
    for (std::int64_t k = 1; k <= 10000; ++k) {
      const BigInt x = floor_linear(p.alpha(), k, p.beta());
      if (x < 1) continue;
      REQUIRE(member(x.get_si(), p.alpha(), p.beta()) == std::optional<std::int64_t>(k));
      const BigInt y = floor_linear(p.gamma(), k, p.delta());
      if (y >= 1) REQUIRE(f_map(x.get_si(), p) == y.get_si());
    }
  }
}

namespace {

// Checks lo < f^l(x) < hi along every chain started at a head x <= 400.
// Returns the first (x, l) that violates the bound, or nothing.
std::optional<std::pair<std::int64_t, int>> sandwich_violation(const ParamTuple& p,
                                                               const RealParam& C) {
  for (std::int64_t x = 1; x <= 400; ++x) {
    if (!p.source().contains(x) || p.target().contains(x)) continue;
    std::int64_t y = x;
    RealParam scale(1L);
    for (int l = 0; l <= 20; ++l) {
      const RealParam X(static_cast<long>(x)), Y(static_cast<long>(y));
      if ((scale * (X - C)).compare(Y) >= 0 || Y.compare(scale * (X + C)) >= 0) {
        return std::make_pair(x, l);
      }
      if (y > (std::int64_t{1} << 40) || !p.source().contains(y)) break;
      try {
        y = f_map(y, p);
      } catch (const NonPositiveImage&) {
        break;
      }
      scale = scale * p.ratio();
    }
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("chain growth sandwich with the derived constant on random tuples") {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<long> num(-20, 20), den(1, 7), big(8, 40);
  const long radicands[] = {2, 3, 5};
  int tested = 0;
  while (tested < 40) {
    const long d = radicands[tested % 3];
    const RealParam a = tested % 2 ? RealParam(Rational(big(rng), 8))
                                   : RealParam::surd(Rational(big(rng), 8), Rational(num(rng), 8), d);
    const RealParam g = a + RealParam(Rational(big(rng), den(rng)));
    if (a.compare(RealParam(1L)) < 0) continue;
    const RealParam b(Rational(num(rng), den(rng))), dl(Rational(num(rng), den(rng)));
    const ParamTuple p = ParamTuple::make(a, b, g, dl);
    CAPTURE(p.to_string());
    CHECK_FALSE(sandwich_violation(p, p.trajectory_bound()).has_value());
    ++tested;
  }
}

TEST_CASE("chain growth sandwich with C holds for non-positive beta") {
  for (const auto& p : {tuple("sqrt(2)", "0", "sqrt(3)", "1"), tuple("sqrt(2)", "-1/2", "3", "-2"),
                        tuple("(1+sqrt(5))/2", "0", "(3+sqrt(5))/2", "0"),
                        tuple("3/2", "-1", "7/3", "1/2"), tuple("2", "0", "5", "-3")}) {
    CAPTURE(p.to_string());
    CHECK_FALSE(sandwich_violation(p, p.chain_bound()).has_value());
    CHECK(p.chain_bound().compare(p.trajectory_bound()) < 0);
  }
}

TEST_CASE("C is too small once beta > 0") {
  // x = 3 = floor(2*1+1) -> 5 -> 10, while (5/2)^2 (3 - 4/3) = 10.41...
  const ParamTuple p = tuple("2", "1", "5", "0");
  CHECK(p.chain_bound().same_exact_value(RealParam(Rational(4, 3))));
  CHECK(sandwich_violation(p, p.chain_bound()) == std::make_optional(std::make_pair(std::int64_t{3}, 2)));
  CHECK_FALSE(sandwich_violation(p, p.trajectory_bound()).has_value());
}
