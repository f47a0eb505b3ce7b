#include <doctest.h>

#include <array>
#include <random>
#include <sstream>

#include "bmshift/chains.hpp"
#include "bmshift/errors.hpp"
#include "oracles.hpp"

using namespace bmshift;
using Tag = ChainClass::Tag;

namespace {

ParamTuple tuple(const char* a, const char* b, const char* c, const char* d) {
  return ParamTuple::make(parse_real(a), parse_real(b), parse_real(c), parse_real(d));
}

std::vector<std::int64_t> values(const ChainDecomposition& dec, std::size_t c) {
  std::vector<std::int64_t> out;
  auto [first, last] = dec.chain(c);
  for (auto it = first; it != last; ++it) out.push_back(it->value);
  return out;
}

void check_partition(const ChainDecomposition& dec) {
  std::vector<int> hits(static_cast<std::size_t>(dec.n) + 1, 0);
  for (const auto& m : dec.members) {
    REQUIRE(m.value >= 1);
    REQUIRE(m.value <= dec.n);
    ++hits[static_cast<std::size_t>(m.value)];
  }
  for (auto r : dec.residual) ++hits[static_cast<std::size_t>(r)];
  for (std::int64_t x = 1; x <= dec.n; ++x) REQUIRE(hits[static_cast<std::size_t>(x)] == 1);
}

// |A_{i,j}(n)| recounted from the chain listing.
std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> recount(const ChainDecomposition& dec) {
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> out;
  for (std::size_t c = 0; c < dec.chain_count(); ++c) {
    const ChainClass& cls = dec.classes[c];
    if (cls.tag == Tag::a1) ++out[{1, 1}];
    if (cls.tag == Tag::finite) {
      auto [first, last] = dec.chain(c);
      ++out[{cls.length, static_cast<std::int64_t>(last - first)}];
    }
  }
  return out;
}

}  // namespace

TEST_CASE("classify_head examples") {
  const auto doubling = tuple("1", "0", "2", "0");
  CHECK(classify_head(3, doubling, 30) == ChainClass{Tag::infinity_candidate, 30});
  const auto p23 = tuple("2", "0", "3", "0");
  CHECK(classify_head(7, p23, 30) == ChainClass{Tag::a1, 1});
  CHECK(classify_head(2, p23, 30) == ChainClass::finite_of(2));
  CHECK(classify_head(6, p23, 30).tag == Tag::not_head);
  CHECK(classify_head(4, p23, 30) == ChainClass::finite_of(3));  // 4 -> 6 -> 9
  CHECK_THROWS_AS(classify_head(0, p23, 30), ValidationError);
  CHECK_THROWS_AS(classify_head(1, p23, 0), ValidationError);
}

TEST_CASE("class codes round-trip") {
  const std::int64_t h = 77;
  for (const ChainClass c : {ChainClass{Tag::not_head, 0}, ChainClass{Tag::a1, 1},
                             ChainClass::finite_of(2), ChainClass::finite_of(500),
                             ChainClass{Tag::infinity_candidate, h}, ChainClass{Tag::residual, 0}}) {
    CHECK(decode(encode(c), h) == c);
  }
}

TEST_CASE("decompose examples") {
  const auto dec = decompose(tuple("1", "0", "2", "0"), 7);
  REQUIRE(dec.heads == std::vector<std::int64_t>{1, 3, 5, 7});
  CHECK(values(dec, 0) == std::vector<std::int64_t>{1, 2, 4});
  CHECK(values(dec, 1) == std::vector<std::int64_t>{3, 6});
  CHECK(values(dec, 2) == std::vector<std::int64_t>{5});
  CHECK(values(dec, 3) == std::vector<std::int64_t>{7});
  CHECK(dec.residual.empty());
  for (const auto& c : dec.classes) CHECK(c.tag == Tag::infinity_candidate);

  const auto d23 = decompose(tuple("2", "0", "3", "0"), 6);
  REQUIRE(d23.heads == std::vector<std::int64_t>{1, 2, 4, 5});
  CHECK(d23.classes[0].tag == Tag::a1);
  CHECK(d23.classes[1] == ChainClass::finite_of(2));
  CHECK(d23.classes[3].tag == Tag::a1);
  CHECK(values(d23, 1) == std::vector<std::int64_t>{2, 3});
  CHECK(values(d23, 2) == std::vector<std::int64_t>{4, 6});  // 9 lies above the window
  CHECK(d23.residual.empty());
  CHECK(d23.counts.at({1, 1}) == 2);
  CHECK(d23.counts.at({2, 2}) == 1);
  CHECK(d23.counts.at({3, 2}) == 1);
  check_partition(d23);
}

TEST_CASE("decomposition CSV") {
  std::ostringstream os;
  write_decomposition_csv(os, decompose(tuple("2", "0", "3", "0"), 6));
  const std::string csv = os.str();
  CHECK(csv.rfind("x,class,chain_id,position_in_chain\n", 0) == 0);
  CHECK(csv.find("\n3,") != std::string::npos);
  std::size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(lines == 7);
}

TEST_CASE("classify_head agrees with set-based classification") {
  const std::vector<std::array<oracle::Surd, 4>> tuples{
      {{{2, 0, 2}, {0, 0, 2}, {3, 0, 2}, {0, 0, 2}}},
      {{{Rational(3, 2), 0, 2}, {Rational(1, 3), 0, 2}, {Rational(5, 2), 0, 2}, {-1, 0, 2}}},
      {{{Rational(1, 2), Rational(1, 2), 5}, {0, 0, 5}, {Rational(3, 2), Rational(1, 2), 5}, {0, 0, 5}}},
      {{{0, 1, 2}, {Rational(1, 2), 0, 2}, {0, 2, 2}, {Rational(-1, 3), 0, 2}}},
  };
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    const auto& [a, b, g, d] = tuples[t];
    const ParamTuple p = ParamTuple::make(RealParam::surd(a.r, a.s, a.d), RealParam::surd(b.r, b.s, b.d),
                                          RealParam::surd(g.r, g.s, g.d), RealParam::surd(d.r, d.s, d.d));
    CAPTURE(p.to_string());
    const std::int64_t limit = 800000;
    const auto S = oracle::beatty_set(a, b, limit);
    const auto T = oracle::beatty_set(g, d, limit);
    std::map<std::int64_t, std::int64_t> f;
    for (std::int64_t k = 1;; ++k) {
      const std::int64_t x = oracle::beatty(a, k, b);
      if (x > limit) break;
      if (x >= 1) f[x] = oracle::beatty(g, k, d);
    }
    const int horizon = 9;  // 1500 * 2^9 stays below the oracle limit
    for (std::int64_t x = 1; x <= 1500; ++x) {
      const int expected = oracle::classify_by_sets(x, S, T, f, horizon);
      const ChainClass got = classify_head(x, p, horizon);
      if (expected == 0) CHECK(got.tag == Tag::not_head);
      if (expected == 1) CHECK(got.tag == Tag::a1);
      if (expected >= 2) CHECK(got == ChainClass::finite_of(expected));
      if (expected < 0) CHECK(got.tag == Tag::infinity_candidate);
    }
  }
  // mixed radicands
  const ParamTuple p = tuple("sqrt(2)", "0", "sqrt(3)", "0");
  const oracle::Surd a{0, 1, 2}, g{0, 1, 3}, zero2{0, 0, 2}, zero3{0, 0, 3};
  const auto S = oracle::beatty_set(a, zero2, 100000);
  const auto T = oracle::beatty_set(g, zero3, 100000);
  std::map<std::int64_t, std::int64_t> f;
  for (std::int64_t k = 1; oracle::beatty(a, k, zero2) <= 100000; ++k) {
    f[oracle::beatty(a, k, zero2)] = oracle::beatty(g, k, zero3);
  }
  for (std::int64_t x = 1; x <= 3000; ++x) {
    const int expected = oracle::classify_by_sets(x, S, T, f, 8);
    const ChainClass got = classify_head(x, p, 8);
    CHECK(encode(got) == (expected < 0 ? code::infinity : static_cast<std::uint16_t>(expected)));
  }
}

TEST_CASE("finite classes carry a witnessed trajectory") {
  const ParamTuple p = tuple("sqrt(2)", "1/2", "sqrt(3)", "-1/3");
  for (std::int64_t x = 1; x <= 5000; ++x) {
    const ChainClass c = classify_head(x, p, 40);
    if (c.tag != Tag::finite) continue;
    std::int64_t y = x;
    for (std::int64_t s = 1; s < c.length; ++s) {
      REQUIRE(p.source().contains(y));
      y = f_map(y, p);
      REQUIRE(p.target().contains(y));
    }
    CHECK_FALSE(p.source().contains(y));
  }
}

TEST_CASE("parallel scan is bit-identical to the serial scan") {
  for (const auto& p : {tuple("sqrt(2)", "0", "sqrt(3)", "0"), tuple("2", "0", "3", "0"),
                        tuple("(1+sqrt(5))/2", "1/7", "(3+sqrt(5))/2", "-2")}) {
    const std::int64_t h = default_horizon(p, 200000);
    CHECK(classify_range_serial(p, 1, 200000, h) == classify_range_parallel(p, 1, 200000, h));
    CHECK(classify_range_serial(p, 99991, 123457, h) == classify_range_parallel(p, 99991, 123457, h));
    const auto a = decompose(p, 50000, 0, false);
    const auto b = decompose(p, 50000, 0, true);
    CHECK(a.heads == b.heads);
    CHECK(a.classes == b.classes);
    CHECK(a.residual == b.residual);
    CHECK(a.counts == b.counts);
    EmpiricalOptions serial;
    serial.parallel = false;
    const auto e1 = empirical_densities(p, 100000, serial);
    const auto e2 = empirical_densities(p, 100000);
    for (std::size_t i = 1; i <= e1.K(); ++i) CHECK(e1.value(i).same_exact_value(e2.value(i)));
    CHECK(e1.d_inf.same_exact_value(e2.d_inf));
  }
}

TEST_CASE("partition, counts and residual sparsity on random tuples") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<long> num(8, 40), den(1, 6), shift(-12, 12);
  const long radicands[] = {2, 3, 5, 7};
  for (int trial = 0; trial < 30; ++trial) {
    const RealParam a = trial % 3 == 0 ? RealParam(Rational(num(rng), 8))
                                       : RealParam::surd(Rational(num(rng), 8), Rational(1, den(rng)),
                                                         radicands[trial % 4]);
    const RealParam g = a + RealParam(Rational(num(rng), 8 * den(rng)));
    const ParamTuple p = ParamTuple::make(a, RealParam(Rational(shift(rng), den(rng))), g,
                                          RealParam(Rational(shift(rng), den(rng))));
    CAPTURE(p.to_string());
    const auto dec = decompose(p, 20000);
    check_partition(dec);
    auto expected = recount(dec);
    CHECK(dec.counts == expected);
    CHECK(static_cast<double>(dec.residual.size()) / 20000.0 < 0.01);
  }
}

TEST_CASE("residual sparsity at n = 10^6 for closed-form tuples") {
  for (const auto& p : {tuple("1", "0", "2", "0"), tuple("2", "0", "3", "0"), tuple("2", "0", "4", "2"),
                        tuple("sqrt(2)", "0", "sqrt(3)", "0"), tuple("sqrt(2)", "0", "3", "0"),
                        tuple("3/2", "0", "3", "0")}) {
    CAPTURE(p.to_string());
    const auto dec = decompose(p, 1000000);
    CHECK(static_cast<double>(dec.residual.size()) / 1e6 < 0.01);
  }
}

TEST_CASE("empirical densities match direct counts") {
  SUBCASE("doubling map") {
    const auto d = empirical_densities(tuple("1", "0", "2", "0"), 1000000);
    CHECK(std::abs(d.d_inf.to_double() - 0.5) < 5e-3);
    for (std::size_t i = 1; i <= d.K(); ++i) CHECK(d.value_d(i) < 5e-3);
  }
  SUBCASE("(2,0,3,0)") {
    // A_1: odd, not divisible by 3. A_2: 2 mod 4, not divisible by 3.
    std::int64_t a1 = 0, a2 = 0;
    const std::int64_t n = 1000000;
    for (std::int64_t x = 1; x <= n; ++x) {
      a1 += x % 2 == 1 && x % 3 != 0;
      a2 += x % 4 == 2 && x % 3 != 0;
    }
    const auto d = empirical_densities(tuple("2", "0", "3", "0"), n);
    CHECK(std::abs(d.value_d(1) - static_cast<double>(a1) / n) < 5e-3);
    CHECK(std::abs(d.value_d(2) - static_cast<double>(a2) / n) < 5e-3);
    CHECK(std::abs(d.value_d(1) - 1.0 / 3) < 5e-3);
    CHECK(std::abs(d.value_d(2) - 1.0 / 6) < 5e-3);
  }
  SUBCASE("(2,0,4,2)") {
    const auto d = empirical_densities(tuple("2", "0", "4", "2"), 1000000);
    CHECK(std::abs(d.value_d(1) - 0.5) < 5e-3);
    CHECK(std::abs(d.d_inf.to_double() - 0.25) < 5e-3);
  }
}

TEST_CASE("anchored and sliding windows agree") {
  for (const auto& p : {tuple("sqrt(2)", "0", "sqrt(3)", "0"), tuple("sqrt(2)", "0", "3", "0"),
                        tuple("2", "0", "3", "0")}) {
    CAPTURE(p.to_string());
    const std::int64_t n = 300000;
    const auto anchored = empirical_densities(p, {{1, n / 2}, {1, n}});
    const auto sliding = empirical_densities(p, {{n / 2, n}, {n, 2 * n}});
    const auto& src = std::get<EmpiricalSource>(sliding.source);
    const double allowed = std::max(3 * src.diagnostic, 2e-3);
    for (std::size_t i = 1; i <= 10; ++i) {
      CHECK(std::abs(anchored.value_d(i) - sliding.value_d(i)) <= allowed);
    }
    CHECK(std::abs(anchored.d_inf.to_double() - sliding.d_inf.to_double()) <= allowed);
  }
}

TEST_CASE("empirical errors") {
  const auto p = tuple("sqrt(2)", "0", "sqrt(3)", "0");
  EmpiricalOptions short_horizon;
  short_horizon.horizon = 2;
  CHECK_THROWS_AS(empirical_densities(p, 100000, short_horizon), HorizonTooSmall);
  CHECK_THROWS_AS(empirical_densities(p, {}), ValidationError);
  CHECK_THROWS_AS(empirical_densities(p, {{5, 5}}), ValidationError);
  EmpiricalOptions k1;
  k1.K = 1;
  CHECK_THROWS_AS(empirical_densities(p, 1000, k1), ValidationError);
}

TEST_CASE("derived d_ij") {
  DensityVector hand;
  hand.finite = {RealParam(Rational(1, 6)), RealParam(Rational(1, 2))};
  hand.source = ClosedFormSource{"hand"};
  const auto p = tuple("2", "0", "3", "0");
  const auto filled = derived_dij(hand, p);
  REQUIRE(filled.dij.has_value());
  CHECK(filled.dij->at({1, 1}).same_exact_value(RealParam(Rational(1, 6))));
  CHECK(filled.dij->at({2, 1}).same_exact_value(RealParam(Rational(1, 6))));
  CHECK(filled.dij->at({2, 2}).same_exact_value(RealParam(Rational(1, 3))));

  // telescoping on an irrational ratio
  DensityVector d;
  for (int i = 1; i <= 8; ++i) d.finite.emplace_back(Rational(1, 1 << (i + 1)));
  d.source = ClosedFormSource{"hand"};
  const auto q = derived_dij(d, tuple("sqrt(2)", "0", "sqrt(3)", "0"));
  for (std::size_t i = 1; i <= 8; ++i) {
    double sum = 0;
    for (std::size_t j = 1; j <= i; ++j) sum += q.dij->at({i, j}).to_double();
    CHECK(sum == doctest::Approx(d.finite[i - 1].to_double()).epsilon(1e-14));
  }

  // against window counts |A_{2,j}(n)| / n for (2,0,3,0), where d_2 = 1/6
  const std::int64_t n = 1000000;
  const auto dec = decompose(p, n);
  DensityVector truth;
  truth.finite = {RealParam(Rational(1, 3)), RealParam(Rational(1, 6))};
  truth.source = ClosedFormSource{"count"};
  const auto t = derived_dij(truth, p);
  CHECK(std::abs(static_cast<double>(dec.counts.at({2, 1})) / n - t.dij->at({2, 1}).to_double()) < 1e-3);
  CHECK(std::abs(static_cast<double>(dec.counts.at({2, 2})) / n - t.dij->at({2, 2}).to_double()) < 1e-3);
}
