#include "bmshift/regions.hpp"

#include <numeric>
#include <vector>

#include "bmshift/errors.hpp"

namespace bmshift {

std::string to_string(Region r) {
  switch (r) {
    case Region::R1: return "R1";
    case Region::R2: return "R2";
    case Region::R3: return "R3";
    case Region::R4: return "R4";
    case Region::R5: return "R5";
    case Region::R6Open: return "R6Open";
    case Region::R7: return "R7";
    case Region::R8: return "R8";
    case Region::R9: return "R9";
    case Region::R10: return "R10";
    case Region::Unknown: return "Unknown";
  }
  return "Unknown";
}

namespace {

std::int64_t to_i64(const BigInt& v) {
  if (!v.fits_slong_p()) throw ValidationError("integer parameter out of range: " + v.get_str());
  return v.get_si();
}

std::int64_t mod(std::int64_t x, std::int64_t m) {
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

bool is_one(const RealParam& x) { return x.is_rational() && x.rational() == 1; }

RegionId classify_integer(const ParamTuple& p) {
  const std::int64_t alpha = to_i64(p.alpha().rational().get_num());
  const std::int64_t beta = to_i64(p.beta().rational().get_num());
  const std::int64_t gamma = to_i64(p.gamma().rational().get_num());
  const std::int64_t delta = to_i64(p.delta().rational().get_num());
  std::string cert = "all-integer";
  if (alpha == 1) return {Region::R7, cert + "; alpha = 1"};
  const std::int64_t g = std::gcd(alpha, gamma);
  const std::string gs = "gcd(" + std::to_string(alpha) + "," + std::to_string(gamma) +
                         ")=" + std::to_string(g);
  if ((beta - delta) % g != 0) {
    return {Region::R8, cert + "; " + gs + " does not divide beta-delta=" +
                            std::to_string(beta - delta)};
  }
  cert += "; " + gs + " divides beta-delta=" + std::to_string(beta - delta);
  if (alpha / g == 1) return {Region::R9, cert + "; alpha1 = 1"};
  return {Region::R10, cert + "; alpha1 = " + std::to_string(alpha / g) + " > 1"};
}

// n/alpha + m/gamma = 1 with n, m >= 1 and n beta/alpha + m delta/gamma in Z.
// With 1/alpha = u1 + u2 sqrt(d), 1/gamma = v1 + v2 sqrt(d) the irrational
// parts force m/n = -u2/v2, which fixes (n, m) up to one integer scale t.
bool condition_i(const ParamTuple& p, std::string& cert) {
  const RealParam u = p.alpha().reciprocal();
  const RealParam v = p.gamma().reciprocal();
  if (!u.is_surd() || !v.is_surd()) return false;
  const auto& us = u.quadratic_surd();
  const auto& vs = v.quadratic_surd();
  const Rational q = -us.b / vs.b;
  if (sgn(q) <= 0) return false;
  const BigInt m0 = q.get_num();
  const BigInt n0 = q.get_den();
  const Rational s = Rational(n0) * us.a + Rational(m0) * vs.a;
  if (sgn(s) <= 0) return false;
  Rational t = 1 / s;
  t.canonicalize();
  if (t.get_den() != 1) return false;
  const BigInt n = n0 * t.get_num();
  const BigInt m = m0 * t.get_num();
  const RealParam shift = RealParam(Rational(n)) * p.beta() * u +
                          RealParam(Rational(m)) * p.delta() * v;
  if (!shift.is_integer()) return false;
  cert += "; condition (i) with n=" + n.get_str() + ", m=" + m.get_str();
  return true;
}

// n/alpha = m/gamma, (n,m) = 1 and 1 - m/alpha >= {m(beta-delta)/alpha} >= m/alpha.
bool condition_ii(const ParamTuple& p, std::string& cert) {
  const RealParam& ratio = p.ratio();
  if (!ratio.is_rational()) return false;
  const BigInt m = ratio.rational().get_num();
  const BigInt n = ratio.rational().get_den();
  const RealParam m_over_alpha = RealParam(Rational(m)) / p.alpha();
  const RealParam fr = frac(m_over_alpha * (p.beta() - p.delta()), p.policy());
  const bool upper = (RealParam(1L) - m_over_alpha).compare(fr, p.policy()) >= 0;
  const bool lower = fr.compare(m_over_alpha, p.policy()) >= 0;
  if (!upper || !lower) return false;
  cert += "; condition (ii) with n=" + n.get_str() + ", m=" + m.get_str();
  return true;
}

RegionId classify_real(const ParamTuple& p) {
  const RealParam& alpha = p.alpha();
  const RealParam& gamma = p.gamma();
  if (is_one(alpha)) return {Region::R1, "alpha = 1"};
  if (alpha.is_rational() && gamma.is_rational()) {
    return {Region::R2, "alpha, gamma rational; alpha > 1"};
  }
  if (!alpha.is_exact() || !gamma.is_exact()) {
    return {Region::Unknown, "interval-only parameter: rational independence undecidable"};
  }
  if (alpha.is_surd() && gamma.is_surd()) {
    const long da = alpha.quadratic_surd().radicand;
    const long dg = gamma.quadratic_surd().radicand;
    if (da != dg) {
      return {Region::R4, "alpha in Q(sqrt " + std::to_string(da) + "), gamma in Q(sqrt " +
                              std::to_string(dg) + "): {1, 1/alpha, 1/gamma} independent"};
    }
    std::string cert = "alpha, gamma in Q(sqrt " + std::to_string(da) + ")";
    if (condition_i(p, cert) || condition_ii(p, cert)) return {Region::R5, cert};
    return {Region::R6Open, cert + "; neither condition (i) nor (ii) holds"};
  }
  if (alpha.is_surd() && gamma.is_rational()) {
    return {Region::R3, "alpha irrational, gamma rational"};
  }
  return {Region::Unknown, "alpha rational > 1 with gamma irrational: no closed form"};
}

DensityVector make_vector(std::vector<RealParam> finite, RealParam d_inf,
                          std::optional<RealParam> tail_ratio, Region r) {
  DensityVector d;
  d.finite = std::move(finite);
  d.d_inf = std::move(d_inf);
  d.tail_ratio = std::move(tail_ratio);
  d.tail_mass = RealParam(0L);
  d.source = ClosedFormSource{to_string(r)};
  return d;
}

// (zeta, eta, 0, ..., 0)
DensityVector two_class(const ParamTuple& p, Region r, std::size_t K) {
  std::vector<RealParam> finite(K, RealParam(0L));
  const RealParam inv_a = p.alpha().reciprocal();
  finite[0] = RealParam(1L) - inv_a - p.gamma().reciprocal();
  finite[1] = inv_a;
  return make_vector(std::move(finite), RealParam(0L), RealParam(0L), r);
}

DensityVector pure_infinity(const ParamTuple& p, Region r, std::size_t K) {
  return make_vector(std::vector<RealParam>(K, RealParam(0L)),
                     RealParam(1L) - p.gamma().reciprocal(), RealParam(0L), r);
}

}  // namespace

RegionId classify_region(const ParamTuple& p) {
  try {
    if (p.all_integer()) return classify_integer(p);
    return classify_real(p);
  } catch (const Error& e) {
    return {Region::Unknown, std::string("classification failed: ") + e.what()};
  }
}

std::set<std::int64_t> residue_set(std::int64_t a, std::int64_t b, const RealParam& beta) {
  if (a < 1 || b < 1) throw ValidationError("residue_set needs a, b >= 1");
  std::set<std::int64_t> out;
  for (std::int64_t h = 0; h < a; ++h) {
    const BigInt v = (beta + RealParam(Rational(b * h, a))).floor();
    out.insert(mod(to_i64(v % BigInt(static_cast<long>(b))), b));
  }
  return out;
}

Rational g_density(std::int64_t a, std::int64_t b, std::int64_t i, std::int64_t j) {
  if (a < 1 || b < 1) throw ValidationError("g_density needs a, b >= 1");
  const std::int64_t g = std::gcd(a, b);
  if ((i - j) % g != 0) return Rational(0);
  Rational r(g, a * b);
  r.canonicalize();
  return r;
}

ResidueCover ResidueCover::from(const ParamTuple& p) {
  if (!p.alpha().is_rational() || !p.gamma().is_rational()) {
    throw NotRational("alpha and gamma must be rational, got " + p.to_string());
  }
  ResidueCover rc;
  rc.b = to_i64(p.alpha().rational().get_num());
  rc.a = to_i64(p.alpha().rational().get_den());
  rc.d = to_i64(p.gamma().rational().get_num());
  rc.c = to_i64(p.gamma().rational().get_den());
  constexpr std::int64_t limit = std::int64_t{1} << 26;
  if (rc.b > limit || rc.d > limit) {
    throw ValidationError("residue moduli too large: " + std::to_string(rc.b) + ", " +
                          std::to_string(rc.d));
  }
  rc.rab = residue_set(rc.a, rc.b, p.beta());
  rc.rcd = residue_set(rc.c, rc.d, p.delta());
  return rc;
}

std::set<std::int64_t> ResidueCover::rab_complement() const {
  std::set<std::int64_t> out;
  for (std::int64_t i = 0; i < b; ++i) {
    if (!rab.count(i)) out.insert(i);
  }
  return out;
}

std::set<std::int64_t> ResidueCover::rcd_complement() const {
  std::set<std::int64_t> out;
  for (std::int64_t j = 0; j < d; ++j) {
    if (!rcd.count(j)) out.insert(j);
  }
  return out;
}

DensityVector rational_d(const ParamTuple& p, std::size_t K) {
  if (K < 2) throw ValidationError("K must be at least 2");
  const ResidueCover rc = ResidueCover::from(p);
  // Sum of g(b, d, i, j) over i in I, j in J only depends on how many
  // members of I and J fall in each class mod gcd(b, d).
  const std::int64_t G = std::gcd(rc.b, rc.d);
  std::vector<std::int64_t> in_ab(static_cast<std::size_t>(G), 0);
  std::vector<std::int64_t> in_cd(static_cast<std::size_t>(G), 0);
  for (auto i : rc.rab) ++in_ab[static_cast<std::size_t>(i % G)];
  for (auto j : rc.rcd) ++in_cd[static_cast<std::size_t>(j % G)];
  const std::int64_t per_ab = rc.b / G;
  const std::int64_t per_cd = rc.d / G;
  const Rational unit(G, rc.b * rc.d);
  auto sum = [&](bool ab_in, bool cd_in) {
    BigInt pairs = 0;
    for (std::int64_t r = 0; r < G; ++r) {
      const auto x = in_ab[static_cast<std::size_t>(r)];
      const auto y = in_cd[static_cast<std::size_t>(r)];
      pairs += BigInt(static_cast<long>(ab_in ? x : per_ab - x)) *
               BigInt(static_cast<long>(cd_in ? y : per_cd - y));
    }
    Rational out = unit * Rational(pairs);
    out.canonicalize();
    return out;
  };
  const Rational d1 = sum(false, false);
  const Rational entry = sum(true, false);
  const Rational denom(static_cast<long>(rc.rcd.size()), rc.d);  // sum_{j in R_c^d} g(1, d, 0, j)
  Rational ratio = sum(true, true) / denom;
  Rational exit = sum(false, true) / denom;
  ratio.canonicalize();
  exit.canonicalize();

  std::vector<RealParam> finite;
  finite.reserve(K);
  finite.emplace_back(d1);
  Rational power = 1;
  for (std::size_t i = 2; i <= K; ++i) {
    Rational di = entry * power * exit;
    di.canonicalize();
    finite.emplace_back(di);
    power *= ratio;
  }
  const Rational d_inf = ratio == 1 ? entry : Rational(0);
  return make_vector(std::move(finite), RealParam(d_inf), RealParam(ratio < 1 ? ratio : Rational(0)),
                     Region::R2);
}

DensityVector integer_closed_form_d(const ParamTuple& p, Region r, std::size_t K) {
  if (K < 2) throw ValidationError("K must be at least 2");
  if (!p.all_integer()) throw NotRational("integer closed forms need an all-integer tuple");
  const std::int64_t alpha = to_i64(p.alpha().rational().get_num());
  const std::int64_t gamma = to_i64(p.gamma().rational().get_num());
  const std::int64_t g = std::gcd(alpha, gamma);
  const Rational a(alpha), c(gamma);
  const Rational a1(alpha / g), g1(gamma / g);
  const Rational theta = 1 - 1 / a - 1 / c + 1 / (Rational(g) * a1 * g1);
  switch (r) {
    case Region::R7:
      return pure_infinity(p, r, K);
    case Region::R8:
      return two_class(p, r, K);
    case Region::R9: {
      std::vector<RealParam> finite(K, RealParam(0L));
      finite[0] = RealParam(theta);
      const Rational kappa = (g1 - 1) / (a * g1);
      return make_vector(std::move(finite), RealParam(kappa), RealParam(0L), r);
    }
    case Region::R10: {
      std::vector<RealParam> finite;
      finite.reserve(K);
      finite.emplace_back(theta);
      Rational iota = (g1 - 1) * (a1 - 1) / (g1 * a * a1);
      for (std::size_t i = 2; i <= K; ++i) {
        iota.canonicalize();
        finite.emplace_back(iota);
        iota /= a1;
      }
      return make_vector(std::move(finite), RealParam(0L), RealParam(Rational(1) / a1), r);
    }
    default:
      throw NoClosedForm("integer closed forms cover regions 7-10 only, got " + to_string(r));
  }
}

DensityVector closed_form_d(const ParamTuple& p, const RegionId& r, std::size_t K) {
  if (K < 2) throw ValidationError("K must be at least 2");
  switch (r.id) {
    case Region::R1:
      return pure_infinity(p, r.id, K);
    case Region::R2: {
      DensityVector d = rational_d(p, K);
      d.source = ClosedFormSource{to_string(r.id)};
      return d;
    }
    case Region::R3:
    case Region::R4: {
      // (alpha-1)(gamma-1) / (alpha^i gamma), i >= 1
      const RealParam inv_a = p.alpha().reciprocal();
      const RealParam base =
          (p.alpha() - RealParam(1L)) * (p.gamma() - RealParam(1L)) / p.gamma();
      std::vector<RealParam> finite;
      finite.reserve(K);
      RealParam scale = inv_a;
      for (std::size_t i = 1; i <= K; ++i) {
        finite.push_back(base * scale);
        scale = scale * inv_a;
      }
      return make_vector(std::move(finite), RealParam(0L), inv_a, r.id);
    }
    case Region::R5:
      return two_class(p, r.id, K);
    case Region::R7:
    case Region::R8:
    case Region::R9:
    case Region::R10:
      return integer_closed_form_d(p, r.id, K);
    case Region::R6Open:
    case Region::Unknown:
      break;
  }
  throw NoClosedForm("no closed form for region " + to_string(r.id) + " (" + r.certificate + ")");
}

DensityVector closed_form_d(const ParamTuple& p, std::size_t K) {
  return closed_form_d(p, classify_region(p), K);
}

}  // namespace bmshift
