#include "bmshift/dims.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bmshift/errors.hpp"

namespace bmshift {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_bigint(const BigInt& v) {
  if (sgn(v) <= 0) return kNegInf;
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, v.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

double logsumexp(const std::vector<double>& xs) {
  double hi = kNegInf;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == kNegInf) return kNegInf;
  double s = 0;
  for (double x : xs) s += std::exp(x - hi);
  return hi + std::log(s);
}

void check_eps(double eps) {
  if (!(eps > 0) || !std::isfinite(eps)) throw ValidationError("eps must be a positive number");
}

// log |A^l| for l = 0..count-1: exact up to kExactPowers, then a rescaled row vector.
constexpr std::size_t kExactPowers = 512;

std::vector<double> log_power_sums(const BinaryMatrix& A, std::size_t count) {
  const std::size_t exact = std::min(count, kExactPowers);
  std::vector<double> out;
  out.reserve(count);
  for (const auto& s : A.power_sums(exact)) out.push_back(log_bigint(s));
  if (count == exact) return out;
  const std::size_t m = A.size();
  std::vector<double> v(m, 1.0), w(m);
  double scale = 0;  // v * e^scale = 1^T A^l
  for (std::size_t l = 1; l < count; ++l) {
    double total = 0;
    for (std::size_t b = 0; b < m; ++b) {
      w[b] = 0;
      for (std::size_t a = 0; a < m; ++a) {
        if (A(a, b)) w[b] += v[a];
      }
      total += w[b];
    }
    if (total <= 0) {
      if (l >= exact) out.push_back(kNegInf);
      std::fill(v.begin(), v.end(), 0.0);
      continue;
    }
    for (std::size_t b = 0; b < m; ++b) v[b] = w[b] / total;
    scale += std::log(total);
    if (l >= exact) out.push_back(scale);
  }
  return out;
}

double rho_of(const ParamTuple& p) { return 1.0 / p.ratio_approx(); }

// Geometric tail d_i = d_N q^(i-N): sum_{i>N} i d_i.
double weighted_tail(double dN, double q, double N) {
  if (dN <= 0 || q <= 0) return 0;
  return dN * (N * q / (1 - q) + q / ((1 - q) * (1 - q)));
}

std::vector<double> derived_row(double rho, std::size_t i) {
  std::vector<double> row(i);
  double pw = 1;  // rho^(j-1)
  for (std::size_t j = 1; j < i; ++j) {
    row[j - 1] = pw * (1 - rho);
    pw *= rho;
  }
  row[i - 1] = pw;
  return row;
}

std::vector<double> row_for(const DensityVector& d, double rho, std::size_t i) {
  if (d.dij) {
    std::vector<double> row(i);
    bool complete = true;
    for (std::size_t j = 1; j <= i && complete; ++j) {
      auto it = d.dij->find({i, j});
      if (it == d.dij->end()) {
        complete = false;
      } else {
        row[j - 1] = it->second.to_double();
      }
    }
    if (complete) return row;
  }
  return derived_row(rho, i);
}

// The map t -> (A t)^(1/r) is homogeneous of degree 1/r, so the iteration runs
// on u = t / sum(t) and the scale is recovered at the end: with
// z = (A u)^(1/r) and S = sum(z), a fixed point has t = S^(r/(r-1)) u.
struct IterationOutcome {
  std::vector<double> u;
  double log_scale = 0;
  long iterations = 0;
  double residual = 0;
};

std::vector<double> root_of_products(const BinaryMatrix& A, const std::vector<double>& u, double r,
                                     std::vector<double>* products = nullptr) {
  const std::size_t m = A.size();
  std::vector<double> z(m);
  for (std::size_t i = 0; i < m; ++i) {
    double y = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (A(i, j)) y += u[j];
    }
    if (y <= 0) throw NonConvergence("row " + std::to_string(i) + " of A is zero");
    if (products) (*products)[i] = y;
    z[i] = std::pow(y, 1.0 / r);
  }
  return z;
}

// max_i |t_i^r - (A t)_i| / (A t)_i for t = S^(r/(r-1)) u.
double relative_residual(const BinaryMatrix& A, const std::vector<double>& u, double r) {
  std::vector<double> y(u.size());
  const auto z = root_of_products(A, u, r, &y);
  double S = 0;
  for (double v : z) S += v;
  double worst = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    worst = std::max(worst, std::abs(std::pow(S * u[i] / z[i], r) - 1));
  }
  return worst;
}

void normalize(std::vector<double>& u) {
  double total = 0;
  for (double v : u) total += v;
  for (double& v : u) v /= total;
}

IterationOutcome iterate(const BinaryMatrix& A, double r, std::vector<double> u,
                         const SolveOptions& options) {
  const std::size_t m = A.size();
  normalize(u);
  std::vector<double> next(m);
  double lambda = 1.0;
  double previous = std::numeric_limits<double>::infinity();
  for (long it = 1; it <= options.max_iterations; ++it) {
    auto z = root_of_products(A, u, r);
    normalize(z);
    for (std::size_t i = 0; i < m; ++i) next[i] = (1 - lambda) * u[i] + lambda * z[i];
    normalize(next);
    double diff = 0;
    for (std::size_t i = 0; i < m; ++i) diff = std::max(diff, std::abs(next[i] - u[i]) / u[i]);
    if (diff > previous && lambda > 1.0 / 1024) lambda /= 2;
    previous = diff;
    u.swap(next);
    if (diff < options.tol / 10) {
      const double res = relative_residual(A, u, r);
      if (res < options.tol) {
        double S = 0;
        for (double v : root_of_products(A, u, r)) S += v;
        return {std::move(u), r / (r - 1) * std::log(S), it, res};
      }
    }
  }
  throw NonConvergence("t iteration did not converge in " +
                       std::to_string(options.max_iterations) + " steps");
}

}  // namespace

std::size_t minkowski_terms(double rho, double eps) {
  check_eps(eps);
  if (!(rho > 0 && rho < 1)) throw ValidationError("alpha/gamma must lie in (0, 1)");
  for (std::size_t N = 1;; ++N) {
    const double n = static_cast<double>(N);
    const double bound =
        2 * std::pow(rho, n) * ((n + 2) / (1 - rho) + rho / ((1 - rho) * (1 - rho)));
    if (bound <= eps) return N;
    if (N > 1000000) throw NonConvergence("Minkowski series needs too many terms");
  }
}

Estimate minkowski_dim(const BinaryMatrix& A, const DensityVector& d, const ParamTuple& p,
                       double eps) {
  d.validate();
  const double rho = rho_of(p);
  const std::size_t N = std::max(minkowski_terms(rho, eps), d.K());
  const auto logs = log_power_sums(A, N);
  const double log_m = std::log(static_cast<double>(A.size()));

  // suffix[i] = sum_{j > i} d_j + d_inf, for i = 1..N
  std::vector<double> suffix(N + 2, 0.0);
  suffix[N] = d.tail_sum_d(N) + d.d_inf.to_double();
  for (std::size_t i = N; i >= 1; --i) suffix[i - 1] = suffix[i] + d.value_d(i);

  double value = 0;
  double pw = 1;  // rho^(i-1)
  for (std::size_t i = 1; i <= N; ++i) {
    const double w = pw * d.value_d(i) + (pw - pw * rho) * suffix[i];
    value += w * logs[i - 1] / log_m;
    pw *= rho;
  }
  const double n = static_cast<double>(N);
  double err = 2 * std::pow(rho, n) * ((n + 2) / (1 - rho) + rho / ((1 - rho) * (1 - rho)));
  err += 4 * n * std::numeric_limits<double>::epsilon();
  // Mass in unresolved finite classes contributes at most 1/(1-rho) per unit.
  err += d.tail_mass.to_double() / (1 - rho);
  return {value, err};
}

TSolverResult solve_t(const BinaryMatrix& A, double r, const SolveOptions& options) {
  if (!(r > 1)) throw ValidationError("solve_t needs r > 1");
  const std::size_t m = A.size();
  IterationOutcome main = iterate(A, r, std::vector<double>(m, 1.0), options);
  TSolverResult result;
  result.iterations = main.iterations;
  result.residual = main.residual;

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> start(0.1, 10.0);
  for (int k = 0; k < options.restarts; ++k) {
    std::vector<double> t0(m);
    for (auto& v : t0) v = start(rng);
    const IterationOutcome other = iterate(A, r, std::move(t0), options);
    for (std::size_t i = 0; i < m; ++i) {
      const double gap = other.log_scale + std::log(other.u[i]) - main.log_scale - std::log(main.u[i]);
      result.restart_spread = std::max(result.restart_spread, std::abs(std::expm1(gap)));
    }
  }
  if (result.restart_spread > 10 * options.tol * std::max(1.0, 1.0 / (r - 1))) {
    throw NonConvergence("restarts disagree by " + std::to_string(result.restart_spread));
  }
  result.log_total = main.log_scale;
  result.t.resize(m);
  for (std::size_t i = 0; i < m; ++i) result.t[i] = std::exp(main.log_scale) * main.u[i];
  return result;
}

double log_t_phi(const BinaryMatrix& A, std::size_t i, const std::vector<double>& dij) {
  if (i < 2) throw ValidationError("t_phi is defined for i >= 2");
  if (dij.size() != i) throw ValidationError("t_phi needs d_{i,1..i}");
  const std::size_t m = A.size();
  std::vector<double> inner(m), h(m), terms;
  for (std::size_t j = 0; j < m; ++j) {
    inner[j] = A.row_sums()[j] > 0 ? std::log(static_cast<double>(A.row_sums()[j])) : kNegInf;
  }
  double partial = dij[i - 1];  // d_{i,i}
  for (std::size_t k = 1; k < i; ++k) {
    const double dk = dij[i - k - 1];  // d_{i,i-k}
    partial += dk;
    if (partial <= 0) {
      throw DegenerateWeights("sum of d_{i,i-l} vanishes at i=" + std::to_string(i) +
                              ", k=" + std::to_string(k));
    }
    const double exponent = 1.0 - dk / partial;  // f_k * inner = inner^(1 + e_k)
    for (std::size_t b = 0; b < m; ++b) {
      h[b] = inner[b] == kNegInf ? kNegInf : exponent * inner[b];
    }
    if (k + 1 == i) return logsumexp(h);
    for (std::size_t j = 0; j < m; ++j) {
      terms.clear();
      for (std::size_t b = 0; b < m; ++b) {
        if (A(j, b)) terms.push_back(h[b]);
      }
      inner[j] = logsumexp(terms);
    }
  }
  return kNegInf;
}

double t_phi(const BinaryMatrix& A, std::size_t i, const std::vector<double>& dij) {
  return std::exp(log_t_phi(A, i, dij));
}

TPhiTable t_phi_table(const BinaryMatrix& A, const DensityVector& d, const ParamTuple& p,
                      std::size_t max_i) {
  TPhiTable table;
  const double rho = rho_of(p);
  for (std::size_t i = 2; i <= max_i; ++i) {
    if (d.value_d(i) <= 0) continue;
    auto row = row_for(d, rho, i);
    const double lt = log_t_phi(A, i, row);
    table.log_values[i] = lt;
    table.values[i] = std::exp(lt);
    table.inputs[i] = std::move(row);
  }
  return table;
}

Estimate hausdorff_dim(const BinaryMatrix& A, const DensityVector& d, const ParamTuple& p,
                       double eps, const SolveOptions& options, std::vector<std::string>* warnings) {
  check_eps(eps);
  d.validate();
  const double rho = rho_of(p);
  const double log_m = std::log(static_cast<double>(A.size()));
  const double d_inf = d.d_inf.to_double();
  auto warn = [&](std::string w) {
    if (warnings) warnings->push_back(std::move(w));
  };
  if (!A.is_irreducible()) {
    warn("A is not irreducible");
  } else if (d_inf > 0 && !A.is_primitive()) {
    warn("A is irreducible but not primitive while d_inf > 0");
  }

  double value = d.value_d(1);
  double err = 0;
  const double q = d.tail_ratio ? d.tail_ratio->to_double() : 0.0;
  std::size_t N = std::max<std::size_t>(d.K(), 2);
  if (q > 0) {
    while (weighted_tail(d.value_d(N), q, static_cast<double>(N)) > eps / 2) {
      if (++N > 100000) throw NonConvergence("Hausdorff series needs too many terms");
    }
    err += weighted_tail(d.value_d(N), q, static_cast<double>(N));
  }
  for (std::size_t i = 2; i <= N; ++i) {
    const double di = d.value_d(i);
    if (di <= 0) continue;
    value += di * log_t_phi(A, i, row_for(d, rho, i)) / log_m;
  }
  err += 4 * static_cast<double>(N) * std::numeric_limits<double>::epsilon();
  if (const auto* src = std::get_if<EmpiricalSource>(&d.source)) {
    err += d.tail_mass.to_double() * static_cast<double>(src->horizon + 1);
  }
  if (d_inf > 0) {
    const double r = p.ratio_approx();
    const TSolverResult sol = solve_t(A, r, options);
    value += d_inf * sol.log_total / log_m;
    err += d_inf * (sol.residual + sol.restart_spread) / ((r - 1) * log_m) + 1e-15;
  }
  return {value, err};
}

bool dims_coincide(const BinaryMatrix& A) { return A.row_sums_equal(); }

DimensionReport dimension_report(const BinaryMatrix& A, const ParamTuple& p, const RegionId& region,
                                 DensityVector d, Which which, double eps,
                                 const SolveOptions& options) {
  DimensionReport rep;
  rep.region = region;
  rep.coincide = dims_coincide(A);
  if (!d.is_closed_form()) rep.warnings.push_back("empirical densities: no closed form");
  if (which != Which::hausdorff) rep.dim_M = minkowski_dim(A, d, p, eps);
  if (which != Which::minkowski) rep.dim_H = hausdorff_dim(A, d, p, eps, options, &rep.warnings);
  if (rep.dim_M && rep.dim_H &&
      rep.dim_H->value > rep.dim_M->value + rep.dim_M->err + rep.dim_H->err) {
    rep.warnings.push_back("dim_H exceeds dim_M beyond the error bounds");
  }
  rep.d = std::move(d);
  return rep;
}

}  // namespace bmshift
