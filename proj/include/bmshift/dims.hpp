#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bmshift/beatty.hpp"
#include "bmshift/density.hpp"
#include "bmshift/matrix.hpp"
#include "bmshift/regions.hpp"

namespace bmshift {

struct Estimate {
  double value = 0;
  double err = 0;  // |value - true value| <= err, up to double rounding
};

// sum_i w_i log_m |A^(i-1)| with
//   w_i = rho^(i-1) d_i + (rho^(i-1) - rho^i)(sum_{j>i} d_j + d_inf),  rho = alpha/gamma,
// truncated once the tail bound drops below eps.
Estimate minkowski_dim(const BinaryMatrix& A, const DensityVector& d, const ParamTuple& p,
                       double eps = 1e-10);

// Number of terms needed so that 2 rho^N ((N+2)/(1-rho) + rho/(1-rho)^2) <= eps.
std::size_t minkowski_terms(double rho, double eps);

struct SolveOptions {
  double tol = 1e-13;
  long max_iterations = 1000000;
  int restarts = 5;
  std::uint64_t seed = 0;
};

struct TSolverResult {
  std::vector<double> t;  // +inf entries once the scale exceeds double range
  double log_total = 0;   // ln sum_i t_i, always finite
  // max_i |t_i^r - (A t)_i| / (A t)_i
  double residual = 0;
  long iterations = 0;
  // largest relative spread between the main solution and the restarts
  double restart_spread = 0;
};

// Positive solution of t_i^r = sum_j A(i,j) t_j by damped iteration
// t <- (1-l) t + l (A t)^(1/r) on the normalized vector, starting from all ones.
TSolverResult solve_t(const BinaryMatrix& A, double r, const SolveOptions& options = {});

// t_{phi;i} for i >= 2, given the row d_{i,1}, ..., d_{i,i} (dij[j-1]).
// Evaluated by transfer sums in the log domain, O(i m^2).
double t_phi(const BinaryMatrix& A, std::size_t i, const std::vector<double>& dij);
// Natural log of t_phi; finite where t_phi itself would overflow.
double log_t_phi(const BinaryMatrix& A, std::size_t i, const std::vector<double>& dij);

struct TPhiTable {
  std::map<std::size_t, double> values;      // t_{phi;i}, may be +inf for large i
  std::map<std::size_t, double> log_values;  // ln t_{phi;i}
  std::map<std::size_t, std::vector<double>> inputs;
};

// t_{phi;i} for 2 <= i <= max_i, using d.dij when present and the derived
// d_{i,j} otherwise. Rows with d_i = 0 are skipped.
TPhiTable t_phi_table(const BinaryMatrix& A, const DensityVector& d, const ParamTuple& p,
                      std::size_t max_i);

// d_1 + sum_{i>=2} d_i log_m t_{phi;i} + d_inf log_m sum_i t_i.
Estimate hausdorff_dim(const BinaryMatrix& A, const DensityVector& d, const ParamTuple& p,
                       double eps = 1e-10, const SolveOptions& options = {},
                       std::vector<std::string>* warnings = nullptr);

bool dims_coincide(const BinaryMatrix& A);

struct DimensionReport {
  RegionId region;
  DensityVector d;
  std::optional<Estimate> dim_M;
  std::optional<Estimate> dim_H;
  bool coincide = false;
  std::vector<std::string> warnings;
};

enum class Which { hausdorff, minkowski, both };

DimensionReport dimension_report(const BinaryMatrix& A, const ParamTuple& p, const RegionId& region,
                                 DensityVector d, Which which = Which::both, double eps = 1e-10,
                                 const SolveOptions& options = {});

}  // namespace bmshift
