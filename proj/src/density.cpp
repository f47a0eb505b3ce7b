#include "bmshift/density.hpp"

#include <cmath>

#include "bmshift/errors.hpp"

namespace bmshift {

bool DensityVector::is_exact() const {
  if (!d_inf.is_exact() || !tail_mass.is_exact()) return false;
  for (const auto& v : finite) {
    if (!v.is_exact()) return false;
  }
  return !tail_ratio || tail_ratio->is_exact();
}

RealParam DensityVector::value(std::size_t i) const {
  if (i == 0) throw ValidationError("density index starts at 1");
  if (i <= finite.size()) return finite[i - 1];
  if (!tail_ratio || finite.empty()) return RealParam(0L);
  return finite.back() * tail_ratio->pow(static_cast<unsigned>(i - finite.size()));
}

double DensityVector::value_d(std::size_t i) const {
  if (i == 0) throw ValidationError("density index starts at 1");
  if (i <= finite.size()) return finite[i - 1].to_double();
  if (!tail_ratio || finite.empty()) return 0.0;
  return finite.back().to_double() *
         std::pow(tail_ratio->to_double(), static_cast<double>(i - finite.size()));
}

double DensityVector::tail_sum_d(std::size_t i) const {
  double sum = tail_mass.to_double();
  for (std::size_t j = i + 1; j <= finite.size(); ++j) sum += finite[j - 1].to_double();
  if (tail_ratio && !finite.empty()) {
    const double q = tail_ratio->to_double();
    if (q > 0) {
      // sum_{j > max(i, K)} d_K q^(j - K)
      const std::size_t start = std::max(i, finite.size());
      const double first = value_d(start + 1);
      sum += first / (1.0 - q);
    }
  }
  return sum;
}

double DensityVector::total_mass() const { return tail_sum_d(0) + d_inf.to_double(); }

void DensityVector::validate(double tol) const {
  for (std::size_t i = 0; i < finite.size(); ++i) {
    if (finite[i].to_double() < -tol) {
      throw InvalidDensity("d_" + std::to_string(i + 1) + " is negative");
    }
  }
  if (d_inf.to_double() < -tol) throw InvalidDensity("d_inf is negative");
  if (tail_ratio) {
    const double q = tail_ratio->to_double();
    if (q < 0 || q >= 1) throw InvalidDensity("tail ratio must lie in [0, 1)");
  }
  if (total_mass() > 1.0 + tol) {
    throw InvalidDensity("total density mass exceeds 1");
  }
}

DensityVector derived_dij(DensityVector d, const ParamTuple& p, std::size_t max_i) {
  if (max_i == 0) max_i = d.K();
  const RealParam rho = p.alpha() / p.gamma();
  std::vector<RealParam> powers{RealParam(1L)};  // rho^0, rho^1, ...
  for (std::size_t j = 1; j <= max_i; ++j) powers.push_back(powers.back() * rho);

  std::map<std::pair<std::size_t, std::size_t>, RealParam> table;
  for (std::size_t i = 1; i <= max_i; ++i) {
    const RealParam di = d.value(i);
    for (std::size_t j = 1; j < i; ++j) {
      table.emplace(std::pair{i, j}, di * (powers[j - 1] - powers[j]));
    }
    table.emplace(std::pair{i, i}, di * powers[i - 1]);
  }
  d.dij = std::move(table);
  return d;
}

}  // namespace bmshift
