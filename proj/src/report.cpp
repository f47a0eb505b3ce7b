#include "bmshift/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace bmshift {

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

nlohmann::ordered_json to_json(const Estimate& e) {
  return {{"value", round12(e.value)}, {"err", round12(e.err)}};
}

nlohmann::ordered_json to_json(const DensityVector& d) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json finite = nlohmann::ordered_json::array();
  for (const auto& v : d.finite) finite.push_back(round12(v.to_double()));
  j["finite"] = std::move(finite);
  j["d_inf"] = round12(d.d_inf.to_double());
  j["K"] = d.K();
  j["exact"] = d.is_closed_form() && d.is_exact();
  if (d.is_exact()) {
    nlohmann::ordered_json exact = nlohmann::ordered_json::array();
    for (const auto& v : d.finite) exact.push_back(v.to_string());
    j["finite_exact"] = std::move(exact);
    j["d_inf_exact"] = d.d_inf.to_string();
  }
  if (d.tail_ratio) j["tail_ratio"] = round12(d.tail_ratio->to_double());
  if (const auto* cf = std::get_if<ClosedFormSource>(&d.source)) {
    j["provenance"] = {{"kind", "closed_form"}, {"region", cf->region}};
  } else {
    const auto& em = std::get<EmpiricalSource>(d.source);
    nlohmann::ordered_json windows = nlohmann::ordered_json::array();
    for (const auto& [a, b] : em.windows) windows.push_back({a, b});
    j["tail_mass"] = round12(d.tail_mass.to_double());
    j["provenance"] = {{"kind", "empirical"},
                       {"windows", std::move(windows)},
                       {"horizon", em.horizon},
                       {"diagnostic", round12(em.diagnostic)},
                       {"horizon_shift", round12(em.horizon_shift)}};
  }
  return j;
}

nlohmann::ordered_json to_json(const RegionId& r) {
  return {{"region", to_string(r.id)}, {"certificate", r.certificate}};
}

nlohmann::ordered_json to_json(const DimensionReport& rep) {
  nlohmann::ordered_json j;
  j["region"] = to_string(rep.region.id);
  j["certificate"] = rep.region.certificate;
  j["d"] = to_json(rep.d);
  if (rep.dim_M) j["dim_M"] = to_json(*rep.dim_M);
  if (rep.dim_H) j["dim_H"] = to_json(*rep.dim_H);
  j["coincide"] = rep.coincide;
  j["warnings"] = rep.warnings;
  return j;
}

std::string density_csv(const std::vector<std::pair<std::string, const DensityVector*>>& columns) {
  std::ostringstream out;
  out.precision(12);
  out << "i";
  std::size_t K = 0;
  for (const auto& [name, d] : columns) {
    out << ',' << name;
    K = std::max(K, d->K());
  }
  out << '\n';
  for (std::size_t i = 1; i <= K; ++i) {
    out << i;
    for (const auto& [name, d] : columns) out << ',' << round12(d->value_d(i));
    out << '\n';
  }
  out << "inf";
  for (const auto& [name, d] : columns) out << ',' << round12(d->d_inf.to_double());
  out << '\n';
  return out.str();
}

}  // namespace bmshift
