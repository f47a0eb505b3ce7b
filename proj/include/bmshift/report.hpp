#pragma once

#include <string>

#include <json.hpp>

#include "bmshift/density.hpp"
#include "bmshift/dims.hpp"
#include "bmshift/regions.hpp"

namespace bmshift {

// Rounds to 12 significant digits so reports are byte-stable.
double round12(double x);

nlohmann::ordered_json to_json(const Estimate& e);
nlohmann::ordered_json to_json(const DensityVector& d);
nlohmann::ordered_json to_json(const RegionId& r);
nlohmann::ordered_json to_json(const DimensionReport& rep);

// i,d_i rows followed by inf; one column per supplied vector.
std::string density_csv(const std::vector<std::pair<std::string, const DensityVector*>>& columns);

}  // namespace bmshift
