#pragma once

#include <string>

#include "gyro/polarimetry.hpp"

namespace gyro::io {

// One header row, then one row per frequency. Angles are radians and
// undefined quantities are written as empty fields.
std::string export_polarimetry_csv(const PolarimetrySweep& p);

}  // namespace gyro::io
