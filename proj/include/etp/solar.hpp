#pragma once

#include "etp/chronoutil.hpp"

namespace etp {

/// Geometric solar zenith angle in degrees [0, 180] for a UTC instant and
/// site coordinates, computed with the NOAA low-accuracy approximation
/// (fractional-year Fourier series for declination and the equation of
/// time). No refraction correction. Accuracy is well inside 0.5 degrees of
/// reference ephemeris values, which is ample for a 90-degree day/night
/// threshold.
double solar_zenith_deg(TimePoint utc, double latitude_deg, double longitude_deg);

}  // namespace etp
