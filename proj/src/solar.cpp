#include "etp/solar.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace etp {

double solar_zenith_deg(TimePoint utc, double latitude_deg, double longitude_deg) {
    if (std::abs(latitude_deg) > 90.0)
        throw std::invalid_argument("latitude out of range [-90, 90]");
    if (std::abs(longitude_deg) > 180.0)
        throw std::invalid_argument("longitude out of range [-180, 180]");

    constexpr double kDegToRad = std::numbers::pi / 180.0;
    constexpr double kRadToDeg = 180.0 / std::numbers::pi;

    const CivilDateTime dt = from_epoch(utc);
    const int doy = day_of_year(dt.date);
    const double hour = dt.hour + dt.minute / 60.0 + dt.second / 3600.0;

    // Fractional year, radians.
    const double gamma = 2.0 * std::numbers::pi / days_in_year(dt.date.year) *
                         (doy - 1 + (hour - 12.0) / 24.0);

    // Equation of time in minutes.
    const double eqtime =
        229.18 * (0.000075 + 0.001868 * std::cos(gamma) - 0.032077 * std::sin(gamma) -
                  0.014615 * std::cos(2.0 * gamma) - 0.040849 * std::sin(2.0 * gamma));

    // Solar declination in radians.
    const double decl = 0.006918 - 0.399912 * std::cos(gamma) +
                        0.070257 * std::sin(gamma) - 0.006758 * std::cos(2.0 * gamma) +
                        0.000907 * std::sin(2.0 * gamma) -
                        0.002697 * std::cos(3.0 * gamma) + 0.00148 * std::sin(3.0 * gamma);

    // True solar time in minutes, working directly in UTC (timezone 0).
    const double tst = hour * 60.0 + eqtime + 4.0 * longitude_deg;
    const double hour_angle_deg = tst / 4.0 - 180.0;

    const double lat = latitude_deg * kDegToRad;
    const double ha = hour_angle_deg * kDegToRad;
    double cos_zenith = std::sin(lat) * std::sin(decl) +
                        std::cos(lat) * std::cos(decl) * std::cos(ha);
    cos_zenith = std::clamp(cos_zenith, -1.0, 1.0);
    return std::acos(cos_zenith) * kRadToDeg;
}

}  // namespace etp
