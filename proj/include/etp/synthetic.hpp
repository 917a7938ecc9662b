#pragma once

// Deterministic synthetic flux generator: a desk-scale stand-in for wetland
// eddy-covariance data with known ground truth. wq = E + T + noise where E
// is a linear function of (RNET, VPD, u*, TW) and T is greenness-driven and
// gated to daylight, so every night record has true T = 0. The noiseless E,
// T and the noise draw are stored in side-channel columns (E_true, T_true,
// eps_true) for test oracles.

#include <cstdint>
#include <string>
#include <vector>

#include "etp/dataset.hpp"

namespace etp {

struct SyntheticSpec {
    int n_days = 30;
    std::uint64_t seed = 1;
    double noise_std = 0.05;
    int n_noise_features = 3;
    /// Fraction of driver cells knocked out to exercise imputation (never
    /// applied to wq, GCC or the side channels).
    double missing_fraction = 0.0;

    std::string site_id = "SYN";
    CivilDate start_date{2021, 2, 15};
    double latitude_deg = 38.1;
    double longitude_deg = -121.65;
    double utc_offset_hours = -8.0;
    std::optional<CivilDate> flood_start;
    std::optional<CivilDate> greenup_date;

    // E = e_intercept + e_rnet*RNET + e_vpd*VPD + e_ustar*u* + e_tw*TW
    double e_intercept = 1.0;
    double e_rnet = 0.01;
    double e_vpd = 3.0;
    double e_ustar = 8.0;
    double e_tw = 0.2;
    // T = t_gcc * (GCC - gcc_base) * max(cos(zenith), 0); GCC sits at
    // gcc_base until greenup, so T is exactly zero at night, in the flood
    // window and before greenup.
    double t_gcc = 25.0;
    double gcc_base = 0.30;
};

/// Half-hourly records for n_days; bitwise deterministic for a given spec.
FluxDataset generate_synthetic(const SyntheticSpec& spec);

/// Names of the ground-truth side channels, excluded from model inputs.
const std::vector<std::string>& synthetic_side_channels();

}  // namespace etp
