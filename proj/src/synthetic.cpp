#include "etp/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "etp/rng.hpp"
#include "etp/solar.hpp"

namespace etp {

const std::vector<std::string>& synthetic_side_channels() {
    static const std::vector<std::string> kNames = {"E_true", "T_true", "eps_true"};
    return kNames;
}

namespace {

// First-order autoregressive smoother for weather-like wander.
struct Ar1 {
    double phi;
    double sigma;
    double state = 0.0;
    double step(Rng& rng) {
        state = phi * state + sigma * std::sqrt(1.0 - phi * phi) * rng.normal();
        return state;
    }
};

}  // namespace

FluxDataset generate_synthetic(const SyntheticSpec& spec) {
    if (spec.n_days < 2) throw std::invalid_argument("synthetic spec needs n_days >= 2");
    if (spec.noise_std < 0.0)
        throw std::invalid_argument("synthetic noise_std must be >= 0");
    if (spec.n_noise_features < 0)
        throw std::invalid_argument("synthetic n_noise_features must be >= 0");
    if (!(spec.missing_fraction >= 0.0 && spec.missing_fraction < 1.0))
        throw std::invalid_argument("synthetic missing_fraction must be in [0, 1)");

    const std::size_t n = static_cast<std::size_t>(spec.n_days) * 48;
    const TimePoint start =
        days_from_civil(spec.start_date) * kSecondsPerDay -
        static_cast<TimePoint>(std::llround(spec.utc_offset_hours * 3600.0));

    SiteMeta meta;
    meta.site_id = spec.site_id;
    meta.latitude_deg = spec.latitude_deg;
    meta.longitude_deg = spec.longitude_deg;
    meta.utc_offset_hours = spec.utc_offset_hours;
    meta.flood_start = spec.flood_start;
    meta.greenup_date = spec.greenup_date;

    std::vector<TimePoint> stamps(n);
    for (std::size_t i = 0; i < n; ++i)
        stamps[i] = start + static_cast<TimePoint>(i) * kSecondsPerHalfHour;

    std::vector<std::string> schema = {"wq", "TA",  "TW_1", "TW_2", "VPD", "RNET",
                                       "u*", "GCC", "WT",   "H",    "ER_Reichstein"};
    for (int j = 0; j < spec.n_noise_features; ++j)
        schema.push_back("noise_" + std::to_string(j + 1));
    for (const auto& s : synthetic_side_channels()) schema.push_back(s);

    FluxDataset ds(meta, std::move(stamps), schema);

    Rng rng(derive_seed(spec.seed, {"synthetic", spec.site_id}));
    Ar1 ar_cloud{0.95, 12.0};
    Ar1 ar_ta{0.98, 2.0};
    Ar1 ar_tw{0.99, 1.0};
    Ar1 ar_vpd{0.9, 0.15};
    Ar1 ar_ustar{0.9, 0.8};
    Ar1 ar_h{0.8, 4.0};
    Ar1 ar_wt{0.995, 0.05};
    Ar1 ar_er{0.9, 0.08};

    // Greenup ramps GCC off its base over about ten days; without a
    // configured greenup date vegetation establishes mid-series.
    const std::int64_t greenup_day =
        spec.greenup_date ? days_from_civil(*spec.greenup_date)
                          : days_from_civil(spec.start_date) + spec.n_days / 2;

    const double lat = spec.latitude_deg;
    const double lon = spec.longitude_deg;

    for (std::size_t i = 0; i < n; ++i) {
        const TimePoint utc = ds.timestamps()[i];
        const TimePoint local = to_local(utc, spec.utc_offset_hours);
        const CivilDateTime dt = from_epoch(local);
        const double hour = dt.hour + dt.minute / 60.0;
        const int doy = day_of_year(dt.date);
        std::int64_t local_day = local / kSecondsPerDay;
        if (local % kSecondsPerDay < 0) --local_day;

        const double zenith = solar_zenith_deg(utc, lat, lon);
        const double cosz = std::cos(zenith * std::numbers::pi / 180.0);
        const double daylight = std::max(cosz, 0.0);

        const double season =
            std::sin(2.0 * std::numbers::pi * (doy - 80) / 365.0);
        const double diurnal = std::sin(2.0 * std::numbers::pi * (hour - 9.0) / 24.0);

        const double ta = 8.0 + 6.0 * season + 7.0 * diurnal + ar_ta.step(rng);
        const double tw = 6.0 + 0.3 * ta + ar_tw.step(rng);
        const double vpd = std::max(0.0, 0.08 * (ta - 2.0) + ar_vpd.step(rng));
        const double rnet = 600.0 * daylight - 60.0 + ar_cloud.step(rng);
        const double ustar = std::max(0.02, 0.25 + 0.15 * ar_ustar.step(rng));
        const double h = 0.35 * rnet + ar_h.step(rng);
        const double wt = 0.4 + 0.1 * season + ar_wt.step(rng);
        const double er = std::max(0.0, 0.4 * std::exp(0.07 * tw) + ar_er.step(rng));

        const double days_since_greenup = static_cast<double>(local_day - greenup_day);
        const double ramp =
            days_since_greenup < 0.0
                ? 0.0
                : 0.15 * (1.0 - std::exp(-days_since_greenup / 5.0));
        const double gcc = spec.gcc_base + ramp;

        const double e_true = spec.e_intercept + spec.e_rnet * rnet +
                              spec.e_vpd * vpd + spec.e_ustar * ustar +
                              spec.e_tw * tw;
        const double t_true = spec.t_gcc * (gcc - spec.gcc_base) * daylight;
        const double eps = spec.noise_std > 0.0 ? rng.normal(0.0, spec.noise_std) : 0.0;
        const double wq = (e_true + t_true) + eps;

        ds.column_at(0).set(i, wq);
        ds.column("TA").set(i, ta);
        ds.column("TW_1").set(i, tw + 0.4);
        ds.column("TW_2").set(i, tw - 0.4);
        ds.column("VPD").set(i, vpd);
        ds.column("RNET").set(i, rnet);
        ds.column("u*").set(i, ustar);
        ds.column("GCC").set(i, gcc);
        ds.column("WT").set(i, wt);
        ds.column("H").set(i, h);
        ds.column("ER_Reichstein").set(i, er);
        for (int j = 0; j < spec.n_noise_features; ++j)
            ds.column("noise_" + std::to_string(j + 1)).set(i, rng.normal());
        ds.column("E_true").set(i, e_true);
        ds.column("T_true").set(i, t_true);
        ds.column("eps_true").set(i, eps);
    }

    if (spec.missing_fraction > 0.0) {
        static const std::vector<std::string> kKnockable = {
            "TA", "TW_1", "TW_2", "VPD", "RNET", "u*", "WT", "H", "ER_Reichstein"};
        for (const auto& f : kKnockable) {
            auto& col = ds.column(f);
            for (std::size_t i = 0; i < n; ++i)
                if (rng.uniform() < spec.missing_fraction) col.set_missing(i);
        }
    }
    return ds;
}

}  // namespace etp
