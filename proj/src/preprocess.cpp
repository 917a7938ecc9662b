#include "etp/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "etp/ingest.hpp"
#include "etp/kernels.hpp"
#include "etp/solar.hpp"

namespace etp {

std::vector<std::string> default_f_e_features() {
    return {"VPD",  "GCC",   "u*",  "TA",    "RNET", "WT",
            "H",    "ER_Reichstein", "year", "month", "DOY"};
}

std::vector<std::string> filter_by_completeness(const FluxDataset& ds,
                                                double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw std::invalid_argument("completeness threshold must be in (0, 1]");
    std::vector<std::string> retained;
    for (const auto& f : ds.schema()) {
        if (completeness(ds, f) >= threshold) retained.push_back(f);
    }
    return retained;
}

FluxDataset consolidate_depth_profiles(const FluxDataset& ds,
                                       const std::vector<std::string>& group,
                                       const std::string& out_name) {
    if (group.empty())
        throw std::invalid_argument("depth group for '" + out_name + "' is empty");
    for (const auto& g : group) {
        if (!ds.has_feature(g))
            throw std::invalid_argument("depth group member '" + g +
                                        "' is not in the schema of site '" +
                                        ds.site_id() + "'");
    }

    FeatureColumn merged(ds.n_records());
    for (std::size_t i = 0; i < ds.n_records(); ++i) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& g : group) {
            const auto v = ds.column(g).get(i);
            if (v) {
                sum += *v;
                ++count;
            }
        }
        if (count > 0) merged.set(i, sum / static_cast<double>(count));
    }

    FluxDataset out = ds;
    std::size_t position = out.schema().size();
    for (const auto& g : group) position = std::min(position, out.feature_index(g));
    for (const auto& g : group) out.remove_column(g);
    out.add_column(out_name, std::move(merged),
                   std::min(position, out.schema().size()));
    return out;
}

ImputeStrategy impute_strategy_from_name(std::string_view name) {
    if (name == "mean") return ImputeStrategy::mean;
    if (name == "linear") return ImputeStrategy::linear;
    throw std::invalid_argument("unknown impute strategy '" + std::string(name) +
                                "' (expected mean or linear)");
}

FluxDataset impute(const FluxDataset& ds, std::string_view feature,
                   ImputeStrategy strategy) {
    FluxDataset out = ds;
    auto& col = out.column(feature);
    const std::size_t n = out.n_records();

    std::vector<std::size_t> present;
    for (std::size_t i = 0; i < n; ++i)
        if (col.is_present(i)) present.push_back(i);
    if (present.empty())
        throw std::invalid_argument("cannot impute fully-missing feature '" +
                                    std::string(feature) + "'");
    if (present.size() == n) return out;

    if (strategy == ImputeStrategy::mean) {
        double sum = 0.0;
        for (const std::size_t i : present) sum += col.value_unchecked(i);
        const double mean = sum / static_cast<double>(present.size());
        for (std::size_t i = 0; i < n; ++i)
            if (!col.is_present(i)) col.set_imputed(i, mean);
        return out;
    }

    // Linear interpolation against time; edges take the nearest value.
    const auto& ts = out.timestamps();
    std::size_t next = 0;  // index into `present`, first present record >= i
    for (std::size_t i = 0; i < n; ++i) {
        if (col.is_present(i)) {
            while (next < present.size() && present[next] <= i) ++next;
            continue;
        }
        if (i < present.front()) {
            col.set_imputed(i, col.value_unchecked(present.front()));
            continue;
        }
        if (i > present.back()) {
            col.set_imputed(i, col.value_unchecked(present.back()));
            continue;
        }
        const std::size_t hi = present[next];
        const std::size_t lo = present[next - 1];
        const double v_lo = col.value_unchecked(lo);
        const double v_hi = col.value_unchecked(hi);
        const double frac = static_cast<double>(ts[i] - ts[lo]) /
                            static_cast<double>(ts[hi] - ts[lo]);
        col.set_imputed(i, v_lo + frac * (v_hi - v_lo));
    }
    return out;
}

CorrelationRanking correlation_rank(const FluxDataset& ds, std::string_view target) {
    const auto& target_col = ds.column(target);
    if (!target_col.fully_present())
        throw std::invalid_argument("target '" + std::string(target) +
                                    "' has missing values; impute first");
    const auto y = target_col.raw();
    const double y_mean = kernels::sum(y) / static_cast<double>(y.size());
    const double y_ss = kernels::sum_sq_dev(y, y_mean);
    if (y_ss == 0.0)
        throw std::invalid_argument("correlation undefined for zero-variance target '" +
                                    std::string(target) + "'");

    CorrelationRanking ranking;
    ranking.site_id = ds.site_id();
    for (const auto& f : ds.schema()) {
        if (f == target) continue;
        const auto& col = ds.column(f);
        if (!col.fully_present())
            throw std::invalid_argument("feature '" + f +
                                        "' has missing values; impute first");
        const auto xv = col.raw();
        const double x_mean = kernels::sum(xv) / static_cast<double>(xv.size());
        const double x_ss = kernels::sum_sq_dev(xv, x_mean);
        double r = 0.0;
        if (x_ss > 0.0) {
            r = kernels::centered_dot(xv, x_mean, y, y_mean) /
                std::sqrt(x_ss * y_ss);
            r = std::clamp(r, -1.0, 1.0);
        }
        ranking.entries.emplace_back(f, std::abs(r));
    }
    std::sort(ranking.entries.begin(), ranking.entries.end(),
              [](const auto& a, const auto& b) {
                  return a.second != b.second ? a.second > b.second : a.first < b.first;
              });
    return ranking;
}

std::vector<std::string> cross_site_common_features(
    std::span<const CorrelationRanking> rankings, std::size_t top_n,
    std::size_t target_count, std::string* warning) {
    if (rankings.size() < 2)
        throw std::invalid_argument("cross-site screening needs at least 2 rankings");
    if (top_n < target_count)
        throw std::invalid_argument("top_n must be >= target_count");

    // feature -> (sites seen, sum of ranks)
    std::map<std::string, std::pair<std::size_t, double>> tally;
    for (const auto& ranking : rankings) {
        const std::size_t limit = std::min(top_n, ranking.entries.size());
        for (std::size_t i = 0; i < limit; ++i) {
            auto& t = tally[ranking.entries[i].first];
            t.first += 1;
            t.second += static_cast<double>(i);
        }
    }

    std::vector<std::pair<std::string, double>> common;  // (name, mean rank)
    for (const auto& [name, t] : tally) {
        if (t.first == rankings.size())
            common.emplace_back(name, t.second / static_cast<double>(t.first));
    }
    std::sort(common.begin(), common.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second < b.second : a.first < b.first;
    });

    if (common.size() > target_count) common.resize(target_count);
    if (common.size() < target_count && warning)
        *warning = "cross-site screening found " + std::to_string(common.size()) +
                   " common features, fewer than the requested " +
                   std::to_string(target_count);

    std::vector<std::string> out;
    out.reserve(common.size());
    for (const auto& [name, _] : common) out.push_back(name);
    return out;
}

FeatureSets build_feature_sets(std::span<const FluxDataset> sites,
                               const std::vector<std::string>& f_e_features,
                               const std::vector<std::string>& screened) {
    for (const auto& ds : sites) {
        for (const auto& f : f_e_features) {
            if (!ds.has_feature(f))
                throw std::invalid_argument("F_E feature '" + f +
                                            "' is absent from the schema of site '" +
                                            ds.site_id() + "'");
        }
    }
    FeatureSets sets;
    sets.f_e = FeatureSet{"F_E", f_e_features};
    sets.f_e.validate();

    sets.f_25 = FeatureSet{"F_25", f_e_features};
    for (const auto& f : screened) {
        if (!sets.f_25.contains(f)) sets.f_25.features.push_back(f);
    }
    sets.f_25.validate();
    return sets;
}

FluxDataset add_time_features(const FluxDataset& ds) {
    FluxDataset out = ds;
    const std::size_t n = ds.n_records();
    const auto& meta = ds.meta();

    FeatureColumn year(n), month(n), doy(n), hour(n);
    for (std::size_t i = 0; i < n; ++i) {
        const TimePoint local = to_local(ds.timestamps()[i], meta.utc_offset_hours);
        const CivilDateTime dt = from_epoch(local);
        year.set(i, dt.date.year);
        month.set(i, dt.date.month);
        doy.set(i, day_of_year(dt.date));
        hour.set(i, dt.hour + dt.minute / 60.0 + dt.second / 3600.0);
    }
    out.add_column("year", std::move(year));
    out.add_column("month", std::move(month));
    out.add_column("DOY", std::move(doy));
    out.add_column("time", std::move(hour));

    if (meta.latitude_deg && meta.longitude_deg) {
        FeatureColumn zenith(n);
        for (std::size_t i = 0; i < n; ++i)
            zenith.set(i, solar_zenith_deg(ds.timestamps()[i], *meta.latitude_deg,
                                           *meta.longitude_deg));
        out.add_column("ze", std::move(zenith));
    }
    return out;
}

}  // namespace etp
