#include "etp/partition.hpp"

#include <cmath>
#include <stdexcept>

#include "etp/kernels.hpp"

namespace etp {

TrainedModel train_e_model(const FluxDataset& ds, const PeriodMasks& masks,
                           const FeatureSet& features, const ModelSpec& spec) {
    features.validate();
    const auto rows = evaluation_rows(ds, masks.night_train);
    if (rows.empty())
        throw std::invalid_argument("train_e_model: no usable night training records");
    const auto x = design_matrix(ds, features.features, rows);
    const auto y = gather_target(ds, rows);
    return fit_model(spec, x, y, features.features);
}

namespace {

// Derive t so that e + t reproduces wq exactly in double arithmetic. The
// plain difference already does for on-scale flux data; the correction loop
// absorbs the rare rounding residue.
double exact_remainder(double wq, double e) {
    double t = wq - e;
    for (int i = 0; i < 8; ++i) {
        const double s = e + t;
        if (s == wq) break;
        t += wq - s;
    }
    return t;
}

}  // namespace

std::vector<PartitionRecord> partition_et(const FluxDataset& ds,
                                          const TrainedModel& model) {
    for (const auto& f : model.feature_names()) {
        if (!ds.has_feature(f))
            throw std::invalid_argument("model feature '" + f +
                                        "' is absent from the schema of site '" +
                                        ds.site_id() + "'");
    }
    const auto& wq = ds.column(kTargetFeature);

    std::vector<PartitionRecord> out(ds.n_records());
    std::vector<double> row(model.feature_names().size());
    std::vector<const FeatureColumn*> cols;
    cols.reserve(model.feature_names().size());
    for (const auto& f : model.feature_names()) cols.push_back(&ds.column(f));

    for (std::size_t i = 0; i < ds.n_records(); ++i) {
        PartitionRecord& rec = out[i];
        rec.timestamp = ds.timestamps()[i];
        rec.imputed_target = wq.is_imputed(i);
        if (!wq.is_present(i)) continue;  // absent partition, flagged by optionals

        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (!cols[j]->is_present(i))
                throw std::invalid_argument("feature '" + model.feature_names()[j] +
                                            "' missing at record " + std::to_string(i) +
                                            "; impute before partitioning");
            row[j] = cols[j]->value_unchecked(i);
        }
        const double et = wq.value_unchecked(i);
        const double e = model.predict_row(row);
        const double t = exact_remainder(et, e);
        rec.et_measured = et;
        rec.e_predicted = e;
        rec.t_derived = t;
        rec.negative_t = t < 0.0;
    }
    return out;
}

namespace {

std::optional<PartitionPeriodStats> period_stats(
    std::span<const PartitionRecord> results, const Mask& mask) {
    std::vector<double> et, e;
    std::size_t negatives = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (!mask[i]) continue;
        const auto& r = results[i];
        if (!r.et_measured || !r.e_predicted) continue;
        et.push_back(*r.et_measured);
        e.push_back(*r.e_predicted);
        if (r.negative_t) ++negatives;
    }
    if (et.size() < 2) return std::nullopt;

    PartitionPeriodStats stats;
    stats.n = et.size();
    stats.negative_t_fraction =
        static_cast<double>(negatives) / static_cast<double>(et.size());

    const double mean = kernels::sum(et) / static_cast<double>(et.size());
    if (kernels::sum_sq_dev(et, mean) == 0.0) return std::nullopt;

    const auto fit = metrics::best_fit_slope(et, e);
    stats.slope = fit.slope;
    stats.intercept = fit.intercept;
    stats.slope_violation = metrics::check_slope_constraint(fit.slope);
    stats.r2 = metrics::r2(et, e);
    return stats;
}

}  // namespace

PartitionValidation validate_partition(std::span<const PartitionRecord> results,
                                       const PeriodMasks& masks) {
    if (results.empty())
        throw std::invalid_argument("validate_partition: no partition records");
    if (results.size() != masks.night.size())
        throw std::invalid_argument("validate_partition: mask length mismatch");

    PartitionValidation v;
    bool any = false;
    for (const auto& r : results)
        if (r.e_predicted) {
            any = true;
            break;
        }
    if (!any) {
        v.warning = "no record carries a partition (all wq missing)";
        return v;
    }
    v.night_holdout = period_stats(results, masks.night_holdout);
    v.winter = period_stats(results, masks.winter);
    v.flood = period_stats(results, masks.flood);
    return v;
}

}  // namespace etp
