#include "etp/rfe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace etp {

RfeTrace rfe_site(const FluxDataset& ds, const PeriodMasks& masks,
                  const FeatureSet& start_set, const ModelSpec& spec,
                  const FoldPlan& plan, double tolerance) {
    if (spec.kind != ModelKind::tree && spec.kind != ModelKind::gbdt)
        throw std::invalid_argument(
            "RFE needs a tree-based model (gain importance), got " + spec.name());
    start_set.validate();

    const auto train_rows = evaluation_rows(ds, masks.night_train);

    RfeTrace trace;
    trace.site_id = ds.site_id();

    std::vector<std::string> current = start_set.features;
    while (!current.empty()) {
        const FeatureSet fs{start_set.name, current};
        RfeIteration iter;
        iter.feature_set = current;
        iter.cv_metrics = cross_validate(ds, masks, fs, spec, plan).metrics;

        // One model on all night-train data supplies the importances.
        const auto x = design_matrix(ds, current, train_rows);
        const auto y = gather_target(ds, train_rows);
        const TrainedModel model = fit_model(spec, x, y, current);
        auto importance = model.gain_importance(true);
        for (const auto& f : current) importance.try_emplace(f, 0.0);
        iter.normalized_importance = importance;

        if (current.size() == 1) {
            trace.iterations.push_back(std::move(iter));
            break;
        }

        // Minimum importance, ties to the lexicographically smallest name.
        std::string victim = current.front();
        double victim_value = importance.at(victim);
        for (const auto& f : current) {
            const double v = importance.at(f);
            if (v < victim_value || (v == victim_value && f < victim)) {
                victim = f;
                victim_value = v;
            }
        }
        iter.removed_feature = victim;
        trace.iterations.push_back(std::move(iter));
        current.erase(std::find(current.begin(), current.end(), victim));
    }

    trace.optimal_set = select_optimal(trace, tolerance);
    return trace;
}

FeatureSet select_optimal(const RfeTrace& trace, double tolerance) {
    if (trace.iterations.empty())
        throw std::invalid_argument("select_optimal: empty trace");
    auto holdout_r2 = [&](std::size_t i) {
        const auto& m = trace.iterations[i].cv_metrics.night;
        if (!m)
            throw std::invalid_argument(
                "select_optimal: trace iteration lacks night-holdout metrics");
        return m->r2;
    };
    if (holdout_r2(0) < 0.0)
        throw std::invalid_argument(
            "select_optimal: night-holdout R2 is negative at the full feature set (" +
            std::to_string(holdout_r2(0)) +
            "); the relative stopping rule is undefined on negative baselines");

    for (std::size_t i = 1; i < trace.iterations.size(); ++i) {
        const double prev = holdout_r2(i - 1);
        const double cur = holdout_r2(i);
        if (cur < (1.0 - tolerance) * prev)
            return FeatureSet{"F_RFE_optimal", trace.iterations[i - 1].feature_set};
    }
    return FeatureSet{"F_RFE_optimal", trace.iterations.back().feature_set};
}

FeatureSet merge_sites(std::span<const FeatureSet> optimal_sets, std::string* warning) {
    if (optimal_sets.size() < 2)
        throw std::invalid_argument("merge_sites needs at least 2 optimal sets");

    std::map<std::string, std::size_t> membership;
    for (const auto& set : optimal_sets)
        for (const auto& f : set.features) membership[f] += 1;

    std::vector<std::pair<std::string, std::size_t>> kept;
    for (const auto& [name, count] : membership)
        if (count >= 2) kept.emplace_back(name, count);
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });

    FeatureSet out{"F_RFE", {}};
    for (const auto& [name, _] : kept) out.features.push_back(name);
    if (out.features.empty() && warning)
        *warning = "cross-site merge produced an empty F_RFE: no feature was optimal "
                   "at two or more sites";
    return out;
}

std::string_view importance_class_name(ImportanceClass c) {
    switch (c) {
        case ImportanceClass::high: return "high";
        case ImportanceClass::significant: return "significant";
        case ImportanceClass::minor: return "minor";
    }
    return "unknown";
}

std::map<std::string, ImportanceClass> classify_importance(
    const std::map<std::string, double>& normalized) {
    double total = 0.0;
    for (const auto& [_, v] : normalized) total += v;
    if (std::abs(total - 1.0) > 1e-6)
        throw std::invalid_argument(
            "classify_importance expects normalized values summing to 1, got " +
            std::to_string(total));
    std::map<std::string, ImportanceClass> out;
    for (const auto& [f, v] : normalized) {
        if (v >= kHighImportanceThreshold)
            out[f] = ImportanceClass::high;
        else if (v >= kSignificantImportanceThreshold)
            out[f] = ImportanceClass::significant;
        else
            out[f] = ImportanceClass::minor;
    }
    return out;
}

}  // namespace etp
