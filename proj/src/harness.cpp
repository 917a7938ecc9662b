#include "etp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "etp/kernels.hpp"
#include "etp/rng.hpp"

namespace etp {

FoldPlan kfold_split(std::size_t n, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("k-fold needs k >= 2");
    if (static_cast<std::size_t>(k) > n)
        throw std::invalid_argument("k-fold needs k <= n (k=" + std::to_string(k) +
                                    ", n=" + std::to_string(n) + ")");
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    Rng rng(seed);
    rng.shuffle(order);

    FoldPlan plan;
    plan.n = n;
    plan.k = k;
    plan.seed = seed;
    plan.assignment.assign(n, 0);
    // First (n mod k) folds take the extra record.
    const std::size_t base = n / static_cast<std::size_t>(k);
    const std::size_t extra = n % static_cast<std::size_t>(k);
    std::size_t pos = 0;
    for (int f = 0; f < k; ++f) {
        const std::size_t size = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
        for (std::size_t i = 0; i < size; ++i) plan.assignment[order[pos++]] = f;
    }
    return plan;
}

std::string_view period_name(Period p) {
    switch (p) {
        case Period::night: return "night";
        case Period::winter: return "winter";
        case Period::flood: return "flood";
    }
    return "unknown";
}

Period period_from_name(std::string_view name) {
    if (name == "night") return Period::night;
    if (name == "winter") return Period::winter;
    if (name == "flood") return Period::flood;
    throw std::invalid_argument("unknown period '" + std::string(name) +
                                "' (expected night, winter or flood)");
}

const std::optional<metrics::MetricReport>& PeriodMetrics::of(Period p) const {
    switch (p) {
        case Period::night: return night;
        case Period::winter: return winter;
        case Period::flood: return flood;
    }
    throw std::logic_error("unreachable period");
}

std::vector<std::uint32_t> evaluation_rows(const FluxDataset& ds, const Mask& mask) {
    const auto& wq = ds.column(kTargetFeature);
    std::vector<std::uint32_t> rows;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i] && wq.is_present(i)) rows.push_back(static_cast<std::uint32_t>(i));
    return rows;
}

namespace {

struct EvalSet {
    std::vector<std::uint32_t> rows;
    linalg::Matrix x;
    std::vector<double> y;
    bool usable = false;  // nonempty and non-constant target
};

EvalSet make_eval_set(const FluxDataset& ds, const Mask& mask,
                      const std::vector<std::string>& features) {
    EvalSet s;
    s.rows = evaluation_rows(ds, mask);
    if (s.rows.size() < 2) return s;
    s.y = gather_target(ds, s.rows);
    const double mean = kernels::sum(s.y) / static_cast<double>(s.y.size());
    if (kernels::sum_sq_dev(s.y, mean) == 0.0) return s;
    s.x = design_matrix(ds, features, s.rows);
    s.usable = true;
    return s;
}

struct MetricAccumulator {
    metrics::MetricReport sum{};
    std::size_t folds = 0;

    void add(const metrics::MetricReport& r) {
        sum.r2 += r.r2;
        sum.adj_r2 += r.adj_r2;
        sum.rmse += r.rmse;
        sum.slope += r.slope;
        sum.intercept += r.intercept;
        sum.n_samples = r.n_samples;
        sum.n_features = r.n_features;
        ++folds;
    }

    std::optional<metrics::MetricReport> mean() const {
        if (folds == 0) return std::nullopt;
        metrics::MetricReport m = sum;
        const double inv = 1.0 / static_cast<double>(folds);
        m.r2 *= inv;
        m.adj_r2 *= inv;
        m.rmse *= inv;
        m.slope *= inv;
        m.intercept *= inv;
        m.slope_violation = metrics::check_slope_constraint(m.slope);
        return m;
    }
};

}  // namespace

ExperimentCell cross_validate(const FluxDataset& ds, const PeriodMasks& masks,
                              const FeatureSet& features, const ModelSpec& spec,
                              const FoldPlan& plan) {
    const auto start = std::chrono::steady_clock::now();

    const auto train_rows = evaluation_rows(ds, masks.night_train);
    if (train_rows.size() != plan.n)
        throw std::invalid_argument("fold plan covers " + std::to_string(plan.n) +
                                    " records but night_train has " +
                                    std::to_string(train_rows.size()));
    if (train_rows.size() < static_cast<std::size_t>(plan.k))
        throw std::invalid_argument("night_train smaller than the fold count");

    const EvalSet holdout = make_eval_set(ds, masks.night_holdout, features.features);
    const EvalSet winter = make_eval_set(ds, masks.winter, features.features);
    const EvalSet flood = make_eval_set(ds, masks.flood, features.features);
    const std::size_t q = features.features.size();

    MetricAccumulator acc_night, acc_winter, acc_flood;
    std::vector<std::uint32_t> fold_train;
    for (int f = 0; f < plan.k; ++f) {
        fold_train.clear();
        for (std::size_t i = 0; i < train_rows.size(); ++i)
            if (plan.assignment[i] != f) fold_train.push_back(train_rows[i]);

        const auto x = design_matrix(ds, features.features, fold_train);
        const auto y = gather_target(ds, fold_train);
        const TrainedModel model = fit_model(spec, x, y, features.features);

        if (holdout.usable)
            acc_night.add(metrics::evaluate(holdout.y, model.predict(holdout.x), q));
        if (winter.usable)
            acc_winter.add(metrics::evaluate(winter.y, model.predict(winter.x), q));
        if (flood.usable)
            acc_flood.add(metrics::evaluate(flood.y, model.predict(flood.x), q));
    }

    ExperimentCell cell;
    cell.site_id = ds.site_id();
    cell.spec = spec;
    cell.feature_set = features.name;
    cell.metrics.night = acc_night.mean();
    cell.metrics.winter = acc_winter.mean();
    cell.metrics.flood = acc_flood.mean();
    cell.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return cell;
}

ExperimentReport compare_models(std::span<const PreparedSite> sites,
                                std::span<const ModelSpec> specs,
                                std::span<const FeatureSet> feature_sets,
                                std::uint64_t seed, int k, int jobs) {
    if (sites.empty()) throw std::invalid_argument("compare_models: no sites");
    if (feature_sets.empty())
        throw std::invalid_argument("compare_models: no feature sets");

    ExperimentReport report;
    if (specs.empty()) return report;

    // Identical folds across specs and feature sets at a site keep the
    // comparison fair; the plan seed depends only on (seed, site).
    std::vector<FoldPlan> plans;
    plans.reserve(sites.size());
    for (const auto& site : sites) {
        const auto rows = evaluation_rows(site.ds, site.masks.night_train);
        plans.push_back(
            kfold_split(rows.size(), k, derive_seed(seed, {"folds", site.ds.site_id()})));
    }

    struct CellRef {
        std::size_t site, spec, fset;
    };
    std::vector<CellRef> grid;
    for (std::size_t si = 0; si < sites.size(); ++si)
        for (std::size_t mi = 0; mi < specs.size(); ++mi)
            for (std::size_t fi = 0; fi < feature_sets.size(); ++fi)
                grid.push_back({si, mi, fi});

    std::vector<ExperimentCell> cells(grid.size());
    std::exception_ptr first_error;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};

    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= grid.size() || failed.load()) break;
            const auto& ref = grid[i];
            try {
                cells[i] = cross_validate(sites[ref.site].ds, sites[ref.site].masks,
                                          feature_sets[ref.fset], specs[ref.spec],
                                          plans[ref.site]);
            } catch (...) {
                if (!failed.exchange(true)) first_error = std::current_exception();
            }
        }
    };

    const int n_workers = std::max(1, std::min<int>(jobs, static_cast<int>(grid.size())));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failed.load()) std::rethrow_exception(first_error);

    // Discard rule: a spec with negative night-holdout R2 anywhere is out.
    std::vector<bool> discarded_spec(specs.size(), false);
    std::vector<std::string> reasons(specs.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& night = cells[i].metrics.night;
        if (night && night->r2 < 0.0 && !discarded_spec[grid[i].spec]) {
            discarded_spec[grid[i].spec] = true;
            char value[32];
            std::snprintf(value, sizeof value, "%.4f", night->r2);
            reasons[grid[i].spec] = "night-holdout R2 = " + std::string(value) +
                                    " at site " + cells[i].site_id + " (feature set " +
                                    cells[i].feature_set + ")";
        }
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!discarded_spec[grid[i].spec]) report.cells.push_back(std::move(cells[i]));
    }
    for (std::size_t mi = 0; mi < specs.size(); ++mi) {
        if (discarded_spec[mi])
            report.discarded.emplace_back(specs[mi].name(), reasons[mi]);
    }
    return report;
}

std::vector<RankEntry> rank_models(const ExperimentReport& report, Period period,
                                   std::string_view metric) {
    const bool ascending = metric == "rmse";
    if (metric != "rmse" && metric != "r2" && metric != "adj_r2")
        throw std::invalid_argument("unknown ranking metric '" + std::string(metric) +
                                    "' (expected adj_r2, r2 or rmse)");

    std::vector<RankEntry> entries;
    for (const auto& cell : report.cells) {
        const auto& m = cell.metrics.of(period);
        if (!m) continue;
        double value = 0.0;
        if (metric == "rmse")
            value = m->rmse;
        else if (metric == "r2")
            value = m->r2;
        else
            value = m->adj_r2;
        if (std::isnan(value)) continue;
        entries.push_back(
            {cell.site_id, cell.spec.name(), cell.feature_set, value,
             cell.wall_time_seconds});
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [&](const RankEntry& a, const RankEntry& b) {
                         if (a.value != b.value)
                             return ascending ? a.value < b.value : a.value > b.value;
                         return a.wall_time_seconds < b.wall_time_seconds;
                     });
    return entries;
}

}  // namespace etp
