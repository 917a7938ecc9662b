// Gradient-boosted regression trees on squared error: F0 = mean(y), each
// stage fits a histogram-binned CART tree to the residuals and steps by the
// learning rate. Candidate thresholds come from equal-frequency bins whose
// cut points are midpoints between the adjacent distinct values straddling
// each quantile boundary, so with fewer distinct values than bins the search
// is exact. Split-gain ties resolve to (lower feature index, lower
// threshold), matching the exact CART.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "etp/kernels.hpp"
#include "etp/models.hpp"
#include "models_detail.hpp"

namespace etp {

namespace {

std::vector<double> build_cuts(std::span<const double> values, int max_bins) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    // Distinct values with multiplicities.
    std::vector<double> distinct;
    std::vector<std::size_t> counts;
    for (const double v : sorted) {
        if (distinct.empty() || v != distinct.back()) {
            distinct.push_back(v);
            counts.push_back(1);
        } else {
            ++counts.back();
        }
    }

    std::vector<double> cuts;
    if (distinct.size() <= 1) return cuts;

    if (distinct.size() <= static_cast<std::size_t>(max_bins)) {
        cuts.reserve(distinct.size() - 1);
        for (std::size_t i = 0; i + 1 < distinct.size(); ++i)
            cuts.push_back((distinct[i] + distinct[i + 1]) / 2.0);
        return cuts;
    }

    // Equal-frequency quantile cuts.
    const double n = static_cast<double>(values.size());
    const double bins = static_cast<double>(max_bins);
    std::size_t cum = 0;
    std::size_t placed = 0;
    for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
        cum += counts[i];
        const double quota = n * static_cast<double>(placed + 1) / bins;
        if (static_cast<double>(cum) >= quota) {
            cuts.push_back((distinct[i] + distinct[i + 1]) / 2.0);
            ++placed;
            if (placed + 1 >= static_cast<std::size_t>(max_bins)) break;
        }
    }
    return cuts;
}

std::uint16_t bin_of(const std::vector<double>& cuts, double v) {
    // Bin j holds values <= cuts[j] and > cuts[j-1].
    const auto it = std::lower_bound(cuts.begin(), cuts.end(), v);
    return static_cast<std::uint16_t>(it - cuts.begin());
}

struct HistTreeBuilder {
    const std::vector<std::vector<double>>& cuts;       // per feature
    const std::vector<std::vector<std::uint16_t>>& bins;  // per feature, per row
    std::span<const double> residual;
    const GbdtParams& params;
    const std::vector<std::string>& feature_names;
    std::map<std::string, double>& gains;

    std::vector<TreeNode> nodes;
    std::vector<std::uint32_t> rows;
    // Rows of each leaf, so boosting can update predictions without a
    // traversal. leaf_rows[i] pairs with leaf_ids[i].
    std::vector<std::pair<std::int32_t, std::pair<std::size_t, std::size_t>>> leaf_spans;

    std::vector<std::size_t> hist_count;
    std::vector<double> hist_sum;

    std::int32_t build(std::size_t begin, std::size_t end, int depth) {
        const std::size_t n = end - begin;
        double sum = 0.0;
        for (std::size_t i = begin; i < end; ++i) sum += residual[rows[i]];
        const double mean = sum / static_cast<double>(n);

        const std::int32_t id = static_cast<std::int32_t>(nodes.size());
        nodes.emplace_back();
        nodes[static_cast<std::size_t>(id)].value = mean;

        const std::size_t msl = static_cast<std::size_t>(params.min_samples_leaf);
        if (depth >= params.max_depth || n < 2 * msl) {
            leaf_spans.push_back({id, {begin, end}});
            return id;
        }

        double best_gain = 0.0;
        std::size_t best_feature = 0;
        std::size_t best_cut = 0;
        bool found = false;

        for (std::size_t f = 0; f < bins.size(); ++f) {
            const auto& fcuts = cuts[f];
            if (fcuts.empty()) continue;
            const std::size_t n_bins = fcuts.size() + 1;
            hist_count.assign(n_bins, 0);
            hist_sum.assign(n_bins, 0.0);
            const auto& fbins = bins[f];
            for (std::size_t i = begin; i < end; ++i) {
                const std::uint32_t r = rows[i];
                hist_count[fbins[r]] += 1;
                hist_sum[fbins[r]] += residual[r];
            }
            std::size_t left_count = 0;
            double left_sum = 0.0;
            for (std::size_t b = 0; b + 1 < n_bins; ++b) {
                left_count += hist_count[b];
                left_sum += hist_sum[b];
                if (left_count == 0) continue;
                if (left_count == n) break;
                if (left_count < msl || n - left_count < msl) continue;
                const double centered = left_sum - static_cast<double>(left_count) * mean;
                const double gain = detail::split_gain(centered, left_count, n - left_count);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = f;
                    best_cut = b;
                    found = true;
                }
            }
        }

        if (!found) {
            leaf_spans.push_back({id, {begin, end}});
            return id;
        }

        gains[feature_names[best_feature]] += best_gain;
        const double threshold = cuts[best_feature][best_cut];
        const auto& fbins = bins[best_feature];
        const auto mid = std::stable_partition(
            rows.begin() + static_cast<std::ptrdiff_t>(begin),
            rows.begin() + static_cast<std::ptrdiff_t>(end),
            [&](std::uint32_t r) { return fbins[r] <= best_cut; });
        const std::size_t split_at = static_cast<std::size_t>(mid - rows.begin());

        nodes[static_cast<std::size_t>(id)].feature =
            static_cast<std::int32_t>(best_feature);
        nodes[static_cast<std::size_t>(id)].threshold = threshold;
        const std::int32_t left = build(begin, split_at, depth + 1);
        nodes[static_cast<std::size_t>(id)].left = left;
        const std::int32_t right = build(split_at, end, depth + 1);
        nodes[static_cast<std::size_t>(id)].right = right;
        return id;
    }
};

}  // namespace

TrainedModel fit_gbdt(const linalg::Matrix& x, std::span<const double> y,
                      const std::vector<std::string>& feature_names,
                      const GbdtParams& params) {
    if (x.rows() != y.size())
        throw std::invalid_argument("design matrix and target length differ");
    if (x.cols() != feature_names.size())
        throw std::invalid_argument("design matrix width does not match feature names");
    const std::size_t n = x.rows();
    const std::size_t q = x.cols();
    if (n < 2 * static_cast<std::size_t>(params.min_samples_leaf))
        throw std::invalid_argument("fit_gbdt needs n >= 2*min_samples_leaf (n=" +
                                    std::to_string(n) + ")");

    // Global bin layout, shared by every tree.
    std::vector<std::vector<double>> cuts(q);
    std::vector<std::vector<std::uint16_t>> bins(q);
    for (std::size_t f = 0; f < q; ++f) {
        cuts[f] = build_cuts(x.col(f), params.histogram_bins);
        bins[f].resize(n);
        const auto col = x.col(f);
        for (std::size_t i = 0; i < n; ++i) bins[f][i] = bin_of(cuts[f], col[i]);
    }

    GbdtData d;
    d.learning_rate = params.learning_rate;
    d.base = kernels::sum(y) / static_cast<double>(n);

    std::vector<double> predictions(n, d.base);
    std::vector<double> residual(n);
    std::map<std::string, double> gains;

    d.train_rmse.reserve(static_cast<std::size_t>(params.n_trees));
    for (int t = 0; t < params.n_trees; ++t) {
        kernels::sub(y, predictions, residual);

        HistTreeBuilder builder{cuts, bins, residual, params, feature_names, gains,
                                {},   {},   {},       {},     {}};
        builder.rows.resize(n);
        std::iota(builder.rows.begin(), builder.rows.end(), 0u);
        builder.build(0, n, 0);

        for (const auto& [leaf_id, span] : builder.leaf_spans) {
            const double step =
                params.learning_rate * builder.nodes[static_cast<std::size_t>(leaf_id)].value;
            for (std::size_t i = span.first; i < span.second; ++i)
                predictions[builder.rows[i]] += step;
        }

        d.trees.push_back(TreeData{std::move(builder.nodes)});
        d.train_rmse.push_back(std::sqrt(kernels::sum_sq_diff(y, predictions) /
                                         static_cast<double>(n)));
    }

    ModelSpec spec;
    spec.kind = ModelKind::gbdt;
    spec.gbdt = params;
    return TrainedModel(spec, feature_names, std::move(d), std::move(gains), {});
}

}  // namespace etp
