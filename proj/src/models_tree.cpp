// Exact CART regression tree: splits maximize the reduction in sum of
// squared errors over every midpoint between adjacent distinct feature
// values. Gain ties resolve to the lower feature index, then the lower
// threshold, which the ascending scan delivers with a strict comparison.

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "etp/kernels.hpp"
#include "etp/models.hpp"
#include "models_detail.hpp"

namespace etp {

namespace {

struct Builder {
    const linalg::Matrix& x;
    std::span<const double> y;
    const TreeParams& params;
    const std::vector<std::string>& feature_names;
    std::vector<TreeNode> nodes;
    std::map<std::string, double> gains;
    std::vector<std::uint32_t> rows;

    // scratch
    std::vector<std::uint32_t> sorted;
    std::vector<double> centered;

    std::int32_t build(std::size_t begin, std::size_t end, int depth) {
        const std::size_t n = end - begin;
        double sum = 0.0;
        for (std::size_t i = begin; i < end; ++i) sum += y[rows[i]];
        const double mean = sum / static_cast<double>(n);

        const std::int32_t id = static_cast<std::int32_t>(nodes.size());
        nodes.emplace_back();
        nodes[static_cast<std::size_t>(id)].value = mean;

        const bool depth_ok = params.max_depth == 0 || depth < params.max_depth;
        const std::size_t msl = static_cast<std::size_t>(params.min_samples_leaf);
        if (!depth_ok || n < 2 * msl) return id;

        double best_gain = 0.0;
        std::size_t best_feature = 0;
        double best_threshold = 0.0;
        bool found = false;

        for (std::size_t f = 0; f < x.cols(); ++f) {
            sorted.assign(rows.begin() + static_cast<std::ptrdiff_t>(begin),
                          rows.begin() + static_cast<std::ptrdiff_t>(end));
            const auto col = x.col(f);
            std::sort(sorted.begin(), sorted.end(),
                      [&](std::uint32_t a, std::uint32_t b) {
                          return col[a] != col[b] ? col[a] < col[b] : a < b;
                      });
            double left_sum = 0.0;
            for (std::size_t i = 1; i < n; ++i) {
                left_sum += y[sorted[i - 1]] - mean;
                if (col[sorted[i - 1]] == col[sorted[i]]) continue;
                if (i < msl || n - i < msl) continue;
                const double gain = detail::split_gain(left_sum, i, n - i);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = f;
                    best_threshold = (col[sorted[i - 1]] + col[sorted[i]]) / 2.0;
                    found = true;
                }
            }
        }

        if (!found) return id;

        gains[feature_names[best_feature]] += best_gain;
        const auto split_col = x.col(best_feature);
        const auto mid = std::stable_partition(
            rows.begin() + static_cast<std::ptrdiff_t>(begin),
            rows.begin() + static_cast<std::ptrdiff_t>(end),
            [&](std::uint32_t r) { return split_col[r] <= best_threshold; });
        const std::size_t split_at =
            static_cast<std::size_t>(mid - rows.begin());

        nodes[static_cast<std::size_t>(id)].feature =
            static_cast<std::int32_t>(best_feature);
        nodes[static_cast<std::size_t>(id)].threshold = best_threshold;
        const std::int32_t left = build(begin, split_at, depth + 1);
        nodes[static_cast<std::size_t>(id)].left = left;
        const std::int32_t right = build(split_at, end, depth + 1);
        nodes[static_cast<std::size_t>(id)].right = right;
        return id;
    }
};

}  // namespace

TrainedModel fit_tree(const linalg::Matrix& x, std::span<const double> y,
                      const std::vector<std::string>& feature_names,
                      const TreeParams& params) {
    if (x.rows() != y.size())
        throw std::invalid_argument("design matrix and target length differ");
    if (x.cols() != feature_names.size())
        throw std::invalid_argument("design matrix width does not match feature names");
    if (params.min_samples_leaf < 1)
        throw std::invalid_argument("min_samples_leaf must be >= 1");
    const std::size_t n = x.rows();
    if (n < 2 * static_cast<std::size_t>(params.min_samples_leaf))
        throw std::invalid_argument("fit_tree needs n >= 2*min_samples_leaf (n=" +
                                    std::to_string(n) + ")");

    Builder b{x, y, params, feature_names, {}, {}, {}, {}, {}};
    b.rows.resize(n);
    std::iota(b.rows.begin(), b.rows.end(), 0u);
    b.build(0, n, 0);

    TreeData d;
    d.nodes = std::move(b.nodes);

    ModelSpec spec;
    spec.kind = ModelKind::tree;
    spec.tree = params;
    return TrainedModel(spec, feature_names, std::move(d), std::move(b.gains), {});
}

}  // namespace etp
