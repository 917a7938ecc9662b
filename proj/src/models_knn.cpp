#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "etp/kernels.hpp"
#include "etp/models.hpp"
#include "models_detail.hpp"

namespace etp {

namespace detail {

double predict_knn(const KnnData& d, std::span<const double> row) {
    std::vector<double> query(d.q);
    for (std::size_t j = 0; j < d.q; ++j)
        query[j] = (row[j] - d.mean[j]) * d.inv_scale[j];

    std::vector<std::pair<double, std::size_t>> dist(d.n);
    const std::span<const double> train(d.train_std);
    for (std::size_t i = 0; i < d.n; ++i)
        dist[i] = {kernels::sum_sq_diff(query, train.subspan(i * d.q, d.q)), i};

    const auto k = static_cast<std::size_t>(d.k);
    // Distance ties resolve to the lower training-row index.
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k),
                      dist.end());
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += d.train_y[dist[i].second];
    return acc / static_cast<double>(k);
}

}  // namespace detail

TrainedModel fit_knn(const linalg::Matrix& x, std::span<const double> y,
                     const std::vector<std::string>& feature_names,
                     const KnnParams& params) {
    if (x.rows() != y.size())
        throw std::invalid_argument("design matrix and target length differ");
    if (x.cols() != feature_names.size())
        throw std::invalid_argument("design matrix width does not match feature names");
    const std::size_t n = x.rows();
    const std::size_t q = x.cols();
    if (params.k < 1) throw std::invalid_argument("knn k must be >= 1");
    if (static_cast<std::size_t>(params.k) > n)
        throw std::invalid_argument("knn k=" + std::to_string(params.k) +
                                    " exceeds training size n=" + std::to_string(n));

    KnnData d;
    d.k = params.k;
    d.n = n;
    d.q = q;
    d.mean.assign(q, 0.0);
    d.inv_scale.assign(q, 0.0);
    for (std::size_t j = 0; j < q; ++j) {
        d.mean[j] = kernels::sum(x.col(j)) / static_cast<double>(n);
        const double var =
            kernels::sum_sq_dev(x.col(j), d.mean[j]) / static_cast<double>(n);
        // Zero-variance features contribute zero distance.
        d.inv_scale[j] = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;
    }
    d.train_std.assign(n * q, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < q; ++j)
            d.train_std[i * q + j] = (x.at(i, j) - d.mean[j]) * d.inv_scale[j];
    d.train_y.assign(y.begin(), y.end());

    ModelSpec spec;
    spec.kind = ModelKind::knn;
    spec.knn = params;
    return TrainedModel(spec, feature_names, std::move(d), {}, {});
}

}  // namespace etp
