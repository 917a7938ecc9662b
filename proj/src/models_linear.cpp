#include <cmath>
#include <stdexcept>

#include "etp/kernels.hpp"
#include "etp/models.hpp"

namespace etp {

namespace {

void check_shape(const linalg::Matrix& x, std::span<const double> y,
                 const std::vector<std::string>& feature_names) {
    if (x.rows() != y.size())
        throw std::invalid_argument("design matrix and target length differ");
    if (x.cols() != feature_names.size())
        throw std::invalid_argument("design matrix width does not match feature names");
}

double column_mean(std::span<const double> c) {
    return kernels::sum(c) / static_cast<double>(c.size());
}

}  // namespace

TrainedModel fit_linear(const linalg::Matrix& x, std::span<const double> y,
                        const std::vector<std::string>& feature_names) {
    check_shape(x, y, feature_names);
    const std::size_t n = x.rows();
    const std::size_t q = x.cols();
    if (n <= q)
        throw std::invalid_argument("fit_linear needs more samples than features (n=" +
                                    std::to_string(n) + ", q=" + std::to_string(q) + ")");

    linalg::Matrix design(n, q + 1);
    for (std::size_t i = 0; i < n; ++i) design.at(i, 0) = 1.0;
    for (std::size_t j = 0; j < q; ++j) {
        auto dst = design.col(j + 1);
        auto src = x.col(j);
        std::copy(src.begin(), src.end(), dst.begin());
    }

    auto solved = linalg::lstsq(std::move(design), std::vector<double>(y.begin(), y.end()));

    std::vector<std::string> warnings;
    if (solved.rank_deficient)
        warnings.push_back("rank-deficient design (rank " + std::to_string(solved.rank) +
                           " of " + std::to_string(q + 1) +
                           "); returning the minimum-norm solution");

    LinearData d;
    d.intercept = solved.coeffs[0];
    d.coeffs.assign(solved.coeffs.begin() + 1, solved.coeffs.end());

    ModelSpec spec;
    spec.kind = ModelKind::linear;
    return TrainedModel(spec, feature_names, std::move(d), {}, std::move(warnings));
}

TrainedModel fit_ridge(const linalg::Matrix& x, std::span<const double> y,
                       const std::vector<std::string>& feature_names,
                       const RidgeParams& params) {
    check_shape(x, y, feature_names);
    if (params.lambda < 0.0) throw std::invalid_argument("ridge lambda must be >= 0");
    const std::size_t n = x.rows();
    const std::size_t q = x.cols();
    if (n < 2) throw std::invalid_argument("fit_ridge needs at least 2 samples");

    // Center (and optionally scale) features so the intercept is not
    // penalized; coefficients are mapped back to the original scale.
    std::vector<double> mean(q), scale(q, 1.0);
    for (std::size_t j = 0; j < q; ++j) {
        mean[j] = column_mean(x.col(j));
        if (params.standardize) {
            const double var =
                kernels::sum_sq_dev(x.col(j), mean[j]) / static_cast<double>(n);
            scale[j] = var > 0.0 ? std::sqrt(var) : 0.0;
        }
    }
    const double y_mean = column_mean(y);

    linalg::Matrix aug(n + q, q);
    const double sqrt_lambda = std::sqrt(params.lambda);
    for (std::size_t j = 0; j < q; ++j) {
        auto col = aug.col(j);
        auto src = x.col(j);
        const double inv = (params.standardize && scale[j] > 0.0) ? 1.0 / scale[j] : 1.0;
        const bool dead = params.standardize && scale[j] == 0.0;
        for (std::size_t i = 0; i < n; ++i)
            col[i] = dead ? 0.0 : (src[i] - mean[j]) * inv;
        col[n + j] = sqrt_lambda;
    }
    std::vector<double> rhs(n + q, 0.0);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = y[i] - y_mean;

    auto solved = linalg::lstsq(std::move(aug), std::move(rhs));

    LinearData d;
    d.coeffs.assign(q, 0.0);
    for (std::size_t j = 0; j < q; ++j) {
        if (params.standardize)
            d.coeffs[j] = scale[j] > 0.0 ? solved.coeffs[j] / scale[j] : 0.0;
        else
            d.coeffs[j] = solved.coeffs[j];
    }
    double intercept = y_mean;
    for (std::size_t j = 0; j < q; ++j) intercept -= d.coeffs[j] * mean[j];
    d.intercept = intercept;

    ModelSpec spec;
    spec.kind = ModelKind::ridge;
    spec.ridge = params;
    return TrainedModel(spec, feature_names, std::move(d), {}, {});
}

}  // namespace etp
