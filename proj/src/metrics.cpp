#include "etp/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "etp/kernels.hpp"

namespace etp::metrics {

namespace {

void check_lengths(std::span<const double> a, std::span<const double> b,
                   std::size_t min_len) {
    if (a.size() != b.size())
        throw std::invalid_argument("metric input lengths differ: " +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()));
    if (a.size() < min_len)
        throw std::invalid_argument("metric needs at least " + std::to_string(min_len) +
                                    " samples, got " + std::to_string(a.size()));
}

double mean_of(std::span<const double> v) {
    return kernels::sum(v) / static_cast<double>(v.size());
}

}  // namespace

double r2(std::span<const double> y_true, std::span<const double> y_pred) {
    check_lengths(y_true, y_pred, 2);
    const double mean = mean_of(y_true);
    const double ss_tot = kernels::sum_sq_dev(y_true, mean);
    if (ss_tot == 0.0)
        throw std::invalid_argument("r2 undefined for constant y_true");
    const double ss_res = kernels::sum_sq_diff(y_true, y_pred);
    return 1.0 - ss_res / ss_tot;
}

double adjusted_r2(double r2, std::size_t p, std::size_t q) {
    if (p <= q + 1)
        throw std::invalid_argument("adjusted_r2 requires p > q + 1 (p=" +
                                    std::to_string(p) + ", q=" + std::to_string(q) + ")");
    return 1.0 - ((1.0 - r2) * static_cast<double>(p - 1)) /
                     static_cast<double>(p - q - 1);
}

double rmse(std::span<const double> y_true, std::span<const double> y_pred) {
    check_lengths(y_true, y_pred, 1);
    return std::sqrt(kernels::sum_sq_diff(y_true, y_pred) /
                     static_cast<double>(y_true.size()));
}

SlopeFit best_fit_slope(std::span<const double> y_true, std::span<const double> y_pred) {
    check_lengths(y_true, y_pred, 2);
    const double mx = mean_of(y_true);
    const double my = mean_of(y_pred);
    const double sxx = kernels::sum_sq_dev(y_true, mx);
    if (sxx == 0.0)
        throw std::invalid_argument("best_fit_slope undefined for constant y_true");
    const double sxy = kernels::centered_dot(y_true, mx, y_pred, my);
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

bool check_slope_constraint(double slope) { return slope > 1.0 + 1e-9; }

MetricReport evaluate(std::span<const double> y_true, std::span<const double> y_pred,
                      std::size_t n_features) {
    MetricReport rep;
    rep.n_samples = y_true.size();
    rep.n_features = n_features;
    rep.r2 = r2(y_true, y_pred);
    rep.adj_r2 = (rep.n_samples > n_features + 1)
                     ? adjusted_r2(rep.r2, rep.n_samples, n_features)
                     : std::numeric_limits<double>::quiet_NaN();
    rep.rmse = rmse(y_true, y_pred);
    const SlopeFit fit = best_fit_slope(y_true, y_pred);
    rep.slope = fit.slope;
    rep.intercept = fit.intercept;
    rep.slope_violation = check_slope_constraint(fit.slope);
    return rep;
}

}  // namespace etp::metrics
