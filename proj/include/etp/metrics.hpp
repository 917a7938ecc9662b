#pragma once

// Evaluation metrics: coefficient of determination, its feature-count
// adjusted form, root mean squared error, and the best-fit slope between
// ground truth and predictions together with the slope <= 1 biophysical
// check.

#include <cstddef>
#include <span>

namespace etp::metrics {

/// 1 - SSres/SStot with SStot about mean(y_true). May be negative. Requires
/// length >= 2 and non-constant y_true.
double r2(std::span<const double> y_true, std::span<const double> y_pred);

/// 1 - ((1 - r2)(p - 1)) / (p - q - 1); requires p > q + 1.
double adjusted_r2(double r2, std::size_t p, std::size_t q);

double rmse(std::span<const double> y_true, std::span<const double> y_pred);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// OLS fit of y_pred = m * y_true + b (predictions regressed on ground
/// truth). Requires length >= 2 and non-constant y_true.
SlopeFit best_fit_slope(std::span<const double> y_true, std::span<const double> y_pred);

/// True iff the slope exceeds 1 beyond a 1e-9 floating-point guard.
bool check_slope_constraint(double slope);

struct MetricReport {
    double r2 = 0.0;
    double adj_r2 = 0.0;  // NaN when p <= q + 1
    double rmse = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t n_samples = 0;
    std::size_t n_features = 0;
    bool slope_violation = false;
};

/// Computes all metrics in one pass; adj_r2 is NaN when the sample count
/// does not support the adjustment.
MetricReport evaluate(std::span<const double> y_true, std::span<const double> y_pred,
                      std::size_t n_features);

}  // namespace etp::metrics
