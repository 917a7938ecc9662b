#include "etp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "etp/kernels.hpp"

namespace etp::linalg {

void Matrix::copy_row(std::size_t r, std::span<double> out) const {
    for (std::size_t c = 0; c < cols_; ++c) out[c] = at(r, c);
}

namespace {

// Jacobi SVD of a small dense matrix (m x n, m >= n), one-sided rotations.
// Returns U (m x n, orthonormal columns), singular values and V (n x n).
void jacobi_svd(Matrix a, Matrix& u, std::vector<double>& sigma, Matrix& v) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    v = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) v.at(i, i) = 1.0;

    const double eps = 1e-15;
    for (int sweep = 0; sweep < 60; ++sweep) {
        bool converged = true;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double app = kernels::dot(a.col(p), a.col(p));
                const double aqq = kernels::dot(a.col(q), a.col(q));
                const double apq = kernels::dot(a.col(p), a.col(q));
                if (std::abs(apq) <= eps * std::sqrt(app * aqq)) continue;
                converged = false;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double aip = a.at(i, p);
                    const double aiq = a.at(i, q);
                    a.at(i, p) = c * aip - s * aiq;
                    a.at(i, q) = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v.at(i, p);
                    const double viq = v.at(i, q);
                    v.at(i, p) = c * vip - s * viq;
                    v.at(i, q) = s * vip + c * viq;
                }
            }
        }
        if (converged) break;
    }

    sigma.assign(n, 0.0);
    u = Matrix(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double norm = std::sqrt(kernels::dot(a.col(j), a.col(j)));
        sigma[j] = norm;
        if (norm > 0.0) {
            for (std::size_t i = 0; i < m; ++i) u.at(i, j) = a.at(i, j) / norm;
        }
    }
}

}  // namespace

LstsqResult lstsq(Matrix a, std::vector<double> b) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (b.size() != m)
        throw std::invalid_argument("lstsq: rhs length does not match matrix rows");
    if (m < n)
        throw std::invalid_argument("lstsq: need at least as many rows as columns");

    // Householder QR, reflectors applied in place to A and b.
    std::vector<double> householder(m);
    for (std::size_t k = 0; k < n; ++k) {
        auto col = a.col(k);
        double norm = std::sqrt(kernels::dot(col.subspan(k), col.subspan(k)));
        if (norm == 0.0) continue;
        if (col[k] > 0) norm = -norm;
        for (std::size_t i = k; i < m; ++i) householder[i] = col[i];
        householder[k] -= norm;
        const double hnorm2 =
            kernels::dot(std::span<const double>(householder).subspan(k),
                         std::span<const double>(householder).subspan(k));
        if (hnorm2 == 0.0) continue;
        const std::span<const double> h =
            std::span<const double>(householder).subspan(k);
        for (std::size_t j = k; j < n; ++j) {
            auto cj = a.col(j);
            const double proj = kernels::dot(h, cj.subspan(k));
            kernels::axpy(-2.0 * proj / hnorm2, h, cj.subspan(k));
        }
        {
            std::span<double> bs(b);
            const double proj = kernels::dot(h, std::span<const double>(b).subspan(k));
            kernels::axpy(-2.0 * proj / hnorm2, h, bs.subspan(k));
        }
    }

    // Rank from the diagonal of R.
    double max_diag = 0.0;
    for (std::size_t k = 0; k < n; ++k) max_diag = std::max(max_diag, std::abs(a.at(k, k)));
    const double tol = max_diag * static_cast<double>(m) * 1e-14;
    std::size_t rank = 0;
    for (std::size_t k = 0; k < n; ++k)
        if (std::abs(a.at(k, k)) > tol) ++rank;

    LstsqResult result;
    result.rank = rank;
    result.rank_deficient = rank < n;
    result.coeffs.assign(n, 0.0);

    if (!result.rank_deficient) {
        for (std::size_t k = n; k-- > 0;) {
            double v = b[k];
            for (std::size_t j = k + 1; j < n; ++j) v -= a.at(k, j) * result.coeffs[j];
            result.coeffs[k] = v / a.at(k, k);
        }
        return result;
    }

    // Minimum-norm solution from the SVD of the n x n triangular factor.
    Matrix r(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i <= j; ++i) r.at(i, j) = a.at(i, j);
    Matrix u, v;
    std::vector<double> sigma;
    jacobi_svd(std::move(r), u, sigma, v);
    const double smax = *std::max_element(sigma.begin(), sigma.end());
    const double stol = smax * static_cast<double>(n) * 1e-14;
    for (std::size_t j = 0; j < n; ++j) {
        if (sigma[j] <= stol) continue;
        double utb = 0.0;
        for (std::size_t i = 0; i < n; ++i) utb += u.at(i, j) * b[i];
        const double scale = utb / sigma[j];
        for (std::size_t i = 0; i < n; ++i) result.coeffs[i] += scale * v.at(i, j);
    }
    return result;
}

}  // namespace etp::linalg
