#pragma once

// Small dense linear algebra for the regression models: a column-major
// matrix and a numerically stable least-squares solve (Householder QR with a
// Jacobi-SVD minimum-norm fallback for rank-deficient systems).

#include <cstddef>
#include <span>
#include <vector>

namespace etp::linalg {

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& at(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    double at(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

    std::span<double> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
    std::span<const double> col(std::size_t c) const {
        return {data_.data() + c * rows_, rows_};
    }

    /// Row copied into a scratch buffer (the layout is column-major).
    void copy_row(std::size_t r, std::span<double> out) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct LstsqResult {
    std::vector<double> coeffs;
    std::size_t rank = 0;
    bool rank_deficient = false;
};

/// Minimizes ||A x - b||_2. Full-rank systems are solved by Householder QR;
/// rank-deficient ones fall back to an SVD of the triangular factor and
/// return the minimum-norm solution.
LstsqResult lstsq(Matrix a, std::vector<double> b);

}  // namespace etp::linalg
