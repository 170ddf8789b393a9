#include "cgstep/linalg.hpp"

#include <cmath>
#include <numeric>
#include <utility>

namespace cgstep {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double Matrix::inf_norm() const {
    double norm = 0.0;
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += std::abs((*this)(i, j));
        norm = std::max(norm, s);
    }
    return norm;
}

LuFactorization::LuFactorization(Matrix m) : lu_(std::move(m)) {
    if (lu_.rows() != lu_.cols()) throw std::invalid_argument("LU factorization needs a square matrix");
    const int n = lu_.rows();
    const double pivot_floor = 1e-14 * lu_.inf_norm();
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), 0);

    for (int k = 0; k < n; ++k) {
        int pivot_row = k;
        double pivot_mag = std::abs(lu_(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double mag = std::abs(lu_(i, k));
            if (mag > pivot_mag) {
                pivot_mag = mag;
                pivot_row = i;
            }
        }
        if (!(pivot_mag > pivot_floor))
            throw SingularMatrixError("singular matrix: pivot " + std::to_string(pivot_mag) +
                                      " at column " + std::to_string(k) + " below threshold " +
                                      std::to_string(pivot_floor));
        if (pivot_row != k) {
            for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(pivot_row, j));
            std::swap(perm_[k], perm_[pivot_row]);
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = lu_(i, k) / lu_(k, k);
            lu_(i, k) = f;
            for (int j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
        }
    }
}

void LuFactorization::solve_in_place(std::span<double> rhs) const {
    const int n = size();
    if (static_cast<int>(rhs.size()) != n)
        throw std::invalid_argument("right-hand side length does not match the factorization");

    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
        double s = rhs[perm_[i]];
        for (int j = 0; j < i; ++j) s -= lu_(i, j) * y[j];
        y[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = y[i];
        for (int j = i + 1; j < n; ++j) s -= lu_(i, j) * rhs[j];
        rhs[i] = s / lu_(i, i);
    }
}

std::vector<double> LuFactorization::solve(std::vector<double> rhs) const {
    solve_in_place(rhs);
    return rhs;
}

std::vector<double> dense_solve(const Matrix& m, std::vector<double> rhs) {
    return LuFactorization(m).solve(std::move(rhs));
}

}  // namespace cgstep
