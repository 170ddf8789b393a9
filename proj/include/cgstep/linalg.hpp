#ifndef CGSTEP_LINALG_HPP
#define CGSTEP_LINALG_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cgstep {

// Dense row-major matrix sized for the small per-interval systems
// (r*d rarely exceeds 20 rows).
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    // Row i as a contiguous span.
    std::span<double> row(int i) { return {data_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)}; }
    std::span<const double> row(int i) const {
        return {data_.data() + static_cast<size_t>(i) * cols_, static_cast<size_t>(cols_)};
    }

    double inf_norm() const;  // max absolute row sum

    bool operator==(const Matrix&) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// PA = LU with partial pivoting. The factorization object is reusable, so a
// scheme that freezes its operator factors once and back-substitutes on every
// iteration. A pivot below 1e-14 * |M|_inf is treated as singular.
class LuFactorization {
public:
    explicit LuFactorization(Matrix m);

    void solve_in_place(std::span<double> rhs) const;
    std::vector<double> solve(std::vector<double> rhs) const;

    int size() const { return lu_.rows(); }

private:
    Matrix lu_;
    std::vector<int> perm_;
};

// One-shot factor-and-solve.
std::vector<double> dense_solve(const Matrix& m, std::vector<double> rhs);

}  // namespace cgstep

#endif
