#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ghom {

using Vector = std::vector<double>;

/// Dense row-major matrix. Used for the small unit-cell systems.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> data() const { return data_; }

    DenseMatrix transpose() const;
    Vector multiply(std::span<const double> x) const;
    DenseMatrix multiply(const DenseMatrix& other) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Square compressed-row matrix. Symmetric matrices keep both triangles.
class SparseMatrix {
public:
    SparseMatrix() = default;

    /// Duplicate (row, col) entries are summed; explicit zeros are kept so
    /// the sparsity pattern follows the assembly graph.
    static SparseMatrix from_triplets(std::size_t dimension, std::span<const Triplet> triplets);
    static SparseMatrix identity(std::size_t n);
    static SparseMatrix zero(std::size_t n);

    std::size_t dimension() const { return row_offsets_.empty() ? 0 : row_offsets_.size() - 1; }
    std::size_t nonzeros() const { return values_.size(); }

    std::span<const std::size_t> row_offsets() const { return row_offsets_; }
    std::span<const std::size_t> column_indices() const { return column_indices_; }
    std::span<const double> values() const { return values_; }

    /// Entry lookup by binary search; zero when structurally absent.
    double at(std::size_t row, std::size_t col) const;
    Vector diagonal() const;
    double sum() const;

    /// alpha*A + beta*B over the union of both patterns.
    static SparseMatrix linear_combination(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b);

    /// Rows and columns restricted to `keep` (in that order).
    SparseMatrix submatrix(std::span<const std::size_t> keep) const;

    /// Adds `value` to the (existing) diagonal entry of `row`.
    void add_to_diagonal(std::size_t row, double value);

    bool is_symmetric(double tol = 0.0) const;

private:
    std::vector<std::size_t> row_offsets_;
    std::vector<std::size_t> column_indices_;
    std::vector<double> values_;
};

/// y = A x, summed in row order.
Vector spmv(const SparseMatrix& a, std::span<const double> x);

struct CgResult {
    Vector solution;
    std::size_t iterations = 0;
    double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients for SPD A.
/// `max_iter == 0` selects 10 * dimension. Throws SolverError on
/// non-convergence or a non-positive diagonal entry.
CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, double tol = 1e-10, std::size_t max_iter = 0,
                  std::optional<std::span<const double>> initial_guess = std::nullopt);

/// Cholesky solve; throws SolverError("matrix not SPD") on a non-positive pivot.
Vector dense_solve_spd(const DenseMatrix& a, std::span<const double> b);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);

/// x^T A x
double quadratic_form(const SparseMatrix& a, std::span<const double> x);

} // namespace ghom
