#include "ghom/linalg.hpp"

#include "ghom/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

namespace ghom {

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Vector DenseMatrix::multiply(std::span<const double> x) const {
    if (x.size() != cols_) throw Error("DenseMatrix::multiply: dimension mismatch");
    Vector y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

DenseMatrix DenseMatrix::multiply(const DenseMatrix& other) const {
    if (other.rows_ != cols_) throw Error("DenseMatrix::multiply: dimension mismatch");
    DenseMatrix c(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < other.cols_; ++j) c(i, j) += aik * other(k, j);
        }
    return c;
}

SparseMatrix SparseMatrix::from_triplets(std::size_t dimension, std::span<const Triplet> triplets) {
    std::vector<std::size_t> counts(dimension + 1, 0);
    for (const auto& t : triplets) {
        if (t.row >= dimension || t.col >= dimension) throw Error("SparseMatrix: triplet index out of range");
        ++counts[t.row + 1];
    }
    std::partial_sum(counts.begin(), counts.end(), counts.begin());

    // bucket by row, then sort and merge columns within each row
    std::vector<std::pair<std::size_t, double>> entries(triplets.size());
    std::vector<std::size_t> cursor(counts.begin(), counts.end() - 1);
    for (const auto& t : triplets) entries[cursor[t.row]++] = {t.col, t.value};

    SparseMatrix m;
    m.row_offsets_.assign(dimension + 1, 0);
    m.column_indices_.reserve(triplets.size());
    m.values_.reserve(triplets.size());
    for (std::size_t r = 0; r < dimension; ++r) {
        auto first = entries.begin() + static_cast<std::ptrdiff_t>(counts[r]);
        auto last = entries.begin() + static_cast<std::ptrdiff_t>(counts[r + 1]);
        std::sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
        for (auto it = first; it != last; ++it) {
            if (!m.column_indices_.empty() && m.column_indices_.size() > m.row_offsets_[r] &&
                m.column_indices_.back() == it->first) {
                m.values_.back() += it->second;
            } else {
                m.column_indices_.push_back(it->first);
                m.values_.push_back(it->second);
            }
        }
        m.row_offsets_[r + 1] = m.values_.size();
    }
    return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
    std::vector<Triplet> t;
    t.reserve(n);
    for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
    return from_triplets(n, t);
}

SparseMatrix SparseMatrix::zero(std::size_t n) {
    SparseMatrix m;
    m.row_offsets_.assign(n + 1, 0);
    return m;
}

double SparseMatrix::at(std::size_t row, std::size_t col) const {
    const auto first = column_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row]);
    const auto last = column_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row + 1]);
    const auto it = std::lower_bound(first, last, col);
    if (it == last || *it != col) return 0.0;
    return values_[static_cast<std::size_t>(it - column_indices_.begin())];
}

Vector SparseMatrix::diagonal() const {
    Vector d(dimension(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
    return d;
}

double SparseMatrix::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

SparseMatrix SparseMatrix::linear_combination(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b) {
    if (a.dimension() != b.dimension()) throw Error("SparseMatrix::linear_combination: dimension mismatch");
    const std::size_t n = a.dimension();
    SparseMatrix c;
    c.row_offsets_.assign(n + 1, 0);
    c.column_indices_.reserve(std::max(a.nonzeros(), b.nonzeros()));
    c.values_.reserve(std::max(a.nonzeros(), b.nonzeros()));
    for (std::size_t r = 0; r < n; ++r) {
        std::size_t ia = a.row_offsets_[r], ea = a.row_offsets_[r + 1];
        std::size_t ib = b.row_offsets_[r], eb = b.row_offsets_[r + 1];
        while (ia < ea || ib < eb) {
            const std::size_t ca = ia < ea ? a.column_indices_[ia] : SIZE_MAX;
            const std::size_t cb = ib < eb ? b.column_indices_[ib] : SIZE_MAX;
            if (ca == cb) {
                c.column_indices_.push_back(ca);
                c.values_.push_back(alpha * a.values_[ia++] + beta * b.values_[ib++]);
            } else if (ca < cb) {
                c.column_indices_.push_back(ca);
                c.values_.push_back(alpha * a.values_[ia++]);
            } else {
                c.column_indices_.push_back(cb);
                c.values_.push_back(beta * b.values_[ib++]);
            }
        }
        c.row_offsets_[r + 1] = c.values_.size();
    }
    return c;
}

SparseMatrix SparseMatrix::submatrix(std::span<const std::size_t> keep) const {
    std::vector<std::size_t> new_index(dimension(), SIZE_MAX);
    for (std::size_t k = 0; k < keep.size(); ++k) new_index[keep[k]] = k;
    SparseMatrix s;
    s.row_offsets_.assign(keep.size() + 1, 0);
    for (std::size_t k = 0; k < keep.size(); ++k) {
        const std::size_t r = keep[k];
        // keep is not required to be sorted, so collect and sort the row
        std::vector<std::pair<std::size_t, double>> row;
        for (std::size_t p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p) {
            const std::size_t c = new_index[column_indices_[p]];
            if (c != SIZE_MAX) row.emplace_back(c, values_[p]);
        }
        std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        for (const auto& [c, v] : row) {
            s.column_indices_.push_back(c);
            s.values_.push_back(v);
        }
        s.row_offsets_[k + 1] = s.values_.size();
    }
    return s;
}

void SparseMatrix::add_to_diagonal(std::size_t row, double value) {
    const auto first = column_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row]);
    const auto last = column_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row + 1]);
    const auto it = std::lower_bound(first, last, row);
    if (it == last || *it != row) throw Error("SparseMatrix::add_to_diagonal: no diagonal entry in row " + std::to_string(row));
    values_[static_cast<std::size_t>(it - column_indices_.begin())] += value;
}

bool SparseMatrix::is_symmetric(double tol) const {
    const std::size_t n = dimension();
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p)
            if (std::abs(values_[p] - at(column_indices_[p], r)) > tol) return false;
    return true;
}

Vector spmv(const SparseMatrix& a, std::span<const double> x) {
    const std::size_t n = a.dimension();
    if (x.size() != n)
        throw Error("spmv: dimension mismatch (" + std::to_string(n) + " vs " + std::to_string(x.size()) + ")");
    const auto offsets = a.row_offsets();
    const auto cols = a.column_indices();
    const auto vals = a.values();
    Vector y(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        double s = 0.0;
        for (std::size_t p = offsets[r]; p < offsets[r + 1]; ++p) s += vals[p] * x[cols[p]];
        y[r] = s;
    }
    return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

double quadratic_form(const SparseMatrix& a, std::span<const double> x) { return dot(x, spmv(a, x)); }

CgResult cg_solve(const SparseMatrix& a, std::span<const double> b, double tol, std::size_t max_iter,
                  std::optional<std::span<const double>> initial_guess) {
    const std::size_t n = a.dimension();
    if (b.size() != n) throw Error("cg_solve: dimension mismatch");
    if (!(tol > 0.0)) throw Error("cg_solve: tolerance must be positive");
    if (max_iter == 0) max_iter = 10 * std::max<std::size_t>(n, 1);

    Vector inv_diag = a.diagonal();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(inv_diag[i] > 0.0))
            throw SolverError("cg_solve: non-positive diagonal entry at row " + std::to_string(i));
        inv_diag[i] = 1.0 / inv_diag[i];
    }

    CgResult result;
    const double b_norm = norm2(b);
    if (b_norm == 0.0) {
        result.solution.assign(n, 0.0);
        return result;
    }

    Vector& x = result.solution;
    Vector r(b.begin(), b.end());
    if (initial_guess) {
        if (initial_guess->size() != n) throw Error("cg_solve: initial guess has wrong length");
        x.assign(initial_guess->begin(), initial_guess->end());
        const Vector ax = spmv(a, x);
        for (std::size_t i = 0; i < n; ++i) r[i] -= ax[i];
    } else {
        x.assign(n, 0.0);
    }

    double residual = norm2(r) / b_norm;
    if (residual <= tol) {
        result.relative_residual = residual;
        return result;
    }

    Vector z(n), p(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot(r, z);

    for (std::size_t it = 1; it <= max_iter; ++it) {
        const Vector ap = spmv(a, p);
        const double pap = dot(p, ap);
        if (!(pap > 0.0))
            throw SolverError("cg_solve: matrix is not positive definite (p^T A p = " + std::to_string(pap) + ")",
                              residual);
        const double alpha = rz / pap;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        residual = norm2(r) / b_norm;
        if (residual <= tol) {
            result.iterations = it;
            result.relative_residual = residual;
            return result;
        }
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw SolverError("cg_solve: no convergence after " + std::to_string(max_iter) +
                          " iterations (relative residual " + std::to_string(residual) + ")",
                      residual);
}

Vector dense_solve_spd(const DenseMatrix& a, std::span<const double> b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw Error("dense_solve_spd: dimension mismatch");

    // lower Cholesky factor in place
    DenseMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) throw SolverError("matrix not SPD");
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / ljj;
        }
    }

    Vector y(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) y[i] -= l(i, k) * y[k];
        y[i] /= l(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t k = i + 1; k < n; ++k) y[i] -= l(k, i) * y[k];
        y[i] /= l(i, i);
    }
    return y;
}

} // namespace ghom
