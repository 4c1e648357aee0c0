#include "sdfem/sparse.hpp"

#include <umfpack.h>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sdfem/error.hpp"

namespace sdfem {

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
                           std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_ptr_(std::move(row_ptr)),
      col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
    if (static_cast<int>(row_ptr_.size()) != rows_ + 1 || row_ptr_.front() != 0 ||
        row_ptr_.back() != static_cast<int>(col_idx_.size()) || col_idx_.size() != values_.size()) {
        throw std::invalid_argument("SparseMatrix: inconsistent CSR arrays");
    }
    for (int r = 0; r < rows_; ++r) {
        if (row_ptr_[r] > row_ptr_[r + 1]) throw std::invalid_argument("SparseMatrix: row offsets not monotone");
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
            if (col_idx_[k] < 0 || col_idx_[k] >= cols_) {
                throw std::invalid_argument("SparseMatrix: column index out of range");
            }
            if (k > row_ptr_[r] && col_idx_[k] <= col_idx_[k - 1]) {
                throw std::invalid_argument("SparseMatrix: column indices must be sorted and unique");
            }
        }
    }
}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<int> row_ptr(rows + 1, 0);
    std::vector<int> col_idx;
    std::vector<double> values;
    col_idx.reserve(triplets.size());
    values.reserve(triplets.size());
    for (std::size_t k = 0; k < triplets.size(); ++k) {
        const Triplet& t = triplets[k];
        if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
            throw std::out_of_range("SparseMatrix::from_triplets: entry outside matrix");
        }
        if (k > 0 && t.row == triplets[k - 1].row && t.col == triplets[k - 1].col) {
            values.back() += t.value;
            continue;
        }
        col_idx.push_back(t.col);
        values.push_back(t.value);
        ++row_ptr[t.row + 1];
    }
    for (int r = 0; r < rows; ++r) row_ptr[r + 1] += row_ptr[r];
    return SparseMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

double SparseMatrix::coeff(int row, int col) const {
    const auto first = col_idx_.begin() + row_ptr_[row];
    const auto last = col_idx_.begin() + row_ptr_[row + 1];
    const auto it = std::lower_bound(first, last, col);
    return (it != last && *it == col) ? values_[it - col_idx_.begin()] : 0.0;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (int r = 0; r < rows_; ++r) {
        double s = 0.0;
        for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * x[col_idx_[k]];
        y[r] = s;
    }
}

std::vector<double> SparseMatrix::operator*(std::span<const double> x) const {
    std::vector<double> y(rows_);
    multiply(x, y);
    return y;
}

namespace {

// Residual b - A x accumulated in extended precision.
std::vector<double> residual(const SparseMatrix& A, std::span<const double> x, std::span<const double> b) {
    std::vector<double> r(A.rows());
    const auto& rp = A.row_ptr();
    const auto& ci = A.col_idx();
    const auto& v = A.values();
    for (int i = 0; i < A.rows(); ++i) {
        long double s = b[i];
        for (int k = rp[i]; k < rp[i + 1]; ++k) s -= static_cast<long double>(v[k]) * x[ci[k]];
        r[i] = static_cast<double>(s);
    }
    return r;
}

double norm2(std::span<const double> v) {
    long double s = 0.0;
    for (double e : v) s += static_cast<long double>(e) * e;
    return static_cast<double>(std::sqrt(s));
}

struct SymbolicDeleter {
    void operator()(void* p) const { umfpack_di_free_symbolic(&p); }
};
struct NumericDeleter {
    void operator()(void* p) const { umfpack_di_free_numeric(&p); }
};

}  // namespace

double relative_residual(const SparseMatrix& A, std::span<const double> x, std::span<const double> b) {
    const double nb = norm2(b);
    const double nr = norm2(residual(A, x, b));
    return nb > 0.0 ? nr / nb : nr;
}

std::vector<double> solve(const SparseMatrix& A, std::span<const double> rhs, const SolveOptions& opts) {
    if (A.rows() != A.cols()) throw std::invalid_argument("solve: matrix must be square");
    if (static_cast<int>(rhs.size()) != A.rows()) throw std::invalid_argument("solve: rhs length mismatch");
    const int n = A.rows();
    if (n == 0) return {};

    double control[UMFPACK_CONTROL];
    double info[UMFPACK_INFO];
    umfpack_di_defaults(control);

    // The CSR arrays of A are the CSC arrays of A^T; solve with the transposed system.
    const int* Ap = A.row_ptr().data();
    const int* Ai = A.col_idx().data();
    const double* Ax = A.values().data();

    void* raw = nullptr;
    int status = umfpack_di_symbolic(n, n, Ap, Ai, Ax, &raw, control, info);
    std::unique_ptr<void, SymbolicDeleter> symbolic(raw);
    if (status != UMFPACK_OK) {
        throw SolverError("solve: symbolic factorization failed (UMFPACK status " + std::to_string(status) + ")",
                          std::nan(""));
    }
    raw = nullptr;
    status = umfpack_di_numeric(Ap, Ai, Ax, symbolic.get(), &raw, control, info);
    std::unique_ptr<void, NumericDeleter> numeric(raw);
    if (status == UMFPACK_WARNING_singular_matrix) {
        throw SolverError("solve: matrix is singular", std::numeric_limits<double>::infinity());
    }
    if (status != UMFPACK_OK) {
        throw SolverError("solve: numeric factorization failed (UMFPACK status " + std::to_string(status) + ")",
                          std::nan(""));
    }

    auto lu_solve = [&](std::span<const double> b, std::span<double> x) {
        const int s = umfpack_di_solve(UMFPACK_At, Ap, Ai, Ax, x.data(), b.data(), numeric.get(), control, info);
        if (s != UMFPACK_OK) {
            throw SolverError("solve: triangular solve failed (UMFPACK status " + std::to_string(s) + ")",
                              std::nan(""));
        }
    };

    std::vector<double> x(n);
    lu_solve(rhs, x);
    double res = relative_residual(A, x, rhs);
    std::vector<double> dx(n);
    for (int step = 0; step < opts.max_refinement_steps && !(res <= opts.residual_tolerance); ++step) {
        const std::vector<double> r = residual(A, x, rhs);
        lu_solve(r, dx);
        for (int i = 0; i < n; ++i) x[i] += dx[i];
        res = relative_residual(A, x, rhs);
    }
    if (!(res <= opts.residual_tolerance)) {
        std::ostringstream msg;
        msg << "solve: relative residual " << res << " exceeds tolerance " << opts.residual_tolerance
            << " (matrix singular or badly conditioned)";
        throw SolverError(msg.str(), res);
    }
    return x;
}

void write_coordinate(std::ostream& os, const SparseMatrix& A) {
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << A.rows() << " " << A.cols() << " " << A.nnz() << "\n" << std::setprecision(17);
    for (int r = 0; r < A.rows(); ++r) {
        for (int k = A.row_ptr()[r]; k < A.row_ptr()[r + 1]; ++k) {
            os << r << " " << A.col_idx()[k] << " " << A.values()[k] << "\n";
        }
    }
    os.flags(flags);
    os.precision(prec);
}

}  // namespace sdfem
