#pragma once

#include <iosfwd>
#include <span>
#include <vector>

namespace sdfem {

struct Triplet {
    int row;
    int col;
    double value;
};

/// Compressed sparse row matrix. Column indices are sorted and unique within a row.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
                 std::vector<double> values);

    /// Duplicates are summed.
    static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int nnz() const { return static_cast<int>(values_.size()); }

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    /// Stored entry (0 when absent).
    double coeff(int row, int col) const;

    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> operator*(std::span<const double> x) const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> col_idx_;
    std::vector<double> values_;
};

/// ||A x - b||_2 / ||b||_2 (absolute residual when b = 0).
double relative_residual(const SparseMatrix& A, std::span<const double> x, std::span<const double> b);

struct SolveOptions {
    double residual_tolerance = 1e-12;
    int max_refinement_steps = 4;
};

/// Sparse LU with partial pivoting followed by iterative refinement.
/// Throws SolverError (carrying the achieved residual) on singular matrices
/// or when the residual contract is missed.
std::vector<double> solve(const SparseMatrix& A, std::span<const double> rhs, const SolveOptions& opts = {});

/// Coordinate text dump: "rows cols nnz" then one "row col value" line per entry (0-based).
void write_coordinate(std::ostream& os, const SparseMatrix& A);

}  // namespace sdfem
