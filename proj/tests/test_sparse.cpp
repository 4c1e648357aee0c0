#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <sstream>

#include "sdfem/assembly.hpp"
#include "sdfem/error.hpp"
#include "sdfem/sparse.hpp"

using namespace sdfem;

namespace {

// Random sparse, strictly diagonally dominant matrix with its dense copy.
std::pair<SparseMatrix, Eigen::MatrixXd> random_system(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1, 1);
    std::uniform_int_distribution<int> col(0, n - 1);
    std::vector<Triplet> t;
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (int r = 0; r < n; ++r) {
        for (int k = 0; k < 4; ++k) {
            const int c = col(rng);
            const double v = U(rng);
            t.push_back({r, c, v});
            D(r, c) += v;
        }
        t.push_back({r, r, 6.0});
        D(r, r) += 6.0;
    }
    return {SparseMatrix::from_triplets(n, n, t), D};
}

}  // namespace

TEST(SparseMatrix, TripletsAreSortedAndSummed) {
    const auto A = SparseMatrix::from_triplets(3, 3, {{2, 1, 1.0}, {0, 2, 2.0}, {0, 0, 1.0}, {2, 1, 0.5}});
    EXPECT_EQ(A.nnz(), 3);
    EXPECT_DOUBLE_EQ(A.coeff(2, 1), 1.5);
    EXPECT_DOUBLE_EQ(A.coeff(1, 1), 0.0);
    EXPECT_EQ(A.row_ptr(), (std::vector<int>{0, 2, 2, 3}));
    EXPECT_EQ(A.col_idx(), (std::vector<int>{0, 2, 1}));
    EXPECT_THROW(SparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), std::out_of_range);
}

TEST(SparseMatrix, RejectsMalformedCsr) {
    EXPECT_THROW(SparseMatrix(2, 2, {0, 2, 1}, {0, 1}, {1, 1}), std::invalid_argument);
    EXPECT_THROW(SparseMatrix(1, 2, {0, 2}, {1, 0}, {1, 1}), std::invalid_argument);
    EXPECT_THROW(SparseMatrix(1, 2, {0, 1}, {3}, {1}), std::invalid_argument);
}

TEST(SparseMatrix, MatvecAgreesWithDense) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int trial = 0; trial < 5; ++trial) {
        auto [A, D] = random_system(50, rng);
        Eigen::VectorXd x(50);
        for (auto& v : x) v = U(rng);
        const std::vector<double> xs(x.data(), x.data() + 50);
        const std::vector<double> y = A * std::span<const double>(xs);
        const Eigen::VectorXd yd = D * x;
        for (int r = 0; r < 50; ++r) EXPECT_NEAR(y[r], yd(r), 1e-13);
    }
}

TEST(SparseSolve, Identity) {
    std::vector<Triplet> t;
    for (int i = 0; i < 5; ++i) t.push_back({i, i, 1.0});
    const auto I = SparseMatrix::from_triplets(5, 5, t);
    const std::vector<double> b{1, -2, 3, 0.5, 7};
    const auto x = solve(I, b);
    for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(x[i], b[i]);
}

TEST(SparseSolve, UpperTriangular) {
    const auto A = SparseMatrix::from_triplets(2, 2, {{0, 0, 2}, {0, 1, 1}, {1, 1, 1}});
    const auto x = solve(A, std::vector<double>{3, 1});
    EXPECT_NEAR(x[0], 1.0, 1e-15);
    EXPECT_NEAR(x[1], 1.0, 1e-15);
}

TEST(SparseSolve, RecoversRandomSolutions) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int trial = 0; trial < 5; ++trial) {
        auto [A, D] = random_system(200, rng);
        std::vector<double> x(200);
        for (auto& v : x) v = U(rng);
        const auto b = A * std::span<const double>(x);
        const auto y = solve(A, b);
        double num = 0, den = 0;
        for (int i = 0; i < 200; ++i) {
            num += (y[i] - x[i]) * (y[i] - x[i]);
            den += x[i] * x[i];
        }
        EXPECT_LE(std::sqrt(num / den), 1e-10);
    }
}

TEST(SparseSolve, SingularThrows) {
    const auto A = SparseMatrix::from_triplets(2, 2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}});
    EXPECT_THROW(solve(A, std::vector<double>{1, 2}), SolverError);
    EXPECT_THROW(solve(A, std::vector<double>{1}), std::invalid_argument);
}

TEST(SparseSolve, AssembledSystemMeetsResidualContract) {
    const ProblemData prob = model_problem(1e-6);
    for (MeshKind k : {MeshKind::Shishkin, MeshKind::BakhvalovShishkin}) {
        const auto mesh = build_stype_mesh(8, 5.0, 1e-6, 1.0, k);
        const auto V = build_space(mesh, 3);
        const auto sys = assemble_sdfem(V, prob, stabilization_parameters(*mesh, 1e-6, 1.0));
        const auto x = solve(sys.matrix, sys.rhs);
        EXPECT_LE(relative_residual(sys.matrix, x, sys.rhs), 1e-12);
    }
}

TEST(SparseMatrix, CoordinateDump) {
    const auto A = SparseMatrix::from_triplets(2, 3, {{0, 2, 1.5}, {1, 0, -2}});
    std::ostringstream os;
    write_coordinate(os, A);
    std::istringstream is(os.str());
    int r, c, n;
    is >> r >> c >> n;
    EXPECT_EQ(r, 2);
    EXPECT_EQ(c, 3);
    EXPECT_EQ(n, 2);
    int i, j;
    double v;
    is >> i >> j >> v;
    EXPECT_EQ(i, 0);
    EXPECT_EQ(j, 2);
    EXPECT_DOUBLE_EQ(v, 1.5);
}
