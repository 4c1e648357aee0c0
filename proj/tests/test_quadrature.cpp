#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sdfem/quadrature.hpp"

using namespace sdfem;

namespace {

double monomial_integral(int d) { return d % 2 == 0 ? 2.0 / (d + 1) : 0.0; }

double apply_rule(const NodeSet1D& r, int d) {
    double s = 0.0;
    for (int q = 0; q < r.size(); ++q) s += r.weights[q] * std::pow(r.nodes[q], d);
    return s;
}

}  // namespace

TEST(Legendre, ClosedForms) {
    auto l0 = legendre_eval(0, 0.3);
    EXPECT_DOUBLE_EQ(l0.value, 1.0);
    EXPECT_DOUBLE_EQ(l0.derivative, 0.0);

    auto l3 = legendre_eval(3, 1.0);
    EXPECT_NEAR(l3.value, 1.0, 1e-15);
    EXPECT_NEAR(l3.derivative, 6.0, 1e-14);

    auto l2 = legendre_eval(2, 0.0);
    EXPECT_NEAR(l2.value, -0.5, 1e-15);
    EXPECT_NEAR(l2.derivative, 0.0, 1e-15);
}

TEST(Legendre, MatchesExplicitPolynomials) {
    for (double t : {-0.9, -0.31, 0.0, 0.44, 0.97}) {
        EXPECT_NEAR(legendre_eval(3, t).value, 0.5 * (5 * t * t * t - 3 * t), 1e-14);
        EXPECT_NEAR(legendre_eval(3, t).derivative, 0.5 * (15 * t * t - 3), 1e-13);
        EXPECT_NEAR(legendre_eval(4, t).value, (35 * std::pow(t, 4) - 30 * t * t + 3) / 8, 1e-14);
    }
}

TEST(GaussLobatto, SmallDegrees) {
    auto p1 = gauss_lobatto_nodes(1);
    ASSERT_EQ(p1.size(), 2);
    EXPECT_DOUBLE_EQ(p1.nodes[0], -1.0);
    EXPECT_DOUBLE_EQ(p1.nodes[1], 1.0);
    EXPECT_NEAR(p1.weights[0], 1.0, 1e-15);
    EXPECT_NEAR(p1.weights[1], 1.0, 1e-15);

    auto p2 = gauss_lobatto_nodes(2);
    ASSERT_EQ(p2.size(), 3);
    EXPECT_NEAR(p2.nodes[1], 0.0, 1e-15);
    EXPECT_NEAR(p2.weights[0], 1.0 / 3, 1e-15);
    EXPECT_NEAR(p2.weights[1], 4.0 / 3, 1e-15);
    EXPECT_NEAR(p2.weights[2], 1.0 / 3, 1e-15);

    auto p3 = gauss_lobatto_nodes(3);
    ASSERT_EQ(p3.size(), 4);
    const double r = 1.0 / std::sqrt(5.0);
    EXPECT_NEAR(p3.nodes[1], -r, 1e-15);
    EXPECT_NEAR(p3.nodes[2], r, 1e-15);
    EXPECT_NEAR(p3.weights[0], 1.0 / 6, 1e-15);
    EXPECT_NEAR(p3.weights[1], 5.0 / 6, 1e-15);
}

TEST(GaussLobatto, ExactnessUpTo2pMinus1) {
    for (int p = 1; p <= 6; ++p) {
        const auto r = gauss_lobatto_nodes(p);
        EXPECT_EQ(r.degree, p);
        for (int d = 0; d <= 2 * p - 1; ++d) EXPECT_NEAR(apply_rule(r, d), monomial_integral(d), 1e-13) << p << " " << d;
        // degree 2p is not integrated exactly
        EXPECT_GT(std::abs(apply_rule(r, 2 * p) - monomial_integral(2 * p)), 1e-6) << p;
    }
}

TEST(GaussLobatto, NodesAreSortedAndSymmetric) {
    for (int p = 1; p <= 10; ++p) {
        const auto r = gauss_lobatto_nodes(p);
        for (int i = 0; i + 1 < r.size(); ++i) EXPECT_LT(r.nodes[i], r.nodes[i + 1]);
        for (int i = 0; i < r.size(); ++i) EXPECT_NEAR(r.nodes[i], -r.nodes[r.size() - 1 - i], 1e-15);
    }
}

TEST(GaussLegendre, ClosedForms) {
    auto n1 = gauss_legendre_rule(1);
    ASSERT_EQ(n1.size(), 1);
    EXPECT_DOUBLE_EQ(n1.nodes[0], 0.0);
    EXPECT_DOUBLE_EQ(n1.weights[0], 2.0);

    auto n2 = gauss_legendre_rule(2);
    EXPECT_NEAR(n2.nodes[0], -1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(n2.nodes[1], 1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(n2.weights[0], 1.0, 1e-15);

    EXPECT_NEAR(apply_rule(gauss_legendre_rule(3), 4), 0.4, 1e-14);
}

TEST(GaussLegendre, ExactnessUpTo2nMinus1) {
    for (int n = 1; n <= 8; ++n) {
        const auto r = gauss_legendre_rule(n);
        for (int d = 0; d <= 2 * n - 1; ++d) EXPECT_NEAR(apply_rule(r, d), monomial_integral(d), 1e-13) << n << " " << d;
        EXPECT_GT(std::abs(apply_rule(r, 2 * n) - monomial_integral(2 * n)), 1e-8) << n;
    }
}

TEST(GaussLegendre, MappedInterval) {
    const auto r = gauss_legendre_rule(4, 0.5, 2.0);
    double s = 0.0;
    for (int q = 0; q < r.size(); ++q) s += r.weights[q] * std::pow(r.nodes[q], 5);
    EXPECT_NEAR(s, (std::pow(2.0, 6) - std::pow(0.5, 6)) / 6, 1e-12);
}

TEST(Equidistant, CubicNodes) {
    const auto e = equidistant_nodes(3);
    ASSERT_EQ(e.size(), 4);
    EXPECT_DOUBLE_EQ(e.nodes[0], -1.0);
    EXPECT_NEAR(e.nodes[1], -1.0 / 3, 1e-15);
    EXPECT_NEAR(e.nodes[2], 1.0 / 3, 1e-15);
    EXPECT_DOUBLE_EQ(e.nodes[3], 1.0);
}

TEST(LagrangeBasis, PartitionOfUnityAndPolynomialDerivatives) {
    const LagrangeBasis1D b(gauss_lobatto_nodes(4).nodes);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1, 1);
    std::vector<double> v(5), d1(5), d2(5);
    auto f = [](double t) { return 2 * std::pow(t, 4) - t * t * t + 0.5 * t - 1; };
    auto fp = [](double t) { return 8 * std::pow(t, 3) - 3 * t * t + 0.5; };
    auto fpp = [](double t) { return 24 * t * t - 6 * t; };
    for (int k = 0; k < 20; ++k) {
        const double t = U(rng);
        b.derivatives(t, v, d1, d2);
        double s = 0, sv = 0, sd = 0, sdd = 0;
        for (int i = 0; i < 5; ++i) {
            s += v[i];
            sv += v[i] * f(b.nodes()[i]);
            sd += d1[i] * f(b.nodes()[i]);
            sdd += d2[i] * f(b.nodes()[i]);
        }
        EXPECT_NEAR(s, 1.0, 1e-14);
        EXPECT_NEAR(sv, f(t), 1e-13);
        EXPECT_NEAR(sd, fp(t), 1e-12);
        EXPECT_NEAR(sdd, fpp(t), 1e-10);
    }
}

TEST(LagrangeBasis, KroneckerAtNodes) {
    const auto nodes = gauss_lobatto_nodes(3).nodes;
    const LagrangeBasis1D b(nodes);
    const auto M = b.evaluation_matrix(nodes);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) EXPECT_NEAR(M[i * 4 + j], i == j ? 1.0 : 0.0, 1e-15);
}
