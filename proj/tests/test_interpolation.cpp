#include <gtest/gtest.h>

#include <cmath>
#include <Eigen/LU>
#include <random>

#include "sdfem/interpolation.hpp"
#include "sdfem/norms.hpp"
#include "sdfem/problem.hpp"
#include "sdfem/quadrature.hpp"

using namespace sdfem;

namespace {

std::shared_ptr<const FESpace> space(int N, int p, MeshKind k, double sigma = 5.0) {
    return build_space(build_stype_mesh(N, sigma, 1e-6, 1.0, k), p);
}

Function2D qp_poly(int p) {
    return [p](double x, double y) {
        double s = 0;
        for (int a = 0; a <= p; ++a)
            for (int b = 0; b <= p; ++b) s += std::pow(x, a) * std::pow(y, b) * (1.0 + a - 0.3 * b) / (1 + a + b);
        return s;
    };
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST(Interpolation, ReproducesQp) {
    for (int p : {2, 3, 4}) {
        const auto V = space(8, p, MeshKind::BakhvalovShishkin);
        const Function2D g = qp_poly(p);
        const FEFunction I = gl_interpolate(V, g);
        const FEFunction P = vec_interpolate(V, g);
        const FEFunction J = equidistant_interpolate(V, g);
        std::mt19937_64 rng(p);
        std::uniform_real_distribution<double> U(0, 1);
        for (int k = 0; k < 30; ++k) {
            const double x = U(rng), y = U(rng);
            EXPECT_NEAR(I.eval(x, y).value, g(x, y), 1e-11);
            EXPECT_NEAR(P.eval(x, y).value, g(x, y), 1e-10);
            EXPECT_NEAR(J.eval(x, y).value, g(x, y), 1e-11);
        }
    }
}

TEST(Interpolation, ZeroInput) {
    const auto V = space(8, 3, MeshKind::Shishkin);
    const Function2D zero = [](double, double) { return 0.0; };
    for (const FEFunction& u : {gl_interpolate(V, zero), vec_interpolate(V, zero), equidistant_interpolate(V, zero)})
        for (double c : u.coefficients()) EXPECT_EQ(c, 0.0);
}

TEST(Interpolation, VecMatchesVertexValues) {
    const auto V = space(8, 3, MeshKind::BakhvalovShishkin);
    const Function2D g = [](double x, double y) { return std::sin(3 * x + 1) * std::cos(2 * y) + x * y; };
    const FEFunction P = vec_interpolate(V, g);
    const auto& mesh = V->mesh();
    for (int i = 0; i <= 8; ++i)
        for (int j = 0; j <= 8; ++j) EXPECT_NEAR(P.eval(mesh.x(i), mesh.y(j)).value, g(mesh.x(i), mesh.y(j)), 1e-12);
}

TEST(Interpolation, EquidistantReferenceNodes) {
    const auto e = equidistant_nodes(3);
    ASSERT_EQ(e.size(), 4);
    EXPECT_DOUBLE_EQ(e.nodes[0], -1.0);
    EXPECT_NEAR(e.nodes[1], -1.0 / 3, 1e-15);
    EXPECT_NEAR(e.nodes[2], 1.0 / 3, 1e-15);
    EXPECT_DOUBLE_EQ(e.nodes[3], 1.0);
}

TEST(Interpolation, EquidistantMatchesAtEquidistantPoints) {
    const auto V = space(8, 3, MeshKind::Shishkin);
    const Function2D g = [](double x, double y) { return std::exp(x - y) * std::cos(5 * x * y); };
    const FEFunction J = equidistant_interpolate(V, g);
    for (int i : {1, 5, 8})
        for (int j : {2, 7})
            for (double s : {-1.0, -1.0 / 3, 1.0 / 3, 1.0})
                for (double t : {-1.0, -1.0 / 3, 1.0 / 3, 1.0}) {
                    const double x = V->map_x(i, s), y = V->map_y(j, t);
                    EXPECT_NEAR(J.eval_local(i, j, s, t).value, g(x, y), 1e-12);
                }
}

TEST(Interpolation, OperatorsAreProjections) {
    const auto V = space(8, 3, MeshKind::BakhvalovShishkin);
    const Function2D g = [](double x, double y) { return std::sin(3 * x + 1) * std::cos(2 * y); };
    auto as_function = [](const FEFunction& u) { return [&u](double x, double y) { return u.eval(x, y).value; }; };

    const FEFunction I = gl_interpolate(V, g);
    EXPECT_LE(max_abs_diff(gl_interpolate(V, as_function(I)).coefficients(), I.coefficients()), 1e-11);
    const FEFunction P = vec_interpolate(V, g);
    EXPECT_LE(max_abs_diff(vec_interpolate(V, as_function(P)).coefficients(), P.coefficients()), 1e-11);
    const FEFunction J = equidistant_interpolate(V, g);
    EXPECT_LE(max_abs_diff(equidistant_interpolate(V, as_function(J)).coefficients(), J.coefficients()), 1e-11);
}

TEST(Interpolation, VecEdgeMoments) {
    // integral over each cell edge of (pi g - g) against Legendre polynomials of degree <= p-2
    const int p = 4;
    const auto V = space(8, p, MeshKind::BakhvalovShishkin);
    const Function2D g = [](double x, double y) { return std::exp(2 * x) * std::sin(3 * y + 0.5); };
    const FEFunction P = vec_interpolate(V, g);
    const auto rule = gauss_legendre_rule(12);
    const auto& m = V->mesh();
    for (int i = 1; i <= 8; ++i)
        for (int j = 1; j <= 8; ++j)
            for (int k = 0; k <= p - 2; ++k) {
                double bottom = 0, left = 0;
                for (int q = 0; q < rule.size(); ++q) {
                    const double t = rule.nodes[q], w = rule.weights[q], L = legendre_eval(k, t).value;
                    const double x = V->map_x(i, t), y = V->map_y(j, t);
                    bottom += w * L * (P.eval_local(i, j, t, -1.0).value - g(x, m.y(j - 1)));
                    left += w * L * (P.eval_local(i, j, -1.0, t).value - g(m.x(i - 1), y));
                }
                EXPECT_NEAR(bottom, 0.0, 1e-10) << i << "," << j << " k=" << k;
                EXPECT_NEAR(left, 0.0, 1e-10) << i << "," << j << " k=" << k;
            }
}

TEST(Interpolation, LocalFunctionalCount) {
    for (int p : {2, 3, 5}) {
        const VertexEdgeCellDofs d(p);
        EXPECT_EQ(d.n_functionals(), 4 + 4 * (p - 1) + (p - 1) * (p - 1));
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(d.local_matrix());
        EXPECT_EQ(lu.rank(), d.n_functionals());
    }
}

TEST(LemmaIdentity, PolynomialInputIsExact) {
    for (int p : {2, 3, 4}) EXPECT_LE(verify_lemma_identity(p, qp_poly(p)).max(), 1e-12);
}

TEST(LemmaIdentity, SmoothFunction) {
    const Function2D g = [](double x, double y) { return std::sin(3 * x + 1) * std::cos(2 * y); };
    EXPECT_LE(verify_lemma_identity(3, g).max(), 1e-10);
}

TEST(LemmaIdentity, RandomHighDegreePolynomial) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(-1, 1);
    for (int p : {2, 3, 4}) {
        std::vector<double> c((2 * p + 1) * (2 * p + 1));
        for (auto& v : c) v = U(rng);
        const Function2D g = [p, c](double x, double y) {
            double s = 0;
            for (int a = 0; a <= 2 * p; ++a)
                for (int b = 0; b <= 2 * p; ++b) s += c[a * (2 * p + 1) + b] * std::pow(x, a) * std::pow(y, b);
            return s;
        };
        for (double t : {0.37, -0.71, 0.23}) {
            const LemmaDiscrepancy d = verify_lemma_identity(p, g, t);
            EXPECT_LE(d.vec_vs_gl_of_vec, 1e-10);
            EXPECT_LE(d.gl_vs_vec_of_star, 1e-10);
        }
    }
}

TEST(LemmaIdentity, RejectsBadExtraNode) {
    const Function2D g = [](double x, double y) { return x * y; };
    EXPECT_THROW(verify_lemma_identity(3, g, gauss_lobatto_nodes(3).nodes[1]), std::invalid_argument);
    EXPECT_THROW(verify_lemma_identity(3, g, 1.0), std::invalid_argument);
    EXPECT_THROW(verify_lemma_identity(1, g), std::invalid_argument);
}

TEST(InterpolationRates, BakhvalovShishkinSlopes) {
    for (int p : {2, 3}) {
        const double sigma = p + 1;
        const double eps = 1e-6;
        const ExactSolution u = model_solution(eps);
        const EnergyNorm norm(eps, 1.0);
        const Function2D g = [&u](double x, double y) { return u(x, y); };
        double eI[2], eP[2];
        int k = 0;
        for (int N : {16, 64}) {
            const auto V = space(N, p, MeshKind::BakhvalovShishkin, sigma);
            eI[k] = energy_error_exact(gl_interpolate(V, g), u, norm);
            eP[k] = energy_error_exact(vec_interpolate(V, g), u, norm);
            ++k;
        }
        EXPECT_GE(std::log(eI[0] / eI[1]) / std::log(4.0), p - 0.2) << "p=" << p;
        EXPECT_GE(std::log(eP[0] / eP[1]) / std::log(4.0), p - 0.2) << "p=" << p;
    }
}
