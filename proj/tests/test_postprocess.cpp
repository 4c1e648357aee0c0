#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sdfem/norms.hpp"
#include "sdfem/postprocess.hpp"
#include "sdfem/quadrature.hpp"

using namespace sdfem;

namespace {

std::shared_ptr<const TensorMesh> mesh(int N, MeshKind k, double sigma = 5.0) {
    return build_stype_mesh(N, sigma, 1e-6, 1.0, k);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    EXPECT_EQ(a.size(), b.size());
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

Function2D smooth(double w) {
    return [w](double x, double y) { return std::sin(w * x + 1) * std::cos(2 * y) + std::exp(x * y); };
}

}  // namespace

TEST(MacroOperator, GaussLobattoIndexSet) {
    // a = 0: the union of the two cells' Lobatto points is symmetric
    const int p = 3;
    const auto gl = gauss_lobatto_nodes(p).nodes;
    std::vector<double> uni;
    for (int k = 0; k <= p; ++k) uni.push_back((gl[k] - 1) / 2);
    for (int k = 1; k <= p; ++k) uni.push_back((gl[k] + 1) / 2);
    const auto op = MacroReferenceOp1D::gauss_lobatto(p, 0.0);
    ASSERT_EQ(op.n_samples(), p + 2);
    const int expected[] = {0, 1, 3, 5, 6};
    for (int k = 0; k < op.n_samples(); ++k) EXPECT_NEAR(op.s(k), uni[expected[k]], 1e-15) << k;
}

TEST(MacroOperator, OneDimensionalReproduction) {
    for (int p = 2; p <= 5; ++p)
        for (double a : {0.0, 0.3, -0.45}) {
            const auto f = [p](double s) {
                double v = 0;
                for (int k = 0; k <= p + 1; ++k) v += std::pow(s, k) / (k + 1.5);
                return v;
            };
            const auto nodes = gauss_lobatto_nodes(p + 1).nodes;
            for (const auto& op : {MacroReferenceOp1D::gauss_lobatto(p, a), MacroReferenceOp1D::vec(p, a, p + 2)}) {
                const Eigen::VectorXd c = op.apply(f);
                ASSERT_EQ(c.size(), p + 2);
                for (int k = 0; k < p + 2; ++k) EXPECT_NEAR(c(k), f(nodes[k]), 1e-12) << "p=" << p << " a=" << a;
            }
        }
}

TEST(MacroOperator, RejectsDegenerateOffset) {
    EXPECT_THROW(check_macro_offset(1.0), std::invalid_argument);
    EXPECT_THROW(check_macro_offset(-1.0 + 1e-14), std::invalid_argument);
    EXPECT_NO_THROW(check_macro_offset(0.9));
    EXPECT_DOUBLE_EQ(macro_coordinate(0.2, 0, -1.0), -1.0);
    EXPECT_DOUBLE_EQ(macro_coordinate(0.2, 0, 1.0), 0.2);
    EXPECT_DOUBLE_EQ(macro_coordinate(0.2, 1, 1.0), 1.0);
}

TEST(Postprocess, ReproducesQp1) {
    for (int p : {2, 3, 4}) {
        const Function2D g = [p](double x, double y) {
            return std::pow(x, p + 1) * std::pow(y, p + 1) - 2 * std::pow(x, p) * y + 0.5;
        };
        for (MeshKind k : {MeshKind::Shishkin, MeshKind::BakhvalovShishkin}) {
            const auto m = mesh(16, k);
            const auto mm = build_macro_mesh(m);
            const auto V = build_space(m, p);
            const MacroFEFunction a = pgl_apply(mm, gl_interpolate(V, g));
            const MacroFEFunction b = pvec_apply(mm, vec_interpolate(V, g));
            std::mt19937_64 rng(p);
            std::uniform_real_distribution<double> U(0, 1);
            for (int s = 0; s < 30; ++s) {
                const double x = U(rng), y = U(rng);
                EXPECT_NEAR(a.eval(x, y).value, g(x, y), 1e-10);
                EXPECT_NEAR(b.eval(x, y).value, g(x, y), 1e-10);
            }
        }
    }
}

TEST(Postprocess, ConsistencyWithInterpolants) {
    for (MeshKind k : {MeshKind::Shishkin, MeshKind::BakhvalovShishkin}) {
        const auto m = mesh(8, k);
        const auto mm = build_macro_mesh(m);
        const auto V = build_space(m, 3);
        const Function2D g = smooth(3.0);
        EXPECT_LE(max_abs_diff(pgl_apply(mm, gl_interpolate(V, g)).coefficients(), pgl_apply(mm, 3, g).coefficients()),
                  1e-11);
        EXPECT_LE(max_abs_diff(pvec_apply(mm, vec_interpolate(V, g)).coefficients(),
                               pvec_apply(mm, 3, g).coefficients()),
                  1e-10);
    }
}

TEST(Postprocess, ContinuousAcrossMacros) {
    const auto m = mesh(16, MeshKind::BakhvalovShishkin);
    const auto mm = build_macro_mesh(m);
    const auto V = build_space(m, 3);
    const FEFunction u = gl_interpolate(V, smooth(5.0));
    EXPECT_LE(pgl_apply(mm, u).continuity_defect(), 1e-11);
    EXPECT_LE(pvec_apply(mm, u).continuity_defect(), 1e-11);
}

TEST(Postprocess, Linear) {
    const auto m = mesh(8, MeshKind::BakhvalovShishkin);
    const auto mm = build_macro_mesh(m);
    const auto V = build_space(m, 3);
    const FEFunction u = gl_interpolate(V, smooth(2.0));
    const FEFunction v = gl_interpolate(V, smooth(7.0));
    std::vector<double> w(u.coefficients().size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = 2.5 * u.coefficients()[i] + v.coefficients()[i];
    const FEFunction uv(V, w);
    for (auto apply : {+[](std::shared_ptr<const MacroMesh> M, const FEFunction& f) { return pgl_apply(M, f); },
                       +[](std::shared_ptr<const MacroMesh> M, const FEFunction& f) { return pvec_apply(M, f); }}) {
        const auto Pu = apply(mm, u).coefficients();
        const auto Pv = apply(mm, v).coefficients();
        const auto Pw = apply(mm, uv).coefficients();
        for (std::size_t i = 0; i < Pw.size(); ++i) EXPECT_NEAR(Pw[i], 2.5 * Pu[i] + Pv[i], 1e-12);
    }
}

TEST(Postprocess, RejectsForeignMacroMesh) {
    const auto V = build_space(mesh(8, MeshKind::Shishkin), 3);
    const auto other = build_macro_mesh(mesh(16, MeshKind::Shishkin));
    const FEFunction u(V, std::vector<double>(V->n_dofs(), 1.0));
    EXPECT_THROW(pgl_apply(other, u), std::invalid_argument);
    EXPECT_THROW(pvec_apply(other, u), std::invalid_argument);
}

TEST(Postprocess, StabilityDoesNotGrowWithN) {
    const EnergyNorm norm(1e-6, 1.0);
    for (MeshKind k : {MeshKind::Shishkin, MeshKind::BakhvalovShishkin}) {
        double ratio_gl[3], ratio_vec[3];
        int idx = 0;
        for (int N : {8, 16, 32}) {
            const auto m = mesh(N, k);
            const auto mm = build_macro_mesh(m);
            const auto V = build_space(m, 3);
            std::mt19937_64 rng(100 + N);
            std::uniform_real_distribution<double> U(-1, 1);
            double rg = 0, rv = 0;
            for (int trial = 0; trial < 50; ++trial) {
                std::vector<double> c(V->n_dofs());
                for (auto& x : c) x = U(rng);
                const FEFunction v(V, c);
                const double e = energy_norm(v, norm);
                rg = std::max(rg, energy_norm(pgl_apply(mm, v), norm) / e);
                rv = std::max(rv, energy_norm(pvec_apply(mm, v), norm) / e);
            }
            ratio_gl[idx] = rg;
            ratio_vec[idx] = rv;
            ++idx;
        }
        EXPECT_LE(ratio_gl[2], 1.5 * ratio_gl[0]) << to_string(k);
        EXPECT_LE(ratio_vec[2], 1.5 * ratio_vec[0]) << to_string(k);
    }
}

TEST(Postprocess, InterpolationQualityRate) {
    const int p = 3;
    const double eps = 1e-6;
    const ExactSolution u = model_solution(eps);
    const EnergyNorm norm(eps, 1.0);
    const Function2D g = [&u](double x, double y) { return u(x, y); };
    double egl[2], evec[2];
    int k = 0;
    for (int N : {16, 64}) {
        const auto mm = build_macro_mesh(mesh(N, MeshKind::BakhvalovShishkin));
        egl[k] = energy_error_exact(pgl_apply(mm, p, g), u, norm);
        evec[k] = energy_error_exact(pvec_apply(mm, p, g), u, norm);
        ++k;
    }
    EXPECT_GE(std::log(egl[0] / egl[1]) / std::log(4.0), p + 0.8);
    EXPECT_GE(std::log(evec[0] / evec[1]) / std::log(4.0), p + 0.8);
}
