#pragma once

#include <span>

#include "sdfem/fe_space.hpp"
#include "sdfem/postprocess.hpp"
#include "sdfem/problem.hpp"

namespace sdfem {

/// ||v||_E = (eps ||grad v||_0^2 + gamma ||v||_0^2)^{1/2}
struct EnergyNorm {
    double epsilon;
    double gamma;

    EnergyNorm(double epsilon, double gamma);
    static EnergyNorm of(const ProblemData& prob) { return {prob.epsilon, prob.gamma}; }
};

/// Default per-direction Gauss points on each fine cell: p + 3.
int default_norm_quadrature(int p);

/// Sum with a fixed pairwise tree, independent of thread count.
double pairwise_sum(std::span<const double> values);

/// ||u - u_h||_E over the fine cells; nq = 0 selects p + 3 points, smaller values are rejected.
double energy_error_exact(const FEFunction& u_h, const ExactSolution& u, const EnergyNorm& norm, int nq = 0);
double energy_error_exact(const MacroFEFunction& u_h, const ExactSolution& u, const EnergyNorm& norm, int nq = 0);

/// ||u_h - v_h||_E for two functions on the same space; nq >= p + 1.
double energy_diff_fe(const FEFunction& u_h, const FEFunction& v_h, const EnergyNorm& norm, int nq = 0);

double energy_norm(const FEFunction& u_h, const EnergyNorm& norm, int nq = 0);
double energy_norm(const MacroFEFunction& u_h, const EnergyNorm& norm, int nq = 0);

}  // namespace sdfem
