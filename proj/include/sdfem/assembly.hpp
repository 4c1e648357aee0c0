#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sdfem/fe_space.hpp"
#include "sdfem/problem.hpp"
#include "sdfem/sparse.hpp"

namespace sdfem {

enum class Delta21Rule {
    UpperBound,  // C max{1, eps^{-1/2} N^{-1} max|psi'|} (N^{-1} max|psi'|)^2
    Sharper,     // C (N^{-1} max|psi'|)^2
    // UpperBound with N^{-1} max|psi'| replaced by its order: N^{-1} ln N (Shishkin), N^{-1} (B-S).
    Asymptotic,
};

std::string to_string(Delta21Rule rule);
Delta21Rule parse_delta21_rule(std::string_view name);

/// Streamline-diffusion parameters, constant on each subdomain.
struct StabilizationParams {
    double delta11 = 0.0;
    double delta12 = 0.0;
    double delta21 = 0.0;
    double delta22 = 0.0;
    double C = 0.0;

    double operator()(Subdomain s) const;
    static StabilizationParams zero() { return {}; }
};

StabilizationParams stabilization_parameters(const TensorMesh& mesh, double epsilon, double C,
                                             Delta21Rule rule = Delta21Rule::UpperBound);

/// Linear system over the interior (non-Dirichlet) dofs.
struct AssembledSystem {
    std::shared_ptr<const FESpace> space;
    SparseMatrix matrix;
    std::vector<double> rhs;
    std::vector<int> interior_to_full;
    std::vector<int> full_to_interior;  // -1 on boundary dofs

    /// FE function with the given interior values and zero boundary values.
    FEFunction expand(std::span<const double> interior_values) const;
    /// Interior restriction of a full coefficient vector.
    std::vector<double> restrict(std::span<const double> full) const;
};

/// Smallest admissible assembly quadrature: p + 2 points per direction.
int default_assembly_quadrature(int p);

/// a_SD(u, v) = f_SD(v) with cell-wise delta from the subdomain classification.
AssembledSystem assemble_sdfem(std::shared_ptr<const FESpace> space, const ProblemData& prob,
                               const StabilizationParams& delta, int quad_order = 0);

/// Plain Galerkin system (delta = 0).
AssembledSystem assemble_galerkin(std::shared_ptr<const FESpace> space, const ProblemData& prob,
                                  int quad_order = 0);

/// Assemble and solve; throws SolverError on a failed solve.
FEFunction solve_system(const AssembledSystem& system);

}  // namespace sdfem
