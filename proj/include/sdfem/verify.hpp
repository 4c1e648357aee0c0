#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sdfem/interpolation.hpp"

namespace sdfem {

struct SuiteResult {
    std::string name;
    bool passed = false;
    int cases = 0;
    double max_discrepancy = 0.0;
    double tolerance = 0.0;
    std::string detail;  // worst case
};

struct VerifyOptions {
    std::uint64_t seed = 20240611;
    int lemma_functions = 50;
    std::vector<int> lemma_degrees{2, 3, 4};
    std::vector<double> lemma_extra_nodes{-0.71, 0.23, 0.37};
    double lemma_tolerance = 1e-9;

    int consistency_functions = 20;
    std::vector<int> consistency_N{8, 16};
    int consistency_degree = 3;
    double consistency_tolerance = 1e-10;

    int max_lobatto_degree = 6;
    int max_legendre_points = 8;
    double quadrature_tolerance = 1e-13;

    double reproduction_tolerance = 1e-10;
};

/// Random smooth function: a few products of shifted sines/cosines plus a low-order polynomial.
Function2D random_smooth_function(std::mt19937_64& rng);

/// Both one-element identities between the vertex-edge-cell and Gauss-Lobatto interpolants.
SuiteResult lemma_identity_suite(const VerifyOptions& opt = {});
/// P_GL I g = P_GL g and P_vec pi g = P_vec g on both layer meshes.
SuiteResult consistency_suite(const VerifyOptions& opt = {});
/// Gauss-Lobatto and Gauss-Legendre exactness on monomials.
SuiteResult quadrature_suite(const VerifyOptions& opt = {});
/// Q_2 solution with eps = 1 recovered by Galerkin and SDFEM up to rounding.
SuiteResult exact_reproduction_suite(const VerifyOptions& opt = {});

std::vector<SuiteResult> run_verification(const VerifyOptions& opt = {});

}  // namespace sdfem
