#include "sdfem/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sdfem/assembly.hpp"
#include "sdfem/norms.hpp"
#include "sdfem/postprocess.hpp"
#include "sdfem/problem.hpp"
#include "sdfem/quadrature.hpp"

namespace sdfem {

Function2D random_smooth_function(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0), freq(0.5, 4.0), phase(0.0, 2.0 * std::numbers::pi);
    struct Term {
        double a, bx, cx, by, cy;
    };
    std::vector<Term> terms(3);
    for (auto& t : terms) t = {amp(rng), freq(rng), phase(rng), freq(rng), phase(rng)};
    const double q0 = amp(rng), qx = amp(rng), qy = amp(rng), qxy = amp(rng);
    return [terms, q0, qx, qy, qxy](double x, double y) {
        double v = q0 + qx * x + qy * y + qxy * x * y;
        for (const auto& t : terms) v += t.a * std::sin(t.bx * x + t.cx) * std::cos(t.by * y + t.cy);
        return v;
    };
}

namespace {

void record(SuiteResult& r, double d, const std::string& where) {
    // NaN counts as worse than anything
    if (++r.cases == 1 || !(d <= r.max_discrepancy)) {
        r.max_discrepancy = d;
        r.detail = where;
    }
}

void finish(SuiteResult& r) { r.passed = r.cases > 0 && r.max_discrepancy <= r.tolerance; }

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return a.size() == b.size() ? m : INFINITY;
}

}  // namespace

SuiteResult lemma_identity_suite(const VerifyOptions& opt) {
    SuiteResult r{"lemma-identity", false, 0, 0.0, opt.lemma_tolerance, {}};
    std::mt19937_64 rng(opt.seed);
    for (int k = 0; k < opt.lemma_functions; ++k) {
        const Function2D g = random_smooth_function(rng);
        for (int p : opt.lemma_degrees) {
            for (double t : opt.lemma_extra_nodes) {
                const LemmaDiscrepancy d = verify_lemma_identity(p, g, t);
                std::ostringstream where;
                where << "g#" << k << " p=" << p << " t*=" << t;
                record(r, d.max(), where.str());
            }
        }
    }
    finish(r);
    return r;
}

SuiteResult consistency_suite(const VerifyOptions& opt) {
    SuiteResult r{"postprocess-consistency", false, 0, 0.0, opt.consistency_tolerance, {}};
    std::mt19937_64 rng(opt.seed + 1);
    std::vector<Function2D> gs;
    for (int k = 0; k < opt.consistency_functions; ++k) gs.push_back(random_smooth_function(rng));
    const int p = opt.consistency_degree;
    for (MeshKind kind : {MeshKind::Shishkin, MeshKind::BakhvalovShishkin}) {
        for (int N : opt.consistency_N) {
            auto mesh = build_stype_mesh(N, p + 2.0, 1e-6, 1.0, kind);
            auto space = build_space(mesh, p);
            auto mm = build_macro_mesh(mesh);
            for (std::size_t k = 0; k < gs.size(); ++k) {
                std::ostringstream where;
                where << to_string(kind) << " N=" << N << " g#" << k;
                const double dgl = max_abs_diff(pgl_apply(mm, gl_interpolate(space, gs[k])).coefficients(),
                                                pgl_apply(mm, p, gs[k]).coefficients());
                record(r, dgl, where.str() + " P_GL");
                const double dvec = max_abs_diff(pvec_apply(mm, vec_interpolate(space, gs[k])).coefficients(),
                                                 pvec_apply(mm, p, gs[k]).coefficients());
                record(r, dvec, where.str() + " P_vec");
            }
        }
    }
    finish(r);
    return r;
}

SuiteResult quadrature_suite(const VerifyOptions& opt) {
    SuiteResult r{"quadrature-exactness", false, 0, 0.0, opt.quadrature_tolerance, {}};
    auto check = [&](const NodeSet1D& rule, int max_degree, const std::string& name) {
        for (int d = 0; d <= max_degree; ++d) {
            double s = 0.0;
            for (int q = 0; q < rule.size(); ++q) s += rule.weights[q] * std::pow(rule.nodes[q], d);
            const double exact = d % 2 == 0 ? 2.0 / (d + 1) : 0.0;
            record(r, std::abs(s - exact), name + " degree " + std::to_string(d));
        }
    };
    for (int p = 1; p <= opt.max_lobatto_degree; ++p)
        check(gauss_lobatto_nodes(p), 2 * p - 1, "Gauss-Lobatto p=" + std::to_string(p));
    for (int n = 1; n <= opt.max_legendre_points; ++n)
        check(gauss_legendre_rule(n), 2 * n - 1, "Gauss-Legendre n=" + std::to_string(n));
    finish(r);
    return r;
}

SuiteResult exact_reproduction_suite(const VerifyOptions& opt) {
    SuiteResult r{"exact-reproduction", false, 0, 0.0, opt.reproduction_tolerance, {}};
    const Factor1D bubble{[](double t) { return t * (1.0 - t); }, [](double t) { return 1.0 - 2.0 * t; },
                          [](double) { return -2.0; }};
    const ProblemData prob = manufactured_problem(
        1.0, [](double x, double) { return 2.0 - x; }, [](double, double) { return -1.0; },
        [](double, double) { return 1.5; }, ExactSolution(bubble, bubble), 1.0, 1.0);
    const EnergyNorm norm = EnergyNorm::of(prob);

    // Coarsest admissible layer geometry: a fixed delta on much thinner cells only amplifies rounding.
    const double eps_mesh = max_admissible_epsilon(8, 4.0);
    StabilizationParams sd;
    sd.delta11 = sd.delta12 = sd.delta21 = sd.delta22 = 0.01;
    const std::pair<const char*, std::shared_ptr<const TensorMesh>> meshes[] = {
        {"uniform", build_uniform_mesh(8)},
        {"shishkin-geometry", build_stype_mesh(8, 4.0, eps_mesh, 1.0, MeshKind::Shishkin)},
        {"bakhvalov-shishkin-geometry", build_stype_mesh(8, 4.0, eps_mesh, 1.0, MeshKind::BakhvalovShishkin)},
    };
    for (const auto& [name, mesh] : meshes) {
        for (int p : {2, 3}) {
            auto space = build_space(mesh, p);
            const std::string tag = std::string(name) + " p=" + std::to_string(p);
            record(r, energy_error_exact(solve_system(assemble_galerkin(space, prob)), *prob.exact, norm),
                   tag + " galerkin");
            record(r, energy_error_exact(solve_system(assemble_sdfem(space, prob, sd)), *prob.exact, norm),
                   tag + " sdfem");
        }
    }
    finish(r);
    return r;
}

std::vector<SuiteResult> run_verification(const VerifyOptions& opt) {
    return {lemma_identity_suite(opt), consistency_suite(opt), quadrature_suite(opt), exact_reproduction_suite(opt)};
}

}  // namespace sdfem
