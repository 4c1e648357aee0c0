#include "sdfem/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "sdfem/error.hpp"
#include "sdfem/norms.hpp"
#include "sdfem/problem.hpp"
#include "sdfem/study.hpp"
#include "sdfem/verify.hpp"

namespace sdfem {

namespace {

// String-valued options are parsed by apply_setting so that errors name the flag.
struct SettingFlags {
    std::vector<std::pair<std::string, std::string>> values;  // key, raw value
    std::vector<std::pair<std::string, CLI::Option*>> options;
    bool sharper = false;
    CLI::Option* sharper_opt = nullptr;
    std::string config_path;

    void add_to(CLI::App& app, bool single_n) {
        const std::pair<const char*, const char*> keys[] = {
            {"mesh", "shishkin | bakhvalov-shishkin"},
            {"p", "polynomial degree"},
            {"sigma", "mesh transition parameter"},
            {"epsilon", "diffusion coefficient"},
            {"C", "stabilization scale"},
            {"N", single_n ? "number of cells per direction" : "comma-separated list of N"},
            {"method", "galerkin | sdfem"},
            {"delta21", "upper-bound | sharper | asymptotic"},
            {"columns", "comma-separated error columns, or 'all'"},
            {"quad-order", "assembly Gauss points per direction (0 = p+2)"},
            {"norm-quad", "error-norm Gauss points per direction (0 = p+3)"},
            {"format", "csv | text"},
            {"output", "output path (default: standard output)"},
            {"threads", "worker threads for independent N"},
        };
        values.resize(std::size(keys));
        for (std::size_t k = 0; k < std::size(keys); ++k) {
            values[k].first = keys[k].first;
            options.emplace_back(keys[k].first,
                                 app.add_option(std::string("--") + keys[k].first, values[k].second, keys[k].second));
        }
        sharper_opt = app.add_flag("--sharper-delta21", sharper, "use the sharper delta21 bound");
        app.add_option("--config", config_path, "key = value settings file; flags override it");
    }

    StudyConfig build() const {
        StudyConfig cfg;
        if (!config_path.empty()) read_config_file(config_path, cfg);
        for (std::size_t k = 0; k < options.size(); ++k)
            if (options[k].second->count() > 0) apply_setting(cfg, values[k].first, values[k].second);
        if (sharper_opt->count() > 0) apply_setting(cfg, "sharper-delta21", "true");
        return cfg;
    }
};

// Writes to cfg.output when set, otherwise to `out`.
template <class F>
void emit(const std::string& path, std::ostream& out, F&& write) {
    if (path.empty()) {
        write(out);
        return;
    }
    std::ofstream file(path);
    if (!file) throw ConfigError("output", "cannot open '" + path + "' for writing");
    write(file);
    if (!file) throw ConfigError("output", "write to '" + path + "' failed");
}

int cmd_study(const StudyConfig& cfg, std::ostream& out) {
    const StudyReport rep = run_study(cfg);
    emit(cfg.output, out, [&](std::ostream& os) { write_report(os, rep); });
    return kExitOk;
}

int cmd_solve(StudyConfig cfg, std::ostream& out, std::ostream& err) {
    if (cfg.N.size() != 1) throw ConfigError("N", "solve takes exactly one N");
    cfg.validate();
    const int N = cfg.N.front();
    SolveResult r = [&] {
        try {
            return solve_single(cfg, N);
        } catch (const SolverError& e) {
            throw StudyError(N, true, e.what());
        } catch (const NumericalError& e) {
            throw StudyError(N, true, e.what());
        } catch (const std::invalid_argument& e) {
            throw StudyError(N, false, e.what());
        }
    }();
    const ProblemData prob = model_problem(cfg.epsilon);
    const double e = energy_error_exact(r.solution, *prob.exact, EnergyNorm::of(prob), cfg.norm_quad);
    err << "# N=" << N << " dofs=" << r.space->n_dofs() << " residual=" << std::scientific << std::setprecision(3)
        << r.residual << " energy_error=" << e << " delta11=" << r.delta.delta11 << " delta21=" << r.delta.delta21
        << '\n';
    emit(cfg.output, out, [&](std::ostream& os) { write_fe_function(os, r.solution); });
    return kExitOk;
}

int cmd_verify(std::uint64_t seed, std::ostream& out) {
    VerifyOptions opt;
    opt.seed = seed;
    bool ok = true;
    for (const SuiteResult& s : run_verification(opt)) {
        ok = ok && s.passed;
        out << (s.passed ? "PASS " : "FAIL ") << std::left << std::setw(24) << s.name << std::right
            << " cases=" << s.cases << " max=" << std::scientific << std::setprecision(3) << s.max_discrepancy
            << " tol=" << s.tolerance << "  worst: " << s.detail << '\n';
    }
    return ok ? kExitOk : kExitVerification;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"High-order streamline-diffusion FEM on layer-adapted meshes", "sdfem"};
    app.require_subcommand(1);

    SettingFlags study_flags, solve_flags;
    CLI::App* study = app.add_subcommand("study", "convergence study over a list of N");
    study_flags.add_to(*study, false);
    CLI::App* solve = app.add_subcommand("solve", "one discrete solve; writes the nodal coefficients");
    solve_flags.add_to(*solve, true);
    CLI::App* verify = app.add_subcommand("verify", "identity, consistency and quadrature suites");
    std::uint64_t seed = VerifyOptions{}.seed;
    verify->add_option("--seed", seed, "random seed for the generated test functions");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (study->parsed()) return cmd_study(study_flags.build(), out);
        if (solve->parsed()) return cmd_solve(solve_flags.build(), out, err);
        return cmd_verify(seed, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const StudyError& e) {
        err << "error: " << e.what() << '\n';
        return e.solver_failure() ? kExitSolver : kExitConfig;
    } catch (const SolverError& e) {
        err << "error: " << e.what() << '\n';
        return kExitSolver;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitSolver;
    }
}

}  // namespace sdfem
