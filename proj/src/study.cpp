#include "sdfem/study.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "sdfem/error.hpp"
#include "sdfem/interpolation.hpp"
#include "sdfem/norms.hpp"
#include "sdfem/postprocess.hpp"
#include "sdfem/problem.hpp"
#include "sdfem/sparse.hpp"

namespace sdfem {

std::string to_string(Column c) {
    switch (c) {
        case Column::Convergence: return "convergence";
        case Column::SupercloseVec: return "supercloseness-vec";
        case Column::SupercloseGl: return "supercloseness-gl";
        case Column::SupercloseEqui: return "supercloseness-equi";
        case Column::PostVec: return "post-vec";
        case Column::PostGl: return "post-gl";
    }
    return "?";
}

std::string to_string(Method m) { return m == Method::Galerkin ? "galerkin" : "sdfem"; }
std::string to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "text"; }

std::vector<Column> all_columns() {
    return {Column::Convergence, Column::SupercloseVec, Column::SupercloseGl,
            Column::SupercloseEqui, Column::PostVec, Column::PostGl};
}

Column parse_column(std::string_view name) {
    for (Column c : all_columns())
        if (name == to_string(c)) return c;
    throw std::invalid_argument("unknown column '" + std::string(name) + "'");
}

Method parse_method(std::string_view name) {
    if (name == "galerkin") return Method::Galerkin;
    if (name == "sdfem") return Method::Sdfem;
    throw std::invalid_argument("unknown method '" + std::string(name) + "' (expected galerkin or sdfem)");
}

OutputFormat parse_format(std::string_view name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "text") return OutputFormat::Text;
    throw std::invalid_argument("unknown format '" + std::string(name) + "' (expected csv or text)");
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

int parse_int(std::string_view text, std::string_view key) {
    text = trim(text);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError(std::string(key), "expected an integer, got '" + std::string(text) + "'");
    }
    return v;
}

double parse_double(std::string_view text, std::string_view key) {
    const std::string s(trim(text));
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (s.empty() || used != s.size() || !std::isfinite(v)) {
        throw ConfigError(std::string(key), "expected a number, got '" + s + "'");
    }
    return v;
}

bool parse_bool(std::string_view text, std::string_view key) {
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError(std::string(key), "expected true or false, got '" + std::string(text) + "'");
}

std::vector<std::string_view> split_commas(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <class F>
auto wrap(std::string_view key, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string(key), e.what());
    }
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string sci6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5e", v);
    return buf;
}

}  // namespace

std::vector<int> parse_int_list(std::string_view text, std::string_view key) {
    std::vector<int> out;
    for (std::string_view item : split_commas(text)) out.push_back(parse_int(item, key));
    return out;
}

void StudyConfig::validate() const {
    if (mesh == MeshKind::Custom) throw ConfigError("mesh", "studies need shishkin or bakhvalov-shishkin");
    if (p < 1 || p > 8) throw ConfigError("p", "degree must lie in 1..8, got " + std::to_string(p));
    if (!(sigma > 0.0)) throw ConfigError("sigma", "must be positive");
    if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ConfigError("epsilon", "must lie in (0, 1]");
    if (!(C > 0.0)) throw ConfigError("C", "must be positive");
    if (N.empty()) throw ConfigError("N", "empty list");
    for (std::size_t k = 0; k < N.size(); ++k) {
        if (N[k] < 8 || N[k] % 8 != 0) {
            throw ConfigError("N", "each N must be a positive multiple of 8, got " + std::to_string(N[k]));
        }
        if (k > 0 && N[k] <= N[k - 1]) throw ConfigError("N", "list must be strictly ascending");
    }
    // the admissible bound shrinks with N, so the largest N decides
    const double eps_max = max_admissible_epsilon(N.back(), sigma);
    if (epsilon > eps_max) {
        throw ConfigError("epsilon", "too large for the layer mesh at N=" + std::to_string(N.back()) +
                                         " (need epsilon <= " + sci6(eps_max) + ")");
    }
    if (columns.empty()) throw ConfigError("columns", "no columns requested");
    for (std::size_t k = 0; k < columns.size(); ++k) {
        if (std::find(columns.begin(), columns.begin() + k, columns[k]) != columns.begin() + k) {
            throw ConfigError("columns", "duplicate column '" + to_string(columns[k]) + "'");
        }
        if (p < 2 && columns[k] != Column::Convergence && columns[k] != Column::SupercloseGl &&
            columns[k] != Column::SupercloseEqui) {
            throw ConfigError("columns", "'" + to_string(columns[k]) + "' needs p >= 2");
        }
    }
    if (quad_order != 0 && quad_order < p + 2) {
        throw ConfigError("quad-order", "need at least p+2 = " + std::to_string(p + 2) + " points");
    }
    if (norm_quad != 0 && norm_quad < p + 3) {
        throw ConfigError("norm-quad", "need at least p+3 = " + std::to_string(p + 3) + " points");
    }
    if (threads < 1) throw ConfigError("threads", "must be >= 1");
}

void apply_setting(StudyConfig& cfg, std::string_view key, std::string_view value) {
    value = trim(value);
    if (key == "mesh") cfg.mesh = wrap(key, [&] { return parse_mesh_kind(value); });
    else if (key == "p") cfg.p = parse_int(value, key);
    else if (key == "sigma") cfg.sigma = parse_double(value, key);
    else if (key == "epsilon") cfg.epsilon = parse_double(value, key);
    else if (key == "C") cfg.C = parse_double(value, key);
    else if (key == "N") cfg.N = parse_int_list(value, key);
    else if (key == "method") cfg.method = wrap(key, [&] { return parse_method(value); });
    else if (key == "delta21") cfg.delta21 = wrap(key, [&] { return parse_delta21_rule(value); });
    else if (key == "sharper-delta21") {
        if (parse_bool(value, key)) cfg.delta21 = Delta21Rule::Sharper;
        else if (cfg.delta21 == Delta21Rule::Sharper) cfg.delta21 = Delta21Rule::UpperBound;
    } else if (key == "columns") {
        if (value == "all") {
            cfg.columns = all_columns();
        } else {
            std::vector<Column> cols;
            for (std::string_view item : split_commas(value))
                cols.push_back(wrap(key, [&] { return parse_column(item); }));
            cfg.columns = cols;
        }
    } else if (key == "quad-order") cfg.quad_order = parse_int(value, key);
    else if (key == "norm-quad") cfg.norm_quad = parse_int(value, key);
    else if (key == "format") cfg.format = wrap(key, [&] { return parse_format(value); });
    else if (key == "output") cfg.output = std::string(value);
    else if (key == "threads") cfg.threads = parse_int(value, key);
    else throw ConfigError(std::string(key), "unknown setting");
}

void read_config(std::istream& is, StudyConfig& cfg) {
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string_view v(line);
        if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
        v = trim(v);
        if (v.empty()) continue;
        const auto eq = v.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config", "line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        apply_setting(cfg, trim(v.substr(0, eq)), v.substr(eq + 1));
    }
}

void read_config_file(const std::string& path, StudyConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    read_config(in, cfg);
}

void write_config(std::ostream& os, const StudyConfig& cfg) {
    os << "mesh = " << to_string(cfg.mesh) << '\n';
    os << "p = " << cfg.p << '\n';
    os << "sigma = " << format_double(cfg.sigma) << '\n';
    os << "epsilon = " << format_double(cfg.epsilon) << '\n';
    os << "C = " << format_double(cfg.C) << '\n';
    os << "N = ";
    for (std::size_t k = 0; k < cfg.N.size(); ++k) os << (k ? "," : "") << cfg.N[k];
    os << '\n';
    os << "method = " << to_string(cfg.method) << '\n';
    os << "delta21 = " << to_string(cfg.delta21) << '\n';
    os << "columns = ";
    for (std::size_t k = 0; k < cfg.columns.size(); ++k) os << (k ? "," : "") << to_string(cfg.columns[k]);
    os << '\n';
    os << "quad-order = " << cfg.quad_order << '\n';
    os << "norm-quad = " << cfg.norm_quad << '\n';
    os << "format = " << to_string(cfg.format) << '\n';
    if (!cfg.output.empty()) os << "output = " << cfg.output << '\n';
    os << "threads = " << cfg.threads << '\n';
}

double convergence_rate(double eN, double e2N, int N, MeshKind kind) {
    if (!(eN > 0.0) || !(e2N > 0.0)) throw std::invalid_argument("convergence_rate: errors must be positive");
    if (N < 2) throw std::invalid_argument("convergence_rate: N must be >= 2");
    const double n = N;
    if (kind == MeshKind::Shishkin) return std::log(eN / e2N) / std::log(2.0 * std::log(n) / std::log(2.0 * n));
    return std::log(eN / e2N) / std::log(2.0);
}

double convergence_rate(double e1, double e2, int N1, int N2, MeshKind kind) {
    if (!(e1 > 0.0) || !(e2 > 0.0)) throw std::invalid_argument("convergence_rate: errors must be positive");
    if (N1 < 2 || N2 <= N1) throw std::invalid_argument("convergence_rate: need 2 <= N1 < N2");
    if (N2 == 2 * N1) return convergence_rate(e1, e2, N1, kind);
    const double a = N1, b = N2;
    if (kind == MeshKind::Shishkin) return std::log(e1 / e2) / std::log((std::log(a) / a) / (std::log(b) / b));
    return std::log(e1 / e2) / std::log(b / a);
}

std::size_t StudyReport::column_index(Column c) const {
    const auto it = std::find(config.columns.begin(), config.columns.end(), c);
    if (it == config.columns.end()) throw std::out_of_range("StudyReport: column '" + to_string(c) + "' not computed");
    return static_cast<std::size_t>(it - config.columns.begin());
}

SolveResult solve_single(const StudyConfig& cfg, int N) {
    const ProblemData prob = model_problem(cfg.epsilon);
    auto mesh = build_stype_mesh(N, cfg.sigma, cfg.epsilon, prob.beta, cfg.mesh);
    auto space = build_space(mesh, cfg.p);
    const StabilizationParams delta = cfg.method == Method::Sdfem
                                          ? stabilization_parameters(*mesh, cfg.epsilon, cfg.C, cfg.delta21)
                                          : StabilizationParams::zero();
    const AssembledSystem sys = assemble_sdfem(space, prob, delta, cfg.quad_order);
    const std::vector<double> x = solve(sys.matrix, sys.rhs);
    const double res = relative_residual(sys.matrix, x, sys.rhs);
    return SolveResult{mesh, space, delta, sys.expand(x), res};
}

namespace {

std::vector<double> run_one(const StudyConfig& cfg, int N) {
    const SolveResult r = solve_single(cfg, N);
    const ProblemData prob = model_problem(cfg.epsilon);
    const ExactSolution& u = *prob.exact;
    const EnergyNorm norm = EnergyNorm::of(prob);
    const Function2D g = [&u](double x, double y) { return u(x, y); };
    std::shared_ptr<const MacroMesh> mm;
    auto macro = [&] {
        if (!mm) mm = build_macro_mesh(r.mesh);
        return mm;
    };

    std::vector<double> out;
    for (Column c : cfg.columns) {
        switch (c) {
            case Column::Convergence:
                out.push_back(energy_error_exact(r.solution, u, norm, cfg.norm_quad));
                break;
            case Column::SupercloseVec:
                out.push_back(energy_diff_fe(vec_interpolate(r.space, g), r.solution, norm, cfg.norm_quad));
                break;
            case Column::SupercloseGl:
                out.push_back(energy_diff_fe(gl_interpolate(r.space, g), r.solution, norm, cfg.norm_quad));
                break;
            case Column::SupercloseEqui:
                out.push_back(energy_diff_fe(equidistant_interpolate(r.space, g), r.solution, norm, cfg.norm_quad));
                break;
            case Column::PostVec:
                out.push_back(energy_error_exact(pvec_apply(macro(), r.solution), u, norm, cfg.norm_quad));
                break;
            case Column::PostGl:
                out.push_back(energy_error_exact(pgl_apply(macro(), r.solution), u, norm, cfg.norm_quad));
                break;
        }
    }
    return out;
}

}  // namespace

StudyReport run_study(const StudyConfig& cfg) {
    cfg.validate();
    StudyReport rep;
    rep.config = cfg;
    rep.N = cfg.N;
    std::sort(rep.N.begin(), rep.N.end());
    const std::size_t n = rep.N.size();
    rep.errors.assign(n, {});
    std::vector<std::exception_ptr> failures(n);

    auto task = [&](std::size_t k) {
        try {
            rep.errors[k] = run_one(cfg, rep.N[k]);
        } catch (...) {
            failures[k] = std::current_exception();
        }
    };
    const int workers = std::min<int>(cfg.threads, static_cast<int>(n));
    if (workers <= 1) {
        for (std::size_t k = 0; k < n; ++k) task(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < n; k = next++) task(k);
            });
        for (auto& t : pool) t.join();
    }

    for (std::size_t k = 0; k < n; ++k) {
        if (!failures[k]) continue;
        try {
            std::rethrow_exception(failures[k]);
        } catch (const SolverError& e) {
            throw StudyError(rep.N[k], true, e.what());
        } catch (const NumericalError& e) {
            throw StudyError(rep.N[k], true, e.what());
        } catch (const std::invalid_argument& e) {
            throw StudyError(rep.N[k], false, e.what());
        } catch (const std::out_of_range& e) {
            throw StudyError(rep.N[k], false, e.what());
        } catch (const std::exception& e) {
            throw StudyError(rep.N[k], true, e.what());
        }
    }

    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::vector<double> row;
        for (std::size_t c = 0; c < cfg.columns.size(); ++c)
            row.push_back(convergence_rate(rep.errors[k][c], rep.errors[k + 1][c], rep.N[k], rep.N[k + 1], cfg.mesh));
        rep.rates.push_back(std::move(row));
    }
    return rep;
}

void write_csv(std::ostream& os, const StudyReport& rep) {
    const auto& cols = rep.config.columns;
    os << "N";
    for (Column c : cols) os << ",err_" << to_string(c);
    for (Column c : cols) os << ",rate_" << to_string(c);
    os << '\n';
    for (std::size_t k = 0; k < rep.N.size(); ++k) {
        os << rep.N[k];
        for (double e : rep.errors[k]) os << ',' << sci6(e);
        for (std::size_t c = 0; c < cols.size(); ++c) {
            os << ',';
            if (k < rep.rates.size()) os << sci6(rep.rates[k][c]);
        }
        os << '\n';
    }
}

void write_text(std::ostream& os, const StudyReport& rep) {
    const StudyConfig& c = rep.config;
    os << "# mesh=" << to_string(c.mesh) << " p=" << c.p << " sigma=" << short_double(c.sigma)
       << " epsilon=" << short_double(c.epsilon) << " C=" << short_double(c.C) << " method=" << to_string(c.method);
    if (c.method == Method::Sdfem) os << " delta21=" << to_string(c.delta21);
    os << '\n';
    const std::string rate = c.mesh == MeshKind::Shishkin ? "rate_S" : "rate_B";
    os << std::setw(6) << "N";
    for (Column col : c.columns) os << "  " << std::setw(20) << to_string(col) << "  " << std::setw(6) << rate;
    os << '\n';
    char buf[32];
    bool extended = false;
    for (std::size_t k = 0; k < rep.N.size(); ++k) {
        const bool ext = rep.N[k] > kLargestRegularN;
        extended = extended || ext;
        os << std::setw(5) << rep.N[k] << (ext ? '*' : ' ');
        for (std::size_t j = 0; j < c.columns.size(); ++j) {
            os << "  " << std::setw(20) << sci6(rep.errors[k][j]) << "  ";
            if (k < rep.rates.size()) {
                std::snprintf(buf, sizeof buf, "%6.2f", rep.rates[k][j]);
                os << buf;
            } else {
                os << std::setw(6) << "";
            }
        }
        os << '\n';
    }
    if (extended) os << "# * extended N\n";
}

void write_report(std::ostream& os, const StudyReport& rep) {
    if (rep.config.format == OutputFormat::Csv) write_csv(os, rep);
    else write_text(os, rep);
}

}  // namespace sdfem
