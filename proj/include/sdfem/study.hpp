#pragma once

#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sdfem/assembly.hpp"
#include "sdfem/fe_space.hpp"
#include "sdfem/mesh.hpp"

namespace sdfem {

enum class Column { Convergence, SupercloseVec, SupercloseGl, SupercloseEqui, PostVec, PostGl };
enum class Method { Galerkin, Sdfem };
enum class OutputFormat { Csv, Text };

std::string to_string(Column c);
std::string to_string(Method m);
std::string to_string(OutputFormat f);
Column parse_column(std::string_view name);
Method parse_method(std::string_view name);
OutputFormat parse_format(std::string_view name);

std::vector<Column> all_columns();

/// Largest N of the default sweep; larger values are reported as "extended".
inline constexpr int kLargestRegularN = 64;

struct StudyConfig {
    MeshKind mesh = MeshKind::Shishkin;
    int p = 3;
    double sigma = 5.0;
    double epsilon = 1e-6;
    double C = 1.0;
    std::vector<int> N{8, 16, 32, 64};
    Method method = Method::Sdfem;
    Delta21Rule delta21 = Delta21Rule::UpperBound;
    std::vector<Column> columns{Column::Convergence, Column::SupercloseVec, Column::SupercloseGl,
                                Column::SupercloseEqui};
    int quad_order = 0;  // assembly points per direction, 0 = p + 2
    int norm_quad = 0;   // error-norm points per direction, 0 = p + 3
    OutputFormat format = OutputFormat::Text;
    std::string output;  // empty = standard output
    int threads = 1;

    /// Throws ConfigError naming the offending key.
    void validate() const;
    bool operator==(const StudyConfig&) const = default;
};

/// Sets one field from its textual form; `key` is the long flag name without dashes.
/// Throws ConfigError naming the key on unknown keys or malformed values.
void apply_setting(StudyConfig& cfg, std::string_view key, std::string_view value);

/// `key = value` lines; '#' starts a comment. Keys are the long flag names.
void read_config(std::istream& is, StudyConfig& cfg);
void read_config_file(const std::string& path, StudyConfig& cfg);
void write_config(std::ostream& os, const StudyConfig& cfg);

/// Comma-separated integer list, e.g. "8,16,32".
std::vector<int> parse_int_list(std::string_view text, std::string_view key);

/// Rate between consecutive doublings: Shishkin ln(eN/e2N)/ln(2 ln N/ln 2N), otherwise ln(eN/e2N)/ln 2.
double convergence_rate(double eN, double e2N, int N, MeshKind kind);
/// Same model for arbitrary N1 < N2: e ~ (ln N/N)^r on Shishkin meshes, e ~ N^{-r} otherwise.
double convergence_rate(double e1, double e2, int N1, int N2, MeshKind kind);

/// Failure while running one N of a study.
class StudyError : public std::runtime_error {
public:
    StudyError(int N, bool solver_failure, const std::string& what)
        : std::runtime_error("N=" + std::to_string(N) + ": " + what), N_(N), solver_failure_(solver_failure) {}
    int N() const noexcept { return N_; }
    bool solver_failure() const noexcept { return solver_failure_; }

private:
    int N_;
    bool solver_failure_;
};

struct StudyReport {
    StudyConfig config;
    std::vector<int> N;
    std::vector<std::vector<double>> errors;  // [row][column]
    std::vector<std::vector<double>> rates;   // [row][column], rows 0..N.size()-2

    std::size_t column_index(Column c) const;
    double error(std::size_t row, Column c) const { return errors.at(row).at(column_index(c)); }
    double rate(std::size_t row, Column c) const { return rates.at(row).at(column_index(c)); }
};

/// Everything produced by one discrete solve.
struct SolveResult {
    std::shared_ptr<const TensorMesh> mesh;
    std::shared_ptr<const FESpace> space;
    StabilizationParams delta;
    FEFunction solution;
    double residual = 0.0;
};

SolveResult solve_single(const StudyConfig& cfg, int N);

/// Runs every N (concurrently when cfg.threads > 1), then assembles rows sorted by N.
StudyReport run_study(const StudyConfig& cfg);

void write_csv(std::ostream& os, const StudyReport& report);
void write_text(std::ostream& os, const StudyReport& report);
void write_report(std::ostream& os, const StudyReport& report);

}  // namespace sdfem
