#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace sdfem {

enum class MeshKind { Shishkin, BakhvalovShishkin, Custom };

std::string to_string(MeshKind kind);
MeshKind parse_mesh_kind(std::string_view name);

/// Mesh-generating function phi on [0, 1/2] with phi(0) = 0, phi(1/2) = ln N,
/// and the characterising function psi = exp(-phi).
struct MeshGeneratingFunction {
    MeshKind kind = MeshKind::Custom;
    int N = 0;
    std::function<double(double)> phi;
    double max_psi_prime = 0.0;  // max over [0,1/2] of |psi'|

    double psi(double t) const;

    static MeshGeneratingFunction shishkin(int N);
    static MeshGeneratingFunction bakhvalov_shishkin(int N);
    static MeshGeneratingFunction of_kind(MeshKind kind, int N);
};

enum class Subdomain { Omega11, Omega12, Omega21, Omega22 };

std::string to_string(Subdomain s);

/// Layer-adapted tensor-product mesh of S-type on the unit square.
///
/// Cells are addressed with 1-based indices: cell (i, j) is
/// [x_{i-1}, x_i] x [y_{j-1}, y_j], i, j = 1..N.
class TensorMesh {
public:
    TensorMesh(int N, double sigma, double epsilon, double beta, MeshGeneratingFunction gen,
               std::vector<double> xs, std::vector<double> ys);

    int N() const { return N_; }
    double sigma() const { return sigma_; }
    double epsilon() const { return epsilon_; }
    double beta() const { return beta_; }
    double lambda_x() const { return lambda_x_; }
    double lambda_y() const { return lambda_y_; }
    MeshKind kind() const { return gen_.kind; }
    double max_psi_prime() const { return gen_.max_psi_prime; }
    const MeshGeneratingFunction& generator() const { return gen_; }

    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }
    double x(int i) const { return xs_[i]; }
    double y(int j) const { return ys_[j]; }
    double h(int i) const { return xs_[i] - xs_[i - 1]; }
    double k(int j) const { return ys_[j] - ys_[j - 1]; }

    /// max h_i over the fine x-region, max k_j over the lower fine y-region,
    /// min h_i over the fine x-region.
    double hbar() const;
    double kbar() const;
    double h_min() const;

    /// 1-based cell containing x; points on interior gridlines go to the right/upper cell.
    int locate_x(double x) const;
    int locate_y(double y) const;

private:
    int N_;
    double sigma_, epsilon_, beta_;
    double lambda_x_, lambda_y_;
    MeshGeneratingFunction gen_;
    std::vector<double> xs_, ys_;
};

/// Largest epsilon admitted for the given N and sigma: 1 / (4 sigma ln N)^2.
double max_admissible_epsilon(int N, double sigma);

std::shared_ptr<const TensorMesh> build_stype_mesh(int N, double sigma, double epsilon, double beta,
                                                   MeshKind kind);
std::shared_ptr<const TensorMesh> build_stype_mesh(int N, double sigma, double epsilon, double beta,
                                                   MeshGeneratingFunction gen);

/// Uniform N x N mesh (kind Custom, transition parameters 0, so every cell is in Omega11).
/// Used for non-singularly-perturbed checks where the S-type admissibility bound does not hold.
std::shared_ptr<const TensorMesh> build_uniform_mesh(int N, double epsilon = 1.0);

/// Subdomain of cell (i, j), decided on the cell centre.
Subdomain classify_cell(const TensorMesh& mesh, int i, int j);

/// Mesh-ratio constant q over the fine index ranges.
double mesh_ratio_q(const TensorMesh& mesh);

/// Macro mesh pairing fine cells (2I-1, 2I) in each direction, I = 1..N/2.
class MacroMesh {
public:
    explicit MacroMesh(std::shared_ptr<const TensorMesh> mesh);

    const TensorMesh& fine() const { return *mesh_; }
    const std::shared_ptr<const TensorMesh>& fine_ptr() const { return mesh_; }
    int n() const { return mesh_->N() / 2; }
    int size() const { return n() * n(); }

    /// Offset of the interior node x_{2I-1} in the reference interval of
    /// macro column I (1-based), likewise for rows.
    double a_x(int I) const { return ax_[I - 1]; }
    double a_y(int J) const { return ay_[J - 1]; }

    double x_left(int I) const { return mesh_->x(2 * I - 2); }
    double x_right(int I) const { return mesh_->x(2 * I); }
    double y_bottom(int J) const { return mesh_->y(2 * J - 2); }
    double y_top(int J) const { return mesh_->y(2 * J); }

private:
    std::shared_ptr<const TensorMesh> mesh_;
    std::vector<double> ax_, ay_;
};

std::shared_ptr<const MacroMesh> build_macro_mesh(std::shared_ptr<const TensorMesh> mesh);

/// Plain-text dump: header line, then sections "X" and "Y", one coordinate per line.
void write_mesh(std::ostream& os, const TensorMesh& mesh);

}  // namespace sdfem
