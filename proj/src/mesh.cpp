#include "sdfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sdfem {

std::string to_string(MeshKind kind) {
    switch (kind) {
        case MeshKind::Shishkin: return "shishkin";
        case MeshKind::BakhvalovShishkin: return "bakhvalov-shishkin";
        case MeshKind::Custom: return "custom";
    }
    return "unknown";
}

MeshKind parse_mesh_kind(std::string_view name) {
    if (name == "shishkin" || name == "S") return MeshKind::Shishkin;
    if (name == "bakhvalov-shishkin" || name == "bs" || name == "B") return MeshKind::BakhvalovShishkin;
    throw std::invalid_argument("unknown mesh kind '" + std::string(name) +
                                "' (expected shishkin or bakhvalov-shishkin)");
}

std::string to_string(Subdomain s) {
    switch (s) {
        case Subdomain::Omega11: return "Omega11";
        case Subdomain::Omega12: return "Omega12";
        case Subdomain::Omega21: return "Omega21";
        case Subdomain::Omega22: return "Omega22";
    }
    return "unknown";
}

double MeshGeneratingFunction::psi(double t) const { return std::exp(-phi(t)); }

MeshGeneratingFunction MeshGeneratingFunction::shishkin(int N) {
    const double lnN = std::log(static_cast<double>(N));
    MeshGeneratingFunction gen;
    gen.kind = MeshKind::Shishkin;
    gen.N = N;
    gen.phi = [lnN](double t) { return 2.0 * t * lnN; };
    // psi(t) = N^{-2t}; |psi'| is largest at t = 0.
    gen.max_psi_prime = 2.0 * lnN;
    return gen;
}

MeshGeneratingFunction MeshGeneratingFunction::bakhvalov_shishkin(int N) {
    const double slope = 1.0 - 1.0 / N;
    MeshGeneratingFunction gen;
    gen.kind = MeshKind::BakhvalovShishkin;
    gen.N = N;
    gen.phi = [slope](double t) { return -std::log1p(-2.0 * t * slope); };
    // psi(t) = 1 - 2t(1 - 1/N) is linear.
    gen.max_psi_prime = 2.0 * slope;
    return gen;
}

MeshGeneratingFunction MeshGeneratingFunction::of_kind(MeshKind kind, int N) {
    switch (kind) {
        case MeshKind::Shishkin: return shishkin(N);
        case MeshKind::BakhvalovShishkin: return bakhvalov_shishkin(N);
        case MeshKind::Custom: break;
    }
    throw std::invalid_argument("of_kind: custom meshes need an explicit generating function");
}

// ---------------------------------------------------------------------------

TensorMesh::TensorMesh(int N, double sigma, double epsilon, double beta, MeshGeneratingFunction gen,
                       std::vector<double> xs, std::vector<double> ys)
    : N_(N),
      sigma_(sigma),
      epsilon_(epsilon),
      beta_(beta),
      lambda_x_(sigma * epsilon / beta * std::log(static_cast<double>(N))),
      lambda_y_(sigma * std::sqrt(epsilon) * std::log(static_cast<double>(N))),
      gen_(std::move(gen)),
      xs_(std::move(xs)),
      ys_(std::move(ys)) {}

double TensorMesh::hbar() const {
    double m = 0.0;
    for (int i = 1; i <= N_ / 2; ++i) m = std::max(m, h(i));
    return m;
}

double TensorMesh::kbar() const {
    double m = 0.0;
    for (int j = 1; j <= N_ / 4; ++j) m = std::max(m, k(j));
    return m;
}

double TensorMesh::h_min() const {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= N_ / 2; ++i) m = std::min(m, h(i));
    return m;
}

namespace {

int locate(const std::vector<double>& coords, double v, const char* axis) {
    if (!(v >= coords.front() && v <= coords.back())) {
        std::ostringstream msg;
        msg << "point " << axis << "=" << v << " outside [0,1]";
        throw std::out_of_range(msg.str());
    }
    const auto it = std::upper_bound(coords.begin(), coords.end(), v);
    const int n = static_cast<int>(coords.size()) - 1;
    return std::min(static_cast<int>(it - coords.begin()), n);
}

}  // namespace

int TensorMesh::locate_x(double x) const { return locate(xs_, x, "x"); }
int TensorMesh::locate_y(double y) const { return locate(ys_, y, "y"); }

double max_admissible_epsilon(int N, double sigma) {
    const double d = 4.0 * sigma * std::log(static_cast<double>(N));
    return 1.0 / (d * d);
}

std::shared_ptr<const TensorMesh> build_stype_mesh(int N, double sigma, double epsilon, double beta,
                                                   MeshKind kind) {
    return build_stype_mesh(N, sigma, epsilon, beta, MeshGeneratingFunction::of_kind(kind, N));
}

std::shared_ptr<const TensorMesh> build_stype_mesh(int N, double sigma, double epsilon, double beta,
                                                   MeshGeneratingFunction gen) {
    if (N < 8 || N % 8 != 0) {
        throw std::invalid_argument("build_stype_mesh: N must be >= 8 and divisible by 8, got " +
                                    std::to_string(N));
    }
    if (!(sigma > 0.0)) throw std::invalid_argument("build_stype_mesh: sigma must be positive");
    if (!(beta > 0.0)) throw std::invalid_argument("build_stype_mesh: beta must be positive");
    if (!(epsilon > 0.0)) throw std::invalid_argument("build_stype_mesh: epsilon must be positive");
    const double eps_max = max_admissible_epsilon(N, sigma);
    if (epsilon > eps_max) {
        std::ostringstream msg;
        msg << "build_stype_mesh: epsilon=" << epsilon << " exceeds 1/(4 sigma ln N)^2 = " << eps_max
            << " for N=" << N << ", sigma=" << sigma;
        throw std::invalid_argument(msg.str());
    }
    if (!gen.phi) throw std::invalid_argument("build_stype_mesh: missing generating function");
    if (gen.N != N) throw std::invalid_argument("build_stype_mesh: generating function built for another N");

    const double lnN = std::log(static_cast<double>(N));
    const double lambda_x = sigma * epsilon / beta * lnN;
    const double lambda_y = sigma * std::sqrt(epsilon) * lnN;
    if (lambda_x > 0.5) {
        throw std::invalid_argument("build_stype_mesh: lambda_x = " + std::to_string(lambda_x) + " > 1/2");
    }
    if (lambda_y > 0.25) {
        throw std::invalid_argument("build_stype_mesh: lambda_y = " + std::to_string(lambda_y) + " > 1/4");
    }
    if (std::abs(gen.phi(0.0)) > 1e-12 || std::abs(gen.phi(0.5) - lnN) > 1e-12 * lnN) {
        throw std::invalid_argument("build_stype_mesh: generating function must satisfy phi(0)=0, phi(1/2)=ln N");
    }

    std::vector<double> xs(N + 1), ys(N + 1);
    const double sx = sigma * epsilon / beta;
    for (int i = 0; i <= N / 2; ++i) xs[i] = sx * gen.phi(static_cast<double>(i) / N);
    for (int i = N / 2; i <= N; ++i) xs[i] = 1.0 - 2.0 * (1.0 - lambda_x) * (1.0 - static_cast<double>(i) / N);
    xs[N / 2] = lambda_x;
    xs[N] = 1.0;

    const double sy = sigma * std::sqrt(epsilon);
    for (int j = 0; j <= N / 4; ++j) ys[j] = sy * gen.phi(2.0 * j / N);
    for (int j = N / 4; j <= 3 * N / 4; ++j) ys[j] = (1.0 - 2.0 * lambda_y) * (2.0 * j / N - 1.0) + 0.5;
    for (int j = 3 * N / 4; j <= N; ++j) ys[j] = 1.0 - sy * gen.phi(2.0 - 2.0 * j / N);
    ys[N / 4] = lambda_y;
    ys[3 * N / 4] = 1.0 - lambda_y;
    ys[N] = 1.0;

    for (int i = 1; i <= N; ++i) {
        if (!(xs[i] > xs[i - 1]) || !(ys[i] > ys[i - 1])) {
            throw std::invalid_argument("build_stype_mesh: mesh points not strictly increasing "
                                        "(generating function not monotone?)");
        }
    }
    return std::make_shared<const TensorMesh>(N, sigma, epsilon, beta, std::move(gen), std::move(xs),
                                              std::move(ys));
}

std::shared_ptr<const TensorMesh> build_uniform_mesh(int N, double epsilon) {
    if (N < 8 || N % 8 != 0) {
        throw std::invalid_argument("build_uniform_mesh: N must be >= 8 and divisible by 8, got " +
                                    std::to_string(N));
    }
    if (!(epsilon > 0.0)) throw std::invalid_argument("build_uniform_mesh: epsilon must be positive");
    MeshGeneratingFunction gen;
    gen.kind = MeshKind::Custom;
    gen.N = N;
    gen.phi = [](double t) { return t; };
    std::vector<double> xs(N + 1);
    for (int i = 0; i <= N; ++i) xs[i] = static_cast<double>(i) / N;
    xs[N] = 1.0;
    return std::make_shared<const TensorMesh>(N, /*sigma=*/0.0, epsilon, /*beta=*/1.0, std::move(gen), xs, xs);
}

Subdomain classify_cell(const TensorMesh& mesh, int i, int j) {
    const int N = mesh.N();
    if (i < 1 || i > N || j < 1 || j > N) {
        throw std::out_of_range("classify_cell: cell (" + std::to_string(i) + "," + std::to_string(j) +
                                ") outside 1.." + std::to_string(N));
    }
    const double xc = 0.5 * (mesh.x(i - 1) + mesh.x(i));
    const double yc = 0.5 * (mesh.y(j - 1) + mesh.y(j));
    const bool x_fine = xc < mesh.lambda_x();
    const bool y_layer = yc < mesh.lambda_y() || yc > 1.0 - mesh.lambda_y();
    if (x_fine) return y_layer ? Subdomain::Omega22 : Subdomain::Omega12;
    return y_layer ? Subdomain::Omega21 : Subdomain::Omega11;
}

double mesh_ratio_q(const TensorMesh& mesh) {
    const int N = mesh.N();
    auto ratio = [](double a, double b) { return std::max(a, b) / std::min(a, b); };
    double q = 1.0;
    for (int i = 1; i <= N / 2 - 1; ++i) q = std::max(q, ratio(mesh.h(i), mesh.h(i + 1)));
    for (int j = 1; j <= N / 4 - 1; ++j) q = std::max(q, ratio(mesh.k(j), mesh.k(j + 1)));
    for (int j = 3 * N / 4 + 1; j <= N - 1; ++j) q = std::max(q, ratio(mesh.k(j), mesh.k(j + 1)));
    return q;
}

// ---------------------------------------------------------------------------

MacroMesh::MacroMesh(std::shared_ptr<const TensorMesh> mesh) : mesh_(std::move(mesh)) {
    if (!mesh_) throw std::invalid_argument("MacroMesh: null mesh");
    if (mesh_->N() % 8 != 0) throw std::invalid_argument("MacroMesh: N must be divisible by 8");
    const int n = mesh_->N() / 2;
    auto offset = [](double l, double m, double r) { return (2.0 * m - l - r) / (r - l); };
    ax_.resize(n);
    ay_.resize(n);
    for (int I = 1; I <= n; ++I) {
        ax_[I - 1] = offset(mesh_->x(2 * I - 2), mesh_->x(2 * I - 1), mesh_->x(2 * I));
        ay_[I - 1] = offset(mesh_->y(2 * I - 2), mesh_->y(2 * I - 1), mesh_->y(2 * I));
    }
}

std::shared_ptr<const MacroMesh> build_macro_mesh(std::shared_ptr<const TensorMesh> mesh) {
    return std::make_shared<const MacroMesh>(std::move(mesh));
}

void write_mesh(std::ostream& os, const TensorMesh& mesh) {
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << "# sdfem-mesh N=" << mesh.N() << " sigma=" << std::setprecision(17) << mesh.sigma()
       << " epsilon=" << mesh.epsilon() << " beta=" << mesh.beta() << " kind=" << to_string(mesh.kind())
       << "\n";
    os << "X\n";
    for (double x : mesh.xs()) os << x << "\n";
    os << "Y\n";
    for (double y : mesh.ys()) os << y << "\n";
    os.flags(flags);
    os.precision(prec);
}

}  // namespace sdfem
