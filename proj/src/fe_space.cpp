#include "sdfem/fe_space.hpp"

#include <array>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sdfem {

FESpace::FESpace(std::shared_ptr<const TensorMesh> mesh, int p) : mesh_(std::move(mesh)), p_(p) {
    if (!mesh_) throw std::invalid_argument("FESpace: null mesh");
    if (p < 2) throw std::invalid_argument("FESpace: degree p must be >= 2, got " + std::to_string(p));
    gl_ = gauss_lobatto_nodes(p);
    basis_ = LagrangeBasis1D(gl_.nodes);

    const int N = mesh_->N();
    const int n = p * N + 1;
    xnodes_.resize(n);
    ynodes_.resize(n);
    for (int i = 1; i <= N; ++i) {
        for (int a = 0; a <= p; ++a) {
            xnodes_[node_index(i, a)] = map_x(i, gl_.nodes[a]);
            ynodes_[node_index(i, a)] = map_y(i, gl_.nodes[a]);
        }
    }
    // Exact mesh vertices, independent of the rounding in map_x.
    for (int i = 0; i <= N; ++i) {
        xnodes_[i * p] = mesh_->x(i);
        ynodes_[i * p] = mesh_->y(i);
    }

    boundary_.assign(static_cast<std::size_t>(n) * n, 0);
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            if (ix == 0 || iy == 0 || ix == n - 1 || iy == n - 1) boundary_[dof(ix, iy)] = 1;
        }
    }
}

void FESpace::cell_dofs(int i, int j, std::span<int> out) const {
    for (int b = 0; b <= p_; ++b)
        for (int a = 0; a <= p_; ++a) out[a + (p_ + 1) * b] = cell_dof(i, j, a, b);
}

int FESpace::n_boundary_dofs() const {
    int count = 0;
    for (char c : boundary_) count += c;
    return count;
}

std::shared_ptr<const FESpace> build_space(std::shared_ptr<const TensorMesh> mesh, int p) {
    return std::make_shared<const FESpace>(std::move(mesh), p);
}

// ---------------------------------------------------------------------------

FEFunction::FEFunction(std::shared_ptr<const FESpace> space)
    : space_(std::move(space)), coeffs_(space_->n_dofs(), 0.0) {}

FEFunction::FEFunction(std::shared_ptr<const FESpace> space, std::vector<double> coefficients)
    : space_(std::move(space)), coeffs_(std::move(coefficients)) {
    if (static_cast<int>(coeffs_.size()) != space_->n_dofs()) {
        throw std::invalid_argument("FEFunction: coefficient vector has wrong length");
    }
}

PointValue FEFunction::eval_local(int i, int j, double s, double t) const {
    const FESpace& V = *space_;
    const int n = V.degree() + 1;
    std::array<double, 32> vx{}, dx{}, ddx{}, vy{}, dy{}, ddy{};
    if (n > 32) throw std::invalid_argument("eval_local: degree too large");
    V.basis().derivatives(s, std::span(vx).first(n), std::span(dx).first(n), std::span(ddx).first(n));
    V.basis().derivatives(t, std::span(vy).first(n), std::span(dy).first(n), std::span(ddy).first(n));

    PointValue r;
    for (int b = 0; b < n; ++b) {
        for (int a = 0; a < n; ++a) {
            const double c = coeffs_[V.cell_dof(i, j, a, b)];
            r.value += c * vx[a] * vy[b];
            r.dx += c * dx[a] * vy[b];
            r.dy += c * vx[a] * dy[b];
        }
    }
    r.dx *= 2.0 / V.mesh().h(i);
    r.dy *= 2.0 / V.mesh().k(j);
    return r;
}

PointValue FEFunction::eval(double x, double y) const {
    const TensorMesh& mesh = space_->mesh();
    const int i = mesh.locate_x(x);
    const int j = mesh.locate_y(y);
    const double s = 2.0 * (x - mesh.x(i - 1)) / mesh.h(i) - 1.0;
    const double t = 2.0 * (y - mesh.y(j - 1)) / mesh.k(j) - 1.0;
    return eval_local(i, j, s, t);
}

PointValue eval_fe(const FEFunction& u, double x, double y) { return u.eval(x, y); }

void write_fe_function(std::ostream& os, const FEFunction& u) {
    const FESpace& V = u.space();
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << "# sdfem-fe N=" << V.mesh().N() << " p=" << V.degree() << " kind=" << to_string(V.mesh().kind())
       << " ndofs=" << V.n_dofs() << "\n";
    os << std::setprecision(17);
    for (double c : u.coefficients()) os << c << "\n";
    os.flags(flags);
    os.precision(prec);
}

FEFunction read_fe_function(std::istream& is, std::shared_ptr<const FESpace> space) {
    std::string header;
    if (!std::getline(is, header) || header.rfind("# sdfem-fe", 0) != 0) {
        throw std::invalid_argument("read_fe_function: missing '# sdfem-fe' header");
    }
    std::ostringstream expect;
    expect << "N=" << space->mesh().N() << " p=" << space->degree();
    if (header.find(expect.str()) == std::string::npos) {
        throw std::invalid_argument("read_fe_function: header '" + header + "' does not match space (" +
                                    expect.str() + ")");
    }
    std::vector<double> coeffs;
    coeffs.reserve(space->n_dofs());
    double v = 0.0;
    while (is >> v) coeffs.push_back(v);
    return FEFunction(std::move(space), std::move(coeffs));
}

}  // namespace sdfem
