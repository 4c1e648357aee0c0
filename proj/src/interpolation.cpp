#include "sdfem/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sdfem/error.hpp"

namespace sdfem {

namespace {

Eigen::MatrixXd to_matrix(const std::vector<double>& row_major, int rows, int cols) {
    Eigen::MatrixXd M(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) M(r, c) = row_major[static_cast<std::size_t>(r) * cols + c];
    return M;
}

// Sample g on the tensor grid xs x ys.
Eigen::MatrixXd sample(const Function2D& g, const std::vector<double>& xs, const std::vector<double>& ys) {
    Eigen::MatrixXd G(xs.size(), ys.size());
    for (std::size_t t = 0; t < ys.size(); ++t)
        for (std::size_t s = 0; s < xs.size(); ++s) G(s, t) = g(xs[s], ys[t]);
    return G;
}

// Physical images of reference points in cell i (x) or j (y); the endpoints are the exact mesh vertices
// so neighbouring cells see bitwise identical edge data.
std::vector<double> mapped(const std::vector<double>& ref, double left, double right) {
    std::vector<double> out(ref.size());
    for (std::size_t k = 0; k < ref.size(); ++k) {
        if (ref[k] == -1.0) out[k] = left;
        else if (ref[k] == 1.0) out[k] = right;
        else out[k] = left + 0.5 * (ref[k] + 1.0) * (right - left);
    }
    return out;
}

void scatter(FEFunction& u, int i, int j, const Eigen::MatrixXd& C) {
    const FESpace& V = u.space();
    const int n = V.degree() + 1;
    for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a) u.coefficients()[V.cell_dof(i, j, a, b)] = C(a, b);
}

}  // namespace

VertexEdgeCellDofs::VertexEdgeCellDofs(int degree, int moment_points) : p_(degree) {
    if (p_ < 1) throw std::invalid_argument("VertexEdgeCellDofs: degree must be >= 1");
    if (moment_points == 0) moment_points = p_ + 3;
    if (moment_points < p_) {
        throw std::invalid_argument("VertexEdgeCellDofs: need at least " + std::to_string(p_) + " moment points");
    }
    const NodeSet1D rule = gauss_legendre_rule(moment_points);
    samples_.reserve(moment_points + 2);
    samples_.push_back(-1.0);
    samples_.insert(samples_.end(), rule.nodes.begin(), rule.nodes.end());
    samples_.push_back(1.0);
    const int ns = static_cast<int>(samples_.size());

    W_ = Eigen::MatrixXd::Zero(p_ + 1, ns);
    W_(0, 0) = 1.0;
    W_(p_, ns - 1) = 1.0;
    for (int k = 0; k + 1 < p_; ++k)
        for (int q = 0; q < moment_points; ++q) W_(k + 1, q + 1) = rule.weights[q] * legendre_eval(k, rule.nodes[q]).value;

    const LagrangeBasis1D basis(gauss_lobatto_nodes(p_).nodes);
    const Eigen::MatrixXd B = to_matrix(basis.evaluation_matrix(samples_), ns, p_ + 1);
    F_ = W_ * B;

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(F_);
    Finv_ = lu.inverse();
    if (!Finv_.allFinite() || (F_ * Finv_ - Eigen::MatrixXd::Identity(p_ + 1, p_ + 1)).cwiseAbs().maxCoeff() > 1e-8) {
        throw NumericalError("VertexEdgeCellDofs: singular local functional matrix");
    }
    // Rows for the point functionals are unit vectors in exact arithmetic; pin them so that
    // coefficients on shared vertices and edges depend only on that edge's data.
    Finv_.row(0).setZero();
    Finv_(0, 0) = 1.0;
    Finv_.row(p_).setZero();
    Finv_(p_, p_) = 1.0;
}

Eigen::MatrixXd VertexEdgeCellDofs::local_matrix() const {
    const int n = p_ + 1;
    Eigen::MatrixXd K(n * n, n * n);
    // functional (alpha, beta) at row alpha + n beta, basis (a, b) at column a + n b
    for (int beta = 0; beta < n; ++beta)
        for (int alpha = 0; alpha < n; ++alpha)
            for (int b = 0; b < n; ++b)
                for (int a = 0; a < n; ++a) K(alpha + n * beta, a + n * b) = F_(alpha, a) * F_(beta, b);
    return K;
}

Eigen::MatrixXd VertexEdgeCellDofs::functionals(const Eigen::MatrixXd& G) const {
    return W_ * G * W_.transpose();
}

Eigen::MatrixXd VertexEdgeCellDofs::coefficients(const Eigen::MatrixXd& phi) const {
    return Finv_ * phi * Finv_.transpose();
}

FEFunction gl_interpolate(std::shared_ptr<const FESpace> space, const Function2D& g) {
    FEFunction u(space);
    const auto xs = space->x_nodes();
    const auto ys = space->y_nodes();
    const int n = space->nodes_per_direction();
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) u.coefficients()[space->dof(ix, iy)] = g(xs[ix], ys[iy]);
    return u;
}

FEFunction vec_interpolate(std::shared_ptr<const FESpace> space, const Function2D& g, int moment_points) {
    const VertexEdgeCellDofs dofs(space->degree(), moment_points);
    const TensorMesh& mesh = space->mesh();
    const int N = mesh.N();
    std::vector<std::vector<double>> xs(N + 1), ys(N + 1);
    for (int i = 1; i <= N; ++i) {
        xs[i] = mapped(dofs.samples(), mesh.x(i - 1), mesh.x(i));
        ys[i] = mapped(dofs.samples(), mesh.y(i - 1), mesh.y(i));
    }
    FEFunction u(space);
    for (int j = 1; j <= N; ++j)
        for (int i = 1; i <= N; ++i) scatter(u, i, j, dofs.coefficients(dofs.functionals(sample(g, xs[i], ys[j]))));
    return u;
}

FEFunction equidistant_interpolate(std::shared_ptr<const FESpace> space, const Function2D& g) {
    const int p = space->degree();
    const std::vector<double> eq = equidistant_nodes(p).nodes;
    const LagrangeBasis1D eq_basis(eq);
    // E(a, m) = l^eq_m(t^GL_a)
    const Eigen::MatrixXd E = to_matrix(eq_basis.evaluation_matrix(space->gauss_lobatto().nodes), p + 1, p + 1);
    const TensorMesh& mesh = space->mesh();
    const int N = mesh.N();
    std::vector<std::vector<double>> xs(N + 1), ys(N + 1);
    for (int i = 1; i <= N; ++i) {
        xs[i] = mapped(eq, mesh.x(i - 1), mesh.x(i));
        ys[i] = mapped(eq, mesh.y(i - 1), mesh.y(i));
    }
    FEFunction u(space);
    for (int j = 1; j <= N; ++j)
        for (int i = 1; i <= N; ++i) scatter(u, i, j, E * sample(g, xs[i], ys[j]) * E.transpose());
    return u;
}

LemmaDiscrepancy verify_lemma_identity(int p, const Function2D& g, double t_star) {
    if (p < 2) throw std::invalid_argument("verify_lemma_identity: p must be >= 2");
    const std::vector<double> gl = gauss_lobatto_nodes(p).nodes;
    if (!(std::abs(t_star) < 1.0)) throw std::invalid_argument("verify_lemma_identity: t_star must lie in (-1,1)");
    for (double t : gl) {
        if (std::abs(t - t_star) < 1e-8) {
            throw std::invalid_argument("verify_lemma_identity: t_star coincides with a Gauss-Lobatto node");
        }
    }

    // One moment rule for both operators keeps the discrete identities exact up to rounding.
    const int nq = p + 4;
    const VertexEdgeCellDofs vec_p(p, nq);
    const VertexEdgeCellDofs vec_p1(p + 1, nq);
    const LagrangeBasis1D basis_p(gl);
    const LagrangeBasis1D basis_p1(gauss_lobatto_nodes(p + 1).nodes);

    std::vector<double> grid(20);
    for (int k = 0; k < 20; ++k) grid[k] = -1.0 + 2.0 * k / 19.0;
    const Eigen::MatrixXd Egrid = to_matrix(basis_p.evaluation_matrix(grid), 20, p + 1);
    auto grid_max = [&](const Eigen::MatrixXd& C) { return (Egrid * C * Egrid.transpose()).cwiseAbs().maxCoeff(); };

    const std::vector<double>& s = vec_p.samples();  // identical for both operators
    const Eigen::MatrixXd G = sample(g, s, s);

    LemmaDiscrepancy d;
    {
        const Eigen::MatrixXd Cp = vec_p.coefficients(vec_p.functionals(G));
        const Eigen::MatrixXd Cp1 = vec_p1.coefficients(vec_p1.functionals(G));
        const Eigen::MatrixXd M = to_matrix(basis_p1.evaluation_matrix(gl), p + 1, p + 2);
        d.vec_vs_gl_of_vec = grid_max(Cp - M * Cp1 * M.transpose());
    }
    {
        std::vector<double> star = gl;
        star.push_back(t_star);
        std::sort(star.begin(), star.end());
        const LagrangeBasis1D basis_star(star);
        const Eigen::MatrixXd Gs = sample(g, star, star);
        const Eigen::MatrixXd Ms = to_matrix(basis_star.evaluation_matrix(s), static_cast<int>(s.size()), p + 2);
        const Eigen::MatrixXd C_vec_star = vec_p.coefficients(vec_p.functionals(Ms * Gs * Ms.transpose()));
        const Eigen::MatrixXd C_gl = sample(g, gl, gl);
        d.gl_vs_vec_of_star = grid_max(C_gl - C_vec_star);
    }
    return d;
}

}  // namespace sdfem
