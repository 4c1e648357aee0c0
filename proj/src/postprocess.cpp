#include "sdfem/postprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

#include "sdfem/error.hpp"

namespace sdfem {

// ---------------------------------------------------------------------------
// MacroFEFunction

MacroFEFunction::MacroFEFunction(std::shared_ptr<const MacroMesh> mesh, int degree)
    : mesh_(std::move(mesh)), q_(degree) {
    if (!mesh_) throw std::invalid_argument("MacroFEFunction: null macro mesh");
    if (q_ < 1) throw std::invalid_argument("MacroFEFunction: degree must be >= 1");
    basis_ = LagrangeBasis1D(gauss_lobatto_nodes(q_).nodes);
    coeffs_.assign(static_cast<std::size_t>(mesh_->size()) * (q_ + 1) * (q_ + 1), 0.0);
}

double& MacroFEFunction::coefficient(int I, int J, int a, int b) {
    const int n = q_ + 1;
    return coeffs_[static_cast<std::size_t>((J - 1) * mesh_->n() + (I - 1)) * n * n + a + n * b];
}

double MacroFEFunction::coefficient(int I, int J, int a, int b) const {
    return const_cast<MacroFEFunction*>(this)->coefficient(I, J, a, b);
}

void MacroFEFunction::set_block(int I, int J, const Eigen::MatrixXd& C) {
    const int n = q_ + 1;
    if (C.rows() != n || C.cols() != n) throw std::invalid_argument("MacroFEFunction::set_block: wrong block size");
    for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a) coefficient(I, J, a, b) = C(a, b);
}

PointValue MacroFEFunction::eval_in_macro(int I, int J, double s, double t) const {
    const int n = q_ + 1;
    std::array<double, 32> vx{}, dx{}, ddx{}, vy{}, dy{}, ddy{};
    if (n > 32) throw std::invalid_argument("MacroFEFunction: degree too large");
    basis_.derivatives(s, std::span(vx).first(n), std::span(dx).first(n), std::span(ddx).first(n));
    basis_.derivatives(t, std::span(vy).first(n), std::span(dy).first(n), std::span(ddy).first(n));
    PointValue r;
    for (int b = 0; b < n; ++b) {
        for (int a = 0; a < n; ++a) {
            const double c = coefficient(I, J, a, b);
            r.value += c * vx[a] * vy[b];
            r.dx += c * dx[a] * vy[b];
            r.dy += c * vx[a] * dy[b];
        }
    }
    r.dx *= 2.0 / (mesh_->x_right(I) - mesh_->x_left(I));
    r.dy *= 2.0 / (mesh_->y_top(J) - mesh_->y_bottom(J));
    return r;
}

PointValue MacroFEFunction::eval(double x, double y) const {
    const TensorMesh& fine = mesh_->fine();
    const int I = (fine.locate_x(x) + 1) / 2;
    const int J = (fine.locate_y(y) + 1) / 2;
    const double s = 2.0 * (x - mesh_->x_left(I)) / (mesh_->x_right(I) - mesh_->x_left(I)) - 1.0;
    const double t = 2.0 * (y - mesh_->y_bottom(J)) / (mesh_->y_top(J) - mesh_->y_bottom(J)) - 1.0;
    return eval_in_macro(I, J, s, t);
}

double MacroFEFunction::continuity_defect(int n) const {
    const int m = mesh_->n();
    double defect = 0.0;
    for (int k = 0; k < n; ++k) {
        const double t = -1.0 + 2.0 * k / std::max(n - 1, 1);
        for (int J = 1; J <= m; ++J)
            for (int I = 1; I < m; ++I)
                defect = std::max(defect, std::abs(eval_in_macro(I, J, 1.0, t).value -
                                                   eval_in_macro(I + 1, J, -1.0, t).value));
        for (int J = 1; J < m; ++J)
            for (int I = 1; I <= m; ++I)
                defect = std::max(defect, std::abs(eval_in_macro(I, J, t, 1.0).value -
                                                   eval_in_macro(I, J + 1, t, -1.0).value));
    }
    return defect;
}

// ---------------------------------------------------------------------------
// MacroReferenceOp1D

double macro_coordinate(double a, int sub, double t) {
    if (sub == 0) {
        if (t == -1.0) return -1.0;
        if (t == 1.0) return a;
        return -1.0 + 0.5 * (t + 1.0) * (a + 1.0);
    }
    if (t == -1.0) return a;
    if (t == 1.0) return 1.0;
    return a + 0.5 * (t + 1.0) * (1.0 - a);
}

void check_macro_offset(double a) {
    if (!(std::abs(a) < 1.0 - 1e-12)) {
        throw std::invalid_argument("macro interior node offset a = " + std::to_string(a) +
                                    " is degenerate (|a| >= 1 - 1e-12)");
    }
}

void MacroReferenceOp1D::add_sample(int sub, double t) {
    sub_.push_back(sub);
    t_.push_back(t);
    s_.push_back(macro_coordinate(a_, sub, t));
}

void MacroReferenceOp1D::finalize() {
    const int n = p_ + 2;
    const LagrangeBasis1D basis(gauss_lobatto_nodes(p_ + 1).nodes);
    const std::vector<double> B = basis.evaluation_matrix(s_);
    Eigen::MatrixXd Bm(n_samples(), n);
    for (int k = 0; k < n_samples(); ++k)
        for (int c = 0; c < n; ++c) Bm(k, c) = B[static_cast<std::size_t>(k) * n + c];
    F_ = W_ * Bm;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(F_);
    Finv_ = lu.inverse();
    if (!Finv_.allFinite() || (F_ * Finv_ - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-8) {
        throw NumericalError("MacroReferenceOp1D: singular functional matrix (a = " + std::to_string(a_) + ")");
    }
    // Functional 0 is the value at -1 and the last one the value at +1; pin the matching rows
    // so macro-edge coefficients depend on edge data only.
    Finv_.row(0).setZero();
    Finv_(0, 0) = 1.0;
    Finv_.row(n - 1).setZero();
    Finv_(n - 1, n - 1) = 1.0;
}

MacroReferenceOp1D MacroReferenceOp1D::gauss_lobatto(int p, double a) {
    if (p < 1) throw std::invalid_argument("MacroReferenceOp1D: p must be >= 1");
    check_macro_offset(a);
    MacroReferenceOp1D op(p, a);
    const std::vector<double> gl = gauss_lobatto_nodes(p).nodes;
    // union index k: 0..p in the left cell, p..2p in the right one
    auto add_union = [&](int k) {
        if (k < p) op.add_sample(0, gl[k]);
        else if (k == p) op.add_sample(0, 1.0);
        else op.add_sample(1, gl[k - p]);
    };
    add_union(0);
    for (int k = 1; k < 2 * p; k += 2) add_union(k);
    add_union(2 * p);
    op.W_ = Eigen::MatrixXd::Identity(p + 2, p + 2);
    op.finalize();
    return op;
}

MacroReferenceOp1D MacroReferenceOp1D::vec(int p, double a, int points) {
    if (p < 2) throw std::invalid_argument("MacroReferenceOp1D::vec: p must be >= 2");
    check_macro_offset(a);
    if (points < p + 1) {
        throw std::invalid_argument("MacroReferenceOp1D::vec: need at least p+1 quadrature points per subinterval");
    }
    MacroReferenceOp1D op(p, a);
    op.add_sample(0, -1.0);  // s = -1
    op.add_sample(0, 1.0);   // s = a
    op.add_sample(1, 1.0);   // s = 1
    const NodeSet1D rule = gauss_legendre_rule(points);
    for (int q = 0; q < points; ++q) op.add_sample(0, rule.nodes[q]);
    for (int q = 0; q < points; ++q) op.add_sample(1, rule.nodes[q]);

    const int n = p + 2;
    const double jl = 0.5 * (a + 1.0), jr = 0.5 * (1.0 - a);
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, op.n_samples());
    W(0, 0) = 1.0;
    W(n - 1, 2) = 1.0;
    W(1, 1) = 1.0;
    const int left0 = 3, right0 = 3 + points;
    int row = 2;
    if (p == 2) {
        // The full integral together with the three values is singular at a = 0
        // (s^3 - s is annihilated), so p = 2 matches the difference of the two
        // subinterval integrals instead. Nonsingular for every a in (-1, 1).
        for (int q = 0; q < points; ++q) {
            W(row, left0 + q) = jl * rule.weights[q];
            W(row, right0 + q) = -jr * rule.weights[q];
        }
        ++row;
    } else {
        for (int q = 0; q < points; ++q) W(row, left0 + q) = jl * rule.weights[q];
        ++row;
        for (int q = 0; q < points; ++q) W(row, right0 + q) = jr * rule.weights[q];
        ++row;
        // of the moments against P_{p-2} minus constants only degrees 1..p-3 are kept:
        // dropping degree p-2 keeps the system nonsingular on symmetric macros (a = 0)
        for (int k = 1; k <= p - 3; ++k, ++row) {
            for (int q = 0; q < points; ++q) {
                W(row, left0 + q) = jl * rule.weights[q] * legendre_eval(k, op.s_[left0 + q]).value;
                W(row, right0 + q) = jr * rule.weights[q] * legendre_eval(k, op.s_[right0 + q]).value;
            }
        }
    }
    if (row != n - 1) throw std::logic_error("MacroReferenceOp1D::vec: functional count mismatch");
    op.W_ = std::move(W);
    op.finalize();
    return op;
}

Eigen::VectorXd MacroReferenceOp1D::apply(const std::function<double(double)>& f) const {
    Eigen::VectorXd v(n_samples());
    for (int k = 0; k < n_samples(); ++k) v(k) = f(s_[k]);
    return Finv_ * (W_ * v);
}

Eigen::MatrixXd MacroReferenceOp1D::apply2d(const MacroReferenceOp1D& ox, const MacroReferenceOp1D& oy,
                                            const Eigen::MatrixXd& G) {
    const Eigen::MatrixXd phi = ox.W_ * G * oy.W_.transpose();
    return ox.Finv_ * phi * oy.Finv_.transpose();
}

// ---------------------------------------------------------------------------
// Operators

namespace {

struct OpSet {
    std::vector<MacroReferenceOp1D> x, y;  // per macro column / row
};

template <class Make>
OpSet build_ops(const MacroMesh& mm, Make make) {
    OpSet ops;
    ops.x.reserve(mm.n());
    ops.y.reserve(mm.n());
    for (int I = 1; I <= mm.n(); ++I) ops.x.push_back(make(mm.a_x(I)));
    for (int J = 1; J <= mm.n(); ++J) ops.y.push_back(make(mm.a_y(J)));
    return ops;
}

// Fine-basis rows for the samples of op, split by sub-cell (rows of the other sub-cell are zero).
std::array<Eigen::MatrixXd, 2> fine_tables(const MacroReferenceOp1D& op, const LagrangeBasis1D& basis) {
    const int n = basis.size();
    std::array<Eigen::MatrixXd, 2> B{Eigen::MatrixXd::Zero(op.n_samples(), n),
                                     Eigen::MatrixXd::Zero(op.n_samples(), n)};
    std::vector<double> v(n);
    for (int k = 0; k < op.n_samples(); ++k) {
        basis.values(op.t(k), v);
        for (int a = 0; a < n; ++a) B[op.sub(k)](k, a) = v[a];
    }
    return B;
}

void check_mesh(const MacroMesh& mm, const FEFunction& u) {
    const TensorMesh& a = mm.fine();
    const TensorMesh& b = u.space().mesh();
    if (&a != &b && (a.xs() != b.xs() || a.ys() != b.ys())) {
        throw std::invalid_argument("postprocess: macro mesh was not built from the function's mesh");
    }
}

MacroFEFunction apply_fe(std::shared_ptr<const MacroMesh> mm, const FEFunction& u, const OpSet& ops) {
    check_mesh(*mm, u);
    const FESpace& V = u.space();
    const int p = V.degree();
    const auto Bx = fine_tables(ops.x.front(), V.basis());
    const auto By = fine_tables(ops.y.front(), V.basis());
    MacroFEFunction P(mm, p + 1);
    Eigen::MatrixXd Cc(p + 1, p + 1);
    for (int J = 1; J <= mm->n(); ++J) {
        for (int I = 1; I <= mm->n(); ++I) {
            Eigen::MatrixXd G = Eigen::MatrixXd::Zero(ops.x[I - 1].n_samples(), ops.y[J - 1].n_samples());
            for (int oy = 0; oy < 2; ++oy) {
                for (int ox = 0; ox < 2; ++ox) {
                    for (int b = 0; b <= p; ++b)
                        for (int a = 0; a <= p; ++a)
                            Cc(a, b) = u.coefficients()[V.cell_dof(2 * I - 1 + ox, 2 * J - 1 + oy, a, b)];
                    G += Bx[ox] * Cc * By[oy].transpose();
                }
            }
            P.set_block(I, J, MacroReferenceOp1D::apply2d(ops.x[I - 1], ops.y[J - 1], G));
        }
    }
    return P;
}

// Physical coordinate of a fine reference point, matching FESpace node placement.
double fine_point(const std::vector<double>& coords, int cell, double t) {
    if (t == -1.0) return coords[cell - 1];
    if (t == 1.0) return coords[cell];
    return coords[cell - 1] + 0.5 * (t + 1.0) * (coords[cell] - coords[cell - 1]);
}

MacroFEFunction apply_function(std::shared_ptr<const MacroMesh> mm, int p, const Function2D& g, const OpSet& ops) {
    const TensorMesh& fine = mm->fine();
    MacroFEFunction P(mm, p + 1);
    std::vector<std::vector<double>> X(mm->n()), Y(mm->n());
    for (int I = 1; I <= mm->n(); ++I) {
        const MacroReferenceOp1D& o = ops.x[I - 1];
        for (int k = 0; k < o.n_samples(); ++k) X[I - 1].push_back(fine_point(fine.xs(), 2 * I - 1 + o.sub(k), o.t(k)));
    }
    for (int J = 1; J <= mm->n(); ++J) {
        const MacroReferenceOp1D& o = ops.y[J - 1];
        for (int k = 0; k < o.n_samples(); ++k) Y[J - 1].push_back(fine_point(fine.ys(), 2 * J - 1 + o.sub(k), o.t(k)));
    }
    for (int J = 1; J <= mm->n(); ++J) {
        for (int I = 1; I <= mm->n(); ++I) {
            const auto& xs = X[I - 1];
            const auto& ys = Y[J - 1];
            Eigen::MatrixXd G(xs.size(), ys.size());
            for (std::size_t ky = 0; ky < ys.size(); ++ky)
                for (std::size_t kx = 0; kx < xs.size(); ++kx) G(kx, ky) = g(xs[kx], ys[ky]);
            P.set_block(I, J, MacroReferenceOp1D::apply2d(ops.x[I - 1], ops.y[J - 1], G));
        }
    }
    return P;
}

void warn_mesh_ratio(const MacroMesh& mm) {
    const double q = mesh_ratio_q(mm.fine());
    if (q > 10.0) {
        std::clog << "warning: mesh-ratio constant q = " << q << " exceeds 10; P_vec may be poorly conditioned\n";
    }
}

void check_degree(int p) {
    if (p < 2) throw std::invalid_argument("postprocess: degree p must be >= 2");
}

}  // namespace

MacroFEFunction pgl_apply(std::shared_ptr<const MacroMesh> mm, const FEFunction& u) {
    const int p = u.space().degree();
    const OpSet ops = build_ops(*mm, [p](double a) { return MacroReferenceOp1D::gauss_lobatto(p, a); });
    return apply_fe(std::move(mm), u, ops);
}

MacroFEFunction pgl_apply(std::shared_ptr<const MacroMesh> mm, int p, const Function2D& g) {
    check_degree(p);
    const OpSet ops = build_ops(*mm, [p](double a) { return MacroReferenceOp1D::gauss_lobatto(p, a); });
    return apply_function(std::move(mm), p, g, ops);
}

MacroFEFunction pvec_apply(std::shared_ptr<const MacroMesh> mm, const FEFunction& u, int quad_points) {
    const int p = u.space().degree();
    if (quad_points == 0) quad_points = p + 2;
    warn_mesh_ratio(*mm);
    const OpSet ops = build_ops(*mm, [p, quad_points](double a) { return MacroReferenceOp1D::vec(p, a, quad_points); });
    return apply_fe(std::move(mm), u, ops);
}

MacroFEFunction pvec_apply(std::shared_ptr<const MacroMesh> mm, int p, const Function2D& g, int quad_points) {
    check_degree(p);
    if (quad_points == 0) quad_points = p + 3;
    warn_mesh_ratio(*mm);
    const OpSet ops = build_ops(*mm, [p, quad_points](double a) { return MacroReferenceOp1D::vec(p, a, quad_points); });
    return apply_function(std::move(mm), p, g, ops);
}

}  // namespace sdfem
