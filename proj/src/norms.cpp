#include "sdfem/norms.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sdfem {

EnergyNorm::EnergyNorm(double eps, double g) : epsilon(eps), gamma(g) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("EnergyNorm: epsilon must be positive");
    if (!(gamma > 0.0)) throw std::invalid_argument("EnergyNorm: gamma must be positive");
}

int default_norm_quadrature(int p) { return p + 3; }

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double e : v) s += e;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

namespace {

// Basis values and first derivatives of `basis` at `points`, as nq x n matrices.
struct Tab {
    Eigen::MatrixXd v, d;
};

Tab tabulate(const LagrangeBasis1D& basis, std::span<const double> points) {
    const auto t = basis.tabulate(points);
    Tab r{Eigen::MatrixXd(t.n_points, t.n_basis), Eigen::MatrixXd(t.n_points, t.n_basis)};
    for (int q = 0; q < t.n_points; ++q)
        for (int a = 0; a < t.n_basis; ++a) {
            r.v(q, a) = t(q, a);
            r.d(q, a) = t.dx(q, a);
        }
    return r;
}

// Values and gradient of a function on one fine cell at the nq x nq Gauss points.
struct CellValues {
    Eigen::MatrixXd v, dx, dy;
};

void zero(CellValues& c, int nq) {
    c.v = Eigen::MatrixXd::Zero(nq, nq);
    c.dx = Eigen::MatrixXd::Zero(nq, nq);
    c.dy = Eigen::MatrixXd::Zero(nq, nq);
}

// Fine-cell evaluation of an FEFunction.
class FEEvaluator {
public:
    FEEvaluator(const FEFunction& u, const NodeSet1D& rule) : u_(u), tab_(tabulate(u.space().basis(), rule.nodes)) {}

    void operator()(int i, int j, CellValues& out) const {
        const FESpace& V = u_.space();
        const int n = V.degree() + 1;
        Eigen::MatrixXd C(n, n);
        for (int b = 0; b < n; ++b)
            for (int a = 0; a < n; ++a) C(a, b) = u_.coefficients()[V.cell_dof(i, j, a, b)];
        const Eigen::MatrixXd CyT = C * tab_.v.transpose();
        out.v = tab_.v * CyT;
        out.dx = (2.0 / V.mesh().h(i)) * (tab_.d * CyT);
        out.dy = (2.0 / V.mesh().k(j)) * (tab_.v * C * tab_.d.transpose());
    }

private:
    const FEFunction& u_;
    Tab tab_;
};

// Fine-cell evaluation of a MacroFEFunction; tables cached per macro column/row and sub-cell.
class MacroEvaluator {
public:
    MacroEvaluator(const MacroFEFunction& u, const NodeSet1D& rule) : u_(u) {
        const MacroMesh& mm = u.macro_mesh();
        std::vector<double> s(rule.nodes.size());
        auto build = [&](double a, int sub) {
            for (std::size_t q = 0; q < s.size(); ++q) s[q] = macro_coordinate(a, sub, rule.nodes[q]);
            return tabulate(u.basis(), s);
        };
        for (int I = 1; I <= mm.n(); ++I) {
            for (int sub = 0; sub < 2; ++sub) {
                tx_.push_back(build(mm.a_x(I), sub));
                ty_.push_back(build(mm.a_y(I), sub));
            }
        }
    }

    void operator()(int i, int j, CellValues& out) const {
        const MacroMesh& mm = u_.macro_mesh();
        const int I = (i + 1) / 2, J = (j + 1) / 2;
        const Tab& X = tx_[2 * (I - 1) + (i + 1) % 2];
        const Tab& Y = ty_[2 * (J - 1) + (j + 1) % 2];
        const int n = u_.degree() + 1;
        Eigen::MatrixXd C(n, n);
        for (int b = 0; b < n; ++b)
            for (int a = 0; a < n; ++a) C(a, b) = u_.coefficient(I, J, a, b);
        const Eigen::MatrixXd CyT = C * Y.v.transpose();
        out.v = X.v * CyT;
        out.dx = (2.0 / (mm.x_right(I) - mm.x_left(I))) * (X.d * CyT);
        out.dy = (2.0 / (mm.y_top(J) - mm.y_bottom(J))) * (X.v * C * Y.d.transpose());
    }

private:
    const MacroFEFunction& u_;
    std::vector<Tab> tx_, ty_;
};

// Exact separable solution at the fine-cell Gauss points.
class ExactEvaluator {
public:
    ExactEvaluator(const ExactSolution& u, const TensorMesh& mesh, const NodeSet1D& rule) {
        const int N = mesh.N();
        const int nq = rule.size();
        xv_.resize(N + 1);
        xd_.resize(N + 1);
        yv_.resize(N + 1);
        yd_.resize(N + 1);
        for (int i = 1; i <= N; ++i) {
            xv_[i].resize(nq);
            xd_[i].resize(nq);
            yv_[i].resize(nq);
            yd_[i].resize(nq);
            for (int q = 0; q < nq; ++q) {
                const double x = mesh.x(i - 1) + 0.5 * (rule.nodes[q] + 1.0) * mesh.h(i);
                const double y = mesh.y(i - 1) + 0.5 * (rule.nodes[q] + 1.0) * mesh.k(i);
                xv_[i](q) = u.X().value(x);
                xd_[i](q) = u.X().d1(x);
                yv_[i](q) = u.Y().value(y);
                yd_[i](q) = u.Y().d1(y);
            }
        }
    }

    void operator()(int i, int j, CellValues& out) const {
        out.v = xv_[i] * yv_[j].transpose();
        out.dx = xd_[i] * yv_[j].transpose();
        out.dy = xv_[i] * yd_[j].transpose();
    }

private:
    std::vector<Eigen::VectorXd> xv_, xd_, yv_, yd_;
};

// Energy norm of (first - second) summed over fine cells.
template <class A, class B>
double integrate(const TensorMesh& mesh, const NodeSet1D& rule, const EnergyNorm& norm, const A& first,
                 const B& second) {
    const int N = mesh.N();
    const int nq = rule.size();
    Eigen::MatrixXd w(nq, nq);
    for (int r = 0; r < nq; ++r)
        for (int q = 0; q < nq; ++q) w(q, r) = rule.weights[q] * rule.weights[r];
    std::vector<double> cell(static_cast<std::size_t>(N) * N);
    CellValues a, b;
    for (int j = 1; j <= N; ++j) {
        for (int i = 1; i <= N; ++i) {
            first(i, j, a);
            second(i, j, b);
            const double grad = (a.dx - b.dx).cwiseAbs2().cwiseProduct(w).sum() +
                                (a.dy - b.dy).cwiseAbs2().cwiseProduct(w).sum();
            const double mass = (a.v - b.v).cwiseAbs2().cwiseProduct(w).sum();
            cell[static_cast<std::size_t>(j - 1) * N + (i - 1)] =
                0.25 * mesh.h(i) * mesh.k(j) * (norm.epsilon * grad + norm.gamma * mass);
        }
    }
    return std::sqrt(pairwise_sum(cell));
}

struct Zero {
    int nq;
    void operator()(int, int, CellValues& out) const { zero(out, nq); }
};

int resolve_nq(int nq, int p, int minimum, const char* who) {
    if (nq == 0) return default_norm_quadrature(p);
    if (nq < minimum) {
        throw std::invalid_argument(std::string(who) + ": need at least " + std::to_string(minimum) +
                                    " quadrature points per direction");
    }
    return nq;
}

}  // namespace

double energy_error_exact(const FEFunction& u_h, const ExactSolution& u, const EnergyNorm& norm, int nq) {
    const int p = u_h.space().degree();
    const NodeSet1D rule = gauss_legendre_rule(resolve_nq(nq, p, p + 3, "energy_error_exact"));
    const TensorMesh& mesh = u_h.space().mesh();
    return integrate(mesh, rule, norm, ExactEvaluator(u, mesh, rule), FEEvaluator(u_h, rule));
}

double energy_error_exact(const MacroFEFunction& u_h, const ExactSolution& u, const EnergyNorm& norm, int nq) {
    const int p = u_h.degree() - 1;
    const NodeSet1D rule = gauss_legendre_rule(resolve_nq(nq, p, p + 3, "energy_error_exact"));
    const TensorMesh& mesh = u_h.macro_mesh().fine();
    return integrate(mesh, rule, norm, ExactEvaluator(u, mesh, rule), MacroEvaluator(u_h, rule));
}

double energy_diff_fe(const FEFunction& u_h, const FEFunction& v_h, const EnergyNorm& norm, int nq) {
    const FESpace& U = u_h.space();
    const FESpace& V = v_h.space();
    if (&U != &V && (U.degree() != V.degree() || U.mesh().xs() != V.mesh().xs() || U.mesh().ys() != V.mesh().ys())) {
        throw std::invalid_argument("energy_diff_fe: functions live on different spaces");
    }
    const int p = U.degree();
    const NodeSet1D rule = gauss_legendre_rule(resolve_nq(nq, p, p + 1, "energy_diff_fe"));
    return integrate(U.mesh(), rule, norm, FEEvaluator(u_h, rule), FEEvaluator(v_h, rule));
}

double energy_norm(const FEFunction& u_h, const EnergyNorm& norm, int nq) {
    const int p = u_h.space().degree();
    const NodeSet1D rule = gauss_legendre_rule(resolve_nq(nq, p, p + 1, "energy_norm"));
    return integrate(u_h.space().mesh(), rule, norm, FEEvaluator(u_h, rule), Zero{rule.size()});
}

double energy_norm(const MacroFEFunction& u_h, const EnergyNorm& norm, int nq) {
    const int p = u_h.degree() - 1;
    const NodeSet1D rule = gauss_legendre_rule(resolve_nq(nq, p, p + 2, "energy_norm"));
    return integrate(u_h.macro_mesh().fine(), rule, norm, MacroEvaluator(u_h, rule), Zero{rule.size()});
}

}  // namespace sdfem
