#pragma once

#include <span>
#include <vector>

namespace sdfem {

struct LegendreValue {
    double value;
    double derivative;
};

/// L_p(t) and L_p'(t) by the three-term recurrence.
LegendreValue legendre_eval(int p, double t);

/// Ordered 1D point set on [-1,1], optionally carrying quadrature weights.
struct NodeSet1D {
    int degree = 0;               // nodes.size() == degree + 1
    std::vector<double> nodes;
    std::vector<double> weights;  // empty for pure interpolation sets

    int size() const { return static_cast<int>(nodes.size()); }
};

/// Zeros of (1-t^2) L_p'(t) with the Lobatto weights 2/(p(p+1) L_p(t_i)^2).
NodeSet1D gauss_lobatto_nodes(int p);

/// n-point Gauss-Legendre rule, exact up to degree 2n-1.
NodeSet1D gauss_legendre_rule(int n);

/// Uniform nodes t_i = -1 + 2i/p, i = 0..p (no weights).
NodeSet1D equidistant_nodes(int p);

/// Gauss-Legendre rule mapped onto [a, b].
NodeSet1D gauss_legendre_rule(int n, double a, double b);

/// Lagrange basis on an arbitrary set of distinct nodes.
///
/// Values use the barycentric formula. Derivatives come from the nodal
/// differentiation matrix D (and D^2), so l_j^{(k)}(t) = sum_m l_m(t) (D^k)_{mj}
/// holds exactly for the degree-p basis.
class LagrangeBasis1D {
public:
    LagrangeBasis1D() = default;
    explicit LagrangeBasis1D(std::vector<double> nodes);

    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes() const { return nodes_; }

    void values(double t, std::span<double> out) const;
    void derivatives(double t, std::span<double> v, std::span<double> d1,
                     std::span<double> d2) const;

    /// Row-major tables [point][basis].
    struct Table {
        int n_points = 0;
        int n_basis = 0;
        std::vector<double> value, d1, d2;
        double operator()(int q, int i) const { return value[q * n_basis + i]; }
        double dx(int q, int i) const { return d1[q * n_basis + i]; }
        double dxx(int q, int i) const { return d2[q * n_basis + i]; }
    };
    Table tabulate(std::span<const double> points) const;

    /// Matrix M[i][j] = l_j(points[i]) mapping nodal values to point values.
    std::vector<double> evaluation_matrix(std::span<const double> points) const;

private:
    std::vector<double> nodes_;
    std::vector<double> bary_;
    std::vector<double> diff1_;  // D, row-major
    std::vector<double> diff2_;  // D*D
};

}  // namespace sdfem
