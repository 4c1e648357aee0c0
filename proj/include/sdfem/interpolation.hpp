#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "sdfem/fe_space.hpp"

namespace sdfem {

using Function2D = std::function<double(double, double)>;

/// Vertex-edge-cell degrees of freedom of Q_p on the reference square.
///
/// Per direction the functionals are [v(-1), int v L_0, ..., int v L_{p-2}, v(+1)];
/// the 2D set is their tensor product, which yields the 4 vertex values,
/// 4(p-1) edge moments and (p-1)^2 cell moments. Each 1D functional is a
/// weight vector over the sample points {-1, Gauss points, +1}.
class VertexEdgeCellDofs {
public:
    /// moment_points = 0 selects degree + 3 Gauss points.
    explicit VertexEdgeCellDofs(int degree, int moment_points = 0);

    int degree() const { return p_; }
    int n_functionals() const { return (p_ + 1) * (p_ + 1); }

    /// Reference sample points: -1, the Gauss points, +1.
    const std::vector<double>& samples() const { return samples_; }
    /// 1D functional weights, (p+1) x samples().size().
    const Eigen::MatrixXd& weights() const { return W_; }
    /// 1D functionals applied to the Gauss-Lobatto nodal basis, (p+1) x (p+1).
    const Eigen::MatrixXd& functional_matrix() const { return F_; }
    /// Full (p+1)^2 x (p+1)^2 local matrix (Kronecker product of the 1D one).
    Eigen::MatrixXd local_matrix() const;

    /// Functionals of sampled data G[s][t] = g(samples[s], samples[t]), as a (p+1) x (p+1) array.
    Eigen::MatrixXd functionals(const Eigen::MatrixXd& G) const;
    /// Gauss-Lobatto nodal coefficients C[a][b] of the interpolant with the given functionals.
    Eigen::MatrixXd coefficients(const Eigen::MatrixXd& functionals) const;

private:
    int p_;
    std::vector<double> samples_;
    Eigen::MatrixXd W_, F_, Finv_;
};

/// I_p^N: values at all global Gauss-Lobatto nodes.
FEFunction gl_interpolate(std::shared_ptr<const FESpace> space, const Function2D& g);

/// pi_p^N: vertex-edge-cell interpolant; moments by (p+3)-point Gauss unless overridden.
FEFunction vec_interpolate(std::shared_ptr<const FESpace> space, const Function2D& g, int moment_points = 0);

/// J_p^N: Lagrange interpolation at equidistant points per cell, stored in the nodal basis.
FEFunction equidistant_interpolate(std::shared_ptr<const FESpace> space, const Function2D& g);

struct LemmaDiscrepancy {
    double vec_vs_gl_of_vec = 0.0;  // max |pi_p g - I_p pi_{p+1} g|
    double gl_vs_vec_of_star = 0.0; // max |I_p g - pi_p I*_{p+1} g|
    double max() const { return std::max(vec_vs_gl_of_vec, gl_vs_vec_of_star); }
};

/// Reference-square identities pi_p = I_p pi_{p+1} and I_p = pi_p I*_{p+1}, where I*_{p+1}
/// interpolates at the Gauss-Lobatto points plus t_star. Sampled on a 20 x 20 grid.
LemmaDiscrepancy verify_lemma_identity(int p, const Function2D& g, double t_star = 0.37);

}  // namespace sdfem
