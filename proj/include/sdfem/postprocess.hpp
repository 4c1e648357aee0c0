#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "sdfem/fe_space.hpp"
#include "sdfem/interpolation.hpp"
#include "sdfem/mesh.hpp"

namespace sdfem {

/// Continuous piecewise Q_{p+1} function on a macro mesh. Each macro carries a
/// (p+2) x (p+2) block of values at the macro's own Gauss-Lobatto points.
class MacroFEFunction {
public:
    MacroFEFunction(std::shared_ptr<const MacroMesh> mesh, int degree);

    const MacroMesh& macro_mesh() const { return *mesh_; }
    const std::shared_ptr<const MacroMesh>& macro_mesh_ptr() const { return mesh_; }
    int degree() const { return q_; }
    const LagrangeBasis1D& basis() const { return basis_; }

    /// Coefficient (a, b) of macro (I, J), 1-based macro indices.
    double& coefficient(int I, int J, int a, int b);
    double coefficient(int I, int J, int a, int b) const;
    void set_block(int I, int J, const Eigen::MatrixXd& C);
    std::vector<double>& coefficients() { return coeffs_; }
    const std::vector<double>& coefficients() const { return coeffs_; }

    /// Value and gradient at macro reference coordinates (s, t).
    PointValue eval_in_macro(int I, int J, double s, double t) const;
    PointValue eval(double x, double y) const;

    /// Largest jump of the value across interior macro edges, sampled at n points per edge.
    double continuity_defect(int n = 7) const;

private:
    std::shared_ptr<const MacroMesh> mesh_;
    int q_;
    LagrangeBasis1D basis_;
    std::vector<double> coeffs_;
};

/// One direction of a macro postprocessing operator on the reference interval [-1, 1]
/// split at a. Sample points live either in the left (sub = 0) or right (sub = 1) fine
/// cell; W maps samples to functionals, and F holds the functionals of the Q_{p+1}
/// Gauss-Lobatto basis.
class MacroReferenceOp1D {
public:
    /// Interpolation at the union Gauss-Lobatto indices {0, 1, 3, ..., 2p-1, 2p}.
    static MacroReferenceOp1D gauss_lobatto(int p, double a);
    /// Values at -1, a, 1, subinterval integrals (for p = 2 only their difference) and
    /// Legendre moments of degree 1..p-3, integrated with `points` Gauss points per subinterval.
    static MacroReferenceOp1D vec(int p, double a, int points);

    int p() const { return p_; }
    double a() const { return a_; }
    int n_samples() const { return static_cast<int>(t_.size()); }
    int sub(int k) const { return sub_[k]; }
    double t(int k) const { return t_[k]; }  // fine-cell reference coordinate
    double s(int k) const { return s_[k]; }  // macro reference coordinate
    const Eigen::MatrixXd& weights() const { return W_; }
    const Eigen::MatrixXd& functional_matrix() const { return F_; }

    /// Macro basis coefficients of the 1D operator applied to f(s).
    Eigen::VectorXd apply(const std::function<double(double)>& f) const;

    /// Coefficients of the 2D tensor operator from samples G(kx, ky).
    static Eigen::MatrixXd apply2d(const MacroReferenceOp1D& ox, const MacroReferenceOp1D& oy,
                                   const Eigen::MatrixXd& G);

private:
    MacroReferenceOp1D(int p, double a) : p_(p), a_(a) {}
    void add_sample(int sub, double t);
    void finalize();

    int p_;
    double a_;
    std::vector<int> sub_;
    std::vector<double> t_, s_;
    Eigen::MatrixXd W_, F_, Finv_;
};

/// Macro reference coordinate of fine reference point t in sub-cell `sub`.
double macro_coordinate(double a, int sub, double t);

/// Offsets with |a| >= 1 - 1e-12 are rejected.
void check_macro_offset(double a);

MacroFEFunction pgl_apply(std::shared_ptr<const MacroMesh> mm, const FEFunction& u);
MacroFEFunction pgl_apply(std::shared_ptr<const MacroMesh> mm, int p, const Function2D& g);

/// quad_points = 0: p+2 per subinterval (exact for the piecewise Q_p input).
MacroFEFunction pvec_apply(std::shared_ptr<const MacroMesh> mm, const FEFunction& u, int quad_points = 0);
/// quad_points = 0: p+3 per subinterval, the rule vec_interpolate uses for its moments.
MacroFEFunction pvec_apply(std::shared_ptr<const MacroMesh> mm, int p, const Function2D& g, int quad_points = 0);

}  // namespace sdfem
