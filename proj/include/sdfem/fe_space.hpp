#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "sdfem/mesh.hpp"
#include "sdfem/quadrature.hpp"

namespace sdfem {

/// Value and gradient of a scalar field at a point.
struct PointValue {
    double value = 0.0;
    double dx = 0.0;
    double dy = 0.0;
};

/// Continuous Q_p space on a TensorMesh with a nodal basis at the mapped
/// Gauss-Lobatto points. Global nodes are numbered lexicographically with x fastest.
class FESpace {
public:
    FESpace(std::shared_ptr<const TensorMesh> mesh, int p);

    const TensorMesh& mesh() const { return *mesh_; }
    const std::shared_ptr<const TensorMesh>& mesh_ptr() const { return mesh_; }
    int degree() const { return p_; }
    int nodes_per_direction() const { return static_cast<int>(xnodes_.size()); }
    int n_dofs() const { return nodes_per_direction() * nodes_per_direction(); }
    int dofs_per_cell() const { return (p_ + 1) * (p_ + 1); }

    const NodeSet1D& gauss_lobatto() const { return gl_; }
    const LagrangeBasis1D& basis() const { return basis_; }

    std::span<const double> x_nodes() const { return xnodes_; }
    std::span<const double> y_nodes() const { return ynodes_; }

    int dof(int ix, int iy) const { return iy * nodes_per_direction() + ix; }

    /// Global node index (per direction) of local node a in 1-based cell i.
    int node_index(int i, int a) const { return (i - 1) * p_ + a; }
    int cell_dof(int i, int j, int a, int b) const { return dof(node_index(i, a), node_index(j, b)); }
    /// Dofs of cell (i, j), local index a + (p+1) b.
    void cell_dofs(int i, int j, std::span<int> out) const;

    bool on_boundary(int dof) const { return boundary_[dof] != 0; }
    int n_boundary_dofs() const;

    /// Physical coordinate of reference point t in cell i (x) / j (y).
    double map_x(int i, double t) const { return mesh_->x(i - 1) + 0.5 * (t + 1.0) * mesh_->h(i); }
    double map_y(int j, double t) const { return mesh_->y(j - 1) + 0.5 * (t + 1.0) * mesh_->k(j); }

private:
    std::shared_ptr<const TensorMesh> mesh_;
    int p_;
    NodeSet1D gl_;
    LagrangeBasis1D basis_;
    std::vector<double> xnodes_, ynodes_;
    std::vector<char> boundary_;
};

std::shared_ptr<const FESpace> build_space(std::shared_ptr<const TensorMesh> mesh, int p);

/// Element of an FESpace: nodal values at the global Gauss-Lobatto points.
class FEFunction {
public:
    explicit FEFunction(std::shared_ptr<const FESpace> space);
    FEFunction(std::shared_ptr<const FESpace> space, std::vector<double> coefficients);

    const FESpace& space() const { return *space_; }
    const std::shared_ptr<const FESpace>& space_ptr() const { return space_; }
    std::vector<double>& coefficients() { return coeffs_; }
    const std::vector<double>& coefficients() const { return coeffs_; }

    PointValue eval(double x, double y) const;
    /// Evaluate inside cell (i, j) at reference coordinates (s, t) in [-1,1]^2.
    PointValue eval_local(int i, int j, double s, double t) const;

private:
    std::shared_ptr<const FESpace> space_;
    std::vector<double> coeffs_;
};

/// Free-function form of FEFunction::eval.
PointValue eval_fe(const FEFunction& u, double x, double y);

/// Text dump: header "# sdfem-fe N=.. p=.. kind=.. ndofs=..", then one coefficient per line.
void write_fe_function(std::ostream& os, const FEFunction& u);
/// Reads coefficients written by write_fe_function into a function on `space`.
FEFunction read_fe_function(std::istream& is, std::shared_ptr<const FESpace> space);

}  // namespace sdfem
