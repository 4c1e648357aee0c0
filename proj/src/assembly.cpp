#include "sdfem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sdfem {

double StabilizationParams::operator()(Subdomain s) const {
    switch (s) {
        case Subdomain::Omega11: return delta11;
        case Subdomain::Omega12: return delta12;
        case Subdomain::Omega21: return delta21;
        case Subdomain::Omega22: return delta22;
    }
    throw std::logic_error("StabilizationParams: unclassified subdomain");
}

std::string to_string(Delta21Rule rule) {
    switch (rule) {
        case Delta21Rule::UpperBound: return "upper-bound";
        case Delta21Rule::Sharper: return "sharper";
        case Delta21Rule::Asymptotic: return "asymptotic";
    }
    return "?";
}

Delta21Rule parse_delta21_rule(std::string_view name) {
    if (name == "upper-bound") return Delta21Rule::UpperBound;
    if (name == "sharper") return Delta21Rule::Sharper;
    if (name == "asymptotic") return Delta21Rule::Asymptotic;
    throw std::invalid_argument("unknown delta21 rule '" + std::string(name) + "'");
}

StabilizationParams stabilization_parameters(const TensorMesh& mesh, double epsilon, double C, Delta21Rule rule) {
    if (!(C > 0.0)) throw std::invalid_argument("stabilization_parameters: C must be positive");
    if (!(epsilon > 0.0)) throw std::invalid_argument("stabilization_parameters: epsilon must be positive");
    const double N = mesh.N();
    double scale = mesh.max_psi_prime() / N;  // N^{-1} max|psi'|
    if (rule == Delta21Rule::Asymptotic) {
        if (mesh.kind() == MeshKind::Shishkin) scale = std::log(N) / N;
        else if (mesh.kind() == MeshKind::BakhvalovShishkin) scale = 1.0 / N;
    }

    StabilizationParams d;
    d.C = C;
    d.delta11 = C / N;
    switch (rule) {
        case Delta21Rule::UpperBound:
        case Delta21Rule::Asymptotic:
            d.delta21 = C * std::max(1.0, scale / std::sqrt(epsilon)) * scale * scale;
            break;
        case Delta21Rule::Sharper:
            d.delta21 = C * scale * scale;
            break;
    }
    d.delta12 = 0.0;
    d.delta22 = 0.0;
    return d;
}

FEFunction AssembledSystem::expand(std::span<const double> interior_values) const {
    if (interior_values.size() != interior_to_full.size()) {
        throw std::invalid_argument("AssembledSystem::expand: length mismatch");
    }
    FEFunction u(space);
    for (std::size_t k = 0; k < interior_values.size(); ++k) u.coefficients()[interior_to_full[k]] = interior_values[k];
    return u;
}

std::vector<double> AssembledSystem::restrict(std::span<const double> full) const {
    std::vector<double> r(interior_to_full.size());
    for (std::size_t k = 0; k < r.size(); ++k) r[k] = full[interior_to_full[k]];
    return r;
}

int default_assembly_quadrature(int p) { return p + 2; }

namespace {

// Contiguous range of interior node indices (one direction) coupled to node g.
struct NodeRange {
    int lo, hi;
    int size() const { return hi - lo + 1; }
};

NodeRange coupled_range(int g, int p, int n_nodes) {
    int lo, hi;
    if (g % p == 0) {
        lo = g - p;
        hi = g + p;
    } else {
        lo = (g / p) * p;
        hi = lo + p;
    }
    return {std::max(lo, 1), std::min(hi, n_nodes - 2)};
}

}  // namespace

AssembledSystem assemble_sdfem(std::shared_ptr<const FESpace> space_ptr, const ProblemData& prob,
                               const StabilizationParams& delta, int quad_order) {
    const FESpace& V = *space_ptr;
    const TensorMesh& mesh = V.mesh();
    const int p = V.degree();
    const int N = mesh.N();
    if (quad_order == 0) quad_order = default_assembly_quadrature(p);
    if (quad_order < p + 2) {
        throw std::invalid_argument("assemble_sdfem: quad_order must be >= p+2 = " + std::to_string(p + 2));
    }
    if (!prob.b || !prob.c || !prob.f) throw std::invalid_argument("assemble_sdfem: incomplete problem data");
    const double eps = prob.epsilon;

    AssembledSystem sys;
    sys.space = space_ptr;

    // Interior numbering: lexicographic over interior nodes, x fastest.
    const int n = V.nodes_per_direction();
    const int m = n - 2;
    sys.full_to_interior.assign(V.n_dofs(), -1);
    sys.interior_to_full.reserve(static_cast<std::size_t>(m) * m);
    for (int iy = 1; iy <= m; ++iy) {
        for (int ix = 1; ix <= m; ++ix) {
            sys.full_to_interior[V.dof(ix, iy)] = static_cast<int>(sys.interior_to_full.size());
            sys.interior_to_full.push_back(V.dof(ix, iy));
        }
    }

    // Sparsity: the coupled nodes of (gx, gy) form a tensor block of contiguous ranges.
    std::vector<NodeRange> ranges(n);
    for (int g = 1; g <= m; ++g) ranges[g] = coupled_range(g, p, n);
    std::vector<int> row_ptr(static_cast<std::size_t>(m) * m + 1, 0);
    for (int gy = 1; gy <= m; ++gy)
        for (int gx = 1; gx <= m; ++gx) {
            const int r = (gy - 1) * m + (gx - 1);
            row_ptr[r + 1] = row_ptr[r] + ranges[gx].size() * ranges[gy].size();
        }
    std::vector<int> col_idx(row_ptr.back());
    for (int gy = 1; gy <= m; ++gy)
        for (int gx = 1; gx <= m; ++gx) {
            int pos = row_ptr[(gy - 1) * m + (gx - 1)];
            for (int jy = ranges[gy].lo; jy <= ranges[gy].hi; ++jy)
                for (int jx = ranges[gx].lo; jx <= ranges[gx].hi; ++jx) col_idx[pos++] = (jy - 1) * m + (jx - 1);
        }
    std::vector<double> values(col_idx.size(), 0.0);
    sys.rhs.assign(static_cast<std::size_t>(m) * m, 0.0);

    auto add_entry = [&](int rgx, int rgy, int cgx, int cgy, double v) {
        const NodeRange& rx = ranges[rgx];
        const NodeRange& ry = ranges[rgy];
        const int pos = row_ptr[(rgy - 1) * m + (rgx - 1)] + (cgy - ry.lo) * rx.size() + (cgx - rx.lo);
        values[pos] += v;
    };

    const NodeSet1D rule = gauss_legendre_rule(quad_order);
    const LagrangeBasis1D::Table tab = V.basis().tabulate(rule.nodes);
    const int nb = p + 1;
    const int nloc = nb * nb;
    const int nq = quad_order;

    std::vector<double> phi(nloc), phix(nloc), phiy(nloc), lap(nloc), strong(nloc);
    std::vector<double> Aloc(static_cast<std::size_t>(nloc) * nloc), Floc(nloc);

    for (int j = 1; j <= N; ++j) {
        for (int i = 1; i <= N; ++i) {
            const double h = mesh.h(i), k = mesh.k(j);
            const double sx = 2.0 / h, sy = 2.0 / k;
            const double d = delta(classify_cell(mesh, i, j));
            std::fill(Aloc.begin(), Aloc.end(), 0.0);
            std::fill(Floc.begin(), Floc.end(), 0.0);

            for (int qy = 0; qy < nq; ++qy) {
                const double y = V.map_y(j, rule.nodes[qy]);
                for (int qx = 0; qx < nq; ++qx) {
                    const double x = V.map_x(i, rule.nodes[qx]);
                    const double jxw = rule.weights[qx] * rule.weights[qy] * 0.25 * h * k;
                    const double bv = prob.b(x, y), cv = prob.c(x, y), fv = prob.f(x, y);

                    for (int b = 0; b < nb; ++b) {
                        for (int a = 0; a < nb; ++a) {
                            const int l = a + nb * b;
                            phi[l] = tab(qx, a) * tab(qy, b);
                            phix[l] = sx * tab.dx(qx, a) * tab(qy, b);
                            phiy[l] = sy * tab(qx, a) * tab.dx(qy, b);
                            lap[l] = sx * sx * tab.dxx(qx, a) * tab(qy, b) + sy * sy * tab(qx, a) * tab.dxx(qy, b);
                            // eps Lap v + b v_x - c v
                            strong[l] = eps * lap[l] + bv * phix[l] - cv * phi[l];
                        }
                    }
                    for (int w = 0; w < nloc; ++w) {
                        const double test_stab = d * bv * phix[w];
                        double* row = &Aloc[static_cast<std::size_t>(w) * nloc];
                        for (int v = 0; v < nloc; ++v) {
                            row[v] += jxw * (eps * (phix[v] * phix[w] + phiy[v] * phiy[w]) +
                                             (cv * phi[v] - bv * phix[v]) * phi[w] + strong[v] * test_stab);
                        }
                        Floc[w] += jxw * (fv * phi[w] - fv * test_stab);
                    }
                }
            }

            // Scatter, dropping Dirichlet rows and columns.
            for (int wb = 0; wb < nb; ++wb) {
                const int rgy = V.node_index(j, wb);
                if (rgy == 0 || rgy == n - 1) continue;
                for (int wa = 0; wa < nb; ++wa) {
                    const int rgx = V.node_index(i, wa);
                    if (rgx == 0 || rgx == n - 1) continue;
                    const int w = wa + nb * wb;
                    sys.rhs[(rgy - 1) * m + (rgx - 1)] += Floc[w];
                    for (int vb = 0; vb < nb; ++vb) {
                        const int cgy = V.node_index(j, vb);
                        if (cgy == 0 || cgy == n - 1) continue;
                        for (int va = 0; va < nb; ++va) {
                            const int cgx = V.node_index(i, va);
                            if (cgx == 0 || cgx == n - 1) continue;
                            add_entry(rgx, rgy, cgx, cgy, Aloc[static_cast<std::size_t>(w) * nloc + va + nb * vb]);
                        }
                    }
                }
            }
        }
    }

    sys.matrix = SparseMatrix(m * m, m * m, std::move(row_ptr), std::move(col_idx), std::move(values));
    return sys;
}

AssembledSystem assemble_galerkin(std::shared_ptr<const FESpace> space, const ProblemData& prob, int quad_order) {
    return assemble_sdfem(std::move(space), prob, StabilizationParams::zero(), quad_order);
}

FEFunction solve_system(const AssembledSystem& system) {
    const std::vector<double> x = solve(system.matrix, system.rhs);
    return system.expand(x);
}

}  // namespace sdfem
