#include "sdfem/quadrature.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sdfem/error.hpp"

namespace sdfem {

LegendreValue legendre_eval(int p, double t) {
    if (p < 0) {
        throw std::invalid_argument("legendre_eval: degree must be >= 0");
    }
    if (p == 0) return {1.0, 0.0};

    double l0 = 1.0, l1 = t;
    double d0 = 0.0, d1 = 1.0;
    for (int k = 2; k <= p; ++k) {
        const double l2 = ((2 * k - 1) * t * l1 - (k - 1) * l0) / k;
        const double d2 = ((2 * k - 1) * (l1 + t * d1) - (k - 1) * d0) / k;
        l0 = l1;
        l1 = l2;
        d0 = d1;
        d1 = d2;
    }
    return {l1, d1};
}

NodeSet1D gauss_lobatto_nodes(int p) {
    if (p < 1) {
        throw std::invalid_argument("gauss_lobatto_nodes: degree must be >= 1");
    }
    NodeSet1D set;
    set.degree = p;
    set.nodes.assign(p + 1, 0.0);
    set.nodes.front() = -1.0;
    set.nodes.back() = 1.0;

    constexpr int max_iterations = 100;
    for (int i = 1; i < p; ++i) {
        // Chebyshev-Gauss-Lobatto seed.
        double t = -std::cos(std::numbers::pi * i / p);
        bool converged = false;
        for (int it = 0; it < max_iterations; ++it) {
            const auto [l, dl] = legendre_eval(p, t);
            // L'' from the Legendre equation; t stays interior.
            const double ddl = (2.0 * t * dl - p * (p + 1.0) * l) / (1.0 - t * t);
            const double step = dl / ddl;
            t -= step;
            if (std::abs(step) < 1e-15) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw NumericalError("gauss_lobatto_nodes: Newton iteration did not converge for p=" +
                                 std::to_string(p));
        }
        set.nodes[i] = t;
    }
    for (int i = 0; i <= p / 2; ++i) {
        const double s = 0.5 * (set.nodes[p - i] - set.nodes[i]);
        set.nodes[i] = -s;
        set.nodes[p - i] = s;
    }
    if (p % 2 == 0) set.nodes[p / 2] = 0.0;

    set.weights.resize(p + 1);
    for (int i = 0; i <= p; ++i) {
        const double l = legendre_eval(p, set.nodes[i]).value;
        set.weights[i] = 2.0 / (p * (p + 1.0) * l * l);
    }
    return set;
}

NodeSet1D gauss_legendre_rule(int n) {
    if (n < 1) {
        throw std::invalid_argument("gauss_legendre_rule: point count must be >= 1");
    }
    NodeSet1D set;
    set.degree = n - 1;
    set.nodes.assign(n, 0.0);
    set.weights.assign(n, 0.0);

    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            const auto [l, dl] = legendre_eval(n, z);
            const double step = l / dl;
            z -= step;
            if (std::abs(step) < 1e-15) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw NumericalError("gauss_legendre_rule: Newton iteration did not converge for n=" +
                                 std::to_string(n));
        }
        const double dl = legendre_eval(n, z).derivative;
        const double w = 2.0 / ((1.0 - z * z) * dl * dl);
        set.nodes[i] = -z;
        set.nodes[n - 1 - i] = z;
        set.weights[i] = w;
        set.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) set.nodes[n / 2] = 0.0;
    return set;
}

NodeSet1D gauss_legendre_rule(int n, double a, double b) {
    NodeSet1D set = gauss_legendre_rule(n);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        set.nodes[i] = a + half * (set.nodes[i] + 1.0);
        set.weights[i] *= half;
    }
    return set;
}

NodeSet1D equidistant_nodes(int p) {
    if (p < 1) {
        throw std::invalid_argument("equidistant_nodes: degree must be >= 1");
    }
    NodeSet1D set;
    set.degree = p;
    set.nodes.resize(p + 1);
    for (int i = 0; i <= p; ++i) set.nodes[i] = -1.0 + 2.0 * i / p;
    return set;
}

// ---------------------------------------------------------------------------

LagrangeBasis1D::LagrangeBasis1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    const int n = size();
    if (n < 1) throw std::invalid_argument("LagrangeBasis1D: empty node set");

    bary_.assign(n, 1.0);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            if (k == j) continue;
            const double d = nodes_[j] - nodes_[k];
            if (d == 0.0) throw std::invalid_argument("LagrangeBasis1D: repeated node");
            bary_[j] /= d;
        }
    }

    diff1_.assign(n * n, 0.0);
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double dij = (bary_[j] / bary_[i]) / (nodes_[i] - nodes_[j]);
            diff1_[i * n + j] = dij;
            diag -= dij;
        }
        diff1_[i * n + i] = diag;
    }
    diff2_.assign(n * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) diff2_[i * n + j] += diff1_[i * n + k] * diff1_[k * n + j];
}

void LagrangeBasis1D::values(double t, std::span<double> out) const {
    const int n = size();
    assert(static_cast<int>(out.size()) >= n);
    for (int j = 0; j < n; ++j) {
        if (t == nodes_[j]) {
            for (int k = 0; k < n; ++k) out[k] = (k == j) ? 1.0 : 0.0;
            return;
        }
    }
    double denom = 0.0;
    for (int j = 0; j < n; ++j) {
        out[j] = bary_[j] / (t - nodes_[j]);
        denom += out[j];
    }
    for (int j = 0; j < n; ++j) out[j] /= denom;
}

void LagrangeBasis1D::derivatives(double t, std::span<double> v, std::span<double> d1,
                                  std::span<double> d2) const {
    const int n = size();
    values(t, v);
    for (int j = 0; j < n; ++j) {
        double a = 0.0, b = 0.0;
        for (int m = 0; m < n; ++m) {
            a += v[m] * diff1_[m * n + j];
            b += v[m] * diff2_[m * n + j];
        }
        d1[j] = a;
        d2[j] = b;
    }
}

LagrangeBasis1D::Table LagrangeBasis1D::tabulate(std::span<const double> points) const {
    Table table;
    table.n_points = static_cast<int>(points.size());
    table.n_basis = size();
    const std::size_t total = points.size() * nodes_.size();
    table.value.resize(total);
    table.d1.resize(total);
    table.d2.resize(total);
    const int n = size();
    for (int q = 0; q < table.n_points; ++q) {
        derivatives(points[q], std::span(table.value).subspan(q * n, n),
                    std::span(table.d1).subspan(q * n, n), std::span(table.d2).subspan(q * n, n));
    }
    return table;
}

std::vector<double> LagrangeBasis1D::evaluation_matrix(std::span<const double> points) const {
    const int n = size();
    std::vector<double> m(points.size() * n);
    for (std::size_t q = 0; q < points.size(); ++q) values(points[q], std::span(m).subspan(q * n, n));
    return m;
}

}  // namespace sdfem
