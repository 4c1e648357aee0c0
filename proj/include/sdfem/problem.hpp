#pragma once

#include <functional>
#include <optional>

#include "sdfem/fe_space.hpp"

namespace sdfem {

using ScalarField = std::function<double(double, double)>;

/// A function of one variable with its first two derivatives.
struct Factor1D {
    std::function<double(double)> value;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
};

/// Separable exact solution u(x, y) = X(x) Y(y).
class ExactSolution {
public:
    ExactSolution(Factor1D X, Factor1D Y) : X_(std::move(X)), Y_(std::move(Y)) {}

    const Factor1D& X() const { return X_; }
    const Factor1D& Y() const { return Y_; }

    /// (u, u_x, u_y)
    PointValue eval(double x, double y) const;
    double laplacian(double x, double y) const;
    double operator()(double x, double y) const { return X_.value(x) * Y_.value(y); }

private:
    Factor1D X_, Y_;
};

/// Free-function form of ExactSolution::eval.
PointValue exact_eval(const ExactSolution& sol, double x, double y);

/// Data of -eps Lap u - b u_x + c u = f on the unit square, u = 0 on the boundary.
struct ProblemData {
    double epsilon = 0.0;
    ScalarField b;
    ScalarField b_x;
    ScalarField c;
    ScalarField f;
    double beta = 0.0;   // lower bound of b
    double gamma = 0.0;  // lower bound of c + b_x / 2
    std::optional<ExactSolution> exact;

    /// Samples b and c + b_x/2 on a 100x100 grid and checks beta, gamma > 0.
    void validate() const;
};

/// Builds a problem whose right-hand side reproduces `exact`:
/// f = -eps Lap u - b u_x + c u. beta and gamma are taken from grid sampling
/// unless given explicitly; nonpositive bounds are rejected.
ProblemData manufactured_problem(double epsilon, ScalarField b, ScalarField b_x, ScalarField c,
                                 ExactSolution exact, std::optional<double> gamma = std::nullopt,
                                 std::optional<double> beta = std::nullopt);

/// Layer factors of the model solution.
Factor1D model_factor_x(double epsilon);
Factor1D model_factor_y(double epsilon);
ExactSolution model_solution(double epsilon);

/// -eps Lap u - (2-x) u_x + 3/2 u = f with the layer solution above; beta = 1, gamma = 1.
ProblemData model_problem(double epsilon);

}  // namespace sdfem
