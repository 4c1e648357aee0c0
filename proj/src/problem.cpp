#include "sdfem/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace sdfem {

PointValue ExactSolution::eval(double x, double y) const {
    const double X = X_.value(x), Y = Y_.value(y);
    return {X * Y, X_.d1(x) * Y, X * Y_.d1(y)};
}

double ExactSolution::laplacian(double x, double y) const {
    return X_.d2(x) * Y_.value(y) + X_.value(x) * Y_.d2(y);
}

PointValue exact_eval(const ExactSolution& sol, double x, double y) { return sol.eval(x, y); }

namespace {

constexpr int kSampleGrid = 100;

template <class F>
double sampled_min(F&& f) {
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j < kSampleGrid; ++j) {
        for (int i = 0; i < kSampleGrid; ++i) {
            const double x = static_cast<double>(i) / (kSampleGrid - 1);
            const double y = static_cast<double>(j) / (kSampleGrid - 1);
            m = std::min(m, f(x, y));
        }
    }
    return m;
}

}  // namespace

void ProblemData::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("ProblemData: epsilon must be positive");
    if (!b || !b_x || !c || !f) throw std::invalid_argument("ProblemData: missing coefficient function");
    if (!(beta > 0.0)) throw std::invalid_argument("ProblemData: beta must be positive");
    if (!(gamma > 0.0)) throw std::invalid_argument("ProblemData: gamma must be positive");
    const double bmin = sampled_min([&](double x, double y) { return b(x, y); });
    const double gmin = sampled_min([&](double x, double y) { return c(x, y) + 0.5 * b_x(x, y); });
    const double slack = 1e-12;
    if (bmin < beta * (1.0 - slack)) {
        std::ostringstream msg;
        msg << "ProblemData: sampled min b = " << bmin << " below beta = " << beta;
        throw std::invalid_argument(msg.str());
    }
    if (gmin < gamma * (1.0 - slack)) {
        std::ostringstream msg;
        msg << "ProblemData: sampled min (c + b_x/2) = " << gmin << " below gamma = " << gamma;
        throw std::invalid_argument(msg.str());
    }
}

ProblemData manufactured_problem(double epsilon, ScalarField b, ScalarField b_x, ScalarField c,
                                 ExactSolution exact, std::optional<double> gamma,
                                 std::optional<double> beta) {
    ProblemData prob;
    prob.epsilon = epsilon;
    prob.b = std::move(b);
    prob.b_x = std::move(b_x);
    prob.c = std::move(c);
    prob.beta = beta.value_or(sampled_min([&](double x, double y) { return prob.b(x, y); }));
    prob.gamma = gamma.value_or(
        sampled_min([&](double x, double y) { return prob.c(x, y) + 0.5 * prob.b_x(x, y); }));
    prob.exact = std::move(exact);
    prob.f = [epsilon, b = prob.b, c = prob.c, u = *prob.exact](double x, double y) {
        const PointValue v = u.eval(x, y);
        return -epsilon * u.laplacian(x, y) - b(x, y) * v.dx + c(x, y) * v.value;
    };
    prob.validate();
    return prob;
}

Factor1D model_factor_x(double epsilon) {
    constexpr double half_pi = 0.5 * std::numbers::pi;
    const double tail = std::exp(-1.0 / epsilon);
    const double denom = -std::expm1(-1.0 / epsilon);
    Factor1D X;
    X.value = [=](double x) {
        return std::cos(half_pi * x) - (std::exp(-x / epsilon) - tail) / denom;
    };
    X.d1 = [=](double x) {
        return -half_pi * std::sin(half_pi * x) + std::exp(-x / epsilon) / (epsilon * denom);
    };
    X.d2 = [=](double x) {
        return -half_pi * half_pi * std::cos(half_pi * x) -
               std::exp(-x / epsilon) / (epsilon * epsilon * denom);
    };
    return X;
}

Factor1D model_factor_y(double epsilon) {
    const double r = 1.0 / std::sqrt(epsilon);
    const double denom = -std::expm1(-r);
    Factor1D Y;
    // (1 - e^{-ry})(1 - e^{-r(1-y)}) / (1 - e^{-r})
    Y.value = [=](double y) { return std::expm1(-r * y) * std::expm1(-r * (1.0 - y)) / denom; };
    Y.d1 = [=](double y) { return r * (std::exp(-r * y) - std::exp(-r * (1.0 - y))) / denom; };
    Y.d2 = [=](double y) { return -r * r * (std::exp(-r * y) + std::exp(-r * (1.0 - y))) / denom; };
    return Y;
}

ExactSolution model_solution(double epsilon) {
    return ExactSolution(model_factor_x(epsilon), model_factor_y(epsilon));
}

ProblemData model_problem(double epsilon) {
    if (!(epsilon > 0.0) || epsilon > 1e-2) {
        throw std::invalid_argument("model_problem: epsilon must lie in (0, 1e-2]");
    }
    return manufactured_problem(
        epsilon, [](double x, double) { return 2.0 - x; }, [](double, double) { return -1.0; },
        [](double, double) { return 1.5; }, model_solution(epsilon), /*gamma=*/1.0, /*beta=*/1.0);
}

}  // namespace sdfem
