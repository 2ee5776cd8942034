#pragma once

#include "princurve/distributions.hpp"

namespace princurve {

/// Solution of the one-dimensional problem: optimal interval [a, a+L].
struct OneDSolution {
    double a = 0.0;
    double length = 0.0;
    double delta = 0.0;            // criterion value at the optimum
    double lambda = 0.0;           // multiplier, average of the two tail formulas
    double lambda_left = 0.0;      // -E[(X-a)1{X<a}] / L
    double lambda_right = 0.0;     //  E[(X-a-L)1{X>a+L}] / L
    double derivative_at_a = 0.0;
    bool degenerate = false;       // all mass inside a length-L interval
};

/// Criterion for the interval [a, a+L]:
/// E[(X-a)^2 1{X<a}] + E[(X-a-L)^2 1{X>a+L}].
/// Exact prefix sums for empirical sources, adaptive quadrature (abs tol
/// 1e-10) for built-in laws.
double delta_1d(const PointSource& source, double a, double L);

/// Bisection on the nondecreasing derivative of delta_1d over
/// [min support - L, max support]. Requires a 1-D source and L >= 0.
OneDSolution solve_1d(const PointSource& source, double L, double tol = 1e-12);

}  // namespace princurve
