#include <doctest.h>

#include <cmath>

#include "princurve/oned.hpp"

using namespace princurve;

namespace {

// Independent oracle: grid search on a with exact piecewise quadrature of
// the uniform criterion.
double uniform_delta_exact(double a, double L) {
    // X ~ U[0,1]: integral of (x-a)^2 below a plus (x-a-L)^2 above a+L
    auto cube = [](double x) { return x * x * x; };
    double low = 0.0, high = 0.0;
    if (a > 0.0) {
        const double hi = std::min(a, 1.0);
        low = (cube(a) - cube(a - hi)) / 3.0;
    }
    if (a + L < 1.0) {
        const double lo = std::max(a + L, 0.0);
        high = (cube(1.0 - a - L) - cube(lo - a - L)) / 3.0;
    }
    return low + high;
}

double grid_search_a(double L) {
    double best_a = 0.0, best = 1e300;
    for (int i = 0; i <= 10000; ++i) {
        const double a = -0.5 + 2.0 * i / 10000.0;
        const double v = uniform_delta_exact(a, L);
        if (v < best) {
            best = v;
            best_a = a;
        }
    }
    return best_a;
}

}  // namespace

TEST_CASE("solve_1d on Uniform(0,1) with L = 0.5") {
    const auto src = PointSource::uniform_1d(0.0, 1.0, 1);
    const auto sol = solve_1d(src, 0.5);
    CHECK(sol.a == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(sol.delta == doctest::Approx(1.0 / 96.0).epsilon(1e-7));
    CHECK(sol.lambda == doctest::Approx(0.0625).epsilon(1e-7));
    CHECK_FALSE(sol.degenerate);
    CHECK(std::abs(sol.derivative_at_a) < 1e-9);
    CHECK(std::abs(sol.lambda_left - sol.lambda_right) < 1e-9);

    // grid-search oracle agrees to its own resolution
    CHECK(std::abs(grid_search_a(0.5) - sol.a) < 3e-4);
}

TEST_CASE("solve_1d degenerate cover") {
    const auto src = PointSource::empirical({0.0, 1.0}, 1, 1);
    const auto sol = solve_1d(src, 1.0);
    CHECK(sol.a == doctest::Approx(0.0));
    CHECK(sol.delta == doctest::Approx(0.0));
    CHECK(sol.lambda == 0.0);
    CHECK(sol.degenerate);
}

TEST_CASE("solve_1d two-point law") {
    const auto src = PointSource::empirical({0.0, 10.0}, 1, 1);
    const auto sol = solve_1d(src, 2.0);
    CHECK(sol.a == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(sol.lambda == doctest::Approx(1.0).epsilon(1e-9));
    // oracle: grid search over a
    double best_a = 0, best = 1e300;
    for (int i = 0; i <= 20000; ++i) {
        const double a = -2.0 + 14.0 * i / 20000.0;
        const double v = (0.5 * a * a) * (a > 0 ? 1 : 0);
        const double right = 10.0 - a - 2.0;
        const double vv = (a > 0 ? 0.5 * a * a : 0.0) + (right > 0 ? 0.5 * right * right : 0.0);
        (void)v;
        if (vv < best) { best = vv; best_a = a; }
    }
    CHECK(std::abs(best_a - sol.a) < 1e-3);
}

TEST_CASE("delta_1d direct values") {
    const auto uni = PointSource::uniform_1d(0.0, 1.0, 1);
    CHECK(delta_1d(uni, 0.25, 0.5) == doctest::Approx(1.0 / 96.0).epsilon(1e-9));
    CHECK(delta_1d(uni, 0.0, 1.0) == doctest::Approx(0.0));

    const auto two = PointSource::empirical({0.0, 2.0}, 1, 1);
    CHECK(delta_1d(two, 0.5, 1.0) == doctest::Approx(0.25));
}

TEST_CASE("lambda tail formulas agree exactly for empirical sources") {
    const auto src = PointSource::empirical({-1.0, 0.0, 0.25, 0.5, 2.0, 3.5}, 1, 1);
    const auto sol = solve_1d(src, 1.0);
    CHECK(std::abs(sol.lambda_left - sol.lambda_right) <= 1e-9);
}

TEST_CASE("translation equivariance for empirical sources") {
    const std::vector<double> base{-0.5, 0.25, 1.0, 1.75, 4.0};
    const double shift = 2.5;
    std::vector<double> shifted = base;
    for (double& v : shifted) v += shift;
    const auto s0 = solve_1d(PointSource::empirical(base, 1, 1), 1.2);
    const auto s1 = solve_1d(PointSource::empirical(shifted, 1, 1), 1.2);
    CHECK(s1.a - s0.a == doctest::Approx(shift).epsilon(1e-9));
    CHECK(s1.delta == doctest::Approx(s0.delta).epsilon(1e-9));
    CHECK(s1.lambda == doctest::Approx(s0.lambda).epsilon(1e-9));
}

TEST_CASE("gaussian law via quadrature") {
    const auto src = PointSource::gaussian_std(1, 1);
    const auto sol = solve_1d(src, 2.0);
    // symmetric law -> interval centered at zero
    CHECK(sol.a == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(sol.lambda > 0.0);
    // lambda = E[(X-1)1{X>1}]/2 = (phi(1) - 1*(1-Phi(1)))/2
    const double phi1 = std::exp(-0.5) / std::sqrt(2.0 * M_PI);
    const double tail = 0.5 * std::erfc(1.0 / std::sqrt(2.0));
    CHECK(sol.lambda == doctest::Approx((phi1 - tail) / 2.0).epsilon(1e-6));
}

TEST_CASE("solver rejects non-1-D sources") {
    CHECK_THROWS_AS(solve_1d(PointSource::uniform_square(1), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_1d(PointSource::uniform_1d(0, 1, 1), -1.0), std::invalid_argument);
}
