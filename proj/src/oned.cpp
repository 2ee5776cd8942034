#include "princurve/oned.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

namespace princurve {

namespace {

constexpr double kQuadTol = 1e-10;  // absolute quadrature tolerance

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    return adaptive_step(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol, 48);
}

struct Law {
    // density and support; empirical handled separately
    std::function<double(double)> density;
    double lo = 0.0, hi = 0.0;
};

Law law_of(const PointSource& source) {
    Law law;
    switch (source.kind()) {
        case SourceKind::uniform_1d: {
            const double a = source.param_a(), b = source.param_b();
            law.density = [a, b](double) { return 1.0 / (b - a); };
            law.lo = a;
            law.hi = b;
            break;
        }
        case SourceKind::gaussian_std: {
            if (source.dim() != 1) throw std::invalid_argument("1-D solver requires a 1-D source");
            law.density = [](double x) {
                return 0.3989422804014326779399461 * std::exp(-0.5 * x * x);
            };
            law.lo = -10.0;  // tail mass < 1e-23, far below the quadrature tolerance
            law.hi = 10.0;
            break;
        }
        default:
            throw std::invalid_argument("1-D solver supports empirical, uniform_1d and gaussian_std(1)");
    }
    return law;
}

struct Prefix {
    std::vector<double> xs;   // sorted
    std::vector<double> sum;  // prefix sums of xs
    std::vector<double> sq;   // prefix sums of xs^2
    std::size_t n = 0;

    explicit Prefix(const std::vector<double>& pts) {
        xs = pts;
        std::sort(xs.begin(), xs.end());
        n = xs.size();
        sum.assign(n + 1, 0.0);
        sq.assign(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            sum[i + 1] = sum[i] + xs[i];
            sq[i + 1] = sq[i] + xs[i] * xs[i];
        }
    }
    // E[(X-c) 1{X < c}]
    double tail_low1(double c) const {
        const std::size_t m = std::lower_bound(xs.begin(), xs.end(), c) - xs.begin();
        return (sum[m] - static_cast<double>(m) * c) / static_cast<double>(n);
    }
    // E[(X-c)^2 1{X < c}]
    double tail_low2(double c) const {
        const std::size_t m = std::lower_bound(xs.begin(), xs.end(), c) - xs.begin();
        return (sq[m] - 2.0 * c * sum[m] + static_cast<double>(m) * c * c) / static_cast<double>(n);
    }
    // E[(X-c) 1{X > c}]
    double tail_high1(double c) const {
        const std::size_t m = std::upper_bound(xs.begin(), xs.end(), c) - xs.begin();
        const double cnt = static_cast<double>(n - m);
        return ((sum[n] - sum[m]) - cnt * c) / static_cast<double>(n);
    }
    // E[(X-c)^2 1{X > c}]
    double tail_high2(double c) const {
        const std::size_t m = std::upper_bound(xs.begin(), xs.end(), c) - xs.begin();
        const double cnt = static_cast<double>(n - m);
        return ((sq[n] - sq[m]) - 2.0 * c * (sum[n] - sum[m]) + cnt * c * c) /
               static_cast<double>(n);
    }
};

struct Tails {
    std::function<double(double)> low1, low2, high1, high2;  // as in Prefix
    double lo = 0.0, hi = 0.0;
};

Tails make_tails(const PointSource& source) {
    Tails t;
    if (source.is_empirical()) {
        if (source.dim() != 1) throw std::invalid_argument("1-D solver requires a 1-D source");
        auto pre = std::make_shared<Prefix>(source.points());
        t.low1 = [pre](double c) { return pre->tail_low1(c); };
        t.low2 = [pre](double c) { return pre->tail_low2(c); };
        t.high1 = [pre](double c) { return pre->tail_high1(c); };
        t.high2 = [pre](double c) { return pre->tail_high2(c); };
        t.lo = pre->xs.front();
        t.hi = pre->xs.back();
        return t;
    }
    const Law law = law_of(source);
    const auto dens = law.density;
    const double lo = law.lo, hi = law.hi;
    t.low1 = [dens, lo, hi](double c) {
        return integrate([&](double x) { return (x - c) * dens(x); }, lo, std::min(c, hi), kQuadTol);
    };
    t.low2 = [dens, lo, hi](double c) {
        return integrate([&](double x) { return (x - c) * (x - c) * dens(x); }, lo, std::min(c, hi),
                         kQuadTol);
    };
    t.high1 = [dens, lo, hi](double c) {
        return integrate([&](double x) { return (x - c) * dens(x); }, std::max(c, lo), hi, kQuadTol);
    };
    t.high2 = [dens, lo, hi](double c) {
        return integrate([&](double x) { return (x - c) * (x - c) * dens(x); }, std::max(c, lo), hi,
                         kQuadTol);
    };
    t.lo = lo;
    t.hi = hi;
    return t;
}

}  // namespace

double delta_1d(const PointSource& source, double a, double L) {
    if (L < 0.0) throw std::invalid_argument("delta_1d requires L >= 0");
    const Tails t = make_tails(source);
    return t.low2(a) + t.high2(a + L);
}

OneDSolution solve_1d(const PointSource& source, double L, double tol) {
    if (L < 0.0) throw std::invalid_argument("solve_1d requires L >= 0");
    const Tails t = make_tails(source);

    OneDSolution sol;
    sol.length = L;

    const bool bounded_support =
        source.is_empirical() || source.kind() == SourceKind::uniform_1d;
    if (bounded_support && t.hi - t.lo <= L) {
        // Whole support fits in a length-L interval: any covering placement,
        // centered for symmetry.
        sol.a = 0.5 * (t.lo + t.hi - L);
        sol.delta = t.low2(sol.a) + t.high2(sol.a + L);
        sol.lambda = sol.lambda_left = sol.lambda_right = 0.0;
        sol.derivative_at_a = 0.0;
        sol.degenerate = true;
        return sol;
    }

    // Derivative of the criterion in a; nondecreasing, so bisection applies.
    const auto dprime = [&](double a) {
        return 2.0 * (-t.low1(a)) + 2.0 * (-t.high1(a + L));
    };

    double lo = t.lo - L, hi = t.hi;
    const double width_tol = tol * std::max(1.0, hi - lo);
    while (hi - lo > width_tol) {
        const double mid = 0.5 * (lo + hi);
        if (dprime(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    sol.a = 0.5 * (lo + hi);
    sol.delta = t.low2(sol.a) + t.high2(sol.a + L);
    sol.derivative_at_a = dprime(sol.a);
    if (L > 0.0) {
        sol.lambda_left = -t.low1(sol.a) / L;
        sol.lambda_right = t.high1(sol.a + L) / L;
        sol.lambda = 0.5 * (sol.lambda_left + sol.lambda_right);
    }
    return sol;
}

}  // namespace princurve
