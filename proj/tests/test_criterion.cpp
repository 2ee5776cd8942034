#include <doctest.h>

#include <cmath>
#include <vector>

#include "princurve/criterion.hpp"
#include "princurve/optimizer.hpp"
#include "princurve/rng.hpp"

using namespace princurve;

namespace {

PolygonalCurve segment_curve(double x0, double x1) {
    PolygonalCurve c;
    c.d = 2;
    c.topology = Topology::open;
    c.vertices = {x0, 0.0, x1, 0.0};
    return c;
}

PolygonalCurve circle_curve(double radius, int n) {
    PolygonalCurve c;
    c.d = 2;
    c.topology = Topology::closed;
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * M_PI * i / n;
        c.vertices.push_back(radius * std::cos(a));
        c.vertices.push_back(radius * std::sin(a));
    }
    return c;
}

}  // namespace

TEST_CASE("empirical_delta simple values") {
    const auto seg = segment_curve(0.0, 1.0);
    const std::vector<double> pts{0, 0, 2, 0};
    const auto est = empirical_delta(seg, pts, 2);
    CHECK(est.value == doctest::Approx(0.5));
    CHECK(est.mode == ProjectionMode::segment);

    const std::vector<double> on_curve{0.25, 0, 0.75, 0};
    CHECK(empirical_delta(seg, on_curve, 2).value == doctest::Approx(0.0));
}

TEST_CASE("empirical_delta circle sample against concentric polygon") {
    const auto src = PointSource::uniform_circle(1.0, 31);
    const auto pts = src.sample(100000);
    const auto circle = circle_curve(0.5, 256);
    const auto est = empirical_delta(circle, pts, 100000);
    CHECK(est.value == doctest::Approx(0.25).epsilon(0.02));
    CHECK(std::abs(est.value - 0.25) < 0.005);
}

TEST_CASE("empirical_delta monotone under refinement on an existing segment") {
    const auto coarse = segment_curve(0.0, 1.0);
    PolygonalCurve fine;
    fine.d = 2;
    fine.topology = Topology::open;
    fine.vertices = {0.0, 0.0, 0.3, 0.0, 1.0, 0.0};  // vertex inserted on the segment

    SplitMix64 rng(13);
    std::vector<double> pts;
    for (int i = 0; i < 500; ++i) {
        pts.push_back(2.0 * rng.next_unit() - 0.5);
        pts.push_back(2.0 * rng.next_unit() - 1.0);
    }
    const double a = empirical_delta(coarse, pts, 500).value;
    const double b = empirical_delta(fine, pts, 500).value;
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, a));
}

TEST_CASE("empirical_delta dimension mismatch") {
    const auto seg = segment_curve(0.0, 1.0);
    std::vector<double> short_pts{1.0};
    CHECK_THROWS_AS(empirical_delta(seg, short_pts, 1), std::invalid_argument);
}

TEST_CASE("surrogate objective basic values") {
    // single vertex, single point, no smoothing
    std::vector<double> v{0.0, 0.0};
    std::vector<double> p{1.0, 0.0};
    SurrogateConfig cfg;
    CHECK(surrogate_objective(v, 1, 2, p, 1, cfg, 1) == doctest::Approx(1.0));

    // penalty with anchor == vertices adds nothing
    std::vector<double> verts{0, 0, 1, 0, 2, 0};
    std::vector<double> pts{0.1, 0.2, 1.9, -0.3};
    SurrogateConfig with_anchor;
    with_anchor.epsilon = 1.0;
    with_anchor.anchor = verts;
    const double base = surrogate_objective(verts, 3, 2, pts, 2, SurrogateConfig{}, 1);
    CHECK(surrogate_objective(verts, 3, 2, pts, 2, with_anchor, 1) == doctest::Approx(base));

    // unit offset on each of n anchors adds exactly n
    SurrogateConfig offset = with_anchor;
    for (std::size_t i = 0; i < 3; ++i) offset.anchor[2 * i] += 1.0;
    CHECK(surrogate_objective(verts, 3, 2, pts, 2, offset, 1) == doctest::Approx(base + 3.0));

    SurrogateConfig missing;
    missing.epsilon = 0.5;
    CHECK_THROWS_AS(surrogate_objective(verts, 3, 2, pts, 2, missing, 1),
                    std::invalid_argument);
}

TEST_CASE("surrogate with smoothing off equals vertex-projection criterion exactly") {
    SplitMix64 rng(23);
    std::vector<double> verts, pts;
    for (int i = 0; i < 8; ++i) {
        verts.push_back(rng.next_unit());
        verts.push_back(rng.next_unit());
    }
    const std::size_t count = 300;
    for (std::size_t i = 0; i < 2 * count; ++i) pts.push_back(3.0 * rng.next_unit() - 1.0);

    PolygonalCurve curve;
    curve.d = 2;
    curve.topology = Topology::open;
    curve.vertices = verts;

    const double s = surrogate_objective(verts, 8, 2, pts, count, SurrogateConfig{}, 77);
    const double v = empirical_delta_vertices(curve, pts, count).value;
    CHECK(s == v);
}

TEST_CASE("surrogate gradient matches central finite differences") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 6, d = 2;
        std::vector<double> verts, pts;
        for (int i = 0; i < n * d; ++i) verts.push_back(2.0 * rng.next_unit() - 1.0);
        const std::size_t count = 160;
        for (std::size_t i = 0; i < count * d; ++i) pts.push_back(3.0 * rng.next_unit() - 1.5);

        SurrogateConfig cfg;
        cfg.epsilon = 0.3;
        cfg.zeta = 0.02;
        cfg.eta = 0.02;
        cfg.anchor.assign(n * d, 0.25);
        const std::uint64_t seed = 1000 + trial;

        const auto grad = surrogate_gradient(verts, n, d, pts, count, cfg, seed);
        const double h = 1e-6;
        double worst = 0.0, scale = 0.0;
        for (int i = 0; i < n * d; ++i) {
            auto vp = verts, vm = verts;
            vp[i] += h;
            vm[i] -= h;
            const double fp = surrogate_objective(vp, n, d, pts, count, cfg, seed);
            const double fm = surrogate_objective(vm, n, d, pts, count, cfg, seed);
            const double fd = (fp - fm) / (2.0 * h);
            worst = std::max(worst, std::abs(fd - grad[i]));
            scale = std::max(scale, std::abs(grad[i]));
        }
        CHECK(worst <= 1e-4 * std::max(1.0, scale));
    }
}

TEST_CASE("g_scan handles L = 0 as variance about the mean") {
    const auto src = PointSource::empirical({0, 0, 2, 0}, 2, 3);
    FitConfig base;
    base.n_vertices = 4;
    base.max_iters = 40;
    base.window = 10;
    base.polish_iters = 20;
    base.seed = 3;
    const std::vector<double> lengths{0.0};
    const auto rows = g_scan(src, lengths, base);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].g_hat == doctest::Approx(1.0));
    CHECK(rows[0].n_vertices == 1);
}

TEST_CASE("g_scan nonincreasing and nonnegative on a small 1-D problem") {
    const auto src = PointSource::uniform_1d(0.0, 1.0, 5);
    FitConfig base;
    base.n_vertices = 12;
    base.max_iters = 300;
    base.window = 25;
    base.sample_count = 4000;
    base.batch_size = 2000;
    base.seed = 5;
    const std::vector<double> lengths{0.0, 0.5, 1.0};
    const auto rows = g_scan(src, lengths, base);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].g_hat == doctest::Approx(1.0 / 96.0).epsilon(0.10));
    for (const auto& r : rows) CHECK(r.g_hat >= 0.0);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double se = 2.0 * std::hypot(rows[i].std_error, rows[i - 1].std_error);
        CHECK(rows[i].g_hat <= rows[i - 1].g_hat + se);
    }
    // supported on a short segment -> G reaches 0
    CHECK(rows[2].g_hat <= 1e-4);

    const std::vector<double> unsorted{0.5, 0.25};
    CHECK_THROWS_AS(g_scan(src, unsorted, base), std::invalid_argument);
}

TEST_CASE("g_scan on the circle law reaches the concentric-circle value") {
    // every point ends at distance 1 - L/(2 pi) = 0.5 from the optimum
    const auto src = PointSource::uniform_circle(1.0, 8);
    FitConfig base;
    base.n_vertices = 32;
    base.topology = Topology::closed;
    base.max_iters = 600;
    base.sample_count = 4000;
    base.seed = 8;
    const std::vector<double> lengths{M_PI};
    const auto rows = g_scan(src, lengths, base);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].g_hat == doctest::Approx(0.25).epsilon(0.05));
}
