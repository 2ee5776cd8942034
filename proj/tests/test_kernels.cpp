#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "princurve/curve.hpp"
#include "princurve/kernels.hpp"
#include "princurve/rng.hpp"

using namespace princurve;
namespace k = princurve::kernels;

namespace {

PolygonalCurve random_curve(std::uint64_t seed, int n, Topology topo) {
    SplitMix64 rng(seed);
    PolygonalCurve c;
    c.d = 2;
    c.topology = topo;
    for (int i = 0; i < n; ++i) {
        c.vertices.push_back(4.0 * rng.next_unit() - 2.0);
        c.vertices.push_back(4.0 * rng.next_unit() - 2.0);
    }
    return c;
}

struct IsaGuard {
    k::Isa saved;
    IsaGuard() : saved(k::active_isa()) {}
    ~IsaGuard() { k::set_isa(saved); }
};

}  // namespace

TEST_CASE("SIMD variants are bit-equal to the scalar reference") {
    IsaGuard guard;
    std::vector<k::Isa> variants;
    for (k::Isa isa : {k::Isa::avx2, k::Isa::neon})
        if (k::isa_supported(isa)) variants.push_back(isa);
    if (variants.empty()) return;  // scalar-only host

    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto curve = random_curve(seed, 37, seed % 2 ? Topology::closed : Topology::open);
        const auto table = k::make_segment_table(curve);
        const std::size_t segs = table.size;

        SplitMix64 rng(seed * 977);
        for (int q = 0; q < 16; ++q) {
            const double x = 6.0 * rng.next_unit() - 3.0;
            const double y = 6.0 * rng.next_unit() - 3.0;

            k::set_isa(k::Isa::scalar);
            std::vector<double> s_ref(segs), d_ref(segs);
            k::segment_scan2(table, x, y, s_ref.data(), d_ref.data());
            std::vector<double> v_ref(curve.vertex_count());
            std::vector<double> vx(curve.vertex_count()), vy(curve.vertex_count());
            for (std::size_t i = 0; i < curve.vertex_count(); ++i) {
                vx[i] = curve.vertices[2 * i];
                vy[i] = curve.vertices[2 * i + 1];
            }
            k::vertex_scan2(vx.data(), vy.data(), vx.size(), x, y, v_ref.data());

            for (k::Isa isa : variants) {
                k::set_isa(isa);
                std::vector<double> s_out(segs), d_out(segs), v_out(vx.size());
                k::segment_scan2(table, x, y, s_out.data(), d_out.data());
                k::vertex_scan2(vx.data(), vy.data(), vx.size(), x, y, v_out.data());
                CHECK(std::memcmp(s_out.data(), s_ref.data(), segs * sizeof(double)) == 0);
                CHECK(std::memcmp(d_out.data(), d_ref.data(), segs * sizeof(double)) == 0);
                CHECK(std::memcmp(v_out.data(), v_ref.data(), vx.size() * sizeof(double)) == 0);
            }
        }
    }
}

TEST_CASE("crofton counts identical across variants") {
    IsaGuard guard;
    const auto curve = random_curve(3, 23, Topology::closed);
    const auto table = k::make_segment_table(curve);

    const std::size_t nlines = 4099;  // odd, exercises the tail path
    std::vector<double> ux(nlines), uy(nlines), r(nlines);
    SplitMix64 rng(17);
    for (std::size_t i = 0; i < nlines; ++i) {
        const double a = 6.283185307179586 * rng.next_unit();
        ux[i] = std::cos(a);
        uy[i] = std::sin(a);
        r[i] = 6.0 * rng.next_unit() - 3.0;
    }

    k::set_isa(k::Isa::scalar);
    std::vector<std::uint32_t> ref(nlines, 0);
    k::crofton_accumulate(table, ux.data(), uy.data(), r.data(), nlines, ref.data());

    for (k::Isa isa : {k::Isa::avx2, k::Isa::neon}) {
        if (!k::isa_supported(isa)) continue;
        k::set_isa(isa);
        std::vector<std::uint32_t> out(nlines, 0);
        k::crofton_accumulate(table, ux.data(), uy.data(), r.data(), nlines, out.data());
        CHECK(std::memcmp(out.data(), ref.data(), nlines * sizeof(std::uint32_t)) == 0);
    }
}

TEST_CASE("assign_nearest_vertex matches direct computation and tie rule") {
    IsaGuard guard;
    const int n = 9, d = 2;
    SplitMix64 rng(29);
    std::vector<double> verts;
    for (int i = 0; i < n * d; ++i) verts.push_back(rng.next_unit());
    std::vector<double> pts;
    const std::size_t count = 257;
    for (std::size_t i = 0; i < count * d; ++i) pts.push_back(2.0 * rng.next_unit() - 0.5);

    for (k::Isa isa : {k::Isa::scalar, k::Isa::avx2, k::Isa::neon}) {
        if (!k::isa_supported(isa)) continue;
        k::set_isa(isa);
        const auto assign = k::assign_nearest_vertex(pts, count, verts, n, d);
        for (std::size_t i = 0; i < count; ++i) {
            double best = 1e300;
            for (int j = 0; j < n; ++j) {
                const double dx = pts[2 * i] - verts[2 * j];
                const double dy = pts[2 * i + 1] - verts[2 * j + 1];
                best = std::min(best, dx * dx + dy * dy);
            }
            const double dx = pts[2 * i] - verts[2 * assign[i]];
            const double dy = pts[2 * i + 1] - verts[2 * assign[i] + 1];
            CHECK(dx * dx + dy * dy == best);
        }
    }

    // exact tie -> larger index
    std::vector<double> two{0.0, 0.0, 1.0, 0.0};
    std::vector<double> mid{0.5, 0.0};
    const auto a = k::assign_nearest_vertex(mid, 1, two, 2, 2);
    CHECK(a[0] == 1);
}

TEST_CASE("generic-dimension assignment works for d=3") {
    std::vector<double> verts{0, 0, 0, 1, 1, 1};
    std::vector<double> pts{0.1, 0.0, 0.1, 0.9, 1.0, 0.8};
    const auto a = k::assign_nearest_vertex(pts, 2, verts, 2, 3);
    CHECK(a[0] == 0);
    CHECK(a[1] == 1);
}

TEST_CASE("env/runtime dispatch reports a valid ISA") {
    const k::Isa isa = k::active_isa();
    CHECK(k::isa_supported(isa));
    CHECK(k::isa_name(isa) != nullptr);
}
