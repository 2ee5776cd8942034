#include "princurve/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <mutex>
#include <stdexcept>

#include "princurve/curve.hpp"
#include "kernels_impl.hpp"

namespace princurve::kernels {

namespace detail {

void segment_scan2_scalar(const SegmentTable2& t, double x, double y,
                          double* s_out, double* sq_out) {
    for (std::size_t k = 0; k < t.size; ++k) {
        const double wx = x - t.ax[k];
        const double wy = y - t.ay[k];
        double s = (wx * t.ux[k] + wy * t.uy[k]) * t.inv_len2[k];
        // Clamp mirroring SIMD min(max(s,0),1) exactly, including -0.0.
        s = (s > 0.0) ? ((s < 1.0) ? s : 1.0) : 0.0;
        const double dx = wx - s * t.ux[k];
        const double dy = wy - s * t.uy[k];
        s_out[k] = s;
        sq_out[k] = dx * dx + dy * dy;
    }
}

void vertex_scan2_scalar(const double* vx, const double* vy, std::size_t n,
                         double x, double y, double* sq_out) {
    for (std::size_t k = 0; k < n; ++k) {
        const double dx = x - vx[k];
        const double dy = y - vy[k];
        sq_out[k] = dx * dx + dy * dy;
    }
}

void crofton_scalar(const SegmentTable2& t, const double* ux, const double* uy,
                    const double* r, std::size_t num_lines, std::uint32_t* counts) {
    for (std::size_t i = 0; i < num_lines; ++i) {
        const double cx = ux[i], cy = uy[i], cr = r[i];
        std::uint32_t c = 0;
        for (std::size_t k = 0; k < t.size; ++k) {
            const double sa = t.ax[k] * cx + t.ay[k] * cy - cr;
            const double sb = t.bx[k] * cx + t.by[k] * cy - cr;
            c += (sa * sb < 0.0) ? 1u : 0u;
        }
        counts[i] += c;
    }
}

}  // namespace detail

namespace {

struct Dispatch {
    void (*segment_scan2)(const SegmentTable2&, double, double, double*, double*) =
        detail::segment_scan2_scalar;
    void (*vertex_scan2)(const double*, const double*, std::size_t, double, double, double*) =
        detail::vertex_scan2_scalar;
    void (*crofton)(const SegmentTable2&, const double*, const double*, const double*,
                    std::size_t, std::uint32_t*) = detail::crofton_scalar;
    Isa isa = Isa::scalar;
};

Dispatch g_dispatch;
std::once_flag g_init_flag;

void apply_isa(Isa isa) {
    Dispatch d;
    d.isa = isa;
    switch (isa) {
        case Isa::scalar:
            break;
#if defined(PRINCURVE_HAVE_AVX2)
        case Isa::avx2:
            d.segment_scan2 = detail::segment_scan2_avx2;
            d.vertex_scan2 = detail::vertex_scan2_avx2;
            d.crofton = detail::crofton_avx2;
            break;
#endif
#if defined(PRINCURVE_HAVE_NEON)
        case Isa::neon:
            d.segment_scan2 = detail::segment_scan2_neon;
            d.vertex_scan2 = detail::vertex_scan2_neon;
            d.crofton = detail::crofton_neon;
            break;
#endif
        default:
            throw std::invalid_argument("unsupported SIMD variant");
    }
    g_dispatch = d;
}

Isa best_supported() {
    if (isa_supported(Isa::avx2)) return Isa::avx2;
    if (isa_supported(Isa::neon)) return Isa::neon;
    return Isa::scalar;
}

void init_dispatch() {
    Isa pick = best_supported();
    if (const char* env = std::getenv("PRINCURVE_SIMD")) {
        const std::string v(env);
        if (v == "scalar") pick = Isa::scalar;
        else if (v == "avx2" && isa_supported(Isa::avx2)) pick = Isa::avx2;
        else if (v == "neon" && isa_supported(Isa::neon)) pick = Isa::neon;
        // unknown values and unsupported requests fall back to auto
    }
    apply_isa(pick);
}

void ensure_init() { std::call_once(g_init_flag, init_dispatch); }

}  // namespace

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "?";
}

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(PRINCURVE_HAVE_AVX2)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::neon:
#if defined(PRINCURVE_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Isa active_isa() {
    ensure_init();
    return g_dispatch.isa;
}

void set_isa(Isa isa) {
    ensure_init();
    if (!isa_supported(isa)) throw std::invalid_argument("SIMD variant not supported on this host");
    apply_isa(isa);
}

SegmentTable2 make_segment_table(const PolygonalCurve& curve) {
    if (curve.d != 2) throw std::invalid_argument("segment table requires d = 2");
    const std::size_t n = curve.vertex_count();
    const std::size_t segs = curve.segment_count();
    SegmentTable2 t;
    t.size = segs;
    t.ax.resize(segs); t.ay.resize(segs);
    t.bx.resize(segs); t.by.resize(segs);
    t.ux.resize(segs); t.uy.resize(segs);
    t.inv_len2.resize(segs);
    for (std::size_t k = 0; k < segs; ++k) {
        const std::size_t k1 = (k + 1) % n;
        t.ax[k] = curve.vertices[2 * k];
        t.ay[k] = curve.vertices[2 * k + 1];
        t.bx[k] = curve.vertices[2 * k1];
        t.by[k] = curve.vertices[2 * k1 + 1];
        t.ux[k] = t.bx[k] - t.ax[k];
        t.uy[k] = t.by[k] - t.ay[k];
        const double len2 = t.ux[k] * t.ux[k] + t.uy[k] * t.uy[k];
        t.inv_len2[k] = len2 > 0.0 ? 1.0 / len2 : 0.0;
    }
    return t;
}

void segment_scan2(const SegmentTable2& table, double x, double y,
                   double* s_out, double* sq_out) {
    ensure_init();
    g_dispatch.segment_scan2(table, x, y, s_out, sq_out);
}

void vertex_scan2(const double* vx, const double* vy, std::size_t n,
                  double x, double y, double* sq_out) {
    ensure_init();
    g_dispatch.vertex_scan2(vx, vy, n, x, y, sq_out);
}

void crofton_accumulate(const SegmentTable2& table,
                        const double* ux, const double* uy, const double* r,
                        std::size_t num_lines, std::uint32_t* counts) {
    ensure_init();
    g_dispatch.crofton(table, ux, uy, r, num_lines, counts);
}

std::vector<std::int32_t> assign_nearest_vertex(std::span<const double> points, std::size_t count,
                                                std::span<const double> vertices, std::size_t n,
                                                int d) {
    std::vector<std::int32_t> pick(count, 0);
    if (n == 0) return pick;
    if (d == 2) {
        ensure_init();
        std::vector<double> vx(n), vy(n);
        for (std::size_t j = 0; j < n; ++j) {
            vx[j] = vertices[2 * j];
            vy[j] = vertices[2 * j + 1];
        }
        std::vector<double> sq(n);
        for (std::size_t i = 0; i < count; ++i) {
            g_dispatch.vertex_scan2(vx.data(), vy.data(), n, points[2 * i], points[2 * i + 1],
                                    sq.data());
            double best = sq[0];
            std::int32_t arg = 0;
            for (std::size_t j = 1; j < n; ++j) {
                if (sq[j] <= best) {  // exact ties pick the larger index
                    best = sq[j];
                    arg = static_cast<std::int32_t>(j);
                }
            }
            pick[i] = arg;
        }
        return pick;
    }
    for (std::size_t i = 0; i < count; ++i) {
        const double* x = points.data() + static_cast<std::size_t>(d) * i;
        double best = 0.0;
        std::int32_t arg = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double* v = vertices.data() + static_cast<std::size_t>(d) * j;
            double sq = 0.0;
            for (int c = 0; c < d; ++c) {
                const double dif = x[c] - v[c];
                sq += dif * dif;
            }
            if (j == 0 || sq <= best) {
                best = sq;
                arg = static_cast<std::int32_t>(j);
            }
        }
        pick[i] = arg;
    }
    return pick;
}

}  // namespace princurve::kernels
