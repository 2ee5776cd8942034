// NEON (aarch64) variants, two lanes of f64. Same operation order as the
// scalar reference; FMLA is not used so lanes round identically.

#include "kernels_impl.hpp"

#if defined(PRINCURVE_HAVE_NEON)

#include <arm_neon.h>

namespace princurve::kernels::detail {

void segment_scan2_neon(const SegmentTable2& t, double x, double y,
                        double* s_out, double* sq_out) {
    const float64x2_t px = vdupq_n_f64(x);
    const float64x2_t py = vdupq_n_f64(y);
    const float64x2_t zero = vdupq_n_f64(0.0);
    const float64x2_t one = vdupq_n_f64(1.0);
    std::size_t k = 0;
    for (; k + 2 <= t.size; k += 2) {
        const float64x2_t ax = vld1q_f64(&t.ax[k]);
        const float64x2_t ay = vld1q_f64(&t.ay[k]);
        const float64x2_t ux = vld1q_f64(&t.ux[k]);
        const float64x2_t uy = vld1q_f64(&t.uy[k]);
        const float64x2_t inv = vld1q_f64(&t.inv_len2[k]);
        const float64x2_t wx = vsubq_f64(px, ax);
        const float64x2_t wy = vsubq_f64(py, ay);
        const float64x2_t dot = vaddq_f64(vmulq_f64(wx, ux), vmulq_f64(wy, uy));
        float64x2_t s = vmulq_f64(dot, inv);
        s = vminq_f64(vmaxq_f64(s, zero), one);
        const float64x2_t dx = vsubq_f64(wx, vmulq_f64(s, ux));
        const float64x2_t dy = vsubq_f64(wy, vmulq_f64(s, uy));
        vst1q_f64(s_out + k, s);
        vst1q_f64(sq_out + k, vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)));
    }
    for (; k < t.size; ++k) {
        const double wx = x - t.ax[k];
        const double wy = y - t.ay[k];
        double s = (wx * t.ux[k] + wy * t.uy[k]) * t.inv_len2[k];
        s = (s > 0.0) ? ((s < 1.0) ? s : 1.0) : 0.0;
        const double dx = wx - s * t.ux[k];
        const double dy = wy - s * t.uy[k];
        s_out[k] = s;
        sq_out[k] = dx * dx + dy * dy;
    }
}

void vertex_scan2_neon(const double* vx, const double* vy, std::size_t n,
                       double x, double y, double* sq_out) {
    const float64x2_t px = vdupq_n_f64(x);
    const float64x2_t py = vdupq_n_f64(y);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const float64x2_t dx = vsubq_f64(px, vld1q_f64(vx + k));
        const float64x2_t dy = vsubq_f64(py, vld1q_f64(vy + k));
        vst1q_f64(sq_out + k, vaddq_f64(vmulq_f64(dx, dx), vmulq_f64(dy, dy)));
    }
    for (; k < n; ++k) {
        const double dx = x - vx[k];
        const double dy = y - vy[k];
        sq_out[k] = dx * dx + dy * dy;
    }
}

void crofton_neon(const SegmentTable2& t, const double* ux, const double* uy,
                  const double* r, std::size_t num_lines, std::uint32_t* counts) {
    const float64x2_t zero = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= num_lines; i += 2) {
        const float64x2_t cx = vld1q_f64(ux + i);
        const float64x2_t cy = vld1q_f64(uy + i);
        const float64x2_t cr = vld1q_f64(r + i);
        uint64x2_t acc = vdupq_n_u64(0);
        for (std::size_t k = 0; k < t.size; ++k) {
            const float64x2_t ax = vdupq_n_f64(t.ax[k]);
            const float64x2_t ay = vdupq_n_f64(t.ay[k]);
            const float64x2_t bx = vdupq_n_f64(t.bx[k]);
            const float64x2_t by = vdupq_n_f64(t.by[k]);
            const float64x2_t sa =
                vsubq_f64(vaddq_f64(vmulq_f64(ax, cx), vmulq_f64(ay, cy)), cr);
            const float64x2_t sb =
                vsubq_f64(vaddq_f64(vmulq_f64(bx, cx), vmulq_f64(by, cy)), cr);
            const uint64x2_t mask = vcltq_f64(vmulq_f64(sa, sb), zero);
            acc = vsubq_u64(acc, mask);  // mask is all-ones per hit
        }
        counts[i] += static_cast<std::uint32_t>(vgetq_lane_u64(acc, 0));
        counts[i + 1] += static_cast<std::uint32_t>(vgetq_lane_u64(acc, 1));
    }
    if (i < num_lines) crofton_scalar(t, ux + i, uy + i, r + i, num_lines - i, counts + i);
}

}  // namespace princurve::kernels::detail

#endif  // PRINCURVE_HAVE_NEON
