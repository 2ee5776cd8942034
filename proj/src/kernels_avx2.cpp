// AVX2 variants. Kept operation-for-operation identical to the scalar
// reference in kernels.cpp so results are bit-equal (build uses
// -ffp-contract=off, and no FMA intrinsics are used here).

#include "kernels_impl.hpp"

#if defined(PRINCURVE_HAVE_AVX2)

#include <immintrin.h>

namespace princurve::kernels::detail {

void segment_scan2_avx2(const SegmentTable2& t, double x, double y,
                        double* s_out, double* sq_out) {
    const __m256d px = _mm256_set1_pd(x);
    const __m256d py = _mm256_set1_pd(y);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t k = 0;
    for (; k + 4 <= t.size; k += 4) {
        const __m256d ax = _mm256_loadu_pd(&t.ax[k]);
        const __m256d ay = _mm256_loadu_pd(&t.ay[k]);
        const __m256d ux = _mm256_loadu_pd(&t.ux[k]);
        const __m256d uy = _mm256_loadu_pd(&t.uy[k]);
        const __m256d inv = _mm256_loadu_pd(&t.inv_len2[k]);
        const __m256d wx = _mm256_sub_pd(px, ax);
        const __m256d wy = _mm256_sub_pd(py, ay);
        const __m256d dot = _mm256_add_pd(_mm256_mul_pd(wx, ux), _mm256_mul_pd(wy, uy));
        __m256d s = _mm256_mul_pd(dot, inv);
        s = _mm256_min_pd(_mm256_max_pd(s, zero), one);
        const __m256d dx = _mm256_sub_pd(wx, _mm256_mul_pd(s, ux));
        const __m256d dy = _mm256_sub_pd(wy, _mm256_mul_pd(s, uy));
        _mm256_storeu_pd(s_out + k, s);
        _mm256_storeu_pd(sq_out + k,
                         _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
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

void vertex_scan2_avx2(const double* vx, const double* vy, std::size_t n,
                       double x, double y, double* sq_out) {
    const __m256d px = _mm256_set1_pd(x);
    const __m256d py = _mm256_set1_pd(y);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d dx = _mm256_sub_pd(px, _mm256_loadu_pd(vx + k));
        const __m256d dy = _mm256_sub_pd(py, _mm256_loadu_pd(vy + k));
        _mm256_storeu_pd(sq_out + k,
                         _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
    }
    for (; k < n; ++k) {
        const double dx = x - vx[k];
        const double dy = y - vy[k];
        sq_out[k] = dx * dx + dy * dy;
    }
}

void crofton_avx2(const SegmentTable2& t, const double* ux, const double* uy,
                  const double* r, std::size_t num_lines, std::uint32_t* counts) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= num_lines; i += 4) {
        const __m256d cx = _mm256_loadu_pd(ux + i);
        const __m256d cy = _mm256_loadu_pd(uy + i);
        const __m256d cr = _mm256_loadu_pd(r + i);
        __m256i acc = _mm256_setzero_si256();
        for (std::size_t k = 0; k < t.size; ++k) {
            const __m256d ax = _mm256_set1_pd(t.ax[k]);
            const __m256d ay = _mm256_set1_pd(t.ay[k]);
            const __m256d bx = _mm256_set1_pd(t.bx[k]);
            const __m256d by = _mm256_set1_pd(t.by[k]);
            const __m256d sa = _mm256_sub_pd(
                _mm256_add_pd(_mm256_mul_pd(ax, cx), _mm256_mul_pd(ay, cy)), cr);
            const __m256d sb = _mm256_sub_pd(
                _mm256_add_pd(_mm256_mul_pd(bx, cx), _mm256_mul_pd(by, cy)), cr);
            const __m256d mask = _mm256_cmp_pd(_mm256_mul_pd(sa, sb), zero, _CMP_LT_OQ);
            acc = _mm256_sub_epi64(acc, _mm256_castpd_si256(mask));  // -(-1) per hit
        }
        alignas(32) std::uint64_t lanes[4];
        _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
        for (int j = 0; j < 4; ++j) counts[i + j] += static_cast<std::uint32_t>(lanes[j]);
    }
    if (i < num_lines) crofton_scalar(t, ux + i, uy + i, r + i, num_lines - i, counts + i);
}

}  // namespace princurve::kernels::detail

#endif  // PRINCURVE_HAVE_AVX2
