#pragma once

// Internal declarations shared between the dispatcher and the per-ISA
// translation units. Every variant must round identically to the scalar
// reference (no FMA, same operation order); equivalence tests assert bit
// equality on the output arrays.

#include "princurve/kernels.hpp"

namespace princurve::kernels::detail {

void segment_scan2_scalar(const SegmentTable2& t, double x, double y,
                          double* s_out, double* sq_out);
void vertex_scan2_scalar(const double* vx, const double* vy, std::size_t n,
                         double x, double y, double* sq_out);
void crofton_scalar(const SegmentTable2& t, const double* ux, const double* uy,
                    const double* r, std::size_t num_lines, std::uint32_t* counts);

#if defined(PRINCURVE_HAVE_AVX2)
void segment_scan2_avx2(const SegmentTable2& t, double x, double y,
                        double* s_out, double* sq_out);
void vertex_scan2_avx2(const double* vx, const double* vy, std::size_t n,
                       double x, double y, double* sq_out);
void crofton_avx2(const SegmentTable2& t, const double* ux, const double* uy,
                  const double* r, std::size_t num_lines, std::uint32_t* counts);
#endif

#if defined(PRINCURVE_HAVE_NEON)
void segment_scan2_neon(const SegmentTable2& t, double x, double y,
                        double* s_out, double* sq_out);
void vertex_scan2_neon(const double* vx, const double* vy, std::size_t n,
                       double x, double y, double* sq_out);
void crofton_neon(const SegmentTable2& t, const double* ux, const double* uy,
                  const double* r, std::size_t num_lines, std::uint32_t* counts);
#endif

}  // namespace princurve::kernels::detail
