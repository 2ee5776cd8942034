#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace princurve {
struct PolygonalCurve;
}

namespace princurve::kernels {

enum class Isa { scalar, avx2, neon };

const char* isa_name(Isa isa);
bool isa_supported(Isa isa);

/// Active instruction set. Defaults to the best supported one; the
/// PRINCURVE_SIMD env var (scalar|avx2|neon|auto) overrides at first use.
Isa active_isa();
void set_isa(Isa isa);  // throws std::invalid_argument if unsupported

/// Structure-of-arrays segment table for 2-D curves. inv_len2 is 0 for
/// degenerate (zero-length) segments, which then behave as points.
struct SegmentTable2 {
    std::vector<double> ax, ay, bx, by, ux, uy, inv_len2;
    std::size_t size = 0;
};

SegmentTable2 make_segment_table(const PolygonalCurve& curve);

/// Per-segment clamped foot parameter s in [0,1] and squared distance to
/// the point (x, y). Arrays must hold table.size entries. This is the
/// SIMD-dispatched part; candidate selection stays in shared scalar code.
void segment_scan2(const SegmentTable2& table, double x, double y,
                   double* s_out, double* sq_out);

/// Squared distances from (x, y) to 2-D vertices vx/vy.
void vertex_scan2(const double* vx, const double* vy, std::size_t n,
                  double x, double y, double* sq_out);

/// Adds the number of segment crossings of each line x*ux + y*uy = r to
/// counts[]. Line direction arrays are SoA over num_lines.
void crofton_accumulate(const SegmentTable2& table,
                        const double* ux, const double* uy, const double* r,
                        std::size_t num_lines, std::uint32_t* counts);

/// Nearest-vertex assignment for `count` points (row-major, dim d) against
/// n vertices. Exact distance ties pick the larger index (max-argmin).
/// d == 2 uses the dispatched kernels; other dimensions use scalar code.
std::vector<std::int32_t> assign_nearest_vertex(std::span<const double> points, std::size_t count,
                                                std::span<const double> vertices, std::size_t n,
                                                int d);

}  // namespace princurve::kernels
