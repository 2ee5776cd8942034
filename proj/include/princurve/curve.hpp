#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "princurve/common.hpp"

namespace princurve {

enum class Topology { open, closed };

/// Relative tie tolerance on squared distances for max-argmin projection.
inline constexpr double kProjectionTieRel = 1e-12;

/// Polygonal curve f:[0,1] -> R^d with uniformly spaced knots.
/// Open:   knots t_i = i/(n-1), segments i = 0..n-2.
/// Closed: knots t_i = i/n, segments i = 0..n-1 (last wraps to vertex 0).
struct PolygonalCurve {
    int d = 0;
    Topology topology = Topology::open;
    std::vector<double> vertices;  // n * d, row-major

    std::size_t vertex_count() const { return d > 0 ? vertices.size() / d : 0; }
    std::size_t segment_count() const {
        const std::size_t n = vertex_count();
        return topology == Topology::closed ? n : (n > 0 ? n - 1 : 0);
    }
    std::span<const double> vertex(std::size_t i) const {
        return {vertices.data() + i * d, static_cast<std::size_t>(d)};
    }
    double knot(std::size_t i) const {
        return static_cast<double>(i) / static_cast<double>(segment_count());
    }

    /// Throws std::invalid_argument on fewer than 2 vertices, bad dimension,
    /// or non-finite coordinates.
    void validate() const;

    /// Point at parameter t (clamped to [0,1]).
    std::vector<double> point_at(double t) const;
};

struct ProjectionResult {
    double t_hat = 0.0;
    std::vector<double> foot;
    double sq_dist = 0.0;
    std::ptrdiff_t segment_index = -1;
};

/// Batch projection (structure-of-arrays); feet are recoverable from
/// segment + local parameter but stored explicitly for diagnostics.
struct ProjectionBatch {
    std::vector<double> t_hat;
    std::vector<double> sq_dist;
    std::vector<std::int32_t> segment;
    std::vector<double> foot;  // count * d
    std::size_t count = 0;
};

struct CurvatureAtom {
    double t = 0.0;
    std::vector<double> value;
};

/// Atomic vector-valued signed measure carried by the curve's second
/// differences. total_variation is sqrt(sum_j TV(component j)^2).
struct CurvatureMeasure {
    int d = 0;
    std::vector<CurvatureAtom> atoms;
    double total_variation = 0.0;

    std::vector<double> total_mass() const;
    /// Same norm restricted to atoms with a < t <= b.
    double restricted_norm(double a, double b) const;
    /// Sum of Euclidean atom norms (≈ speed × total turning for constant-speed curves).
    double atom_norm_sum() const;
};

double curve_length(const PolygonalCurve& curve);

/// Nearest point on the polyline; among candidates whose squared distances
/// tie within kProjectionTieRel (relative), the largest parameter wins.
ProjectionResult project_point(const PolygonalCurve& curve, std::span<const double> x);

/// Nearest vertex (not segment); same max-argmin tie rule on knot parameters.
ProjectionResult project_to_vertices(const PolygonalCurve& curve, std::span<const double> x);

ProjectionBatch project_points(const PolygonalCurve& curve,
                               std::span<const double> points, std::size_t count);

/// Second-difference measure. Requires n >= 3.
CurvatureMeasure second_difference_measure(const PolygonalCurve& curve);

/// Per-segment parametric speeds: segs * ||v_{i+1} - v_i||.
std::vector<double> speed_profile(const PolygonalCurve& curve);

/// Monte Carlo Crofton length estimate (d = 2): lines sampled uniformly on
/// [-R,R] x [0,2pi) with R = max vertex norm + 1e-9; estimate = pi*R*mean(#crossings).
double crofton_length(const PolygonalCurve& curve, std::size_t num_lines, std::uint64_t seed);

struct SegmentCrossing {
    std::size_t seg_a = 0;
    std::size_t seg_b = 0;
    std::array<double, 2> point{0.0, 0.0};
};

/// Transversal crossings between non-adjacent segments (d = 2 only).
/// Touching configurations do not count; see diagnostics for tangency reporting.
std::vector<SegmentCrossing> self_intersections(const PolygonalCurve& curve);

/// m vertices at equal arc-length spacing along the polyline; same topology.
PolygonalCurve resample_uniform(const PolygonalCurve& curve, std::size_t m);

/// Sum of turning angles at knots (wraparound for closed curves).
double turning_angle_sum(const PolygonalCurve& curve);

}  // namespace princurve
