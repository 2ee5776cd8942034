#include "princurve/curve.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "princurve/kernels.hpp"
#include "princurve/rng.hpp"

namespace princurve {

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double dif = a[j] - b[j];
        s += dif * dif;
    }
    return s;
}

double norm(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

// Per-segment candidate: clamped foot parameter and squared distance.
struct SegCandidate {
    double s = 0.0;
    double sq = 0.0;
};

SegCandidate project_to_segment(const double* a, const double* b, const double* x, int d) {
    double len2 = 0.0, dot = 0.0;
    for (int j = 0; j < d; ++j) {
        const double u = b[j] - a[j];
        len2 += u * u;
        dot += (x[j] - a[j]) * u;
    }
    // Same arithmetic as the batch kernels: multiply by the inverse, clamp
    // mirroring min(max(s,0),1). Degenerate segments behave as points.
    const double inv = len2 > 0.0 ? 1.0 / len2 : 0.0;
    SegCandidate c;
    double s = dot * inv;
    c.s = (s > 0.0) ? ((s < 1.0) ? s : 1.0) : 0.0;
    double sq = 0.0;
    for (int j = 0; j < d; ++j) {
        const double dif = (x[j] - a[j]) - c.s * (b[j] - a[j]);
        sq += dif * dif;
    }
    c.sq = sq;
    return c;
}

}  // namespace

void PolygonalCurve::validate() const {
    if (d < 1) throw std::invalid_argument("curve dimension must be >= 1");
    if (vertices.size() % d != 0) throw std::invalid_argument("vertex array size not a multiple of d");
    if (vertex_count() < 2) throw std::invalid_argument("curve needs at least 2 vertices");
    for (double v : vertices)
        if (!std::isfinite(v)) throw std::invalid_argument("curve has non-finite vertex");
}

std::vector<double> PolygonalCurve::point_at(double t) const {
    const std::size_t n = vertex_count();
    const std::size_t segs = segment_count();
    t = std::clamp(t, 0.0, 1.0);
    const double scaled = t * static_cast<double>(segs);
    std::size_t k = std::min(static_cast<std::size_t>(scaled), segs - 1);
    const double s = scaled - static_cast<double>(k);
    const std::size_t k1 = (k + 1) % n;
    std::vector<double> out(d);
    for (int j = 0; j < d; ++j) {
        const double aj = vertices[k * d + j];
        const double bj = vertices[k1 * d + j];
        out[j] = aj + s * (bj - aj);
    }
    return out;
}

double curve_length(const PolygonalCurve& curve) {
    curve.validate();
    const std::size_t n = curve.vertex_count();
    const std::size_t segs = curve.segment_count();
    double total = 0.0;
    for (std::size_t k = 0; k < segs; ++k) {
        total += std::sqrt(sq_dist(curve.vertex(k), curve.vertex((k + 1) % n)));
    }
    return total;
}

ProjectionResult project_point(const PolygonalCurve& curve, std::span<const double> x) {
    curve.validate();
    if (static_cast<int>(x.size()) != curve.d) throw std::invalid_argument("point dimension mismatch");
    const std::size_t n = curve.vertex_count();
    const std::size_t segs = curve.segment_count();
    const double inv_segs = 1.0 / static_cast<double>(segs);

    std::vector<SegCandidate> cand(segs);
    double best_sq = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < segs; ++k) {
        cand[k] = project_to_segment(curve.vertices.data() + k * curve.d,
                                     curve.vertices.data() + ((k + 1) % n) * curve.d,
                                     x.data(), curve.d);
        best_sq = std::min(best_sq, cand[k].sq);
    }
    // Second pass: largest parameter among near-ties. Two passes avoid
    // tolerance drift across chained ties.
    const double thr = best_sq * (1.0 + kProjectionTieRel);
    ProjectionResult res;
    res.t_hat = -1.0;
    for (std::size_t k = 0; k < segs; ++k) {
        if (cand[k].sq > thr) continue;
        const double t = (static_cast<double>(k) + cand[k].s) * inv_segs;
        if (t >= res.t_hat) {
            res.t_hat = t;
            res.segment_index = static_cast<std::ptrdiff_t>(k);
            res.sq_dist = cand[k].sq;
        }
    }
    const std::size_t k = static_cast<std::size_t>(res.segment_index);
    const double s = cand[k].s;
    res.foot.resize(curve.d);
    for (int j = 0; j < curve.d; ++j) {
        const double aj = curve.vertices[k * curve.d + j];
        const double bj = curve.vertices[((k + 1) % n) * curve.d + j];
        res.foot[j] = aj + s * (bj - aj);
    }
    return res;
}

ProjectionResult project_to_vertices(const PolygonalCurve& curve, std::span<const double> x) {
    curve.validate();
    if (static_cast<int>(x.size()) != curve.d) throw std::invalid_argument("point dimension mismatch");
    const std::size_t n = curve.vertex_count();
    double best_sq = std::numeric_limits<double>::infinity();
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        sq[i] = sq_dist(curve.vertex(i), x);
        best_sq = std::min(best_sq, sq[i]);
    }
    const double thr = best_sq * (1.0 + kProjectionTieRel);
    std::size_t pick = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (sq[i] <= thr) pick = i;  // knots increase with index, so last wins
    ProjectionResult res;
    res.t_hat = curve.knot(pick);
    res.sq_dist = sq[pick];
    res.foot.assign(curve.vertex(pick).begin(), curve.vertex(pick).end());
    res.segment_index = static_cast<std::ptrdiff_t>(pick);
    return res;
}

ProjectionBatch project_points(const PolygonalCurve& curve,
                               std::span<const double> points, std::size_t count) {
    curve.validate();
    const int d = curve.d;
    const std::size_t n = curve.vertex_count();
    const std::size_t segs = curve.segment_count();
    const double inv_segs = 1.0 / static_cast<double>(segs);

    ProjectionBatch out;
    out.count = count;
    out.t_hat.resize(count);
    out.sq_dist.resize(count);
    out.segment.resize(count);
    out.foot.resize(count * d);

    if (d == 2) {
        const kernels::SegmentTable2 table = kernels::make_segment_table(curve);
        parallel_chunks(count, [&](std::size_t lo, std::size_t hi) {
            std::vector<double> s_buf(segs), sq_buf(segs);
            for (std::size_t i = lo; i < hi; ++i) {
                const double x = points[2 * i], y = points[2 * i + 1];
                kernels::segment_scan2(table, x, y, s_buf.data(), sq_buf.data());
                double best_sq = sq_buf[0];
                for (std::size_t k = 1; k < segs; ++k) best_sq = std::min(best_sq, sq_buf[k]);
                const double thr = best_sq * (1.0 + kProjectionTieRel);
                double best_t = -1.0;
                std::size_t pick = 0;
                for (std::size_t k = 0; k < segs; ++k) {
                    if (sq_buf[k] > thr) continue;
                    const double t = (static_cast<double>(k) + s_buf[k]) * inv_segs;
                    if (t >= best_t) { best_t = t; pick = k; }
                }
                out.t_hat[i] = best_t;
                out.sq_dist[i] = sq_buf[pick];
                out.segment[i] = static_cast<std::int32_t>(pick);
                const double s = s_buf[pick];
                out.foot[2 * i] = table.ax[pick] + s * table.ux[pick];
                out.foot[2 * i + 1] = table.ay[pick] + s * table.uy[pick];
            }
        });
        return out;
    }

    parallel_chunks(count, [&](std::size_t lo, std::size_t hi) {
        std::vector<SegCandidate> cand(segs);
        for (std::size_t i = lo; i < hi; ++i) {
            const double* x = points.data() + i * d;
            double best_sq = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < segs; ++k) {
                cand[k] = project_to_segment(curve.vertices.data() + k * d,
                                             curve.vertices.data() + ((k + 1) % n) * d, x, d);
                best_sq = std::min(best_sq, cand[k].sq);
            }
            const double thr = best_sq * (1.0 + kProjectionTieRel);
            double best_t = -1.0;
            std::size_t pick = 0;
            for (std::size_t k = 0; k < segs; ++k) {
                if (cand[k].sq > thr) continue;
                const double t = (static_cast<double>(k) + cand[k].s) * inv_segs;
                if (t >= best_t) { best_t = t; pick = k; }
            }
            out.t_hat[i] = best_t;
            out.sq_dist[i] = cand[pick].sq;
            out.segment[i] = static_cast<std::int32_t>(pick);
            for (int j = 0; j < d; ++j) {
                const double aj = curve.vertices[pick * d + j];
                const double bj = curve.vertices[((pick + 1) % n) * d + j];
                out.foot[i * d + j] = aj + cand[pick].s * (bj - aj);
            }
        }
    });
    return out;
}

std::vector<double> CurvatureMeasure::total_mass() const {
    std::vector<double> mass(d, 0.0);
    for (const auto& atom : atoms)
        for (int j = 0; j < d; ++j) mass[j] += atom.value[j];
    return mass;
}

double CurvatureMeasure::restricted_norm(double a, double b) const {
    std::vector<double> tv(d, 0.0);
    for (const auto& atom : atoms) {
        if (atom.t <= a || atom.t > b) continue;
        for (int j = 0; j < d; ++j) tv[j] += std::abs(atom.value[j]);
    }
    double s = 0.0;
    for (double v : tv) s += v * v;
    return std::sqrt(s);
}

double CurvatureMeasure::atom_norm_sum() const {
    double s = 0.0;
    for (const auto& atom : atoms) s += norm(atom.value);
    return s;
}

CurvatureMeasure second_difference_measure(const PolygonalCurve& curve) {
    curve.validate();
    const std::size_t n = curve.vertex_count();
    if (n < 3) throw std::invalid_argument("second differences need at least 3 vertices");
    const int d = curve.d;
    const double factor = static_cast<double>(curve.segment_count());

    CurvatureMeasure m;
    m.d = d;
    const auto at = [&](std::size_t i, int j) { return curve.vertices[i * d + j]; };

    if (curve.topology == Topology::open) {
        CurvatureAtom first{0.0, std::vector<double>(d)};
        for (int j = 0; j < d; ++j) first.value[j] = factor * (at(1, j) - at(0, j));
        m.atoms.push_back(std::move(first));
        for (std::size_t i = 1; i + 1 < n; ++i) {
            CurvatureAtom atom{curve.knot(i), std::vector<double>(d)};
            for (int j = 0; j < d; ++j)
                atom.value[j] = factor * (at(i + 1, j) - 2.0 * at(i, j) + at(i - 1, j));
            m.atoms.push_back(std::move(atom));
        }
        CurvatureAtom last{1.0, std::vector<double>(d)};
        for (int j = 0; j < d; ++j) last.value[j] = -factor * (at(n - 1, j) - at(n - 2, j));
        m.atoms.push_back(std::move(last));
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t prev = (i + n - 1) % n;
            const std::size_t next = (i + 1) % n;
            CurvatureAtom atom{curve.knot(i), std::vector<double>(d)};
            for (int j = 0; j < d; ++j)
                atom.value[j] = factor * (at(next, j) - 2.0 * at(i, j) + at(prev, j));
            m.atoms.push_back(std::move(atom));
        }
    }

    std::vector<double> tv(d, 0.0);
    for (const auto& atom : m.atoms)
        for (int j = 0; j < d; ++j) tv[j] += std::abs(atom.value[j]);
    double s = 0.0;
    for (double v : tv) s += v * v;
    m.total_variation = std::sqrt(s);
    return m;
}

std::vector<double> speed_profile(const PolygonalCurve& curve) {
    curve.validate();
    const std::size_t n = curve.vertex_count();
    const std::size_t segs = curve.segment_count();
    const double factor = static_cast<double>(segs);
    std::vector<double> speeds(segs);
    for (std::size_t k = 0; k < segs; ++k)
        speeds[k] = factor * std::sqrt(sq_dist(curve.vertex(k), curve.vertex((k + 1) % n)));
    return speeds;
}

double crofton_length(const PolygonalCurve& curve, std::size_t num_lines, std::uint64_t seed) {
    curve.validate();
    if (curve.d != 2) throw std::invalid_argument("crofton_length requires d = 2");
    if (num_lines < 1) throw std::invalid_argument("crofton_length requires num_lines >= 1");

    double max_norm = 0.0;
    for (std::size_t i = 0; i < curve.vertex_count(); ++i)
        max_norm = std::max(max_norm, norm(curve.vertex(i)));
    const double R = max_norm + 1e-9;  // lines outside this disk never hit the curve

    const kernels::SegmentTable2 table = kernels::make_segment_table(curve);
    constexpr std::size_t kBlock = 16384;
    std::vector<double> ux(kBlock), uy(kBlock), r(kBlock);
    std::vector<std::uint32_t> counts(kBlock);
    SplitMix64 rng(substream_key(seed, 0x43524F46ULL));  // "CROF"

    std::uint64_t total = 0;
    std::size_t done = 0;
    while (done < num_lines) {
        const std::size_t m = std::min(kBlock, num_lines - done);
        for (std::size_t i = 0; i < m; ++i) {
            const double theta = 6.283185307179586 * rng.next_unit();
            ux[i] = std::cos(theta);
            uy[i] = std::sin(theta);
            r[i] = R * (2.0 * rng.next_unit() - 1.0);
        }
        std::memset(counts.data(), 0, m * sizeof(std::uint32_t));
        kernels::crofton_accumulate(table, ux.data(), uy.data(), r.data(), m, counts.data());
        for (std::size_t i = 0; i < m; ++i) total += counts[i];
        done += m;
    }
    // length = (1/4) * measure([-R,R] x [0,2pi)) * E[N] = pi * R * mean(N)
    const double mean_crossings = static_cast<double>(total) / static_cast<double>(num_lines);
    return 3.14159265358979323846 * R * mean_crossings;
}

namespace {
double cross2(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }
}  // namespace

std::vector<SegmentCrossing> self_intersections(const PolygonalCurve& curve) {
    curve.validate();
    if (curve.d != 2) throw std::invalid_argument("self_intersections requires d = 2");
    const std::size_t n = curve.vertex_count();
    const std::size_t segs = curve.segment_count();
    const bool closed = curve.topology == Topology::closed;

    std::vector<SegmentCrossing> hits;
    for (std::size_t i = 0; i < segs; ++i) {
        for (std::size_t k = i + 2; k < segs; ++k) {
            if (closed && i == 0 && k == segs - 1) continue;  // shares vertex 0
            const double* p1 = curve.vertices.data() + i * 2;
            const double* p2 = curve.vertices.data() + ((i + 1) % n) * 2;
            const double* q1 = curve.vertices.data() + k * 2;
            const double* q2 = curve.vertices.data() + ((k + 1) % n) * 2;
            const double d1 = cross2(q2[0] - q1[0], q2[1] - q1[1], p1[0] - q1[0], p1[1] - q1[1]);
            const double d2 = cross2(q2[0] - q1[0], q2[1] - q1[1], p2[0] - q1[0], p2[1] - q1[1]);
            const double d3 = cross2(p2[0] - p1[0], p2[1] - p1[1], q1[0] - p1[0], q1[1] - p1[1]);
            const double d4 = cross2(p2[0] - p1[0], p2[1] - p1[1], q2[0] - p1[0], q2[1] - p1[1]);
            if (!((d1 > 0) != (d2 > 0) && d1 != 0 && d2 != 0)) continue;
            if (!((d3 > 0) != (d4 > 0) && d3 != 0 && d4 != 0)) continue;
            const double s = d1 / (d1 - d2);  // position along (p1, p2)
            SegmentCrossing c;
            c.seg_a = i;
            c.seg_b = k;
            c.point = {p1[0] + s * (p2[0] - p1[0]), p1[1] + s * (p2[1] - p1[1])};
            hits.push_back(c);
        }
    }
    return hits;
}

namespace {

// Walk the polyline placing points at a fixed chord distance c from the
// previous one. Returns how many chords fit before the end; fills positions
// (segment index + local parameter) when out != nullptr.
struct WalkPos {
    std::size_t seg;
    double s;
};

std::size_t chord_walk(const PolygonalCurve& curve, double c, std::size_t steps,
                       std::vector<WalkPos>* out, double* final_arc) {
    const std::size_t n = curve.vertex_count();
    const std::size_t segs = curve.segment_count();
    const int d = curve.d;
    const bool closed = curve.topology == Topology::closed;
    // closed walks may wrap once past the seam
    const std::size_t max_seg_visits = closed ? 2 * segs : segs;

    std::vector<double> cum(segs + 1, 0.0);
    for (std::size_t k = 0; k < segs; ++k)
        cum[k + 1] = cum[k] + std::sqrt(sq_dist(curve.vertex(k), curve.vertex((k + 1) % n)));

    std::vector<double> p(curve.vertices.begin(), curve.vertices.begin() + d);
    std::size_t visit = 0;  // index into the (possibly unrolled) segment list
    double t_lo = 0.0;
    std::size_t placed = 0;
    if (out) out->clear();
    if (final_arc) *final_arc = 0.0;

    while (placed < steps && visit < max_seg_visits) {
        const std::size_t k = visit % segs;
        const double* a = curve.vertices.data() + k * d;
        const double* b = curve.vertices.data() + ((k + 1) % n) * d;
        // ||a + t u - p||^2 = c^2
        double uu = 0.0, wu = 0.0, ww = 0.0;
        for (int j = 0; j < d; ++j) {
            const double u = b[j] - a[j];
            const double w = a[j] - p[j];
            uu += u * u;
            wu += w * u;
            ww += w * w;
        }
        double hit = -1.0;
        if (uu > 0.0) {
            const double disc = wu * wu - uu * (ww - c * c);
            if (disc >= 0.0) {
                const double root = std::sqrt(disc);
                const double t1 = (-wu - root) / uu;
                const double t2 = (-wu + root) / uu;
                const double eps = 1e-15;
                if (t1 >= t_lo + eps && t1 <= 1.0) hit = t1;
                else if (t2 >= t_lo + eps && t2 <= 1.0) hit = t2;
            }
        }
        if (hit < 0.0) {
            ++visit;
            t_lo = 0.0;
            continue;
        }
        for (int j = 0; j < d; ++j) p[j] = a[j] + hit * (b[j] - a[j]);
        if (out) out->push_back({k, hit});
        ++placed;
        t_lo = hit;
        if (final_arc) {
            const double arc = cum[k] + hit * (cum[k + 1] - cum[k]);
            *final_arc = visit >= segs ? arc + cum[segs] : arc;
        }
    }
    return placed;
}

}  // namespace

PolygonalCurve resample_uniform(const PolygonalCurve& curve, std::size_t m) {
    curve.validate();
    if (m < 2) throw std::invalid_argument("resample_uniform requires m >= 2");
    const std::size_t n = curve.vertex_count();
    const std::size_t segs = curve.segment_count();
    const int d = curve.d;

    std::vector<double> cum(segs + 1, 0.0);
    for (std::size_t k = 0; k < segs; ++k)
        cum[k + 1] = cum[k] + std::sqrt(sq_dist(curve.vertex(k), curve.vertex((k + 1) % n)));
    const double total = cum[segs];
    if (total <= 0.0) throw std::invalid_argument("resample_uniform on zero-length curve");

    const bool closed = curve.topology == Topology::closed;
    const std::size_t new_segs = closed ? m : m - 1;

    // Equal chords, not equal arcs: a constant-speed output needs equal
    // segment lengths, and chords cut corners unevenly. Bisection on the
    // common chord length; vertices stay on the source polyline. The largest
    // chord for which all steps fit on the curve is the equalizing one.
    double lo = 0.0, hi = total / static_cast<double>(new_segs) * (1.0 + 1e-12);
    const std::size_t steps = closed ? m : m - 1;
    std::vector<WalkPos> best;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * total; ++it) {
        const double c = 0.5 * (lo + hi);
        double arc = 0.0;
        std::vector<WalkPos> pos;
        const std::size_t placed = chord_walk(curve, c, steps, &pos, &arc);
        const bool fits = placed == steps && arc <= total * (1.0 + 1e-12);
        if (fits) {
            lo = c;
            best = std::move(pos);
        } else {
            hi = c;
        }
    }
    if (best.empty()) {  // straight-line corner case: the upper bound fits
        double arc = 0.0;
        chord_walk(curve, lo, steps, &best, &arc);
    }

    PolygonalCurve out;
    out.d = d;
    out.topology = curve.topology;
    out.vertices.resize(m * d);
    for (int j = 0; j < d; ++j) out.vertices[j] = curve.vertices[j];
    const std::size_t fill = std::min(best.size(), m - 1);
    for (std::size_t i = 0; i < fill; ++i) {
        const std::size_t k = best[i].seg;
        const double s = best[i].s;
        const std::size_t k1 = (k + 1) % n;
        for (int j = 0; j < d; ++j) {
            const double aj = curve.vertices[k * d + j];
            const double bj = curve.vertices[k1 * d + j];
            out.vertices[(i + 1) * d + j] = aj + s * (bj - aj);
        }
    }
    if (!closed) {
        // pin the final vertex to the exact curve endpoint
        for (int j = 0; j < d; ++j)
            out.vertices[(m - 1) * d + j] = curve.vertices[(n - 1) * d + j];
    }
    return out;
}

double turning_angle_sum(const PolygonalCurve& curve) {
    curve.validate();
    const std::size_t n = curve.vertex_count();
    const int d = curve.d;
    const bool closed = curve.topology == Topology::closed;
    const std::size_t first = closed ? 0 : 1;
    const std::size_t last = closed ? n : n - 1;

    double total = 0.0;
    for (std::size_t i = first; i < last; ++i) {
        const std::size_t prev = (i + n - 1) % n;
        const std::size_t next = (i + 1) % n;
        double dot = 0.0, na = 0.0, nb = 0.0;
        for (int j = 0; j < d; ++j) {
            const double e0 = curve.vertices[i * d + j] - curve.vertices[prev * d + j];
            const double e1 = curve.vertices[next * d + j] - curve.vertices[i * d + j];
            dot += e0 * e1;
            na += e0 * e0;
            nb += e1 * e1;
        }
        if (na == 0.0 || nb == 0.0) continue;  // collapsed segment, no turn defined
        total += std::acos(std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0));
    }
    return total;
}

}  // namespace princurve
