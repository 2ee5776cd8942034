#include "princurve/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "princurve/criterion.hpp"
#include "princurve/kernels.hpp"
#include "princurve/optimizer.hpp"

namespace princurve {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_dims(const PolygonalCurve& curve, std::span<const double> points, std::size_t count) {
    curve.validate();
    if (count < 1) throw std::invalid_argument("diagnostics need at least one point");
    if (points.size() < count * static_cast<std::size_t>(curve.d))
        throw std::invalid_argument("point array / dimension mismatch");
}

double knot_turn_angle(const PolygonalCurve& curve, std::size_t i) {
    const std::size_t n = curve.vertex_count();
    const int d = curve.d;
    const bool closed = curve.topology == Topology::closed;
    if (!closed && (i == 0 || i + 1 >= n)) return 0.0;
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
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::acos(std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0));
}

/// Exact piecewise integral of <g'(t), f'(t)> for g = e_j * phi(t):
/// sum_k (phi(t_{k+1}) - phi(t_k)) * f'_k[j].
double ip_integral(const PolygonalCurve& curve, int coord,
                   const std::function<double(double)>& phi) {
    const std::size_t n = curve.vertex_count();
    const std::size_t segs = curve.segment_count();
    const int d = curve.d;
    const double factor = static_cast<double>(segs);
    double total = 0.0;
    for (std::size_t k = 0; k < segs; ++k) {
        const std::size_t k1 = (k + 1) % n;
        const double fp = factor * (curve.vertices[k1 * d + coord] - curve.vertices[k * d + coord]);
        const double t0 = static_cast<double>(k) / factor;
        const double t1 = static_cast<double>(k + 1) / factor;
        total += (phi(t1) - phi(t0)) * fp;
    }
    return total;
}

double sq_norm_integral(const PolygonalCurve& curve) {
    return squared_increment_sum(curve.vertices, curve.vertex_count(), curve.d, curve.topology);
}

}  // namespace

std::pair<double, double> estimate_lambda(const PolygonalCurve& curve,
                                          std::span<const double> points, std::size_t count,
                                          double length_budget) {
    check_dims(curve, points, count);
    if (!(length_budget > 0.0)) throw std::invalid_argument("estimate_lambda requires positive length");
    const int d = curve.d;
    const ProjectionBatch batch = project_points(curve, points, count);
    std::vector<double> w(count);
    for (std::size_t i = 0; i < count; ++i) {
        double s = 0.0;
        for (int j = 0; j < d; ++j)
            s += (points[i * d + j] - batch.foot[i * d + j]) * batch.foot[i * d + j];
        w[i] = s;
    }
    const MeanVar mv = mean_var(w);
    const double L2 = length_budget * length_budget;
    return {mv.mean / L2, mv.std_error() / L2};
}

std::pair<double, double> estimate_lambda_kkt(const PolygonalCurve& curve,
                                              std::span<const double> points, std::size_t count) {
    check_dims(curve, points, count);
    const int d = curve.d;
    const std::size_t n = curve.vertex_count();
    const CurvatureMeasure measure = second_difference_measure(curve);
    double denom = 0.0;
    for (const auto& atom : measure.atoms)
        for (double v : atom.value) denom += v * v;
    if (denom <= 0.0) return {0.0, 0.0};

    const std::vector<std::int32_t> assign =
        kernels::assign_nearest_vertex(points, count, curve.vertices, n, d);
    // lambda* = argmin_l sum_i ||b_i + l * atom_i||^2 with
    // b_i = E[(x - v_i) 1{assigned i}]; per-point form gives the stderr.
    std::vector<double> z(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t a = static_cast<std::size_t>(assign[i]);
        double dot = 0.0;
        for (int j = 0; j < d; ++j)
            dot += (points[i * d + j] - curve.vertices[a * d + j]) * measure.atoms[a].value[j];
        z[i] = -dot / denom;
    }
    const MeanVar mv = mean_var(z);
    return {mv.mean, mv.std_error()};
}

std::vector<ResidualEntry> first_order_residual(const PolygonalCurve& curve,
                                                std::span<const double> points, std::size_t count,
                                                double lambda_hat, int trig_order,
                                                double length_budget) {
    check_dims(curve, points, count);
    if (!(length_budget > 0.0))
        throw std::invalid_argument("first_order_residual requires positive length");
    const int d = curve.d;
    const double L2 = length_budget * length_budget;
    const bool closed = curve.topology == Topology::closed;

    const ProjectionBatch batch = project_points(curve, points, count);
    // residual components <x - xhat, e_j> and the lambda plug-in term
    // <x - xhat, xhat> per point.
    std::vector<double> w(count);
    for (std::size_t i = 0; i < count; ++i) {
        double s = 0.0;
        for (int j = 0; j < d; ++j)
            s += (points[i * d + j] - batch.foot[i * d + j]) * batch.foot[i * d + j];
        w[i] = s;
    }

    struct Basis {
        std::string id;
        std::function<double(double)> phi;
    };
    std::vector<Basis> basis;
    basis.push_back({"1", [](double) { return 1.0; }});
    for (int k = 1; k <= trig_order; ++k) {
        // closed curves need periodic test functions (g(0) = g(1))
        const double freq = closed ? 2.0 * kPi * k : kPi * k;
        const int mult = closed ? 2 * k : k;
        char id[48];
        std::snprintf(id, sizeof id, "cos(%d*pi*t)", mult);
        basis.push_back({id, [freq](double t) { return std::cos(freq * t); }});
        std::snprintf(id, sizeof id, "sin(%d*pi*t)", mult);
        basis.push_back({id, [freq](double t) { return std::sin(freq * t); }});
    }

    std::vector<ResidualEntry> out;
    std::vector<double> u(count);
    for (int j = 0; j < d; ++j) {
        for (const Basis& b : basis) {
            const double integral = ip_integral(curve, j, b.phi);
            for (std::size_t i = 0; i < count; ++i) {
                const double a =
                    (points[i * d + j] - batch.foot[i * d + j]) * b.phi(batch.t_hat[i]);
                u[i] = a - (integral / L2) * w[i];  // plug-in lambda correlation folded in
            }
            const MeanVar amv = mean_var(u);
            ResidualEntry entry;
            char id[64];
            std::snprintf(id, sizeof id, "e%d*%s", j + 1, b.id.c_str());
            entry.test_fn = id;
            // mean<a> - lambda_hat * integral; identical to mean(u) when
            // lambda_hat is the ratio estimator from the same points.
            double asum = 0.0;
            for (std::size_t i = 0; i < count; ++i)
                asum += (points[i * d + j] - batch.foot[i * d + j]) * b.phi(batch.t_hat[i]);
            entry.residual = asum / static_cast<double>(count) - lambda_hat * integral;
            entry.std_error = amv.std_error();
            out.push_back(std::move(entry));
        }
    }
    return out;
}

AtomMasses atom_masses(const PolygonalCurve& curve,
                       std::span<const double> points, std::size_t count,
                       double param_tol) {
    check_dims(curve, points, count);
    const std::size_t n = curve.vertex_count();
    const bool closed = curve.topology == Topology::closed;
    const ProjectionBatch batch = project_points(curve, points, count);

    const double inv_count = 1.0 / static_cast<double>(count);
    auto bernoulli_se = [&](double p) {
        return std::sqrt(std::max(0.0, p * (1.0 - p)) * inv_count);
    };

    AtomMasses masses;
    std::vector<std::size_t> hits(n, 0);
    std::size_t hit0 = 0, hit1 = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const double t = batch.t_hat[i];
        if (!closed) {
            if (t <= param_tol) ++hit0;
            if (t >= 1.0 - param_tol) ++hit1;
        }
        for (std::size_t k = 0; k < n; ++k) {
            double dt = std::abs(t - curve.knot(k));
            if (closed && k == 0) dt = std::min(dt, std::abs(t - 1.0));  // seam folds onto knot 0
            if (dt <= param_tol) {
                ++hits[k];
                break;
            }
        }
    }
    if (!closed) {
        masses.endpoint_0 = static_cast<double>(hit0) * inv_count;
        masses.endpoint_1 = static_cast<double>(hit1) * inv_count;
        masses.endpoint_0_se = bernoulli_se(masses.endpoint_0);
        masses.endpoint_1_se = bernoulli_se(masses.endpoint_1);
    }
    // endpoint knots are reported separately for open curves, so that
    // endpoint + knot + continuous masses partition the sample
    const std::size_t first = closed ? 0 : 1;
    const std::size_t last = closed ? n : n - 1;
    for (std::size_t k = first; k < last; ++k) {
        KnotAtomMass m;
        m.knot_index = k;
        m.t = curve.knot(k);
        m.mass = static_cast<double>(hits[k]) * inv_count;
        m.turn_angle = knot_turn_angle(curve, k);
        masses.knots.push_back(m);
    }
    return masses;
}

double self_consistency_gap(const PolygonalCurve& curve,
                            std::span<const double> points, std::size_t count,
                            int n_bins, std::vector<BinGap>* detail) {
    check_dims(curve, points, count);
    if (n_bins < 2) throw std::invalid_argument("self_consistency_gap requires n_bins >= 2");
    const int d = curve.d;
    const std::size_t nverts = curve.vertex_count();
    const std::size_t segs = curve.segment_count();

    // Arc-length position of each knot, for equal arc-length binning.
    std::vector<double> cum(segs + 1, 0.0);
    for (std::size_t k = 0; k < segs; ++k) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) {
            const double dif =
                curve.vertices[((k + 1) % nverts) * d + j] - curve.vertices[k * d + j];
            s += dif * dif;
        }
        cum[k + 1] = cum[k] + std::sqrt(s);
    }
    const double total = cum[segs];
    if (total <= 0.0) throw std::invalid_argument("self_consistency_gap on zero-length curve");

    const ProjectionBatch batch = project_points(curve, points, count);
    std::vector<std::size_t> bin_of(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t k = static_cast<std::size_t>(batch.segment[i]);
        const double s_local = batch.t_hat[i] * static_cast<double>(segs) - static_cast<double>(k);
        const double arc = cum[k] + std::clamp(s_local, 0.0, 1.0) * (cum[k + 1] - cum[k]);
        std::size_t b = static_cast<std::size_t>(arc / total * n_bins);
        if (b >= static_cast<std::size_t>(n_bins)) b = n_bins - 1;
        bin_of[i] = b;
    }

    double worst = 0.0;
    if (detail) detail->clear();
    for (int b = 0; b < n_bins; ++b) {
        std::vector<double> sum(d, 0.0), sumsq(d, 0.0);
        std::size_t cnt = 0;
        for (std::size_t i = 0; i < count; ++i) {
            if (bin_of[i] != static_cast<std::size_t>(b)) continue;
            ++cnt;
            for (int j = 0; j < d; ++j) {
                const double dif = points[i * d + j] - batch.foot[i * d + j];
                sum[j] += dif;
                sumsq[j] += dif * dif;
            }
        }
        BinGap bg;
        bg.bin = static_cast<std::size_t>(b);
        bg.count = cnt;
        if (cnt > 0) {
            double gap2 = 0.0, var = 0.0;
            for (int j = 0; j < d; ++j) {
                const double mean = sum[j] / static_cast<double>(cnt);
                gap2 += mean * mean;
                if (cnt > 1)
                    var += (sumsq[j] - static_cast<double>(cnt) * mean * mean) /
                           (static_cast<double>(cnt - 1) * static_cast<double>(cnt));
            }
            bg.gap = std::sqrt(gap2);
            bg.std_error = std::sqrt(std::max(0.0, var));
            worst = std::max(worst, bg.gap);
        }
        if (detail) detail->push_back(bg);
    }
    return worst;
}

std::vector<AmbiguityEntry> ambiguity_fraction(const PolygonalCurve& curve,
                                               std::span<const double> points, std::size_t count,
                                               std::span<const double> tolerances) {
    check_dims(curve, points, count);
    for (std::size_t i = 0; i < tolerances.size(); ++i) {
        if (tolerances[i] <= 0.0) throw std::invalid_argument("ambiguity tolerances must be positive");
        if (i > 0 && tolerances[i] <= tolerances[i - 1])
            throw std::invalid_argument("ambiguity tolerances must be ascending");
    }
    const int d = curve.d;
    const std::size_t n = curve.vertex_count();
    const std::size_t segs = curve.segment_count();
    const double inv_segs = 1.0 / static_cast<double>(segs);
    const double min_param_dist = 2.0 / static_cast<double>(n);

    // Per point: smallest squared-distance excess among candidates farther
    // than 2/n in parameter from the best one.
    std::vector<double> excess(count, std::numeric_limits<double>::infinity());
    const bool fast2d = d == 2;
    kernels::SegmentTable2 table;
    if (fast2d) table = kernels::make_segment_table(curve);

    std::vector<double> s_buf(segs), sq_buf(segs);
    std::vector<double> xbuf(d);
    for (std::size_t i = 0; i < count; ++i) {
        if (fast2d) {
            kernels::segment_scan2(table, points[2 * i], points[2 * i + 1], s_buf.data(),
                                   sq_buf.data());
        } else {
            for (int j = 0; j < d; ++j) xbuf[j] = points[i * d + j];
            // generic scan via project of each segment
            for (std::size_t k = 0; k < segs; ++k) {
                const double* a = curve.vertices.data() + k * d;
                const double* b = curve.vertices.data() + ((k + 1) % n) * d;
                double len2 = 0.0, dot = 0.0;
                for (int j = 0; j < d; ++j) {
                    const double u = b[j] - a[j];
                    len2 += u * u;
                    dot += (xbuf[j] - a[j]) * u;
                }
                double s = len2 > 0.0 ? dot / len2 : 0.0;
                s = std::clamp(s, 0.0, 1.0);
                double sq = 0.0;
                for (int j = 0; j < d; ++j) {
                    const double dif = (xbuf[j] - a[j]) - s * (b[j] - a[j]);
                    sq += dif * dif;
                }
                s_buf[k] = s;
                sq_buf[k] = sq;
            }
        }
        double best = sq_buf[0];
        for (std::size_t k = 1; k < segs; ++k) best = std::min(best, sq_buf[k]);
        // max-t among exact minima, as in projection
        double t_best = -1.0;
        for (std::size_t k = 0; k < segs; ++k) {
            if (sq_buf[k] > best * (1.0 + kProjectionTieRel)) continue;
            t_best = std::max(t_best, (static_cast<double>(k) + s_buf[k]) * inv_segs);
        }
        for (std::size_t k = 0; k < segs; ++k) {
            const double t = (static_cast<double>(k) + s_buf[k]) * inv_segs;
            double dt = std::abs(t - t_best);
            if (curve.topology == Topology::closed) dt = std::min(dt, 1.0 - dt);
            if (dt <= min_param_dist) continue;
            excess[i] = std::min(excess[i], sq_buf[k] - best);
        }
    }

    std::vector<AmbiguityEntry> out;
    for (double tol : tolerances) {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < count; ++i)
            if (excess[i] <= tol) ++hits;
        out.push_back({tol, static_cast<double>(hits) / static_cast<double>(count)});
    }
    return out;
}

namespace {

std::vector<TangencyCandidate> find_tangencies(const PolygonalCurve& curve, double dist_tol) {
    std::vector<TangencyCandidate> out;
    if (curve.d != 2) return out;
    const std::size_t n = curve.vertex_count();
    const std::size_t segs = curve.segment_count();
    const bool closed = curve.topology == Topology::closed;

    auto seg_dist = [&](std::size_t i, std::size_t k) {
        // min distance between two segments via endpoint-segment projections
        const double* p[2] = {curve.vertices.data() + i * 2,
                              curve.vertices.data() + ((i + 1) % n) * 2};
        const double* q[2] = {curve.vertices.data() + k * 2,
                              curve.vertices.data() + ((k + 1) % n) * 2};
        auto point_seg = [](const double* x, const double* a, const double* b) {
            const double ux = b[0] - a[0], uy = b[1] - a[1];
            const double len2 = ux * ux + uy * uy;
            double s = len2 > 0.0 ? ((x[0] - a[0]) * ux + (x[1] - a[1]) * uy) / len2 : 0.0;
            s = std::clamp(s, 0.0, 1.0);
            const double dx = x[0] - (a[0] + s * ux), dy = x[1] - (a[1] + s * uy);
            return std::sqrt(dx * dx + dy * dy);
        };
        double best = point_seg(p[0], q[0], q[1]);
        best = std::min(best, point_seg(p[1], q[0], q[1]));
        best = std::min(best, point_seg(q[0], p[0], p[1]));
        best = std::min(best, point_seg(q[1], p[0], p[1]));
        return best;
    };

    for (std::size_t i = 0; i < segs; ++i) {
        for (std::size_t k = i + 2; k < segs; ++k) {
            if (closed && i == 0 && k == segs - 1) continue;
            if (seg_dist(i, k) > dist_tol) continue;
            TangencyCandidate t;
            t.seg_a = i;
            t.seg_b = k;
            t.distance = seg_dist(i, k);
            const double ax = curve.vertices[((i + 1) % n) * 2] - curve.vertices[i * 2];
            const double ay = curve.vertices[((i + 1) % n) * 2 + 1] - curve.vertices[i * 2 + 1];
            const double bx = curve.vertices[((k + 1) % n) * 2] - curve.vertices[k * 2];
            const double by = curve.vertices[((k + 1) % n) * 2 + 1] - curve.vertices[k * 2 + 1];
            const double na = std::sqrt(ax * ax + ay * ay), nb = std::sqrt(bx * bx + by * by);
            t.angle_gap = (na > 0 && nb > 0)
                              ? std::acos(std::clamp(std::abs(ax * bx + ay * by) / (na * nb), 0.0, 1.0))
                              : 0.0;
            out.push_back(t);
        }
    }
    return out;
}

}  // namespace

DiagnosticsReport full_report(const PolygonalCurve& curve,
                              std::span<const double> points, std::size_t count,
                              const DiagnosticsConfig& cfg) {
    check_dims(curve, points, count);
    const int d = curve.d;

    DiagnosticsReport rep;
    const double sq_integral = sq_norm_integral(curve);
    rep.length_budget = cfg.length_budget > 0.0 ? cfg.length_budget : std::sqrt(sq_integral);

    // Criterion value. The absolute floor catches data exactly on the curve,
    // where both the value and its stderr are rounding dust.
    const CriterionEstimate delta = empirical_delta(curve, points, count);
    rep.delta_hat = delta.value;
    rep.delta_hat_stderr = delta.std_error;
    const bool degenerate =
        delta.value <= 3.0 * delta.std_error + 1e-15 * rep.length_budget * rep.length_budget;

    // Lambda, two estimators.
    auto [lh, lse] = estimate_lambda(curve, points, count, rep.length_budget);
    rep.lambda_hat = lh;
    rep.lambda_stderr = lse;
    auto [lk, lkse] = estimate_lambda_kkt(curve, points, count);
    rep.lambda_kkt = lk;
    rep.lambda_kkt_stderr = lkse;

    // First-order residuals.
    rep.first_order_residuals =
        first_order_residual(curve, points, count, rep.lambda_hat, cfg.trig_order,
                             rep.length_budget);

    // Speeds and curvature.
    const std::vector<double> speeds = speed_profile(curve);
    rep.speed_min = *std::min_element(speeds.begin(), speeds.end());
    rep.speed_max = *std::max_element(speeds.begin(), speeds.end());
    rep.speed_mean = pairwise_sum(speeds) / static_cast<double>(speeds.size());
    const CurvatureMeasure measure = second_difference_measure(curve);
    rep.curvature_total_variation = measure.total_variation;
    rep.turning_angle = turning_angle_sum(curve);

    // Mean match.
    const ProjectionBatch batch = project_points(curve, points, count);
    {
        double gap2 = 0.0, var = 0.0;
        for (int j = 0; j < d; ++j) {
            double sum = 0.0, sumsq = 0.0;
            for (std::size_t i = 0; i < count; ++i) {
                const double dif = points[i * d + j] - batch.foot[i * d + j];
                sum += dif;
                sumsq += dif * dif;
            }
            const double mean = sum / static_cast<double>(count);
            gap2 += mean * mean;
            if (count > 1)
                var += (sumsq - static_cast<double>(count) * mean * mean) /
                       (static_cast<double>(count - 1) * static_cast<double>(count));
        }
        rep.mean_gap = std::sqrt(gap2);
        rep.mean_gap_stderr = std::sqrt(std::max(0.0, var));
    }

    // Atom masses.
    const AtomMasses masses = atom_masses(curve, points, count, cfg.knot_param_tol);
    rep.endpoint_mass_0 = masses.endpoint_0;
    rep.endpoint_mass_0_se = masses.endpoint_0_se;
    rep.endpoint_mass_1 = masses.endpoint_1;
    rep.endpoint_mass_1_se = masses.endpoint_1_se;
    rep.knot_atom_masses = masses.knots;

    // Self-consistency.
    rep.self_consistency_gap =
        self_consistency_gap(curve, points, count, cfg.n_bins, &rep.bin_gaps);

    // Ambiguity fractions.
    std::vector<double> tols = cfg.ambiguity_tols;
    std::sort(tols.begin(), tols.end());
    rep.ambiguity = ambiguity_fraction(curve, points, count, tols);

    // Injectivity (2-D only).
    if (d == 2) {
        rep.injectivity_checked = true;
        rep.crossings = self_intersections(curve);
        rep.injective = rep.crossings.empty();
        rep.tangencies = find_tangencies(curve, 1e-9 * rep.length_budget);
    } else {
        rep.injectivity_checked = false;
        rep.injective = true;
    }

    // Empirical law of t_hat.
    rep.t_hat_histogram.assign(cfg.t_hist_bins, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t b = static_cast<std::size_t>(batch.t_hat[i] * cfg.t_hist_bins);
        if (b >= rep.t_hat_histogram.size()) b = rep.t_hat_histogram.size() - 1;
        rep.t_hat_histogram[b] += 1.0 / static_cast<double>(count);
    }

    // Theory checks.
    auto add_check = [&](const std::string& name, double value, double threshold, bool pass,
                         bool skipped = false, const std::string& note = "") {
        rep.checks.push_back({name, value, threshold, pass, skipped, note});
    };

    double speed_dev = 0.0;
    for (double s : speeds)
        speed_dev = std::max(speed_dev, std::abs(s - rep.length_budget) / rep.length_budget);
    add_check("constant_speed", speed_dev, cfg.speed_rel_tol, speed_dev <= cfg.speed_rel_tol);

    const std::vector<double> mass = measure.total_mass();
    double mass_norm = 0.0;
    for (double v : mass) mass_norm = std::max(mass_norm, std::abs(v));
    add_check("curvature_mass_zero", mass_norm, cfg.curvature_mass_tol,
              mass_norm <= cfg.curvature_mass_tol);

    if (degenerate) {
        add_check("lambda_positive", rep.lambda_hat, 0.0, true, true,
                  "criterion statistically zero; multiplier positivity not asserted");
    } else {
        add_check("lambda_positive", rep.lambda_hat, 3.0 * rep.lambda_stderr,
                  rep.lambda_hat > 3.0 * rep.lambda_stderr);
    }

    {
        const double se = std::sqrt(rep.lambda_stderr * rep.lambda_stderr +
                                    rep.lambda_kkt_stderr * rep.lambda_kkt_stderr);
        // The KKT estimator sees the vertex-cell balance, the ratio estimator
        // the segment projection; they differ by a quantization bias of order
        // (turn per knot)^2, which dominates the Monte Carlo noise at large N.
        const double per_knot = rep.turning_angle / static_cast<double>(curve.segment_count());
        const double allowance = 2.0 * std::abs(rep.lambda_hat) * per_knot * per_knot;
        const double dif = std::abs(rep.lambda_hat - rep.lambda_kkt);
        add_check("lambda_cross_check", dif, 3.0 * se + allowance,
                  dif <= 3.0 * se + allowance, degenerate);
    }

    add_check("mean_match", rep.mean_gap, 3.0 * rep.mean_gap_stderr,
              rep.mean_gap <= 3.0 * rep.mean_gap_stderr);

    {
        // Residuals that vanish identically in exact arithmetic come out as
        // ~1e-16 dust with an even smaller stderr; the absolute guard keeps
        // the ratio meaningful.
        double worst_ratio = 0.0;
        for (const auto& r : rep.first_order_residuals) {
            const double se = 3.0 * r.std_error + 1e-12;
            worst_ratio = std::max(worst_ratio, 3.0 * std::abs(r.residual) / se);
        }
        add_check("first_order", worst_ratio, 3.0, worst_ratio <= 3.0, degenerate);
    }

    if (curve.topology == Topology::open && !degenerate) {
        add_check("endpoint_atom_0", rep.endpoint_mass_0, 3.0 * rep.endpoint_mass_0_se,
                  rep.endpoint_mass_0 > 3.0 * rep.endpoint_mass_0_se);
        add_check("endpoint_atom_1", rep.endpoint_mass_1, 3.0 * rep.endpoint_mass_1_se,
                  rep.endpoint_mass_1 > 3.0 * rep.endpoint_mass_1_se);
    } else {
        add_check("endpoint_atom_0", rep.endpoint_mass_0, 0.0, true, true,
                  curve.topology == Topology::closed ? "closed curve" : "degenerate fit");
        add_check("endpoint_atom_1", rep.endpoint_mass_1, 0.0, true, true,
                  curve.topology == Topology::closed ? "closed curve" : "degenerate fit");
    }

    if (d == 2) {
        add_check("injective", rep.injective ? 1.0 : 0.0, 1.0, rep.injective);
    } else {
        add_check("injective", 1.0, 1.0, true, true, "injectivity check requires d = 2");
    }

    {
        bool positive = false;
        for (const auto& bg : rep.bin_gaps)
            if (bg.count > 1 && bg.gap > 3.0 * bg.std_error) positive = true;
        add_check("self_consistency_gap_positive", rep.self_consistency_gap, 0.0,
                  degenerate ? true : positive, degenerate,
                  degenerate ? "criterion statistically zero" : "");
    }

    return rep;
}

}  // namespace princurve
