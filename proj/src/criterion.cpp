#include "princurve/criterion.hpp"

#include <cmath>

#include "princurve/kernels.hpp"
#include "princurve/optimizer.hpp"
#include "princurve/rng.hpp"

namespace princurve {

namespace {

constexpr std::uint64_t kPointJitterStream = 0x504A4954ULL;  // "PJIT"
constexpr std::uint64_t kVertexJitterStream = 0x564A4954ULL; // "VJIT"
constexpr std::uint64_t kGScanEvalStream = 0x4753434EULL;    // "GSCN"

void check_dims(std::span<const double> points, std::size_t count, int d) {
    if (count < 1) throw std::invalid_argument("need at least one point");
    if (points.size() < count * static_cast<std::size_t>(d))
        throw std::invalid_argument("point array / dimension mismatch");
}

CriterionEstimate estimate_from(std::vector<double>&& sq, ProjectionMode mode) {
    const MeanVar mv = mean_var(sq);
    CriterionEstimate est;
    est.value = mv.mean;
    est.std_error = mv.std_error();
    est.count = mv.count;
    est.mode = mode;
    return est;
}

/// Gaussian ball direction scaled to radius eta * u^(1/d); fixed draw count
/// per vector so streams are position-stable.
void ball_jitter(SplitMix64& rng, double eta, int d, double* out) {
    double norm2 = 0.0;
    int j = 0;
    for (; j + 1 < d; j += 2) {
        rng.next_gaussian_pair(out[j], out[j + 1]);
        norm2 += out[j] * out[j] + out[j + 1] * out[j + 1];
    }
    if (j < d) {
        out[j] = rng.next_gaussian();
        norm2 += out[j] * out[j];
    }
    const double u = rng.next_unit();
    const double norm = std::sqrt(norm2);
    const double radius = eta * std::pow(u, 1.0 / static_cast<double>(d));
    const double scale = norm > 0.0 ? radius / norm : 0.0;
    for (int c = 0; c < d; ++c) out[c] *= scale;
}

}  // namespace

SurrogateEval surrogate_eval(std::span<const double> vertices, std::size_t n, int d,
                             std::span<const double> points, std::size_t count,
                             const SurrogateConfig& cfg, std::uint64_t seed) {
    check_dims(points, count, d);
    if (vertices.size() < n * static_cast<std::size_t>(d) || n < 1)
        throw std::invalid_argument("vertex array / dimension mismatch");
    if (cfg.epsilon > 0.0 && cfg.anchor.size() != n * static_cast<std::size_t>(d))
        throw std::invalid_argument("anchor required when epsilon > 0");

    const std::size_t nd = n * static_cast<std::size_t>(d);

    // Jittered vertices.
    std::vector<double> vj(vertices.begin(), vertices.begin() + nd);
    if (cfg.eta > 0.0) {
        SplitMix64 rng(substream_key(seed, kVertexJitterStream));
        std::vector<double> xi(d);
        for (std::size_t i = 0; i < n; ++i) {
            ball_jitter(rng, cfg.eta, d, xi.data());
            for (int j = 0; j < d; ++j) vj[i * d + j] += xi[j];
        }
    }

    // Jittered points.
    std::span<const double> pts = points;
    std::vector<double> pj;
    if (cfg.zeta > 0.0) {
        pj.assign(points.begin(), points.begin() + count * d);
        SplitMix64 rng(substream_key(seed, kPointJitterStream));
        for (std::size_t i = 0; i < count; ++i) {
            double* p = pj.data() + i * d;
            int j = 0;
            double z0, z1;
            for (; j + 1 < d; j += 2) {
                rng.next_gaussian_pair(z0, z1);
                p[j] += cfg.zeta * z0;
                p[j + 1] += cfg.zeta * z1;
            }
            if (j < d) p[j] += cfg.zeta * rng.next_gaussian();
        }
        pts = pj;
    }

    SurrogateEval ev;
    ev.assignment = kernels::assign_nearest_vertex(pts, count, vj, n, d);
    ev.gradient.assign(nd, 0.0);

    std::vector<double> sq(count);
    const double inv_count = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::int32_t a = ev.assignment[i];
        const double* x = pts.data() + i * static_cast<std::size_t>(d);
        const double* v = vj.data() + static_cast<std::size_t>(a) * d;
        double s = 0.0;
        for (int j = 0; j < d; ++j) {
            const double dif = x[j] - v[j];
            s += dif * dif;
            ev.gradient[static_cast<std::size_t>(a) * d + j] -= 2.0 * inv_count * dif;
        }
        sq[i] = s;
    }
    ev.value = pairwise_sum(sq) / static_cast<double>(count);

    if (cfg.epsilon > 0.0) {
        std::vector<double> pen(n);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = 0; j < d; ++j) {
                const double dif = vertices[i * d + j] - cfg.anchor[i * d + j];
                s += dif * dif;
                ev.gradient[i * d + j] += 2.0 * cfg.epsilon * dif;
            }
            pen[i] = s;
        }
        ev.value += cfg.epsilon * pairwise_sum(pen);
    }
    return ev;
}

CriterionEstimate empirical_delta(const PolygonalCurve& curve,
                                  std::span<const double> points, std::size_t count) {
    check_dims(points, count, curve.d);
    ProjectionBatch batch = project_points(curve, points, count);
    return estimate_from(std::move(batch.sq_dist), ProjectionMode::segment);
}

CriterionEstimate empirical_delta_vertices(const PolygonalCurve& curve,
                                           std::span<const double> points, std::size_t count) {
    check_dims(points, count, curve.d);
    const int d = curve.d;
    const std::size_t n = curve.vertex_count();
    const std::vector<std::int32_t> assign =
        kernels::assign_nearest_vertex(points, count, curve.vertices, n, d);
    std::vector<double> sq(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double* x = points.data() + i * static_cast<std::size_t>(d);
        const double* v = curve.vertices.data() + static_cast<std::size_t>(assign[i]) * d;
        double s = 0.0;
        for (int j = 0; j < d; ++j) {
            const double dif = x[j] - v[j];
            s += dif * dif;
        }
        sq[i] = s;
    }
    return estimate_from(std::move(sq), ProjectionMode::vertex);
}

double surrogate_objective(std::span<const double> vertices, std::size_t n, int d,
                           std::span<const double> points, std::size_t count,
                           const SurrogateConfig& cfg, std::uint64_t seed) {
    return surrogate_eval(vertices, n, d, points, count, cfg, seed).value;
}

std::vector<double> surrogate_gradient(std::span<const double> vertices, std::size_t n, int d,
                                       std::span<const double> points, std::size_t count,
                                       const SurrogateConfig& cfg, std::uint64_t seed) {
    return std::move(surrogate_eval(vertices, n, d, points, count, cfg, seed).gradient);
}

std::vector<GScanRow> g_scan(const PointSource& source, std::span<const double> lengths,
                             const FitConfig& base) {
    if (lengths.empty()) throw std::invalid_argument("g_scan needs at least one length");
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (lengths[i] < 0.0) throw std::invalid_argument("g_scan lengths must be >= 0");
        if (i > 0 && lengths[i] <= lengths[i - 1])
            throw std::invalid_argument("g_scan lengths must be sorted ascending");
    }

    std::vector<GScanRow> rows;
    rows.reserve(lengths.size());
    for (std::size_t idx = 0; idx < lengths.size(); ++idx) {
        const double L = lengths[idx];
        GScanRow row;
        row.length = L;
        row.seed = substream_key(base.seed, 0xB000 + idx);

        if (L == 0.0) {
            // Single-point curve at the empirical mean.
            std::vector<double> pts;
            std::span<const double> view;
            std::size_t count;
            if (source.is_empirical()) {
                view = source.points();
                count = source.point_count();
            } else {
                pts = source.sample(base.sample_count, substream_key(row.seed, kGScanEvalStream));
                view = pts;
                count = base.sample_count;
            }
            const int d = source.dim();
            std::vector<double> mean(d, 0.0), col(count);
            for (int j = 0; j < d; ++j) {
                for (std::size_t i = 0; i < count; ++i) col[i] = view[i * d + j];
                mean[j] = pairwise_sum(col) / static_cast<double>(count);
            }
            for (std::size_t i = 0; i < count; ++i) {
                double s = 0.0;
                for (int j = 0; j < d; ++j) {
                    const double dif = view[i * d + j] - mean[j];
                    s += dif * dif;
                }
                col[i] = s;
            }
            const MeanVar mv = mean_var(col);
            row.g_hat = mv.mean;
            row.std_error = mv.std_error();
            row.n_vertices = 1;
        } else {
            FitConfig cfg = base;
            cfg.length = L;
            cfg.seed = row.seed;
            const FitResult res = fit(source, cfg);
            row.g_hat = res.delta_hat.value;
            row.std_error = res.delta_hat.std_error;
            row.n_vertices = cfg.n_vertices;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace princurve
