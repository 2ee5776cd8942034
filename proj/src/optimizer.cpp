#include "princurve/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "princurve/kernels.hpp"
#include "princurve/rng.hpp"

namespace princurve {

namespace {

constexpr std::uint64_t kTrainStream = 0x5452414E33ULL;
constexpr std::uint64_t kBatchStream = 0x4241544348ULL;
constexpr std::uint64_t kIterStream = 0x49544552ULL;

/// Jacobi eigendecomposition of a small symmetric matrix (row-major d x d).
/// Eigenpairs returned sorted by descending eigenvalue; eigenvectors are the
/// columns of V.
void jacobi_eigen(std::vector<double> a, int d,
                  std::vector<double>& evals, std::vector<double>& evecs) {
    std::vector<double> v(d * d, 0.0);
    for (int i = 0; i < d; ++i) v[i * d + i] = 1.0;

    double scale2 = 0.0;
    for (double x : a) scale2 += x * x;

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < d; ++p)
            for (int q = p + 1; q < d; ++q) off += a[p * d + q] * a[p * d + q];
        // relative threshold keeps the sweep count scale-invariant
        if (off <= 1e-28 * scale2) break;
        for (int p = 0; p < d; ++p) {
            for (int q = p + 1; q < d; ++q) {
                const double apq = a[p * d + q];
                if (apq == 0.0) continue;
                const double theta = (a[q * d + q] - a[p * d + p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < d; ++k) {
                    const double akp = a[k * d + p], akq = a[k * d + q];
                    a[k * d + p] = c * akp - s * akq;
                    a[k * d + q] = s * akp + c * akq;
                }
                for (int k = 0; k < d; ++k) {
                    const double apk = a[p * d + k], aqk = a[q * d + k];
                    a[p * d + k] = c * apk - s * aqk;
                    a[q * d + k] = s * apk + c * aqk;
                }
                for (int k = 0; k < d; ++k) {
                    const double vkp = v[k * d + p], vkq = v[k * d + q];
                    v[k * d + p] = c * vkp - s * vkq;
                    v[k * d + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<int> order(d);
    for (int i = 0; i < d; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a[i * d + i] > a[j * d + j]; });
    evals.resize(d);
    evecs.resize(d * d);
    for (int c = 0; c < d; ++c) {
        evals[c] = a[order[c] * d + order[c]];
        for (int k = 0; k < d; ++k) evecs[k * d + c] = v[k * d + order[c]];
    }
}

std::vector<double> column_means(std::span<const double> pts, std::size_t count, int d) {
    std::vector<double> mean(d, 0.0), col(count);
    for (int j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < count; ++i) col[i] = pts[i * d + j];
        mean[j] = pairwise_sum(col) / static_cast<double>(count);
    }
    return mean;
}

bool all_finite(std::span<const double> v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

void FitConfig::validate(int dim) const {
    if (dim < 1) throw std::invalid_argument("source dimension must be >= 1");
    if (n_vertices < 3) throw std::invalid_argument("fit requires n_vertices >= 3");
    if (!(length > 0.0)) throw std::invalid_argument("fit requires length > 0");
    if (max_iters < 1) throw std::invalid_argument("fit requires max_iters >= 1");
    if (batch_size < 1) throw std::invalid_argument("fit requires batch_size >= 1");
    if (window < 1) throw std::invalid_argument("fit requires window >= 1");
    if (restarts < 1) throw std::invalid_argument("fit requires restarts >= 1");
    if (sample_count < 1) throw std::invalid_argument("fit requires sample_count >= 1");
}

double FitConfig::resolved_step() const {
    return step_initial > 0.0 ? step_initial : 0.5 * length / n_vertices;
}
double FitConfig::resolved_epsilon() const {
    return epsilon0 >= 0.0 ? epsilon0 : 0.5 / std::sqrt(static_cast<double>(n_vertices));
}
double FitConfig::resolved_zeta() const {
    return zeta0 >= 0.0 ? zeta0 : 0.1 * length / n_vertices;
}
double FitConfig::resolved_eta() const {
    return eta0 >= 0.0 ? eta0 : 0.1 * length / n_vertices;
}
int FitConfig::resolved_polish() const {
    return polish_iters >= 0 ? polish_iters : std::max(200, 4 * window);
}

double squared_increment_sum(std::span<const double> vertices, std::size_t n, int d,
                             Topology topology) {
    const std::size_t segs = topology == Topology::closed ? n : n - 1;
    double q = 0.0;
    for (std::size_t k = 0; k < segs; ++k) {
        const std::size_t k1 = (k + 1) % n;
        for (int j = 0; j < d; ++j) {
            const double dif = vertices[k1 * d + j] - vertices[k * d + j];
            q += dif * dif;
        }
    }
    return static_cast<double>(segs) * q;
}

std::vector<double> enforce_constraint(std::vector<double> vertices, int d,
                                       double length, Topology topology,
                                       bool* degenerate_out) {
    if (d < 1 || vertices.size() < 2 * static_cast<std::size_t>(d))
        throw std::invalid_argument("enforce_constraint needs at least 2 vertices");
    if (!(length > 0.0)) throw std::invalid_argument("enforce_constraint requires length > 0");
    const std::size_t n = vertices.size() / d;
    if (degenerate_out) *degenerate_out = false;

    std::vector<double> centroid(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) centroid[j] += vertices[i * d + j];
    for (int j = 0; j < d; ++j) centroid[j] /= static_cast<double>(n);

    const double q = squared_increment_sum(vertices, n, d, topology);

    if (std::sqrt(q) <= length * 1e-12) {
        // Collapsed input: documented degenerate replacement about the centroid.
        if (degenerate_out) *degenerate_out = true;
        std::vector<double> out(n * d, 0.0);
        if (topology == Topology::open || d == 1) {
            const double step = length / static_cast<double>(n - 1);
            const double mid = 0.5 * static_cast<double>(n - 1);
            for (std::size_t i = 0; i < n; ++i) {
                for (int j = 0; j < d; ++j) out[i * d + j] = centroid[j];
                out[i * d] = centroid[0] + (static_cast<double>(i) - mid) * step;
            }
            if (topology == Topology::closed) {
                // 1-D closed: needle saturating the budget only approximately;
                // rescale below.
                const double qq = squared_increment_sum(out, n, d, topology);
                const double alpha = length / std::sqrt(qq);
                for (std::size_t i = 0; i < n; ++i)
                    out[i * d] = centroid[0] + alpha * (out[i * d] - centroid[0]);
            }
            return out;
        }
        // Closed, d >= 2: regular n-gon with side L/n (exactly saturating).
        const double rho = (length / static_cast<double>(n)) /
                           (2.0 * std::sin(3.14159265358979323846 / static_cast<double>(n)));
        for (std::size_t i = 0; i < n; ++i) {
            const double ang = 6.283185307179586 * static_cast<double>(i) / static_cast<double>(n);
            for (int j = 0; j < d; ++j) out[i * d + j] = centroid[j];
            out[i * d] += rho * std::cos(ang);
            out[i * d + 1] += rho * std::sin(ang);
        }
        return out;
    }

    const double alpha = length / std::sqrt(q);
    for (std::size_t i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j)
            vertices[i * d + j] = centroid[j] + alpha * (vertices[i * d + j] - centroid[j]);
    return vertices;
}

PolygonalCurve initialize_from_points(std::span<const double> points, std::size_t count,
                                      int d, const FitConfig& cfg) {
    cfg.validate(d);
    if (count < 1) throw std::invalid_argument("initialize needs points");
    const std::size_t n = static_cast<std::size_t>(cfg.n_vertices);
    const double L = cfg.length;

    const std::vector<double> mean = column_means(points, count, d);
    std::vector<double> cov(d * d, 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        for (int r = 0; r < d; ++r) {
            const double xr = points[i * d + r] - mean[r];
            for (int c = r; c < d; ++c)
                cov[r * d + c] += xr * (points[i * d + c] - mean[c]);
        }
    }
    for (int r = 0; r < d; ++r)
        for (int c = r; c < d; ++c) {
            cov[r * d + c] /= static_cast<double>(count);
            cov[c * d + r] = cov[r * d + c];
        }

    std::vector<double> evals, evecs;
    jacobi_eigen(cov, d, evals, evecs);
    double trace = 0.0;
    for (int j = 0; j < d; ++j) trace += cov[j * d + j];

    std::vector<double> u1(d, 0.0), u2(d, 0.0);
    if (trace > 0.0 && evals[0] > 1e-12 * trace) {
        for (int k = 0; k < d; ++k) u1[k] = evecs[k * d + 0];
    } else {
        u1[0] = 1.0;  // rank-deficient sample: coordinate axis fallback
    }
    if (d >= 2) {
        if (trace > 0.0 && evals.size() > 1 && evals[1] > 1e-12 * trace) {
            for (int k = 0; k < d; ++k) u2[k] = evecs[k * d + 1];
        } else {
            // pick the coordinate axis least aligned with u1
            int best = 0;
            double best_abs = std::abs(u1[0]);
            for (int k = 1; k < d; ++k)
                if (std::abs(u1[k]) < best_abs) { best_abs = std::abs(u1[k]); best = k; }
            u2.assign(d, 0.0);
            u2[best] = 1.0;
            double dot = 0.0;
            for (int k = 0; k < d; ++k) dot += u1[k] * u2[k];
            double nrm = 0.0;
            for (int k = 0; k < d; ++k) {
                u2[k] -= dot * u1[k];
                nrm += u2[k] * u2[k];
            }
            nrm = std::sqrt(nrm);
            if (nrm > 0.0)
                for (int k = 0; k < d; ++k) u2[k] /= nrm;
        }
    }

    PolygonalCurve curve;
    curve.d = d;
    curve.topology = cfg.topology;
    curve.vertices.resize(n * d);

    if (cfg.topology == Topology::open) {
        for (std::size_t i = 0; i < n; ++i) {
            const double s = static_cast<double>(i) / static_cast<double>(n - 1) - 0.5;
            for (int j = 0; j < d; ++j) curve.vertices[i * d + j] = mean[j] + s * L * u1[j];
        }
    } else {
        const double a0 = evals[0] > 0.0 ? std::sqrt(evals[0]) : 1.0;
        const double b0 = (d >= 2 && evals.size() > 1 && evals[1] > 0.0) ? std::sqrt(evals[1]) : a0;
        // unit-scale ellipse, then rescale to the requested perimeter
        std::vector<double> shape(n * d);
        for (std::size_t i = 0; i < n; ++i) {
            const double ang = 6.283185307179586 * static_cast<double>(i) / static_cast<double>(n);
            for (int j = 0; j < d; ++j)
                shape[i * d + j] = a0 * std::cos(ang) * u1[j] + b0 * std::sin(ang) * u2[j];
        }
        double perimeter = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t i1 = (i + 1) % n;
            double s = 0.0;
            for (int j = 0; j < d; ++j) {
                const double dif = shape[i1 * d + j] - shape[i * d + j];
                s += dif * dif;
            }
            perimeter += std::sqrt(s);
        }
        const double scale = perimeter > 0.0 ? L / perimeter : 1.0;
        for (std::size_t i = 0; i < n; ++i)
            for (int j = 0; j < d; ++j)
                curve.vertices[i * d + j] = mean[j] + scale * shape[i * d + j];
    }

    curve.vertices = enforce_constraint(std::move(curve.vertices), d, L, cfg.topology);
    return curve;
}

PolygonalCurve initialize(const PointSource& source, const FitConfig& cfg) {
    cfg.validate(source.dim());
    if (source.is_empirical())
        return initialize_from_points(source.points(), source.point_count(), source.dim(), cfg);
    const std::vector<double> pts =
        source.sample(cfg.sample_count, substream_key(cfg.seed, kTrainStream));
    return initialize_from_points(pts, cfg.sample_count, source.dim(), cfg);
}

double kkt_residual(const PolygonalCurve& curve,
                    std::span<const double> points, std::size_t count,
                    double lambda, const SurrogateConfig& cfg) {
    curve.validate();
    if (lambda < 0.0) throw std::invalid_argument("kkt_residual requires lambda >= 0");
    const int d = curve.d;
    const std::size_t n = curve.vertex_count();
    if (cfg.epsilon > 0.0 && cfg.anchor.size() != n * static_cast<std::size_t>(d))
        throw std::invalid_argument("anchor required when epsilon > 0");
    const std::vector<std::int32_t> assign =
        kernels::assign_nearest_vertex(points, count, curve.vertices, n, d);

    std::vector<double> b(n * d, 0.0);
    const double inv_count = 1.0 / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t a = static_cast<std::size_t>(assign[i]);
        for (int j = 0; j < d; ++j)
            b[a * d + j] += inv_count * (points[i * d + j] - curve.vertices[a * d + j]);
    }

    const CurvatureMeasure measure = second_difference_measure(curve);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) {
            double r = -b[i * d + j] - lambda * measure.atoms[i].value[j];
            if (cfg.epsilon > 0.0)
                r += cfg.epsilon * (curve.vertices[i * d + j] - cfg.anchor[i * d + j]);
            s += r * r;
        }
        worst = std::max(worst, std::sqrt(s));
    }
    return worst;
}

namespace {

FitResult fit_once(const PointSource& source, const FitConfig& cfg, std::uint64_t seed,
                   int restart_index) {
    const int d = source.dim();
    const std::size_t n = static_cast<std::size_t>(cfg.n_vertices);
    const double L = cfg.length;

    // Training points double as the evaluation sample (in-sample delta).
    std::vector<double> train_storage;
    std::span<const double> train;
    std::size_t train_count;
    if (source.is_empirical()) {
        train = source.points();
        train_count = source.point_count();
    } else {
        train_storage = source.sample(cfg.sample_count, substream_key(seed, kTrainStream));
        train = train_storage;
        train_count = cfg.sample_count;
    }

    FitConfig init_cfg = cfg;
    init_cfg.seed = seed;
    PolygonalCurve curve = initialize_from_points(train, train_count, d, init_cfg);
    std::vector<double> anchor = curve.vertices;

    // The step premultiplies a gradient that carries length units, so it is
    // normalized by the data's RMS radius to make the update scale-free.
    double rms = 0.0;
    {
        const std::vector<double> mean = column_means(train, train_count, d);
        std::vector<double> sq(train_count);
        for (std::size_t i = 0; i < train_count; ++i) {
            double s = 0.0;
            for (int j = 0; j < d; ++j) {
                const double dif = train[i * d + j] - mean[j];
                s += dif * dif;
            }
            sq[i] = s;
        }
        rms = std::sqrt(pairwise_sum(sq) / static_cast<double>(train_count));
        if (!(rms > 0.0)) rms = 1.0;
    }
    const double step0 = cfg.resolved_step() / rms;
    const double eps0 = cfg.smoothing ? cfg.resolved_epsilon() : 0.0;
    const double zeta0 = cfg.smoothing ? cfg.resolved_zeta() : 0.0;
    const double eta0 = cfg.smoothing ? cfg.resolved_eta() : 0.0;
    const double decay_iters = std::max(1.0, static_cast<double>(cfg.max_iters) / 4.0);
    const int half = std::max(1, cfg.max_iters / 2);
    const int resample_cutoff = (3 * cfg.max_iters) / 4;

    FitResult result;
    result.seed = seed;
    result.restart_index = restart_index;

    {
        const CriterionEstimate d0 = empirical_delta(curve, train, train_count);
        result.history.emplace_back(0, d0.value);
    }

    const std::size_t batch =
        std::min<std::size_t>(static_cast<std::size_t>(cfg.batch_size), train_count);
    const bool full_batch = batch >= train_count;
    std::vector<double> batch_buf;
    if (!full_batch) batch_buf.resize(batch * d);
    const std::uint64_t batch_key = substream_key(seed, kBatchStream);
    const std::uint64_t iter_key = substream_key(seed, kIterStream);

    double prev_window_delta = result.history.front().second;
    int iters_done = 0;

    // Adaptive multiplier for the chain-tension part of the Lagrangian.
    // Pure data-pull + rescale is unstable (vertices with empty cells stop
    // moving and the rescale contracts them); the lambda-weighted discrete
    // Laplacian is the restoring force the stationarity system prescribes.
    double lambda_ema = 0.0;
    bool lambda_init = false;

    auto one_step = [&](std::span<const double> pts, std::size_t count, double step,
                        double eps, double zeta, double eta, std::uint64_t jitter_seed) {
        SurrogateConfig scfg;
        scfg.epsilon = eps;
        scfg.zeta = zeta;
        scfg.eta = eta;
        if (eps > 0.0) scfg.anchor = anchor;
        const SurrogateEval ev =
            surrogate_eval(curve.vertices, n, d, pts, count, scfg, jitter_seed);
        if (!all_finite(ev.gradient))
            throw NumericalError("non-finite gradient (divergent step size?)");

        // c_i = segs * (2 v_i - v_prev - v_next), the gradient of q/2.
        const std::size_t segs = cfg.topology == Topology::closed ? n : n - 1;
        std::vector<double> c(n * d, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const bool open_end = cfg.topology == Topology::open && (i == 0 || i + 1 == n);
            const std::size_t prev = (i + n - 1) % n;
            const std::size_t next = (i + 1) % n;
            for (int j = 0; j < d; ++j) {
                double val;
                if (open_end) {
                    val = i == 0 ? curve.vertices[j] - curve.vertices[static_cast<std::size_t>(d) + j]
                                 : curve.vertices[i * d + j] - curve.vertices[prev * d + j];
                } else {
                    val = 2.0 * curve.vertices[i * d + j] - curve.vertices[prev * d + j] -
                          curve.vertices[next * d + j];
                }
                c[i * d + j] = static_cast<double>(segs) * val;
            }
        }

        // Batch least-squares multiplier: b_i = mean (x - v_i) over cell i,
        // lambda = <b, c> / ||c||^2, clipped at zero.
        std::vector<double> b(n * d, 0.0);
        const double inv_cnt = 1.0 / static_cast<double>(count);
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t a = static_cast<std::size_t>(ev.assignment[i]);
            for (int j = 0; j < d; ++j)
                b[a * d + j] += inv_cnt * (pts[i * d + j] - curve.vertices[a * d + j]);
        }
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n * static_cast<std::size_t>(d); ++i) {
            num += b[i] * c[i];
            den += c[i] * c[i];
        }
        const double lambda_raw = den > 0.0 ? std::max(0.0, num / den) : 0.0;
        lambda_ema = lambda_init ? 0.9 * lambda_ema + 0.1 * lambda_raw : lambda_raw;
        lambda_init = true;

        for (std::size_t i = 0; i < n * static_cast<std::size_t>(d); ++i)
            curve.vertices[i] -= step * (ev.gradient[i] + 2.0 * lambda_ema * c[i]);

        if (cfg.recenter_mean) {
            // Shift by (mean x - mean assigned vertex) over the batch.
            std::vector<double> shift(d, 0.0);
            const double inv_count = 1.0 / static_cast<double>(count);
            for (std::size_t i = 0; i < count; ++i) {
                const std::size_t a = static_cast<std::size_t>(ev.assignment[i]);
                for (int j = 0; j < d; ++j)
                    shift[j] += inv_count * (pts[i * d + j] - curve.vertices[a * d + j]);
            }
            for (std::size_t i = 0; i < n; ++i)
                for (int j = 0; j < d; ++j) curve.vertices[i * d + j] += shift[j];
        }
        if (!all_finite(curve.vertices))
            throw NumericalError("non-finite iterate (divergent step size?)");
        curve.vertices = enforce_constraint(std::move(curve.vertices), d, L, cfg.topology);
    };

    int k = 0;
    for (; k < cfg.max_iters; ++k) {
        const double anneal = std::max(0.0, 1.0 - static_cast<double>(k) / half);
        const double step = step0 / (1.0 + static_cast<double>(k) / decay_iters);

        std::span<const double> pts = train;
        std::size_t count = train_count;
        if (!full_batch) {
            SplitMix64 rng(substream_key(batch_key, static_cast<std::uint64_t>(k)));
            for (std::size_t i = 0; i < batch; ++i) {
                std::size_t idx = static_cast<std::size_t>(
                    rng.next_unit() * static_cast<double>(train_count));
                if (idx >= train_count) idx = train_count - 1;
                for (int j = 0; j < d; ++j) batch_buf[i * d + j] = train[idx * d + j];
            }
            pts = batch_buf;
            count = batch;
        }

        one_step(pts, count, step, eps0 * anneal, zeta0 * anneal, eta0 * anneal,
                 substream_key(iter_key, static_cast<std::uint64_t>(k)));
        ++iters_done;

        const bool window_end = (k + 1) % cfg.window == 0;
        if (window_end && k < resample_cutoff) {
            curve = resample_uniform(curve, n);
            curve.vertices = enforce_constraint(std::move(curve.vertices), d, L, cfg.topology);
            anchor = curve.vertices;  // self-anchoring: follow the current iterate
        }
        if (window_end) {
            const CriterionEstimate cur = empirical_delta(curve, train, train_count);
            result.history.emplace_back(k + 1, cur.value);
            const double improvement =
                (prev_window_delta - cur.value) / std::max(prev_window_delta, 1e-300);
            prev_window_delta = cur.value;
            if (k >= resample_cutoff && improvement < cfg.tolerance) {
                ++k;
                break;
            }
        }
    }

    // Polish: exact assignments, no smoothing, full batch, gentle steps.
    const int polish = cfg.resolved_polish();
    curve = resample_uniform(curve, n);
    curve.vertices = enforce_constraint(std::move(curve.vertices), d, L, cfg.topology);
    const double polish_step0 = step0 / (1.0 + static_cast<double>(k) / decay_iters);
    double polish_step = polish_step0;
    for (int p = 0; p < polish; ++p) {
        polish_step = polish_step0 / (1.0 + static_cast<double>(p) / decay_iters);
        one_step(train, train_count, polish_step, 0.0, 0.0, 0.0,
                 substream_key(iter_key, 0x504C0000ULL + static_cast<std::uint64_t>(p)));
        ++iters_done;
    }

    // Constant-speed settle: the discrete stationary point can have uneven
    // segments; constant speed is enforced by resampling each step with
    // shrinking steps so the balance equations are restored in between.
    const int settle = std::max(50, cfg.window);
    for (int p = 0; p < settle; ++p) {
        const double step = 0.25 * polish_step / (1.0 + static_cast<double>(p) / 16.0);
        one_step(train, train_count, step, 0.0, 0.0, 0.0,
                 substream_key(iter_key, 0x53540000ULL + static_cast<std::uint64_t>(p)));
        curve = resample_uniform(curve, n);
        curve.vertices = enforce_constraint(std::move(curve.vertices), d, L, cfg.topology);
        ++iters_done;
    }

    result.curve = curve;
    result.delta_hat = empirical_delta(curve, train, train_count);
    result.history.emplace_back(iters_done, result.delta_hat.value);
    result.iterations = iters_done;
    const double q = squared_increment_sum(curve.vertices, n, d, cfg.topology);
    result.constraint_residual = std::abs(q - L * L) / (L * L);
    return result;
}

}  // namespace

FitResult fit(const PointSource& source, const FitConfig& cfg) {
    cfg.validate(source.dim());
    FitResult best;
    bool have = false;
    for (int r = 0; r < cfg.restarts; ++r) {
        const std::uint64_t seed =
            cfg.restarts == 1
                ? cfg.seed
                : substream_key(cfg.seed, 0x52535452ULL + static_cast<std::uint64_t>(r));
        FitResult res = fit_once(source, cfg, seed, r);
        if (!have || res.delta_hat.value < best.delta_hat.value) {
            best = std::move(res);
            have = true;
        }
    }
    return best;
}

}  // namespace princurve
