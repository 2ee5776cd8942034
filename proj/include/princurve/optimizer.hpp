#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "princurve/criterion.hpp"
#include "princurve/curve.hpp"
#include "princurve/distributions.hpp"

namespace princurve {

struct FitConfig {
    int n_vertices = 32;
    double length = 1.0;
    Topology topology = Topology::open;
    int max_iters = 2000;
    int batch_size = 2048;
    std::size_t sample_count = 20000;  // training draws for sampler sources
    double step_initial = -1.0;        // < 0: 0.5 * L / n
    double tolerance = 1e-4;           // relative improvement threshold
    int window = 50;                   // iterations per convergence check
    bool recenter_mean = true;
    bool smoothing = true;             // jitter + anchor penalty, annealed over first half
    double epsilon0 = -1.0;            // < 0: 0.5 / sqrt(n)
    double zeta0 = -1.0;               // < 0: 0.1 * L / n
    double eta0 = -1.0;                // < 0: 0.1 * L / n
    int polish_iters = -1;             // < 0: max(200, 4 * window)
    int restarts = 1;
    std::uint64_t seed = 1;

    void validate(int dim) const;  // throws std::invalid_argument
    double resolved_step() const;
    double resolved_epsilon() const;
    double resolved_zeta() const;
    double resolved_eta() const;
    int resolved_polish() const;
};

struct FitResult {
    PolygonalCurve curve;
    CriterionEstimate delta_hat;   // smoothing off, segment projection
    int iterations = 0;
    double constraint_residual = 0.0;  // |segs*sum||dv||^2 - L^2| / L^2
    std::vector<std::pair<int, double>> history;  // (iteration, delta_hat)
    std::uint64_t seed = 0;
    int restart_index = 0;
};

/// PCA-based initial curve: open -> principal segment through the mean,
/// closed -> top-2-component ellipse, both scaled to the length budget.
PolygonalCurve initialize(const PointSource& source, const FitConfig& cfg);
PolygonalCurve initialize_from_points(std::span<const double> points, std::size_t count,
                                      int d, const FitConfig& cfg);

/// Uniformly rescales increments about the vertex centroid so that
/// segs * sum ||v_{i+1}-v_i||^2 == L^2 exactly; centroid preserved. A fully
/// collapsed input is replaced by the documented degenerate shape (segment
/// for open, regular polygon for closed) and *degenerate_out is set.
std::vector<double> enforce_constraint(std::vector<double> vertices, int d,
                                       double length, Topology topology,
                                       bool* degenerate_out = nullptr);

double squared_increment_sum(std::span<const double> vertices, std::size_t n, int d,
                             Topology topology);

/// Max vertex-wise norm of the stationarity equation
///   -E[(X - Xhat) 1{assigned i}] + epsilon (v_i - anchor_i) - lambda * atom_i
/// with exact (unjittered) nearest-vertex assignments over `points`.
double kkt_residual(const PolygonalCurve& curve,
                    std::span<const double> points, std::size_t count,
                    double lambda, const SurrogateConfig& cfg);

/// Projected stochastic gradient descent on the smoothed surrogate under the
/// squared-increment constraint.
FitResult fit(const PointSource& source, const FitConfig& cfg);

}  // namespace princurve
