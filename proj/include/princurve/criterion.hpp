#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "princurve/curve.hpp"
#include "princurve/distributions.hpp"

namespace princurve {

struct FitConfig;  // optimizer.hpp

enum class ProjectionMode { segment, vertex };

struct CriterionEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t count = 0;
    ProjectionMode mode = ProjectionMode::segment;
};

/// Smoothed-surrogate parameters: anchor penalty weight epsilon, input
/// jitter scale zeta, vertex jitter scale eta. An anchor is required iff
/// epsilon > 0.
struct SurrogateConfig {
    double epsilon = 0.0;
    double zeta = 0.0;
    double eta = 0.0;
    std::vector<double> anchor;  // n * d when used
};

/// Mean squared distance to the nearest curve point (segment projection).
CriterionEstimate empirical_delta(const PolygonalCurve& curve,
                                  std::span<const double> points, std::size_t count);

/// Same criterion with nearest-vertex projection.
CriterionEstimate empirical_delta_vertices(const PolygonalCurve& curve,
                                           std::span<const double> points, std::size_t count);

/// Monte Carlo value of the smoothed surrogate: jittered points assigned to
/// jittered vertices, plus epsilon * sum ||v_i - anchor_i||^2. Jitters are a
/// pure function of `seed`, so with a fixed seed this is a deterministic,
/// piecewise-quadratic function of the vertices. With epsilon=zeta=eta=0 it
/// equals the vertex-projection criterion exactly.
double surrogate_objective(std::span<const double> vertices, std::size_t n, int d,
                           std::span<const double> points, std::size_t count,
                           const SurrogateConfig& cfg, std::uint64_t seed);

/// Analytic gradient of surrogate_objective at the same (cfg, seed); exact
/// away from assignment ties.
std::vector<double> surrogate_gradient(std::span<const double> vertices, std::size_t n, int d,
                                       std::span<const double> points, std::size_t count,
                                       const SurrogateConfig& cfg, std::uint64_t seed);

/// Value, gradient and per-point vertex assignment in one pass (what the
/// optimizer iterates on).
struct SurrogateEval {
    double value = 0.0;
    std::vector<double> gradient;          // n * d
    std::vector<std::int32_t> assignment;  // per point
};

SurrogateEval surrogate_eval(std::span<const double> vertices, std::size_t n, int d,
                             std::span<const double> points, std::size_t count,
                             const SurrogateConfig& cfg, std::uint64_t seed);

struct GScanRow {
    double length = 0.0;
    double g_hat = 0.0;
    double std_error = 0.0;
    int n_vertices = 0;
    std::uint64_t seed = 0;
};

/// Best empirical criterion per length budget, fitted with shared settings.
/// L = 0 is the single-point curve at the empirical mean. Lengths must be
/// ascending and nonnegative.
std::vector<GScanRow> g_scan(const PointSource& source, std::span<const double> lengths,
                             const FitConfig& base);

}  // namespace princurve
