#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "princurve/common.hpp"

namespace princurve {

enum class SourceKind {
    uniform_square,       // uniform on [0,1]^2
    gaussian_std,         // N(0, I_d)
    uniform_circle,       // uniform on the circle of given radius
    uniform_1d,           // uniform on [a, b]
    atom_circle_mixture,  // p * delta_origin + (1-p) * uniform unit circle
    empirical,            // resampling (with replacement) of stored points
};

struct Moments {
    std::vector<double> mean;
    double second_moment = 0.0;  // E||X||^2
    std::size_t count = 0;
};

/// Immutable sampling configuration. Draws are splitmix64 streams keyed by
/// (seed, stream); each point consumes a fixed number of uniforms, so
/// sample(n)[i] is independent of n.
class PointSource {
public:
    static PointSource uniform_square(std::uint64_t seed);
    static PointSource gaussian_std(int d, std::uint64_t seed);
    static PointSource uniform_circle(double radius, std::uint64_t seed);
    static PointSource uniform_1d(double a, double b, std::uint64_t seed);
    static PointSource atom_circle_mixture(double p, std::uint64_t seed);
    static PointSource empirical(std::vector<double> points, int d, std::uint64_t seed);

    SourceKind kind() const { return kind_; }
    int dim() const { return d_; }
    std::uint64_t seed() const { return seed_; }
    bool is_empirical() const { return kind_ == SourceKind::empirical; }

    const std::vector<double>& points() const { return points_; }
    std::size_t point_count() const { return d_ > 0 ? points_.size() / d_ : 0; }

    /// i.i.d. draws, deterministic given (seed, stream, count).
    std::vector<double> sample(std::size_t count, std::uint64_t stream = 0) const;

    /// Monte Carlo mean and E||X||^2 (exact full pass for empirical sources).
    Moments moments(std::size_t count) const;

    /// One-line description for run manifests, e.g. "uniform_1d(0,1)".
    std::string describe() const;

    double param_a() const { return a_; }
    double param_b() const { return b_; }
    double radius() const { return radius_; }
    double atom_p() const { return atom_p_; }

private:
    PointSource() = default;
    SourceKind kind_ = SourceKind::uniform_square;
    int d_ = 2;
    std::uint64_t seed_ = 0;
    double a_ = 0.0, b_ = 1.0;
    double radius_ = 1.0;
    double atom_p_ = 0.0;
    std::vector<double> points_;
};

/// Loads a comma-separated point cloud. Optional single header row (detected
/// by a non-numeric first row). Throws ParseError naming the offending row
/// for ragged rows, non-numeric cells, and empty files.
PointSource load_csv(const std::string& path, std::uint64_t seed);

}  // namespace princurve
