#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "princurve/curve.hpp"

namespace princurve {

struct DiagnosticsConfig {
    double length_budget = -1.0;  // < 0: use sqrt(integral ||f'||^2) of the curve
    int trig_order = 4;           // K: harmonics per coordinate
    int n_bins = 16;              // self-consistency arc-length bins
    double knot_param_tol = 1e-9;
    double speed_rel_tol = 0.05;
    double curvature_mass_tol = 1e-9;
    std::vector<double> ambiguity_tols = {1e-2, 1e-4, 1e-6, 1e-9, 1e-12};
    int t_hist_bins = 32;
};

struct ResidualEntry {
    std::string test_fn;   // e.g. "e1*cos(2pit)"
    double residual = 0.0;
    double std_error = 0.0;
};

struct KnotAtomMass {
    std::size_t knot_index = 0;
    double t = 0.0;
    double mass = 0.0;
    double turn_angle = 0.0;  // angle between adjacent segments
};

struct AmbiguityEntry {
    double tol = 0.0;
    double fraction = 0.0;
};

struct BinGap {
    std::size_t bin = 0;
    std::size_t count = 0;
    double gap = 0.0;       // ||mean(x) - mean(xhat)|| within the bin
    double std_error = 0.0; // combined, per bin
};

struct TangencyCandidate {
    std::size_t seg_a = 0, seg_b = 0;
    double distance = 0.0;
    double angle_gap = 0.0;  // angle between the two segment directions
};

struct CheckEntry {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
    bool skipped = false;
    std::string note;
};

struct DiagnosticsReport {
    double lambda_hat = 0.0;
    double lambda_stderr = 0.0;
    double lambda_kkt = 0.0;        // secondary least-squares estimate
    double lambda_kkt_stderr = 0.0;
    std::vector<ResidualEntry> first_order_residuals;
    double speed_min = 0.0, speed_max = 0.0, speed_mean = 0.0;
    double curvature_total_variation = 0.0;
    double turning_angle = 0.0;
    double mean_gap = 0.0;
    double mean_gap_stderr = 0.0;
    double endpoint_mass_0 = 0.0, endpoint_mass_0_se = 0.0;
    double endpoint_mass_1 = 0.0, endpoint_mass_1_se = 0.0;
    std::vector<KnotAtomMass> knot_atom_masses;
    double self_consistency_gap = 0.0;
    std::vector<BinGap> bin_gaps;
    std::vector<AmbiguityEntry> ambiguity;
    bool injective = true;
    bool injectivity_checked = false;  // false when d != 2 (noted in report)
    std::vector<SegmentCrossing> crossings;
    std::vector<TangencyCandidate> tangencies;
    std::vector<double> t_hat_histogram;  // empirical law of t_hat
    double delta_hat = 0.0;
    double delta_hat_stderr = 0.0;
    double length_budget = 0.0;
    std::vector<CheckEntry> checks;
};

/// lambda_hat = mean<x - xhat, xhat> / L^2, stderr by the delta method.
/// Throws std::invalid_argument on zero-length curves.
std::pair<double, double> estimate_lambda(const PolygonalCurve& curve,
                                          std::span<const double> points, std::size_t count,
                                          double length_budget);

/// Least-squares lambda from the discrete stationarity system (secondary
/// estimator, exact vertex assignments).
std::pair<double, double> estimate_lambda_kkt(const PolygonalCurve& curve,
                                              std::span<const double> points, std::size_t count);

/// Weak first-order residuals against trigonometric test functions:
/// open curves use {e_j, e_j cos(k pi t), e_j sin(k pi t)}, closed curves the
/// periodic family {e_j, e_j cos(2k pi t), e_j sin(2k pi t)}, k = 1..K.
/// residual = mean<x - f(t_hat), g(t_hat)> - lambda * integral <g', f'> dt,
/// the integral evaluated exactly on the polygon.
std::vector<ResidualEntry> first_order_residual(const PolygonalCurve& curve,
                                                std::span<const double> points, std::size_t count,
                                                double lambda_hat, int trig_order,
                                                double length_budget);

struct AtomMasses {
    double endpoint_0 = 0.0, endpoint_0_se = 0.0;
    double endpoint_1 = 0.0, endpoint_1_se = 0.0;
    std::vector<KnotAtomMass> knots;
};

/// Empirical fractions of points whose t_hat hits a knot within tol.
AtomMasses atom_masses(const PolygonalCurve& curve,
                       std::span<const double> points, std::size_t count,
                       double param_tol = 1e-9);

/// Max over equal arc-length bins of ||mean(x) - mean(xhat)||.
double self_consistency_gap(const PolygonalCurve& curve,
                            std::span<const double> points, std::size_t count,
                            int n_bins, std::vector<BinGap>* detail = nullptr);

/// Fractions of points with a second projection candidate at parameter
/// distance > 2/n whose squared distance is within tol of the minimum.
std::vector<AmbiguityEntry> ambiguity_fraction(const PolygonalCurve& curve,
                                               std::span<const double> points, std::size_t count,
                                               std::span<const double> tolerances);

DiagnosticsReport full_report(const PolygonalCurve& curve,
                              std::span<const double> points, std::size_t count,
                              const DiagnosticsConfig& cfg);

}  // namespace princurve
