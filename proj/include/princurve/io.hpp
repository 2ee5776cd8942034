#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "princurve/criterion.hpp"
#include "princurve/curve.hpp"
#include "princurve/diagnostics.hpp"

namespace princurve {

inline constexpr const char* kVersion = "0.1.0";

/// Curve JSON: {"topology":"open"|"closed","d":n,"vertices":[[..],..]}.
nlohmann::json curve_to_json(const PolygonalCurve& curve);
PolygonalCurve curve_from_json(const nlohmann::json& j);  // throws ParseError
PolygonalCurve load_curve(const std::string& path);
void save_curve(const PolygonalCurve& curve, const std::string& path);

nlohmann::json report_to_json(const DiagnosticsReport& report);

void write_history_csv(const std::string& path,
                       std::span<const std::pair<int, double>> history);
void write_scan_csv(const std::string& path, std::span<const GScanRow> rows);

/// FNV-1a 64-bit digest of a file's bytes, hex-encoded. Throws ParseError if
/// the file cannot be read.
std::string file_digest(const std::string& path);

struct RunManifest {
    std::string command_line;
    nlohmann::json resolved_config;
    std::uint64_t seed = 0;
    std::string rng = "splitmix64";
    std::string version = kVersion;
    std::map<std::string, std::string> input_digests;
    std::vector<std::string> outputs;  // includes the manifest itself
    double wall_time_ms = 0.0;
};

void write_manifest(const RunManifest& manifest, const std::string& path);

struct SvgOptions {
    double margin_frac = 0.05;
    int width = 720;
};

/// Standalone SVG 1.1: points as dots, curve as a polyline (first vertex
/// repeated for closed curves), knots with positive atom mass emphasized.
void write_svg(const std::string& path, const PolygonalCurve* curve,
               std::span<const double> points, std::size_t point_count,
               std::span<const KnotAtomMass> atoms, const SvgOptions& opts = {});

}  // namespace princurve
