#include "princurve/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace princurve {

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file: " + path);
    out << text;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

nlohmann::json curve_to_json(const PolygonalCurve& curve) {
    nlohmann::json j;
    j["topology"] = curve.topology == Topology::closed ? "closed" : "open";
    j["d"] = curve.d;
    nlohmann::json verts = nlohmann::json::array();
    for (std::size_t i = 0; i < curve.vertex_count(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < curve.d; ++c) row.push_back(curve.vertices[i * curve.d + c]);
        verts.push_back(std::move(row));
    }
    j["vertices"] = std::move(verts);
    return j;
}

PolygonalCurve curve_from_json(const nlohmann::json& j) {
    PolygonalCurve curve;
    try {
        const std::string topo = j.at("topology").get<std::string>();
        if (topo == "open") curve.topology = Topology::open;
        else if (topo == "closed") curve.topology = Topology::closed;
        else throw ParseError("curve JSON: topology must be \"open\" or \"closed\"");
        curve.d = j.at("d").get<int>();
        const auto& verts = j.at("vertices");
        if (!verts.is_array()) throw ParseError("curve JSON: vertices must be an array");
        for (const auto& row : verts) {
            if (!row.is_array() || static_cast<int>(row.size()) != curve.d)
                throw ParseError("curve JSON: vertex row arity mismatch");
            for (const auto& v : row) curve.vertices.push_back(v.get<double>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("curve JSON: ") + e.what());
    }
    try {
        curve.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("curve JSON: ") + e.what());
    }
    return curve;
}

PolygonalCurve load_curve(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open curve file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("malformed curve JSON in " + path + ": " + e.what());
    }
    return curve_from_json(j);
}

void save_curve(const PolygonalCurve& curve, const std::string& path) {
    write_text(path, curve_to_json(curve).dump(2) + "\n");
}

nlohmann::json report_to_json(const DiagnosticsReport& rep) {
    nlohmann::json j;
    j["lambda_hat"] = rep.lambda_hat;
    j["lambda_stderr"] = rep.lambda_stderr;
    j["lambda_kkt"] = rep.lambda_kkt;
    j["lambda_kkt_stderr"] = rep.lambda_kkt_stderr;
    j["delta_hat"] = rep.delta_hat;
    j["delta_hat_stderr"] = rep.delta_hat_stderr;
    j["length_budget"] = rep.length_budget;

    nlohmann::json res = nlohmann::json::array();
    for (const auto& r : rep.first_order_residuals)
        res.push_back({{"test_fn", r.test_fn}, {"residual", r.residual}, {"stderr", r.std_error}});
    j["first_order_residuals"] = std::move(res);

    j["speed"] = {{"min", rep.speed_min}, {"max", rep.speed_max}, {"mean", rep.speed_mean}};
    j["curvature_total_variation"] = rep.curvature_total_variation;
    j["turning_angle"] = rep.turning_angle;
    j["mean_gap"] = rep.mean_gap;
    j["mean_gap_stderr"] = rep.mean_gap_stderr;
    j["endpoint_atom_masses"] = {
        {"p0", rep.endpoint_mass_0}, {"p0_stderr", rep.endpoint_mass_0_se},
        {"p1", rep.endpoint_mass_1}, {"p1_stderr", rep.endpoint_mass_1_se}};

    nlohmann::json knots = nlohmann::json::array();
    for (const auto& k : rep.knot_atom_masses)
        knots.push_back({{"knot", k.knot_index}, {"t", k.t}, {"mass", k.mass},
                         {"turn_angle", k.turn_angle}});
    j["knot_atom_masses"] = std::move(knots);

    j["self_consistency_gap"] = rep.self_consistency_gap;
    nlohmann::json bins = nlohmann::json::array();
    for (const auto& b : rep.bin_gaps)
        bins.push_back({{"bin", b.bin}, {"count", b.count}, {"gap", b.gap},
                        {"stderr", b.std_error}});
    j["self_consistency_bins"] = std::move(bins);

    nlohmann::json amb = nlohmann::json::array();
    for (const auto& a : rep.ambiguity)
        amb.push_back({{"tol", a.tol}, {"fraction", a.fraction}});
    j["ambiguity_fraction"] = std::move(amb);

    j["injective"] = rep.injective;
    j["injectivity_checked"] = rep.injectivity_checked;
    if (!rep.injectivity_checked) j["injectivity_note"] = "skipped: requires d = 2";
    nlohmann::json crossings = nlohmann::json::array();
    for (const auto& c : rep.crossings)
        crossings.push_back({{"seg_a", c.seg_a}, {"seg_b", c.seg_b},
                             {"point", {c.point[0], c.point[1]}}});
    j["crossings"] = std::move(crossings);
    nlohmann::json tangencies = nlohmann::json::array();
    for (const auto& t : rep.tangencies)
        tangencies.push_back({{"seg_a", t.seg_a}, {"seg_b", t.seg_b},
                              {"distance", t.distance}, {"angle_gap", t.angle_gap}});
    j["tangency_candidates"] = std::move(tangencies);

    j["t_hat_histogram"] = rep.t_hat_histogram;

    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : rep.checks) {
        nlohmann::json e = {{"name", c.name}, {"value", c.value},
                            {"threshold", c.threshold}, {"pass", c.pass}};
        if (c.skipped) e["skipped"] = true;
        if (!c.note.empty()) e["note"] = c.note;
        checks.push_back(std::move(e));
    }
    j["checks"] = std::move(checks);
    return j;
}

void write_history_csv(const std::string& path,
                       std::span<const std::pair<int, double>> history) {
    std::string text = "iter,delta_hat\n";
    for (const auto& [iter, delta] : history)
        text += std::to_string(iter) + "," + fmt(delta) + "\n";
    write_text(path, text);
}

void write_scan_csv(const std::string& path, std::span<const GScanRow> rows) {
    std::string text = "L,G_hat,std_error,n_vertices,seed\n";
    for (const auto& r : rows)
        text += fmt(r.length) + "," + fmt(r.g_hat) + "," + fmt(r.std_error) + "," +
                std::to_string(r.n_vertices) + "," + std::to_string(r.seed) + "\n";
    write_text(path, text);
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read file for digest: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a 64
    char buf[8192];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (got < static_cast<std::streamsize>(sizeof buf)) break;
    }
    char hex[20];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    nlohmann::json j;
    j["command_line"] = manifest.command_line;
    j["resolved_config"] = manifest.resolved_config;
    j["seed"] = manifest.seed;
    j["rng"] = manifest.rng;
    j["version"] = manifest.version;
    j["input_digests"] = manifest.input_digests;
    j["outputs"] = manifest.outputs;
    j["wall_time_ms"] = manifest.wall_time_ms;
    write_text(path, j.dump(2) + "\n");
}

void write_svg(const std::string& path, const PolygonalCurve* curve,
               std::span<const double> points, std::size_t point_count,
               std::span<const KnotAtomMass> atoms, const SvgOptions& opts) {
    // Data bounds.
    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    bool first = true;
    auto acc = [&](double x, double y) {
        if (first) {
            xmin = xmax = x;
            ymin = ymax = y;
            first = false;
        } else {
            xmin = std::min(xmin, x); xmax = std::max(xmax, x);
            ymin = std::min(ymin, y); ymax = std::max(ymax, y);
        }
    };
    if (curve)
        for (std::size_t i = 0; i < curve->vertex_count(); ++i)
            acc(curve->vertices[i * 2], curve->vertices[i * 2 + 1]);
    for (std::size_t i = 0; i < point_count; ++i) acc(points[2 * i], points[2 * i + 1]);

    const double spanx = std::max(xmax - xmin, 1e-9);
    const double spany = std::max(ymax - ymin, 1e-9);
    const double span = std::max(spanx, spany);
    const double margin = opts.margin_frac * span;
    const double w = spanx + 2 * margin, h = spany + 2 * margin;
    const double scale = opts.width / w;
    const int width = opts.width;
    const int height = static_cast<int>(h * scale + 0.5);

    auto X = [&](double x) { return (x - xmin + margin) * scale; };
    auto Y = [&](double y) { return height - (y - ymin + margin) * scale; };  // y up

    char buf[256];
    std::string s;
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
                  "width=\"%d\" height=\"%d\" viewBox=\"0 0 %d %d\">\n",
                  width, height, width, height);
    s += buf;
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const double dot_r = std::max(1.0, 0.0025 * width);
    for (std::size_t i = 0; i < point_count; ++i) {
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.8g\" cy=\"%.8g\" r=\"%.3g\" fill=\"#4477aa\" "
                      "fill-opacity=\"0.45\"/>\n",
                      X(points[2 * i]), Y(points[2 * i + 1]), dot_r);
        s += buf;
    }

    if (curve) {
        s += "<polyline fill=\"none\" stroke=\"#cc3311\" stroke-width=\"2\" points=\"";
        const std::size_t n = curve->vertex_count();
        for (std::size_t i = 0; i < n; ++i) {
            std::snprintf(buf, sizeof buf, "%.8g,%.8g ", X(curve->vertices[i * 2]),
                          Y(curve->vertices[i * 2 + 1]));
            s += buf;
        }
        if (curve->topology == Topology::closed) {
            std::snprintf(buf, sizeof buf, "%.8g,%.8g", X(curve->vertices[0]),
                          Y(curve->vertices[1]));
            s += buf;  // closed path: first point repeated
        }
        s += "\"/>\n";

        for (const auto& atom : atoms) {
            if (atom.mass <= 0.0) continue;
            const std::size_t i = atom.knot_index;
            if (i >= n) continue;
            std::snprintf(buf, sizeof buf,
                          "<circle cx=\"%.8g\" cy=\"%.8g\" r=\"%.3g\" fill=\"#ee7733\" "
                          "stroke=\"#000\" stroke-width=\"0.5\"/>\n",
                          X(curve->vertices[i * 2]), Y(curve->vertices[i * 2 + 1]),
                          2.5 * dot_r);
            s += buf;
        }
    }
    s += "</svg>\n";
    write_text(path, s);
}

}  // namespace princurve
