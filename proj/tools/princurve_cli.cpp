// Command-line driver: fit, diagnose, scan, solve1d, plot.
//
// Exit codes: 0 success, 2 invalid flags, 3 input parse failure,
// 4 numerical failure. Theory-check failures in `diagnose` are data, not
// errors, and do not change the exit code.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "princurve/criterion.hpp"
#include "princurve/diagnostics.hpp"
#include "princurve/distributions.hpp"
#include "princurve/io.hpp"
#include "princurve/oned.hpp"
#include "princurve/optimizer.hpp"
#include "princurve/rng.hpp"

namespace {

using namespace princurve;

struct SourceFlags {
    std::string input;  // CSV path
    std::string dist;   // square | gauss | circle | uniform1d | mixture
    int dim = 2;
    double radius = 1.0;
    double a = 0.0, b = 1.0;
    double p = 0.5;
    std::uint64_t seed = 1;

    void attach(CLI::App* cmd) {
        cmd->add_option("--input", input, "CSV point cloud (d numeric columns, optional header)");
        cmd->add_option("--dist", dist,
                        "built-in law: square | gauss | circle | uniform1d | mixture");
        cmd->add_option("--dim", dim, "dimension for --dist gauss");
        cmd->add_option("--radius", radius, "radius for --dist circle");
        cmd->add_option("--a", a, "left endpoint for --dist uniform1d");
        cmd->add_option("--b", b, "right endpoint for --dist uniform1d");
        cmd->add_option("--p", p, "atom weight for --dist mixture");
        cmd->add_option("--seed", seed, "RNG seed");
    }

    PointSource make() const {
        if (!input.empty() && !dist.empty())
            throw CLI::ValidationError("--input and --dist are mutually exclusive");
        if (!input.empty()) return load_csv(input, seed);
        if (dist == "square") return PointSource::uniform_square(seed);
        if (dist == "gauss") return PointSource::gaussian_std(dim, seed);
        if (dist == "circle") return PointSource::uniform_circle(radius, seed);
        if (dist == "uniform1d") return PointSource::uniform_1d(a, b, seed);
        if (dist == "mixture") return PointSource::atom_circle_mixture(p, seed);
        throw CLI::ValidationError("need --input CSV or --dist name");
    }

    nlohmann::json describe(const PointSource& src) const {
        nlohmann::json j;
        j["source"] = src.describe();
        j["seed"] = seed;
        if (!input.empty()) j["input"] = input;
        return j;
    }
};

struct ManifestScope {
    RunManifest manifest;
    std::string path;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    ManifestScope(int argc, char** argv, const std::string& out_prefix) {
        for (int i = 0; i < argc; ++i) {
            if (i) manifest.command_line += ' ';
            manifest.command_line += argv[i];
        }
        manifest.rng = kRngAlgorithm;
        path = out_prefix + ".manifest.json";
        manifest.outputs.push_back(path);
    }
    void add_output(const std::string& p) { manifest.outputs.push_back(p); }
    void add_input(const std::string& p) {
        if (!p.empty()) manifest.input_digests[p] = file_digest(p);
    }
    void finish() {
        manifest.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        write_manifest(manifest, path);
    }
};

nlohmann::json fit_config_json(const FitConfig& cfg) {
    nlohmann::json j;
    j["n_vertices"] = cfg.n_vertices;
    j["length"] = cfg.length;
    j["topology"] = cfg.topology == Topology::closed ? "closed" : "open";
    j["max_iters"] = cfg.max_iters;
    j["batch_size"] = cfg.batch_size;
    j["sample_count"] = cfg.sample_count;
    j["step_initial"] = cfg.resolved_step();
    j["tolerance"] = cfg.tolerance;
    j["window"] = cfg.window;
    j["recenter_mean"] = cfg.recenter_mean;
    j["smoothing"] = cfg.smoothing;
    j["epsilon0"] = cfg.resolved_epsilon();
    j["zeta0"] = cfg.resolved_zeta();
    j["eta0"] = cfg.resolved_eta();
    j["polish_iters"] = cfg.resolved_polish();
    j["restarts"] = cfg.restarts;
    j["seed"] = cfg.seed;
    return j;
}

void attach_fit_flags(CLI::App* cmd, FitConfig& cfg) {
    cmd->add_option("--vertices", cfg.n_vertices, "number of curve vertices");
    cmd->add_option("--iters", cfg.max_iters, "max outer iterations");
    cmd->add_option("--batch", cfg.batch_size, "minibatch size");
    cmd->add_option("--samples", cfg.sample_count, "training draws for sampler sources");
    cmd->add_option("--step", cfg.step_initial, "initial step size (default 0.5*L/n)");
    cmd->add_option("--tol", cfg.tolerance, "relative improvement stop threshold");
    cmd->add_option("--window", cfg.window, "iterations per convergence check");
    cmd->add_option("--restarts", cfg.restarts, "independent restarts, best kept");
    cmd->add_option("--polish", cfg.polish_iters, "polish iterations (exact assignments)");
    cmd->add_flag("--no-recenter", [&cfg](std::int64_t) { cfg.recenter_mean = false; },
                  "disable mean recentring");
    cmd->add_flag("--no-smoothing", [&cfg](std::int64_t) { cfg.smoothing = false; },
                  "disable jitter/anchor smoothing");
}

int cmd_fit(int argc, char** argv, const SourceFlags& sf, const FitConfig& cfg_in,
            const std::string& out) {
    FitConfig cfg = cfg_in;
    cfg.seed = sf.seed;
    const PointSource source = sf.make();

    ManifestScope scope(argc, argv, out);
    scope.add_input(sf.input);
    scope.manifest.seed = cfg.seed;
    scope.manifest.resolved_config = fit_config_json(cfg);
    scope.manifest.resolved_config["source"] = sf.describe(source);

    const FitResult result = fit(source, cfg);

    const std::string curve_path = out + ".curve.json";
    save_curve(result.curve, curve_path);
    scope.add_output(curve_path);

    const std::string hist_path = out + ".history.csv";
    write_history_csv(hist_path, result.history);
    scope.add_output(hist_path);

    nlohmann::json summary;
    summary["delta_hat"] = result.delta_hat.value;
    summary["delta_hat_stderr"] = result.delta_hat.std_error;
    summary["iterations"] = result.iterations;
    summary["constraint_residual"] = result.constraint_residual;
    summary["length"] = curve_length(result.curve);
    summary["curve"] = curve_path;
    const std::string summary_path = out + ".fit.json";
    {
        std::FILE* f = std::fopen(summary_path.c_str(), "wb");
        if (!f) throw ParseError("cannot write " + summary_path);
        const std::string text = summary.dump(2) + "\n";
        std::fwrite(text.data(), 1, text.size(), f);
        std::fclose(f);
    }
    scope.add_output(summary_path);

    if (source.dim() == 2) {
        const std::string svg_path = out + ".svg";
        std::vector<double> pts;
        std::size_t count;
        if (source.is_empirical()) {
            pts = source.points();
            count = source.point_count();
        } else {
            count = std::min<std::size_t>(cfg.sample_count, 4000);
            pts = source.sample(count, substream_key(cfg.seed, 0x504C4F54ULL));
        }
        write_svg(svg_path, &result.curve, pts, count, {});
        scope.add_output(svg_path);
    }

    scope.finish();
    std::printf("fit: delta_hat=%.6g (se %.2g), iterations=%d, constraint_residual=%.2g\n",
                result.delta_hat.value, result.delta_hat.std_error, result.iterations,
                result.constraint_residual);
    std::printf("fit: wrote %s\n", curve_path.c_str());
    return 0;
}

int cmd_diagnose(int argc, char** argv, const SourceFlags& sf, const std::string& curve_path,
                 std::size_t samples, double length_budget, const std::string& out) {
    const PolygonalCurve curve = load_curve(curve_path);
    const PointSource source = sf.make();
    if (source.dim() != curve.d)
        throw ParseError("dimension mismatch: curve d=" + std::to_string(curve.d) +
                         ", source d=" + std::to_string(source.dim()));

    ManifestScope scope(argc, argv, out);
    scope.add_input(sf.input);
    scope.add_input(curve_path);
    scope.manifest.seed = sf.seed;

    std::vector<double> pts;
    std::size_t count;
    if (source.is_empirical()) {
        pts = source.points();
        count = source.point_count();
    } else {
        pts = source.sample(samples, substream_key(sf.seed, 0x44494147ULL));
        count = samples;
    }

    DiagnosticsConfig dcfg;
    dcfg.length_budget = length_budget;
    scope.manifest.resolved_config = {{"samples", count},
                                      {"length_budget", length_budget},
                                      {"curve", curve_path},
                                      {"source", sf.describe(source)}};

    const DiagnosticsReport report = full_report(curve, pts, count, dcfg);
    const std::string report_path = out + ".report.json";
    {
        std::FILE* f = std::fopen(report_path.c_str(), "wb");
        if (!f) throw ParseError("cannot write " + report_path);
        const std::string text = report_to_json(report).dump(2) + "\n";
        std::fwrite(text.data(), 1, text.size(), f);
        std::fclose(f);
    }
    scope.add_output(report_path);
    scope.finish();

    for (const auto& c : report.checks) {
        std::printf("check %-28s %s value=%.6g threshold=%.6g%s\n", c.name.c_str(),
                    c.skipped ? "SKIP" : (c.pass ? "PASS" : "FAIL"), c.value, c.threshold,
                    c.note.empty() ? "" : (" (" + c.note + ")").c_str());
    }
    std::printf("diagnose: wrote %s\n", report_path.c_str());
    return 0;
}

int cmd_scan(int argc, char** argv, const SourceFlags& sf, const FitConfig& cfg_in,
             const std::string& lengths_arg, const std::string& out) {
    std::vector<double> lengths;
    {
        std::string cur;
        for (char c : lengths_arg + ",") {
            if (c == ',') {
                if (!cur.empty()) {
                    try {
                        lengths.push_back(std::stod(cur));
                    } catch (...) {
                        throw CLI::ValidationError("--lengths: bad number '" + cur + "'");
                    }
                    cur.clear();
                }
            } else {
                cur.push_back(c);
            }
        }
    }
    if (lengths.empty()) throw CLI::ValidationError("--lengths: empty list");
    for (std::size_t i = 1; i < lengths.size(); ++i)
        if (lengths[i] <= lengths[i - 1])
            throw CLI::ValidationError("--lengths must be sorted strictly ascending");

    FitConfig cfg = cfg_in;
    cfg.seed = sf.seed;
    const PointSource source = sf.make();

    ManifestScope scope(argc, argv, out);
    scope.add_input(sf.input);
    scope.manifest.seed = cfg.seed;
    scope.manifest.resolved_config = fit_config_json(cfg);
    scope.manifest.resolved_config["source"] = sf.describe(source);
    scope.manifest.resolved_config["lengths"] = lengths;

    const std::vector<GScanRow> rows = g_scan(source, lengths, cfg);
    const std::string csv_path = out + ".scan.csv";
    write_scan_csv(csv_path, rows);
    scope.add_output(csv_path);
    scope.finish();

    for (const auto& r : rows)
        std::printf("L=%.6g  G_hat=%.6g  se=%.2g\n", r.length, r.g_hat, r.std_error);
    if (rows.size() > 1) {
        bool monotone = true;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const double se = std::sqrt(rows[i].std_error * rows[i].std_error +
                                        rows[i - 1].std_error * rows[i - 1].std_error);
            if (rows[i].g_hat > rows[i - 1].g_hat + 2.0 * se) monotone = false;
        }
        std::printf("monotone_nonincreasing_within_2se: %s\n", monotone ? "yes" : "no");
    }
    std::printf("scan: wrote %s\n", csv_path.c_str());
    return 0;
}

int cmd_solve1d(int argc, char** argv, const SourceFlags& sf, double length, double tol,
                const std::string& out) {
    const PointSource source = sf.make();
    if (source.dim() != 1) throw ParseError("solve1d requires a 1-D source");

    ManifestScope scope(argc, argv, out);
    scope.add_input(sf.input);
    scope.manifest.seed = sf.seed;
    scope.manifest.resolved_config = {{"length", length},
                                      {"tol", tol},
                                      {"source", sf.describe(source)}};

    const OneDSolution sol = solve_1d(source, length, tol);
    char line[256];
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", sol.a, sol.a + sol.length,
                  sol.delta, sol.lambda);

    const std::string csv_path = out + ".solve1d.csv";
    {
        std::FILE* f = std::fopen(csv_path.c_str(), "wb");
        if (!f) throw ParseError("cannot write " + csv_path);
        std::fputs("a,a_plus_L,G,lambda\n", f);
        std::fputs(line, f);
        std::fclose(f);
    }
    scope.add_output(csv_path);
    scope.finish();

    std::fputs("a,a_plus_L,G,lambda\n", stdout);
    std::fputs(line, stdout);
    if (sol.degenerate) std::puts("degenerate: support fits inside a length-L interval");
    return 0;
}

int cmd_plot(int argc, char** argv, const std::string& curve_path,
             const std::string& points_path, const std::string& report_path,
             const std::string& out_svg) {
    const PolygonalCurve curve = load_curve(curve_path);
    if (curve.d != 2) throw ParseError("plot requires a 2-D curve");

    std::vector<double> pts;
    std::size_t count = 0;
    if (!points_path.empty()) {
        const PointSource src = load_csv(points_path, 0);
        if (src.dim() != 2) throw ParseError("plot requires 2-D points");
        pts = src.points();
        count = src.point_count();
    }

    std::vector<KnotAtomMass> atoms;
    if (!report_path.empty()) {
        std::ifstream in(report_path);
        if (!in) throw ParseError("cannot open report: " + report_path);
        nlohmann::json j;
        try {
            in >> j;
            for (const auto& k : j.at("knot_atom_masses")) {
                KnotAtomMass m;
                m.knot_index = k.at("knot").get<std::size_t>();
                m.t = k.at("t").get<double>();
                m.mass = k.at("mass").get<double>();
                atoms.push_back(m);
            }
            if (j.contains("endpoint_atom_masses")) {
                const auto& em = j.at("endpoint_atom_masses");
                const double p0 = em.value("p0", 0.0);
                const double p1 = em.value("p1", 0.0);
                if (p0 > 0.0) atoms.push_back({0, 0.0, p0, 0.0});
                if (p1 > 0.0) atoms.push_back({curve.vertex_count() - 1, 1.0, p1, 0.0});
            }
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("malformed report JSON: ") + e.what());
        }
    }

    const std::string prefix =
        out_svg.size() > 4 && out_svg.substr(out_svg.size() - 4) == ".svg"
            ? out_svg.substr(0, out_svg.size() - 4)
            : out_svg;
    ManifestScope scope(argc, argv, prefix);
    scope.add_input(curve_path);
    if (!points_path.empty()) scope.add_input(points_path);
    if (!report_path.empty()) scope.add_input(report_path);
    scope.manifest.resolved_config = {{"curve", curve_path}};

    write_svg(out_svg, &curve, pts, count, atoms);
    scope.add_output(out_svg);
    scope.finish();
    std::printf("plot: wrote %s\n", out_svg.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Length-constrained principal curves: fitting, diagnostics, scans"};
    app.require_subcommand(1);
    app.set_config("--config", "", "config file with key=value lines");

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit a length-constrained principal curve");
    SourceFlags fit_src;
    fit_src.attach(fit_cmd);
    FitConfig fit_cfg;
    double fit_length = 0.0;
    bool fit_closed = false;
    std::string fit_out = "princurve_fit";
    fit_cmd->add_option("--length", fit_length, "length budget L")->required();
    fit_cmd->add_flag("--closed", fit_closed, "fit a closed curve");
    fit_cmd->add_option("--out", fit_out, "output prefix");
    attach_fit_flags(fit_cmd, fit_cfg);

    // diagnose
    auto* diag_cmd = app.add_subcommand("diagnose", "verify optimality theory on a curve");
    SourceFlags diag_src;
    diag_src.attach(diag_cmd);
    std::string diag_curve;
    std::size_t diag_samples = 20000;
    double diag_length = -1.0;
    std::string diag_out = "princurve_diagnose";
    diag_cmd->add_option("--curve", diag_curve, "curve JSON file")->required();
    diag_cmd->add_option("--samples", diag_samples, "evaluation sample size");
    diag_cmd->add_option("--length", diag_length, "length budget (default: from curve)");
    diag_cmd->add_option("--out", diag_out, "output prefix");

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "estimate G(L) over a list of lengths");
    SourceFlags scan_src;
    scan_src.attach(scan_cmd);
    FitConfig scan_cfg;
    std::string scan_lengths;
    std::string scan_out = "princurve_scan";
    scan_cmd->add_option("--lengths", scan_lengths, "comma list, ascending")->required();
    scan_cmd->add_option("--out", scan_out, "output prefix");
    attach_fit_flags(scan_cmd, scan_cfg);
    bool scan_closed = false;
    scan_cmd->add_flag("--closed", scan_closed, "fit closed curves");

    // solve1d
    auto* one_cmd = app.add_subcommand("solve1d", "exact 1-D interval solution");
    SourceFlags one_src;
    one_src.attach(one_cmd);
    double one_length = 0.0;
    double one_tol = 1e-12;
    std::string one_out = "princurve_solve1d";
    one_cmd->add_option("--length", one_length, "interval length L")->required();
    one_cmd->add_option("--tol", one_tol, "bisection bracket tolerance");
    one_cmd->add_option("--out", one_out, "output prefix");

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "emit a standalone SVG");
    std::string plot_curve, plot_points, plot_report, plot_out = "princurve_plot.svg";
    plot_cmd->add_option("--curve", plot_curve, "curve JSON file")->required();
    plot_cmd->add_option("--points", plot_points, "optional CSV point cloud");
    plot_cmd->add_option("--report", plot_report, "optional diagnostics report JSON");
    plot_cmd->add_option("--out", plot_out, "output SVG path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (fit_cmd->parsed()) {
            fit_cfg.length = fit_length;
            fit_cfg.topology = fit_closed ? Topology::closed : Topology::open;
            return cmd_fit(argc, argv, fit_src, fit_cfg, fit_out);
        }
        if (diag_cmd->parsed())
            return cmd_diagnose(argc, argv, diag_src, diag_curve, diag_samples, diag_length,
                                diag_out);
        if (scan_cmd->parsed()) {
            scan_cfg.topology = scan_closed ? Topology::closed : Topology::open;
            return cmd_scan(argc, argv, scan_src, scan_cfg, scan_lengths, scan_out);
        }
        if (one_cmd->parsed()) return cmd_solve1d(argc, argv, one_src, one_length, one_tol, one_out);
        if (plot_cmd->parsed())
            return cmd_plot(argc, argv, plot_curve, plot_points, plot_report, plot_out);
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
    return 2;
}
