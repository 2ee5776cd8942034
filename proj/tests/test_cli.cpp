// End-to-end CLI tests; the binary path arrives via PRINCURVE_CLI.

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

std::string cli() {
    const char* env = std::getenv("PRINCURVE_CLI");
    REQUIRE_MESSAGE(env != nullptr, "PRINCURVE_CLI must point at the binary");
    return env;
}

int run(const std::string& args) {
    const std::string cmd = cli() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), ("missing file: " + path).c_str());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json slurp_json(const std::string& path) { return nlohmann::json::parse(slurp(path)); }

struct TempDir {
    std::string path;
    TempDir() {
        char tmpl[] = "/tmp/princurve_cli_XXXXXX";
        path = mkdtemp(tmpl);
    }
};

}  // namespace

TEST_CASE("fit writes curve, history, svg, manifest; missing --length exits 2") {
    TempDir dir;
    const std::string out = dir.path + "/fit";
    const int code = run("fit --dist circle --length 3.14159265 --closed --vertices 24"
                         " --samples 2000 --iters 200 --seed 3 --out " + out);
    CHECK(code == 0);
    const auto curve = slurp_json(out + ".curve.json");
    CHECK(curve.at("vertices").size() == 24);
    CHECK(curve.at("topology") == "closed");
    CHECK(slurp(out + ".history.csv").rfind("iter,delta_hat", 0) == 0);
    CHECK(slurp(out + ".svg").find("<polyline") != std::string::npos);

    const auto manifest = slurp_json(out + ".manifest.json");
    CHECK(manifest.at("rng") == "splitmix64");
    CHECK(manifest.at("resolved_config").contains("epsilon0"));
    // the manifest references exactly the files on disk: no stray writes
    std::set<std::string> listed;
    for (const auto& o : manifest.at("outputs")) listed.insert(o.get<std::string>());
    std::set<std::string> on_disk;
    for (const auto& entry : std::filesystem::directory_iterator(dir.path))
        on_disk.insert(entry.path().string());
    CHECK(listed == on_disk);

    CHECK(run("fit --dist circle --closed") == 2);
}

TEST_CASE("byte-identical reruns with the same seed") {
    TempDir dir;
    const std::string a = dir.path + "/a", b = dir.path + "/b";
    const std::string args = "fit --dist square --length 2.0 --vertices 12 --samples 1500"
                             " --iters 150 --seed 99 --out ";
    REQUIRE(run(args + a) == 0);
    REQUIRE(run(args + b) == 0);
    CHECK(slurp(a + ".curve.json") == slurp(b + ".curve.json"));
    CHECK(slurp(a + ".history.csv") == slurp(b + ".history.csv"));
    CHECK(slurp(a + ".svg") == slurp(b + ".svg"));
    // manifests agree except for wall time and the output prefix
    auto ma = slurp_json(a + ".manifest.json");
    auto mb = slurp_json(b + ".manifest.json");
    CHECK(ma.at("resolved_config") == mb.at("resolved_config"));
    CHECK(ma.at("seed") == mb.at("seed"));
}

TEST_CASE("results do not depend on the thread cap") {
    TempDir dir;
    // enough points that batch projection spans several chunks
    const std::string args = "fit --dist circle --length 3.14159265 --closed --vertices 16"
                             " --samples 20000 --iters 100 --seed 31 --out ";
    const std::string one = cli() + " " + args + dir.path + "/t1 >/dev/null 2>&1";
    const std::string four = cli() + " " + args + dir.path + "/t4 >/dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(("PRINCURVE_THREADS=1 " + one).c_str())) == 0);
    REQUIRE(WEXITSTATUS(std::system(("PRINCURVE_THREADS=4 " + four).c_str())) == 0);
    CHECK(slurp(dir.path + "/t1.curve.json") == slurp(dir.path + "/t4.curve.json"));
    CHECK(slurp(dir.path + "/t1.history.csv") == slurp(dir.path + "/t4.history.csv"));
}

TEST_CASE("diagnose on a fit; mismatched dimensions exit 3") {
    TempDir dir;
    const std::string fit_out = dir.path + "/fit";
    REQUIRE(run("fit --dist circle --length 3.14159265 --closed --vertices 24 --samples 2000"
                " --iters 200 --seed 5 --out " + fit_out) == 0);

    const std::string diag_out = dir.path + "/diag";
    CHECK(run("diagnose --curve " + fit_out + ".curve.json --dist circle --samples 2000"
              " --length 3.14159265 --seed 5 --out " + diag_out) == 0);
    const auto report = slurp_json(diag_out + ".report.json");
    CHECK(report.contains("checks"));
    CHECK(report.at("lambda_hat").get<double>() > 0.0);

    // wrong-dimension source
    CHECK(run("diagnose --curve " + fit_out + ".curve.json --dist uniform1d --samples 100"
              " --out " + dir.path + "/bad") == 3);
    // malformed curve JSON
    const std::string broken = dir.path + "/broken.json";
    std::ofstream(broken) << "{broken";
    CHECK(run("diagnose --curve " + broken + " --dist circle --out " + dir.path + "/bad2") == 3);
}

TEST_CASE("diagnose exit code stays 0 when theory checks fail") {
    TempDir dir;
    // a deliberately bad curve for circle data: tiny off-center segment
    const std::string curve = dir.path + "/seg.json";
    std::ofstream(curve)
        << R"({"topology":"open","d":2,"vertices":[[0.7,0.1],[0.9,0.1],[1.1,0.1]]})";
    const int code = run("diagnose --curve " + curve + " --dist circle --samples 2000 --seed 2"
                         " --out " + dir.path + "/diag");
    CHECK(code == 0);
    const auto report = slurp_json(dir.path + "/diag.report.json");
    bool any_fail = false;
    for (const auto& c : report.at("checks"))
        if (!c.value("skipped", false) && !c.at("pass").get<bool>()) any_fail = true;
    CHECK(any_fail);
}

TEST_CASE("scan: csv output, verdict, unsorted rejection, single row") {
    TempDir dir;
    const std::string out = dir.path + "/scan";
    CHECK(run("scan --dist uniform1d --a 0 --b 1 --lengths 0,0.5 --vertices 10 --samples 1200"
              " --iters 150 --seed 4 --out " + out) == 0);
    const std::string csv = slurp(out + ".scan.csv");
    CHECK(csv.rfind("L,G_hat,std_error,n_vertices,seed", 0) == 0);
    CHECK(csv.find("\n0,") != std::string::npos);

    CHECK(run("scan --dist uniform1d --lengths 0.5,0.25 --out " + dir.path + "/u") == 2);

    // single length: one row, no monotonicity verdict
    const std::string single_cmd = cli() +
        " scan --dist uniform1d --lengths 0.5 --samples 1200 --iters 150 --vertices 10 --out " +
        dir.path + "/single > " + dir.path + "/single.txt 2>&1";
    REQUIRE(WEXITSTATUS(std::system(single_cmd.c_str())) == 0);
    CHECK(slurp(dir.path + "/single.txt").find("monotone") == std::string::npos);
}

TEST_CASE("flags can come from a config file") {
    TempDir dir;
    const std::string ini = dir.path + "/run.ini";
    std::ofstream(ini) << "[fit]\ndist=square\nlength=1.5\nvertices=10\nsamples=800\n"
                          "iters=100\nseed=5\nout=" << dir.path << "/cfged\n";
    CHECK(run("--config " + ini + " fit") == 0);
    const auto curve = slurp_json(dir.path + "/cfged.curve.json");
    CHECK(curve.at("vertices").size() == 10);
}

TEST_CASE("solve1d prints the CSV row") {
    TempDir dir;
    const std::string out = dir.path + "/one";
    const std::string cmd = cli() + " solve1d --dist uniform1d --a 0 --b 1 --length 0.5 --out " +
                            out + " > " + dir.path + "/stdout.txt 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    const std::string text = slurp(dir.path + "/stdout.txt");
    CHECK(text.find("a,a_plus_L,G,lambda") != std::string::npos);
    const std::string csv = slurp(out + ".solve1d.csv");
    const std::size_t nl = csv.find('\n');
    double a = 0, a_plus = 0, g = 0, lambda = 0;
    REQUIRE(std::sscanf(csv.c_str() + nl + 1, "%lf,%lf,%lf,%lf", &a, &a_plus, &g, &lambda) == 4);
    CHECK(a == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(a_plus == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(g == doctest::Approx(1.0 / 96.0).epsilon(1e-7));
    CHECK(lambda == doctest::Approx(0.0625).epsilon(1e-7));
}

TEST_CASE("plot: curve only, with points, closed path") {
    TempDir dir;
    const std::string curve = dir.path + "/curve.json";
    std::ofstream(curve)
        << R"({"topology":"closed","d":2,"vertices":[[0,0],[1,0],[1,1],[0,1]]})";
    const std::string pts = dir.path + "/pts.csv";
    {
        std::ofstream f(pts);
        for (int i = 0; i < 1000; ++i) f << 0.001 * i << "," << 0.5 << "\n";
    }
    const std::string svg = dir.path + "/out.svg";
    CHECK(run("plot --curve " + curve + " --out " + svg) == 0);
    std::string text = slurp(svg);
    CHECK(text.find("<polyline") != std::string::npos);

    CHECK(run("plot --curve " + curve + " --points " + pts + " --out " + svg) == 0);
    text = slurp(svg);
    std::size_t dots = 0, pos = 0;
    while ((pos = text.find("<circle", pos)) != std::string::npos) {
        ++dots;
        pos += 7;
    }
    CHECK(dots == 1000);

    CHECK(run("plot --curve " + dir.path + "/missing.json --out " + svg) == 3);
}
