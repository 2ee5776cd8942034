#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "princurve/io.hpp"
#include "princurve/rng.hpp"

using namespace princurve;

TEST_CASE("curve JSON round trip") {
    SplitMix64 rng(71);
    PolygonalCurve curve;
    curve.d = 3;
    curve.topology = Topology::closed;
    for (int i = 0; i < 15; ++i) curve.vertices.push_back(1e3 * (rng.next_unit() - 0.5));

    const auto j = curve_to_json(curve);
    const auto back = curve_from_json(j);
    CHECK(back.topology == curve.topology);
    CHECK(back.d == curve.d);
    REQUIRE(back.vertices.size() == curve.vertices.size());
    for (std::size_t i = 0; i < curve.vertices.size(); ++i) {
        const double rel = std::abs(back.vertices[i] - curve.vertices[i]) /
                           std::max(1.0, std::abs(curve.vertices[i]));
        CHECK(rel <= 1e-15);
    }

    // file round trip through the serialized text
    const std::string path = "/tmp/princurve_test_curve.json";
    save_curve(curve, path);
    const auto loaded = load_curve(path);
    CHECK(loaded.vertices == curve.vertices);
}

TEST_CASE("curve JSON rejects malformed input") {
    CHECK_THROWS_AS(curve_from_json(nlohmann::json{{"topology", "weird"}}), ParseError);
    nlohmann::json j{{"topology", "open"}, {"d", 2},
                     {"vertices", nlohmann::json::array({{0.0, 0.0}, {1.0}})}};
    CHECK_THROWS_AS(curve_from_json(j), ParseError);
    nlohmann::json too_few{{"topology", "open"}, {"d", 2},
                           {"vertices", nlohmann::json::array({{0.0, 0.0}})}};
    CHECK_THROWS_AS(curve_from_json(too_few), ParseError);

    const std::string bad_path = "/tmp/princurve_test_bad.json";
    std::ofstream(bad_path) << "{not json";
    CHECK_THROWS_AS(load_curve(bad_path), ParseError);
}

TEST_CASE("scan and history CSV formatting") {
    const std::string path = "/tmp/princurve_test_scan.csv";
    std::vector<GScanRow> rows{{0.5, 0.0104, 1e-4, 16, 42}};
    write_scan_csv(path, rows);
    std::ifstream in(path);
    std::string header, line;
    std::getline(in, header);
    std::getline(in, line);
    CHECK(header == "L,G_hat,std_error,n_vertices,seed");
    CHECK(line.find("0.5,") == 0);
    CHECK(line.find(",16,42") != std::string::npos);
}

TEST_CASE("file digest is content-determined") {
    const std::string p1 = "/tmp/princurve_test_d1.bin";
    const std::string p2 = "/tmp/princurve_test_d2.bin";
    std::ofstream(p1, std::ios::binary) << "same-content";
    std::ofstream(p2, std::ios::binary) << "same-content";
    CHECK(file_digest(p1) == file_digest(p2));
    std::ofstream(p2, std::ios::binary) << "other";
    CHECK(file_digest(p1) != file_digest(p2));
    CHECK_THROWS_AS(file_digest("/nonexistent-file"), ParseError);
}

TEST_CASE("SVG output: polyline, dots, closure") {
    PolygonalCurve curve;
    curve.d = 2;
    curve.topology = Topology::closed;
    curve.vertices = {0, 0, 1, 0, 1, 1, 0, 1};

    const std::string path = "/tmp/princurve_test_plot.svg";
    std::vector<double> pts{0.5, 0.5, 0.25, 0.25};
    write_svg(path, &curve, pts, 2, {});
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string svg = ss.str();
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    // two dots
    std::size_t dots = 0, pos = 0;
    while ((pos = svg.find("<circle", pos)) != std::string::npos) {
        ++dots;
        pos += 7;
    }
    CHECK(dots == 2);
    // closed: the polyline repeats the first point; 5 coordinate pairs
    const std::size_t points_attr = svg.find("points=\"");
    REQUIRE(points_attr != std::string::npos);
    const std::size_t end = svg.find('"', points_attr + 8);
    const std::string coords = svg.substr(points_attr + 8, end - points_attr - 8);
    std::size_t commas = 0;
    for (char c : coords)
        if (c == ',') ++commas;
    CHECK(commas == 5);
}
