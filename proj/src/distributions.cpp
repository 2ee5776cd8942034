#include "princurve/distributions.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "princurve/rng.hpp"

namespace princurve {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

PointSource PointSource::uniform_square(std::uint64_t seed) {
    PointSource s;
    s.kind_ = SourceKind::uniform_square;
    s.d_ = 2;
    s.seed_ = seed;
    return s;
}

PointSource PointSource::gaussian_std(int d, std::uint64_t seed) {
    if (d < 1) throw std::invalid_argument("gaussian_std requires d >= 1");
    PointSource s;
    s.kind_ = SourceKind::gaussian_std;
    s.d_ = d;
    s.seed_ = seed;
    return s;
}

PointSource PointSource::uniform_circle(double radius, std::uint64_t seed) {
    if (!(radius > 0.0)) throw std::invalid_argument("uniform_circle requires radius > 0");
    PointSource s;
    s.kind_ = SourceKind::uniform_circle;
    s.d_ = 2;
    s.seed_ = seed;
    s.radius_ = radius;
    return s;
}

PointSource PointSource::uniform_1d(double a, double b, std::uint64_t seed) {
    if (!(b > a)) throw std::invalid_argument("uniform_1d requires b > a");
    PointSource s;
    s.kind_ = SourceKind::uniform_1d;
    s.d_ = 1;
    s.seed_ = seed;
    s.a_ = a;
    s.b_ = b;
    return s;
}

PointSource PointSource::atom_circle_mixture(double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("mixture weight must be in [0,1]");
    PointSource s;
    s.kind_ = SourceKind::atom_circle_mixture;
    s.d_ = 2;
    s.seed_ = seed;
    s.atom_p_ = p;
    return s;
}

PointSource PointSource::empirical(std::vector<double> points, int d, std::uint64_t seed) {
    if (d < 1) throw std::invalid_argument("empirical source requires d >= 1");
    if (points.empty() || points.size() % d != 0)
        throw std::invalid_argument("empirical source requires at least one d-dimensional point");
    for (double v : points)
        if (!std::isfinite(v)) throw std::invalid_argument("empirical source has non-finite point");
    PointSource s;
    s.kind_ = SourceKind::empirical;
    s.d_ = d;
    s.seed_ = seed;
    s.points_ = std::move(points);
    return s;
}

std::vector<double> PointSource::sample(std::size_t count, std::uint64_t stream) const {
    if (count < 1) throw std::invalid_argument("sample requires count >= 1");
    SplitMix64 rng(substream_key(seed_, stream));
    std::vector<double> out(count * d_);

    switch (kind_) {
        case SourceKind::uniform_square:
            for (std::size_t i = 0; i < count; ++i) {
                out[2 * i] = rng.next_unit();
                out[2 * i + 1] = rng.next_unit();
            }
            break;
        case SourceKind::gaussian_std:
            for (std::size_t i = 0; i < count; ++i) {
                double* p = out.data() + i * d_;
                int j = 0;
                for (; j + 1 < d_; j += 2) rng.next_gaussian_pair(p[j], p[j + 1]);
                if (j < d_) p[j] = rng.next_gaussian();
            }
            break;
        case SourceKind::uniform_circle:
            for (std::size_t i = 0; i < count; ++i) {
                const double a = kTwoPi * rng.next_unit();
                out[2 * i] = radius_ * std::cos(a);
                out[2 * i + 1] = radius_ * std::sin(a);
            }
            break;
        case SourceKind::uniform_1d:
            for (std::size_t i = 0; i < count; ++i)
                out[i] = a_ + (b_ - a_) * rng.next_unit();
            break;
        case SourceKind::atom_circle_mixture:
            // Two uniforms per draw regardless of the branch taken, so the
            // stream layout does not depend on sampled values.
            for (std::size_t i = 0; i < count; ++i) {
                const double u = rng.next_unit();
                const double a = kTwoPi * rng.next_unit();
                if (u < atom_p_) {
                    out[2 * i] = 0.0;
                    out[2 * i + 1] = 0.0;
                } else {
                    out[2 * i] = std::cos(a);
                    out[2 * i + 1] = std::sin(a);
                }
            }
            break;
        case SourceKind::empirical: {
            const std::size_t n = point_count();
            for (std::size_t i = 0; i < count; ++i) {
                std::size_t idx = static_cast<std::size_t>(rng.next_unit() * static_cast<double>(n));
                if (idx >= n) idx = n - 1;
                for (int j = 0; j < d_; ++j) out[i * d_ + j] = points_[idx * d_ + j];
            }
            break;
        }
    }
    return out;
}

namespace {
Moments moments_of(std::span<const double> pts, std::size_t count, int d) {
    Moments m;
    m.count = count;
    m.mean.assign(d, 0.0);
    std::vector<double> col(count);
    for (int j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < count; ++i) col[i] = pts[i * d + j];
        m.mean[j] = pairwise_sum(col) / static_cast<double>(count);
    }
    for (std::size_t i = 0; i < count; ++i) {
        double sq = 0.0;
        for (int j = 0; j < d; ++j) sq += pts[i * d + j] * pts[i * d + j];
        col[i] = sq;
    }
    m.second_moment = pairwise_sum(col) / static_cast<double>(count);
    return m;
}
}  // namespace

Moments PointSource::moments(std::size_t count) const {
    if (count < 1) throw std::invalid_argument("moments requires count >= 1");
    if (is_empirical()) return moments_of(points_, point_count(), d_);
    const std::vector<double> pts = sample(count, 0);
    return moments_of(pts, count, d_);
}

std::string PointSource::describe() const {
    char buf[96];
    switch (kind_) {
        case SourceKind::uniform_square: return "uniform_square";
        case SourceKind::gaussian_std:
            std::snprintf(buf, sizeof buf, "gaussian_std(d=%d)", d_);
            return buf;
        case SourceKind::uniform_circle:
            std::snprintf(buf, sizeof buf, "uniform_circle(radius=%g)", radius_);
            return buf;
        case SourceKind::uniform_1d:
            std::snprintf(buf, sizeof buf, "uniform_1d(%g,%g)", a_, b_);
            return buf;
        case SourceKind::atom_circle_mixture:
            std::snprintf(buf, sizeof buf, "atom_circle_mixture(p=%g)", atom_p_);
            return buf;
        case SourceKind::empirical:
            std::snprintf(buf, sizeof buf, "empirical(%zu points, d=%d)", point_count(), d_);
            return buf;
    }
    return "?";
}

namespace {

bool parse_cell(const std::string& cell, double& out) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    return *end == '\0';
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

}  // namespace

PointSource load_csv(const std::string& path, std::uint64_t seed) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);

    std::vector<double> data;
    int d = 0;
    bool first_row = true;
    std::size_t row = 0;
    std::size_t data_rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_row(line);

        if (first_row) {
            first_row = false;
            // Header iff any cell of the first row is non-numeric.
            bool numeric = true;
            std::vector<double> vals(cells.size());
            for (std::size_t j = 0; j < cells.size(); ++j)
                if (!parse_cell(cells[j], vals[j])) { numeric = false; break; }
            if (!numeric) continue;  // skip header; dimension comes from the first data row
            d = static_cast<int>(cells.size());
            data.insert(data.end(), vals.begin(), vals.end());
            ++data_rows;
            continue;
        }

        if (d > 0 && static_cast<int>(cells.size()) != d)
            throw ParseError("ragged row at row " + std::to_string(row) + " in " + path);
        std::vector<double> vals(cells.size());
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (!parse_cell(cells[j], vals[j]))
                throw ParseError("non-numeric cell at row " + std::to_string(row) + " in " + path);
        }
        if (d == 0) d = static_cast<int>(cells.size());
        data.insert(data.end(), vals.begin(), vals.end());
        ++data_rows;
    }
    if (data_rows == 0) throw ParseError("empty file: " + path);
    return PointSource::empirical(std::move(data), d, seed);
}

}  // namespace princurve
