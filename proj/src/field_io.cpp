#include "sqg/field_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "sqg/errors.hpp"

namespace sqg {
namespace {

constexpr Rgb kCold{59, 76, 192};
constexpr Rgb kMid{242, 242, 242};
constexpr Rgb kWarm{180, 4, 38};

void append_real(std::string& out, double v) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    out.append(buf, static_cast<std::size_t>(len));
}

std::vector<double> parse_row(const std::string& line, const std::string& where) {
    std::vector<double> values;
    const char* p = line.data();
    const char* end = p + line.size();
    while (true) {
        while (p < end && *p == ' ') ++p;
        double v = 0.0;
        const auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc() || !std::isfinite(v)) {
            throw FormatError(where + ": malformed value near '" + std::string(p, std::min(end, p + 24)) + "'");
        }
        values.push_back(v);
        p = next;
        while (p < end && (*p == ' ' || *p == '\r')) ++p;
        if (p == end) break;
        if (*p != ',') throw FormatError(where + ": expected ',' after value " + std::to_string(values.size()));
        ++p;
    }
    return values;
}

}  // namespace

void write_field_csv(const PhysicalField& f, const std::filesystem::path& path, double t) {
    const GridSpec& g = f.grid();
    std::string out = "# " + std::to_string(g.nx()) + "," + std::to_string(g.ny()) + ",";
    append_real(out, t);
    out += '\n';
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            if (i) out += ',';
            append_real(out, f(i, j));
        }
        out += '\n';
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path.string() + " for writing");
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file) throw IoError("write to " + path.string() + " failed");
}

FieldRecord read_field_record(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path.string());
    const std::string name = path.string();

    std::string line;
    if (!std::getline(file, line)) throw FormatError(name + ": empty file, expected header '# nx,ny,t'");
    if (line.rfind("# ", 0) != 0) throw FormatError(name + ": header must start with '# '");
    const auto header = parse_row(line.substr(2), name + " header");
    if (header.size() != 3 || header[0] != std::floor(header[0]) || header[1] != std::floor(header[1])) {
        throw FormatError(name + ": header must be '# nx,ny,t' with integer nx, ny");
    }
    GridSpec grid(4);
    try {
        grid = GridSpec(static_cast<int>(header[0]), static_cast<int>(header[1]));
    } catch (const DomainError& e) {
        throw FormatError(name + ": " + e.what());
    }

    std::vector<double> values;
    values.reserve(grid.size());
    for (int row = 1; row <= grid.ny(); ++row) {
        const std::string where = name + " row " + std::to_string(row);
        if (!std::getline(file, line) || line.empty()) {
            throw FormatError(where + ": missing (expected " + std::to_string(grid.ny()) + " rows)");
        }
        const auto v = parse_row(line, where);
        if (static_cast<int>(v.size()) != grid.nx()) {
            throw FormatError(where + ": " + std::to_string(v.size()) + " values, expected " +
                              std::to_string(grid.nx()));
        }
        values.insert(values.end(), v.begin(), v.end());
    }
    while (std::getline(file, line)) {
        if (line.find_first_not_of(" \r") != std::string::npos) {
            throw FormatError(name + ": unexpected data after row " + std::to_string(grid.ny()));
        }
    }
    return {PhysicalField(grid, std::move(values)), header[2]};
}

PhysicalField read_field_csv(const std::filesystem::path& path) { return read_field_record(path).field; }

Rgb diverging_color(double s) {
    s = std::clamp(s, -1.0, 1.0);
    const Rgb& end = s < 0.0 ? kCold : kWarm;
    const double w = std::abs(s);
    Rgb out{};
    for (int c = 0; c < 3; ++c) {
        out[c] = static_cast<std::uint8_t>(std::lround((1.0 - w) * kMid[c] + w * end[c]));
    }
    return out;
}

std::vector<Rgb> band_colors(int levels) {
    if (levels < 2) throw DomainError("levels must be >= 2");
    std::vector<Rgb> colors(levels);
    for (int b = 0; b < levels; ++b) {
        colors[b] = diverging_color(static_cast<double>(2 * b + 1 - levels) / levels);
    }
    return colors;
}

std::vector<std::uint8_t> contour_pixels(const PhysicalField& f, int levels) {
    const std::vector<Rgb> colors = band_colors(levels);
    const GridSpec& g = f.grid();
    const double scale = linf_norm(f);
    std::vector<std::uint8_t> pixels;
    pixels.reserve(3 * g.size());
    for (int j = g.ny() - 1; j >= 0; --j) {
        for (int i = 0; i < g.nx(); ++i) {
            Rgb c = diverging_color(0.0);
            if (scale > 0.0) {
                const double s = f(i, j) / scale;
                const int band = static_cast<int>(std::floor(0.5 * (s + 1.0) * levels));
                c = colors[std::clamp(band, 0, levels - 1)];
            }
            pixels.insert(pixels.end(), c.begin(), c.end());
        }
    }
    return pixels;
}

void render_contour(const PhysicalField& f, const std::filesystem::path& path, int levels) {
    const std::vector<std::uint8_t> pixels = contour_pixels(f, levels);
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path.string() + " for writing");
    const std::string header =
        "P6\n" + std::to_string(f.grid().nx()) + " " + std::to_string(f.grid().ny()) + "\n255\n";
    file.write(header.data(), static_cast<std::streamsize>(header.size()));
    file.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
    if (!file) throw IoError("write to " + path.string() + " failed");
}

}  // namespace sqg
