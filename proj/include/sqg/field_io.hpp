#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "sqg/field.hpp"

namespace sqg {

/// CSV layout: a header line "# nx,ny,t" carrying the values, then ny rows
/// (j = 0 first) of nx values printed with 17 significant digits.
void write_field_csv(const PhysicalField& f, const std::filesystem::path& path, double t = 0.0);

struct FieldRecord {
    PhysicalField field;
    double t = 0.0;
};

/// Throws IoError when the file cannot be read and FormatError naming the
/// offending row otherwise.
FieldRecord read_field_record(const std::filesystem::path& path);
PhysicalField read_field_csv(const std::filesystem::path& path);

using Rgb = std::array<std::uint8_t, 3>;

/// Diverging blue-white-red map on s ∈ [−1, 1]; s = 0 is the mid color.
Rgb diverging_color(double s);

/// Band colors for `levels` equal bands over [−1, 1] (index 0 is the most
/// negative band). Band b and band levels−1−b are mirror colors.
std::vector<Rgb> band_colors(int levels);

/// RGB bytes of the contour image, row-major with the top row at the largest
/// y. Values are scaled by max|f| so f and c·f (c > 0) give the same image;
/// f ≡ 0 is uniformly the mid color. Throws DomainError for levels < 2.
std::vector<std::uint8_t> contour_pixels(const PhysicalField& f, int levels);

/// Binary PPM (P6) with one pixel per grid node.
void render_contour(const PhysicalField& f, const std::filesystem::path& path, int levels);

}  // namespace sqg
