#pragma once

#include "gaze3d/geometry.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace gaze3d {

// Per-axis linear mapping between object-space coordinates and 16-bit
// channel values. The divisor is 65535 (the largest representable channel
// value) so that the volume's upper bound encodes exactly.
struct ScaleSpec {
    std::array<double, 3> min {0.0, 0.0, 0.0};
    std::array<double, 3> range {0.0, 0.0, 0.0};

    double coeff(int axis) const { return range[axis] / 65535.0; } // k_r, k_g, k_b
    double diagonal() const;

    bool operator==(const ScaleSpec&) const = default;
};

constexpr std::uint16_t kChannelMax = 65535;

// Scale volume covering the box enlarged by margin * extent on every side.
// Zero-extent axes keep range 0.
ScaleSpec scale_from_bbox(const BoundingBox& box, double margin = 0.0);

using ChannelTriple = std::array<std::uint16_t, 3>;

// channel = round(65535 * (p_i - min_i) / range_i), half away from zero.
// Zero-range axes encode to 0. Throws "coordinate outside encoded volume"
// when p lies outside the covered volume (beyond round-off slack).
ChannelTriple encode_point(const Point3& p, const ScaleSpec& scale);

// p_i = channel * coeff_i + min_i. Zero-range axes decode to min_i.
Point3 decode_pixel(std::uint16_t r, std::uint16_t g, std::uint16_t b, const ScaleSpec& scale);
Point3 decode_pixel(const ChannelTriple& c, const ScaleSpec& scale);

// 2D lookup table from pixel position to the encoded object-space point of
// the surface visible there. Background pixels (mask 0) carry channel value
// 0; the mask, not the color, decides foreground.
struct CoordinateMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> r;
    std::vector<std::uint16_t> g;
    std::vector<std::uint16_t> b;
    std::vector<std::uint8_t> mask; // 1 = foreground
    ScaleSpec scale;

    static CoordinateMap background(int width, int height, const ScaleSpec& scale);

    std::size_t index(int col, int row) const {
        return static_cast<std::size_t>(row) * width + col;
    }
    bool foreground(int col, int row) const { return mask[index(col, row)] != 0; }
    std::size_t foreground_count() const;

    // Throws when plane/mask sizes disagree with width*height or a
    // background pixel carries a nonzero channel.
    void validate() const;
};

// Snaps to the pixel whose cell contains (col, row) and decodes it if the
// mask marks it foreground. Off-image or background positions yield
// nullopt; misses are data, not faults.
std::optional<Point3> lookup_fixation(const CoordinateMap& map, double col, double row);

} // namespace gaze3d
