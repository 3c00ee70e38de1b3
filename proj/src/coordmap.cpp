#include "gaze3d/coordmap.hpp"

#include <cmath>
#include <sstream>

namespace gaze3d {

double ScaleSpec::diagonal() const {
    return std::sqrt(range[0] * range[0] + range[1] * range[1] + range[2] * range[2]);
}

ScaleSpec scale_from_bbox(const BoundingBox& box, double margin) {
    if (margin < 0.0) throw Error("scale margin must be non-negative");
    ScaleSpec scale;
    for (int axis = 0; axis < 3; ++axis) {
        const double extent = box.max[axis] - box.min[axis];
        scale.min[axis] = box.min[axis] - margin * extent;
        scale.range[axis] = extent * (1.0 + 2.0 * margin);
    }
    return scale;
}

namespace {

// Interpolated surface points can land a round-off hair outside the scale
// volume; tolerate that and clamp, but reject anything farther out.
double boundary_slack(const ScaleSpec& scale, int axis) {
    const double magnitude = std::max({std::abs(scale.min[axis]),
                                       std::abs(scale.min[axis] + scale.range[axis]),
                                       scale.range[axis], 1.0});
    return magnitude * 1e-9;
}

} // namespace

ChannelTriple encode_point(const Point3& p, const ScaleSpec& scale) {
    ChannelTriple out {0, 0, 0};
    for (int axis = 0; axis < 3; ++axis) {
        const double lo = scale.min[axis];
        const double range = scale.range[axis];
        const double slack = boundary_slack(scale, axis);
        double v = p[axis];
        if (!std::isfinite(v) || v < lo - slack || v > lo + range + slack) {
            std::ostringstream msg;
            msg << "coordinate outside encoded volume: axis " << "xyz"[axis] << " value " << v
                << " not in [" << lo << ", " << lo + range << "]";
            throw Error(msg.str());
        }
        if (range == 0.0) continue; // degenerate axis encodes to 0
        v = std::min(std::max(v, lo), lo + range);
        const double q = std::round(65535.0 * (v - lo) / range); // half away from zero
        out[axis] = static_cast<std::uint16_t>(q);
    }
    return out;
}

Point3 decode_pixel(std::uint16_t r, std::uint16_t g, std::uint16_t b, const ScaleSpec& scale) {
    return {r * scale.coeff(0) + scale.min[0],
            g * scale.coeff(1) + scale.min[1],
            b * scale.coeff(2) + scale.min[2]};
}

Point3 decode_pixel(const ChannelTriple& c, const ScaleSpec& scale) {
    return decode_pixel(c[0], c[1], c[2], scale);
}

CoordinateMap CoordinateMap::background(int width, int height, const ScaleSpec& scale) {
    if (width < 1 || height < 1) throw Error("coordinate map size must be at least 1x1");
    CoordinateMap map;
    map.width = width;
    map.height = height;
    const std::size_t n = static_cast<std::size_t>(width) * height;
    map.r.assign(n, 0);
    map.g.assign(n, 0);
    map.b.assign(n, 0);
    map.mask.assign(n, 0);
    map.scale = scale;
    return map;
}

std::size_t CoordinateMap::foreground_count() const {
    std::size_t n = 0;
    for (std::uint8_t m : mask) n += m != 0;
    return n;
}

void CoordinateMap::validate() const {
    const std::size_t n = static_cast<std::size_t>(width) * height;
    if (r.size() != n || g.size() != n || b.size() != n || mask.size() != n)
        throw Error("coordinate map planes do not match declared size");
    for (std::size_t i = 0; i < n; ++i)
        if (mask[i] == 0 && (r[i] != 0 || g[i] != 0 || b[i] != 0))
            throw Error("background pixel carries a nonzero channel value");
}

std::optional<Point3> lookup_fixation(const CoordinateMap& map, double col, double row) {
    if (!(col >= 0.0 && col < map.width && row >= 0.0 && row < map.height)) return std::nullopt;
    const int c = static_cast<int>(std::floor(col));
    const int r_idx = static_cast<int>(std::floor(row));
    if (!map.foreground(c, r_idx)) return std::nullopt;
    const std::size_t i = map.index(c, r_idx);
    return decode_pixel(map.r[i], map.g[i], map.b[i], map.scale);
}

} // namespace gaze3d
