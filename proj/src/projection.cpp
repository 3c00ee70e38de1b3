#include "gaze3d/projection.hpp"

#include <cmath>
#include <sstream>

namespace gaze3d {

void FixationCloud3D::validate() const {
    if (weights.size() != points.size() || provenance.size() != points.size())
        throw Error("fixation cloud arrays have mismatched lengths");
    for (double w : weights)
        if (!(w > 0.0) || !std::isfinite(w)) throw Error("fixation weight must be positive");
    for (const Point3& p : points)
        if (!all_finite(p)) throw Error("fixation cloud point has non-finite coordinates");
}

int select_frame(double t, const FrameSchedule& schedule) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw Error("frame selection requires a finite non-negative timestamp");
    if (schedule.frame_count < 1) throw Error("frame schedule needs at least one frame");
    if (!(schedule.fps > 0.0) || !std::isfinite(schedule.fps))
        throw Error("frame schedule fps must be positive and finite");

    const long long count = schedule.frame_count;
    const double raw_d = std::floor(t * schedule.fps);

    // Fold in double space while the index is too large for integer math;
    // beyond 2^53 the folded phase is meaningless anyway, but stays defined.
    long long raw;
    if (raw_d >= 9.0e18) {
        if (schedule.playback == Playback::clamp) return static_cast<int>(count - 1);
        const double period =
            schedule.playback == Playback::loop ? count : std::max<long long>(2 * (count - 1), 1);
        raw = static_cast<long long>(std::fmod(raw_d, period));
    } else {
        raw = static_cast<long long>(raw_d);
    }

    switch (schedule.playback) {
    case Playback::clamp: return static_cast<int>(std::min(raw, count - 1));
    case Playback::loop: return static_cast<int>(raw % count);
    case Playback::pingpong: {
        if (count == 1) return 0;
        const long long period = 2 * (count - 1);
        const long long m = raw % period;
        return static_cast<int>(m < count ? m : period - m);
    }
    }
    throw Error("unknown playback mode");
}

FixationCloud3D project_fixations(const std::vector<FixationRecord>& fixations,
                                  const std::vector<CoordinateMap>& maps,
                                  const FrameSchedule& schedule, const ProjectOptions& options) {
    if (static_cast<int>(maps.size()) != schedule.frame_count) {
        std::ostringstream msg;
        msg << "map count (" << maps.size() << ") does not match schedule frame count ("
            << schedule.frame_count << ")";
        throw Error(msg.str());
    }
    for (const CoordinateMap& map : maps)
        if (!(map.scale == maps.front().scale))
            throw Error("coordinate maps use mixed scale specs");

    FixationCloud3D cloud;
    for (const FixationRecord& fix : fixations) {
        const int frame = select_frame(fix.timestamp, schedule);
        const std::optional<Point3> hit = lookup_fixation(maps[frame], fix.col, fix.row);
        if (!hit) {
            ++cloud.dropped_count;
            continue;
        }
        double weight = 1.0;
        if (options.duration_weighting && fix.duration && *fix.duration > 0.0)
            weight = *fix.duration;
        cloud.points.push_back(*hit);
        cloud.weights.push_back(weight);
        cloud.provenance.push_back({fix.observer_id, fix.timestamp, frame});
    }
    return cloud;
}

std::vector<Point3> reconstruct_cloud(const CoordinateMap& map) {
    std::vector<Point3> points;
    points.reserve(map.foreground_count());
    for (int row = 0; row < map.height; ++row)
        for (int col = 0; col < map.width; ++col) {
            if (!map.foreground(col, row)) continue;
            const std::size_t i = map.index(col, row);
            points.push_back(decode_pixel(map.r[i], map.g[i], map.b[i], map.scale));
        }
    return points;
}

double default_depth_break(const ScaleSpec& scale) { return 0.02 * scale.diagonal(); }

SurfaceMesh triangulate_coordmap(const CoordinateMap& map, double depth_break) {
    if (!(depth_break > 0.0)) throw Error("depth_break must be positive");

    SurfaceMesh mesh;
    std::vector<std::int64_t> vertex_of(static_cast<std::size_t>(map.width) * map.height, -1);
    for (int row = 0; row < map.height; ++row)
        for (int col = 0; col < map.width; ++col) {
            if (!map.foreground(col, row)) continue;
            const std::size_t i = map.index(col, row);
            vertex_of[i] = static_cast<std::int64_t>(mesh.vertices.size());
            mesh.vertices.push_back(decode_pixel(map.r[i], map.g[i], map.b[i], map.scale));
        }

    const double break_sq = depth_break * depth_break;
    auto edge_ok = [&](std::int64_t a, std::int64_t b) {
        const Vec3 d = mesh.vertices[a] - mesh.vertices[b];
        return dot(d, d) <= break_sq;
    };

    for (int row = 0; row + 1 < map.height; ++row)
        for (int col = 0; col + 1 < map.width; ++col) {
            const std::int64_t a = vertex_of[map.index(col, row)];         // top-left
            const std::int64_t b = vertex_of[map.index(col + 1, row)];     // top-right
            const std::int64_t c = vertex_of[map.index(col, row + 1)];     // bottom-left
            const std::int64_t d = vertex_of[map.index(col + 1, row + 1)]; // bottom-right
            if (a >= 0 && b >= 0 && c >= 0 && edge_ok(a, b) && edge_ok(b, c) && edge_ok(a, c))
                mesh.faces.push_back({static_cast<std::uint32_t>(a),
                                      static_cast<std::uint32_t>(b),
                                      static_cast<std::uint32_t>(c)});
            if (b >= 0 && d >= 0 && c >= 0 && edge_ok(b, d) && edge_ok(d, c) && edge_ok(b, c))
                mesh.faces.push_back({static_cast<std::uint32_t>(b),
                                      static_cast<std::uint32_t>(d),
                                      static_cast<std::uint32_t>(c)});
        }
    return mesh;
}

} // namespace gaze3d
