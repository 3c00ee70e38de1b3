#pragma once

#include "gaze3d/coordmap.hpp"
#include "gaze3d/geometry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gaze3d {

// One eye-tracker fixation event on the 2D screen.
struct FixationRecord {
    double timestamp = 0.0; // seconds from animation start
    double col = 0.0;       // pixels
    double row = 0.0;
    std::optional<double> duration; // seconds
    std::string observer_id;
    std::string question;
    std::string model;
    std::string material;
};

struct FixationProvenance {
    std::string observer_id;
    double timestamp = 0.0;
    int frame_index = 0;
};

// Fixations reprojected into object space. points/weights/provenance run in
// parallel; dropped_count tallies fixations that fell on background or off
// the image, so points.size() + dropped_count equals the input count.
struct FixationCloud3D {
    std::vector<Point3> points;
    std::vector<double> weights;
    std::vector<FixationProvenance> provenance;
    std::size_t dropped_count = 0;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    void validate() const; // throws on length mismatches or non-positive weights
};

enum class Playback { clamp, loop, pingpong };

// How fixation timestamps map onto animation frames.
struct FrameSchedule {
    double fps = 30.0;
    int frame_count = 1;
    Playback playback = Playback::clamp;
};

// floor(t * fps) folded into [0, frame_count) by the playback mode.
int select_frame(double t, const FrameSchedule& schedule);

struct ProjectOptions {
    // Weight each hit by its fixation duration instead of 1. Off by
    // default: the analysis counts fixations, not dwell time.
    bool duration_weighting = false;
};

// Reprojects each fixation through the coordinate map of its frame.
// maps.size() must equal schedule.frame_count and all maps must share one
// ScaleSpec.
FixationCloud3D project_fixations(const std::vector<FixationRecord>& fixations,
                                  const std::vector<CoordinateMap>& maps,
                                  const FrameSchedule& schedule,
                                  const ProjectOptions& options = {});

// Decoded point for every foreground pixel, row-major.
std::vector<Point3> reconstruct_cloud(const CoordinateMap& map);

// Pixel-grid triangulation of the decoded surface. Each 2x2 foreground
// block yields up to two triangles; any triangle edge whose endpoint points
// lie farther apart than depth_break is suppressed, so silhouette depth
// jumps do not get bridged. Vertices are the decoded points of all
// foreground pixels (same order as reconstruct_cloud).
SurfaceMesh triangulate_coordmap(const CoordinateMap& map, double depth_break);

// Default silhouette threshold: 2% of the scale volume diagonal.
double default_depth_break(const ScaleSpec& scale);

} // namespace gaze3d
