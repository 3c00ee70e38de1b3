#pragma once

#include "gaze3d/geometry.hpp"
#include "gaze3d/projection.hpp"
#include "gaze3d/rasterizer.hpp"
#include "gaze3d/saliency.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace gaze3d {

// Every knob of the processing pipeline in one place, with the defaults the
// modules document. Values marked "auto" resolve against the scene's scale
// volume at use time.
struct PipelineConfig {
    // [camera]
    Point3 camera_position {0.0, -3.2, 0.0};
    Point3 camera_look_at {0.0, 0.0, 0.0};
    Vec3 camera_up {0.0, 0.0, 1.0};
    double camera_fov_deg = 40.0;
    int image_width = 512;
    int image_height = 512;

    // [schedule]
    double full_angle_deg = 50.0;
    int frame_count = 61;
    RotationMotion motion = RotationMotion::sinusoidal;
    double fps = 30.0;
    Playback playback = Playback::clamp;

    // [raster]
    double margin = 0.0;

    // [projection]
    bool duration_weighting = false;
    std::optional<double> depth_break; // auto: 2% of the scale diagonal

    // [saliency]
    int voxel_resolution = 64;
    double sigma_voxels = 2.0;
    double grid_padding = 0.05;

    // [metrics]
    std::optional<double> region_max_dist; // auto: 5% of the scale diagonal

    // [colormap]
    ColormapSpec colormap = default_colormap();

    Camera camera() const;
    FrameSchedule frame_schedule() const;

    // Merges the file's keys over the current values. Unknown sections or
    // keys are errors.
    void load_file(const std::filesystem::path& path);

    // Full key-value dump, loadable by load_file.
    std::string to_text() const;
    void save(const std::filesystem::path& path) const;
};

RotationMotion parse_motion(const std::string& name);
Playback parse_playback(const std::string& name);
const char* motion_name(RotationMotion motion);
const char* playback_name(Playback playback);

} // namespace gaze3d
