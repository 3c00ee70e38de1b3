#pragma once

#include "gaze3d/config.hpp"
#include "gaze3d/io.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace gaze3d {

// Shared state for one CLI invocation. Commands write their primary results
// to files; progress lines go to `out`, detail only under verbose.
struct CommandContext {
    PipelineConfig config;
    bool verbose = false;
    std::ostream* out = nullptr; // defaults to std::cout when null
};

namespace fs = std::filesystem;

// mesh -> per-frame coordinate maps <out_prefix>_NNNN.png plus one shared
// sidecar <out_prefix>.scale.json. Prints the frame count and per-frame
// foreground coverage.
void cmd_rasterize(const fs::path& mesh_path, const std::string& out_prefix,
                   CommandContext& ctx);

// One frame of a map sequence -> decoded point cloud (and optionally the
// grid-triangulated surface).
void cmd_reconstruct(const std::string& maps_prefix, int frame_index,
                     const fs::path& out_cloud, const std::optional<fs::path>& out_mesh,
                     CommandContext& ctx);

// fixation CSV + map sequence -> 3D fixation cloud PLY. Prints how many
// fixations were dropped (background or off-image).
void cmd_project(const fs::path& fixations_path, const std::string& maps_prefix,
                 const fs::path& out_cloud, CommandContext& ctx);

// fixation cloud + mesh -> saliency voxel grid <out_prefix>.vxg and
// colorized mesh <out_prefix>_colored.ply.
void cmd_saliency(const fs::path& cloud_path, const fs::path& mesh_path,
                  const std::string& out_prefix, CommandContext& ctx);

// manifest with per-condition clouds and grids -> JSON report.
void cmd_metrics(const fs::path& manifest_path, const fs::path& out_report,
                 CommandContext& ctx);

// rasterize -> project -> saliency -> metrics, end to end, under out_dir.
void cmd_pipeline(const fs::path& manifest_path, const fs::path& out_dir, CommandContext& ctx);

// Condition key to a filesystem-safe stem.
std::string sanitize_filename(const std::string& name);

} // namespace gaze3d
