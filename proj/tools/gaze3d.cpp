#include "gaze3d/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using gaze3d::CommandContext;
using gaze3d::PipelineConfig;

// Deferred config-file overrides: the config file loads first, then any
// flag the user actually passed wins.
struct Overrides {
    std::optional<std::vector<double>> camera_position, camera_look_at, camera_up;
    std::optional<double> fov_deg, full_angle_deg, fps, margin, sigma, padding, depth_break,
        region_max_dist;
    std::optional<int> width, height, frame_count, resolution;
    std::optional<std::string> motion, playback;
    bool duration_weighting = false;

    void apply(PipelineConfig& config) const {
        auto vec3 = [](const std::vector<double>& v) {
            return gaze3d::Vec3 {v[0], v[1], v[2]};
        };
        if (camera_position) config.camera_position = vec3(*camera_position);
        if (camera_look_at) config.camera_look_at = vec3(*camera_look_at);
        if (camera_up) config.camera_up = vec3(*camera_up);
        if (fov_deg) config.camera_fov_deg = *fov_deg;
        if (width) config.image_width = *width;
        if (height) config.image_height = *height;
        if (full_angle_deg) config.full_angle_deg = *full_angle_deg;
        if (frame_count) config.frame_count = *frame_count;
        if (motion) config.motion = gaze3d::parse_motion(*motion);
        if (fps) config.fps = *fps;
        if (playback) config.playback = gaze3d::parse_playback(*playback);
        if (margin) config.margin = *margin;
        if (duration_weighting) config.duration_weighting = true;
        if (depth_break) config.depth_break = *depth_break;
        if (resolution) config.voxel_resolution = *resolution;
        if (sigma) config.sigma_voxels = *sigma;
        if (padding) config.grid_padding = *padding;
        if (region_max_dist) config.region_max_dist = *region_max_dist;
    }
};

void add_camera_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--camera-position", ov.camera_position, "camera position (x y z)")
        ->expected(3);
    cmd->add_option("--camera-look-at", ov.camera_look_at, "camera target (x y z)")->expected(3);
    cmd->add_option("--camera-up", ov.camera_up, "camera up vector (x y z)")->expected(3);
    cmd->add_option("--fov-deg", ov.fov_deg, "vertical field of view, degrees");
    cmd->add_option("--width", ov.width, "image width, pixels");
    cmd->add_option("--height", ov.height, "image height, pixels");
}

void add_schedule_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--full-angle", ov.full_angle_deg, "rotation sweep, degrees");
    cmd->add_option("--frames", ov.frame_count, "frame count");
    cmd->add_option("--motion", ov.motion, "linear | sinusoidal");
    cmd->add_option("--fps", ov.fps, "animation frame rate");
    cmd->add_option("--playback", ov.playback, "clamp | loop | pingpong");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app {"gaze3d: reproject 2D gaze fixations onto 3D surfaces via coordinate maps"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    bool verbose = false;
    app.add_option("--config", config_path, "configuration file (INI)")->envname("GAZE3D_CONFIG");
    app.add_option("--out", out_path, "output path (meaning depends on the subcommand)");
    app.add_flag("--verbose", verbose, "chatty progress output");

    Overrides ov;

    auto* rasterize = app.add_subcommand(
        "rasterize", "render per-frame coordinate maps for a mesh and rotation schedule");
    std::string mesh_arg;
    rasterize->add_option("mesh", mesh_arg, "input mesh (ASCII PLY)")->required();
    add_camera_flags(rasterize, ov);
    add_schedule_flags(rasterize, ov);
    rasterize->add_option("--margin", ov.margin, "scale volume margin fraction");

    auto* reconstruct =
        app.add_subcommand("reconstruct", "decode one coordinate map back to a point cloud");
    std::string maps_arg;
    int frame_index = 0;
    std::string mesh_out;
    reconstruct->add_option("maps", maps_arg, "coordinate map prefix")->required();
    reconstruct->add_option("--frame", frame_index, "frame index to decode");
    reconstruct->add_option("--mesh-out", mesh_out, "also triangulate to this PLY path");
    reconstruct->add_option("--depth-break", ov.depth_break,
                            "silhouette edge threshold, object units");

    auto* project =
        app.add_subcommand("project", "reproject a fixation log through a map sequence");
    std::string fixations_arg;
    std::string project_maps;
    project->add_option("fixations", fixations_arg, "fixation log (CSV)")->required();
    project->add_option("--maps", project_maps, "coordinate map prefix")->required();
    add_schedule_flags(project, ov);
    project->add_flag("--duration-weighting", ov.duration_weighting,
                      "weight fixations by duration");

    auto* saliency =
        app.add_subcommand("saliency", "voxelize a fixation cloud and colorize the mesh");
    std::string cloud_arg;
    std::string saliency_mesh;
    saliency->add_option("cloud", cloud_arg, "fixation cloud PLY")->required();
    saliency->add_option("--mesh", saliency_mesh, "surface mesh to colorize")->required();
    saliency->add_option("--resolution", ov.resolution, "voxels along the longest axis");
    saliency->add_option("--sigma", ov.sigma, "Gaussian sigma, voxels");
    saliency->add_option("--padding", ov.padding, "grid padding fraction");

    auto* metrics = app.add_subcommand("metrics", "compute distribution and similarity reports");
    std::string metrics_manifest;
    metrics->add_option("manifest", metrics_manifest, "session manifest (JSON)")->required();
    metrics->add_option("--region-max-dist", ov.region_max_dist,
                        "region assignment cutoff, object units");

    auto* pipeline = app.add_subcommand("pipeline", "run the full pipeline from a manifest");
    std::string pipeline_manifest;
    pipeline->add_option("manifest", pipeline_manifest, "session manifest (JSON)")->required();

    for (CLI::App* sub : {rasterize, reconstruct, project, saliency, metrics, pipeline})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        CommandContext ctx;
        if (!config_path.empty()) ctx.config.load_file(config_path);
        ov.apply(ctx.config);
        ctx.verbose = verbose;

        auto require_out = [&](const char* what) -> std::string {
            if (out_path.empty())
                throw gaze3d::Error(std::string("--out is required: ") + what);
            return out_path;
        };

        if (rasterize->parsed()) {
            cmd_rasterize(mesh_arg, require_out("coordinate map prefix"), ctx);
        } else if (reconstruct->parsed()) {
            cmd_reconstruct(maps_arg, frame_index, require_out("cloud PLY path"),
                            mesh_out.empty() ? std::nullopt
                                             : std::optional<gaze3d::fs::path>(mesh_out),
                            ctx);
        } else if (project->parsed()) {
            cmd_project(fixations_arg, project_maps, require_out("cloud PLY path"), ctx);
        } else if (saliency->parsed()) {
            cmd_saliency(cloud_arg, saliency_mesh, require_out("output prefix"), ctx);
        } else if (metrics->parsed()) {
            cmd_metrics(metrics_manifest, require_out("report JSON path"), ctx);
        } else if (pipeline->parsed()) {
            cmd_pipeline(pipeline_manifest, require_out("output directory"), ctx);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
