#include "gaze3d/pipeline.hpp"

#include "gaze3d/metrics.hpp"
#include "gaze3d/projection.hpp"
#include "gaze3d/rasterizer.hpp"
#include "gaze3d/saliency.hpp"

#include <cmath>
#include <iostream>
#include <map>
#include <sstream>

namespace gaze3d {

namespace {

std::ostream& out(CommandContext& ctx) { return ctx.out ? *ctx.out : std::cout; }

void echo_effective_config(const CommandContext& ctx, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    ctx.config.save(out_dir / "effective.cfg");
}

fs::path prefix_dir(const std::string& prefix) {
    const fs::path p(prefix);
    return p.has_parent_path() ? p.parent_path() : fs::path(".");
}

std::vector<CoordinateMap> read_map_sequence(const std::string& prefix, int frame_count) {
    const ScaleSpec scale = io::read_scale_sidecar(io::scale_sidecar_path(prefix));
    std::vector<CoordinateMap> maps;
    maps.reserve(frame_count);
    for (int k = 0; k < frame_count; ++k)
        maps.push_back(io::read_coordmap_png(io::frame_png_path(prefix, k), scale));
    return maps;
}

struct ConditionArtifacts {
    FixationCloud3D cloud;
    std::optional<ScaleSpec> scale;
    VoxelGrid saliency_map; // blurred and sum-normalized
};

// Distribution + region rows for one condition; similarity rows for the
// named pairs. Shared by cmd_metrics and cmd_pipeline.
io::AnalysisReport build_report(const std::map<std::string, ConditionArtifacts>& artifacts,
                                const std::vector<std::pair<std::string, std::string>>& pairs,
                                const SurfaceMesh* labeled_mesh,
                                const std::map<int, std::string>& region_names,
                                const PipelineConfig& config) {
    io::AnalysisReport report;
    for (const auto& [key, art] : artifacts) {
        io::ConditionReport cond;
        const WssResult w = wss(art.cloud);
        cond.distribution.mean_wss = w.mean_wss;
        cond.distribution.var_x = w.var_x;
        cond.distribution.var_y = w.var_y;
        cond.distribution.var_z = w.var_z;
        const MapStats stats = map_stats(art.saliency_map);
        cond.distribution.map_max = stats.max;
        cond.distribution.map_mean = stats.mean;
        cond.distribution.n_fixations = art.cloud.size();

        if (labeled_mesh && labeled_mesh->has_region_labels()) {
            double max_dist = config.region_max_dist.value_or(0.0);
            if (!(max_dist > 0.0)) {
                const ScaleSpec scale = art.scale.value_or(
                    scale_from_bbox(mesh_bbox(*labeled_mesh), config.margin));
                max_dist = default_region_max_dist(scale);
            }
            const RegionReport regions = region_fractions(art.cloud, *labeled_mesh, max_dist);
            for (const auto& [label, fraction] : regions.fractions) {
                const auto name = region_names.find(label);
                cond.region_fractions[name != region_names.end()
                                          ? name->second
                                          : "region_" + std::to_string(label)] = fraction;
            }
            cond.region_unassigned = regions.unassigned_count;
        }
        report.conditions[key] = std::move(cond);
    }

    for (const auto& [key_a, key_b] : pairs) {
        const ConditionArtifacts& a = artifacts.at(key_a);
        const ConditionArtifacts& b = artifacts.at(key_b);
        SimilarityReport pair;
        pair.cc = cc(a.saliency_map, b.saliency_map);
        pair.sim = sim(a.saliency_map, b.saliency_map);
        pair.wss_diff = wss_diff(a.cloud, b.cloud);
        report.pairs[key_a + " vs " + key_b] = pair;
    }
    return report;
}

// voxelize -> blur -> sum-normalize over the scale volume.
VoxelGrid make_saliency_map(const FixationCloud3D& cloud, const ScaleSpec& scale,
                            const PipelineConfig& config) {
    const GridLayout layout = fit_grid(scale, config.voxel_resolution, config.grid_padding);
    const VoxelGrid counts = voxelize(cloud, layout.dims, layout.origin, layout.voxel_size);
    return normalize(gaussian_blur3d(counts, config.sigma_voxels));
}

ScaleSpec scale_for_cloud(const io::CloudFile& file, const fs::path& mesh_path,
                          const PipelineConfig& config) {
    if (file.scale) return *file.scale;
    // Foreign clouds without an embedded scale fall back to the mesh bounds.
    const SurfaceMesh mesh = io::read_mesh(mesh_path);
    return scale_from_bbox(mesh_bbox(mesh), config.margin);
}

} // namespace

std::string sanitize_filename(const std::string& name) {
    std::string safe;
    safe.reserve(name.size());
    for (char c : name) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-' || c == '.';
        safe.push_back(ok ? c : '_');
    }
    return safe;
}

void cmd_rasterize(const fs::path& mesh_path, const std::string& out_prefix,
                   CommandContext& ctx) {
    const SurfaceMesh mesh = io::read_mesh(mesh_path);
    const ScaleSpec scale = scale_from_bbox(mesh_bbox(mesh), ctx.config.margin);
    const std::vector<FrameSpec> frames = make_rotation_schedule(
        ctx.config.full_angle_deg, ctx.config.frame_count, ctx.config.motion);

    echo_effective_config(ctx, prefix_dir(out_prefix));
    io::write_scale_sidecar(scale, io::scale_sidecar_path(out_prefix));

    const Camera camera = ctx.config.camera();
    const double pixel_count = static_cast<double>(camera.image_width) * camera.image_height;
    out(ctx) << "rasterizing " << frames.size() << " frames\n";
    for (const FrameSpec& frame : frames) {
        const CoordinateMap map = rasterize_coordmap(mesh, camera, frame, scale);
        io::write_coordmap_png(map, io::frame_png_path(out_prefix, frame.frame_index));
        std::ostringstream line;
        line.precision(4);
        line << "frame " << frame.frame_index << ": coverage "
             << static_cast<double>(map.foreground_count()) / pixel_count << "\n";
        out(ctx) << line.str();
    }
}

void cmd_reconstruct(const std::string& maps_prefix, int frame_index,
                     const fs::path& out_cloud, const std::optional<fs::path>& out_mesh,
                     CommandContext& ctx) {
    if (frame_index < 0) throw Error("frame index must be non-negative");
    const ScaleSpec scale = io::read_scale_sidecar(io::scale_sidecar_path(maps_prefix));
    const CoordinateMap map =
        io::read_coordmap_png(io::frame_png_path(maps_prefix, frame_index), scale);

    echo_effective_config(ctx, out_cloud.has_parent_path() ? out_cloud.parent_path()
                                                           : fs::path("."));

    const std::vector<Point3> points = reconstruct_cloud(map);
    FixationCloud3D cloud;
    cloud.points = points;
    cloud.weights.assign(points.size(), 1.0);
    cloud.provenance.assign(points.size(), FixationProvenance {});
    io::write_cloud(cloud, scale, out_cloud);
    out(ctx) << "reconstructed " << points.size() << " surface points\n";

    if (out_mesh) {
        const double depth_break =
            ctx.config.depth_break.value_or(default_depth_break(scale));
        const SurfaceMesh surface = triangulate_coordmap(map, depth_break);
        io::write_mesh(surface, *out_mesh);
        out(ctx) << "triangulated " << surface.faces.size() << " faces\n";
    }
}

void cmd_project(const fs::path& fixations_path, const std::string& maps_prefix,
                 const fs::path& out_cloud, CommandContext& ctx) {
    const std::vector<FixationRecord> fixations = io::read_fixations(fixations_path);
    const FrameSchedule schedule = ctx.config.frame_schedule();
    const std::vector<CoordinateMap> maps =
        read_map_sequence(maps_prefix, schedule.frame_count);

    echo_effective_config(ctx, out_cloud.has_parent_path() ? out_cloud.parent_path()
                                                           : fs::path("."));

    ProjectOptions options;
    options.duration_weighting = ctx.config.duration_weighting;
    const FixationCloud3D cloud = project_fixations(fixations, maps, schedule, options);
    io::write_cloud(cloud, maps.empty() ? std::nullopt : std::optional(maps.front().scale),
                    out_cloud);
    out(ctx) << "projected " << cloud.size() << " fixations, dropped " << cloud.dropped_count
             << "\n";
}

void cmd_saliency(const fs::path& cloud_path, const fs::path& mesh_path,
                  const std::string& out_prefix, CommandContext& ctx) {
    const io::CloudFile file = io::read_cloud(cloud_path);
    const ScaleSpec scale = scale_for_cloud(file, mesh_path, ctx.config);
    const SurfaceMesh mesh = io::read_mesh(mesh_path);

    echo_effective_config(ctx, prefix_dir(out_prefix));

    const VoxelGrid saliency_map = make_saliency_map(file.cloud, scale, ctx.config);
    io::write_grid(saliency_map, fs::path(out_prefix + ".vxg"));
    const SurfaceMesh colored = colorize_mesh(mesh, saliency_map, ctx.config.colormap);
    io::write_mesh(colored, fs::path(out_prefix + "_colored.ply"));
    out(ctx) << "saliency grid " << saliency_map.dims[0] << "x" << saliency_map.dims[1] << "x"
             << saliency_map.dims[2] << ", peak " << map_stats(saliency_map).max << "\n";
}

void cmd_metrics(const fs::path& manifest_path, const fs::path& out_report,
                 CommandContext& ctx) {
    const io::SessionManifest manifest = io::read_manifest(manifest_path);

    std::map<std::string, ConditionArtifacts> artifacts;
    for (const io::ManifestCondition& cond : manifest.conditions) {
        if (cond.cloud.empty() || cond.grid.empty())
            throw Error("condition '" + cond.key() +
                        "' needs 'cloud' and 'grid' paths for metrics");
        ConditionArtifacts art;
        io::CloudFile file = io::read_cloud(cond.cloud);
        art.cloud = std::move(file.cloud);
        art.scale = file.scale;
        art.saliency_map = normalize(io::read_grid(cond.grid));
        artifacts[cond.key()] = std::move(art);
    }

    std::optional<SurfaceMesh> mesh;
    if (!manifest.mesh.empty()) mesh = io::read_mesh(manifest.mesh);

    echo_effective_config(ctx, out_report.has_parent_path() ? out_report.parent_path()
                                                            : fs::path("."));

    const io::AnalysisReport report =
        build_report(artifacts, manifest.pairs, mesh ? &*mesh : nullptr, manifest.region_names,
                     ctx.config);
    io::write_report(report, out_report);
    out(ctx) << "report: " << report.conditions.size() << " conditions, "
             << report.pairs.size() << " pairs\n";
}

void cmd_pipeline(const fs::path& manifest_path, const fs::path& out_dir, CommandContext& ctx) {
    const io::SessionManifest manifest = io::read_manifest(manifest_path);

    // The manifest describes the session, so its schedule wins over the
    // config file's.
    if (manifest.schedule.full_angle_deg)
        ctx.config.full_angle_deg = *manifest.schedule.full_angle_deg;
    if (manifest.schedule.frame_count) ctx.config.frame_count = *manifest.schedule.frame_count;
    if (manifest.schedule.motion) ctx.config.motion = parse_motion(*manifest.schedule.motion);
    if (manifest.schedule.fps) ctx.config.fps = *manifest.schedule.fps;
    if (manifest.schedule.playback)
        ctx.config.playback = parse_playback(*manifest.schedule.playback);

    // Validate every input before writing anything.
    if (manifest.mesh.empty()) throw Error(manifest_path.string() + ": manifest needs a mesh");
    if (!fs::exists(manifest.mesh))
        throw Error(manifest.mesh.string() + ": mesh not found");
    for (const io::ManifestCondition& cond : manifest.conditions) {
        if (cond.fixations.empty())
            throw Error("condition '" + cond.key() + "' needs a fixation log for the pipeline");
        if (!fs::exists(cond.fixations))
            throw Error(cond.fixations.string() + ": fixation log not found");
    }

    echo_effective_config(ctx, out_dir);

    const SurfaceMesh mesh = io::read_mesh(manifest.mesh);
    const ScaleSpec scale = scale_from_bbox(mesh_bbox(mesh), ctx.config.margin);
    const std::vector<FrameSpec> frames = make_rotation_schedule(
        ctx.config.full_angle_deg, ctx.config.frame_count, ctx.config.motion);
    const Camera camera = ctx.config.camera();

    const std::string maps_prefix =
        (out_dir / "maps" / sanitize_filename(manifest.mesh.stem().string())).string();
    out(ctx) << "rasterizing " << frames.size() << " frames\n";
    io::write_scale_sidecar(scale, io::scale_sidecar_path(maps_prefix));
    std::vector<CoordinateMap> maps;
    maps.reserve(frames.size());
    for (const FrameSpec& frame : frames) {
        maps.push_back(rasterize_coordmap(mesh, camera, frame, scale));
        io::write_coordmap_png(maps.back(), io::frame_png_path(maps_prefix, frame.frame_index));
        if (ctx.verbose)
            out(ctx) << "  frame " << frame.frame_index << ": "
                     << maps.back().foreground_count() << " foreground pixels\n";
    }

    const FrameSchedule schedule = ctx.config.frame_schedule();
    ProjectOptions options;
    options.duration_weighting = ctx.config.duration_weighting;

    std::map<std::string, ConditionArtifacts> artifacts;
    for (const io::ManifestCondition& cond : manifest.conditions) {
        const std::vector<FixationRecord> fixations = io::read_fixations(cond.fixations);
        ConditionArtifacts art;
        art.cloud = project_fixations(fixations, maps, schedule, options);
        art.scale = scale;
        const std::string stem = sanitize_filename(cond.key());
        io::write_cloud(art.cloud, scale, out_dir / "clouds" / (stem + ".ply"));
        out(ctx) << cond.key() << ": " << art.cloud.size() << " fixations projected, "
                 << art.cloud.dropped_count << " dropped\n";

        art.saliency_map = make_saliency_map(art.cloud, scale, ctx.config);
        io::write_grid(art.saliency_map, out_dir / "saliency" / (stem + ".vxg"));
        const SurfaceMesh colored = colorize_mesh(mesh, art.saliency_map, ctx.config.colormap);
        io::write_mesh(colored, out_dir / "saliency" / (stem + "_colored.ply"));
        artifacts[cond.key()] = std::move(art);
    }

    const io::AnalysisReport report = build_report(artifacts, manifest.pairs, &mesh,
                                                   manifest.region_names, ctx.config);
    io::write_report(report, out_dir / "report.json");
    out(ctx) << "report written to " << (out_dir / "report.json").string() << "\n";
}

} // namespace gaze3d
