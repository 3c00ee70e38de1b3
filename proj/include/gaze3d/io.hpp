#pragma once

#include "gaze3d/coordmap.hpp"
#include "gaze3d/geometry.hpp"
#include "gaze3d/metrics.hpp"
#include "gaze3d/projection.hpp"
#include "gaze3d/saliency.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gaze3d::io {

namespace fs = std::filesystem;

// Writes bytes to a sibling temp file and renames it into place, so readers
// never observe a truncated file.
void atomic_write_bytes(const fs::path& path, const std::string& bytes);

// --- fixation logs -------------------------------------------------------
// CSV dialect (frozen): UTF-8, comma separated, '.' decimal point, header
//   timestamp,col,row,duration,observer_id
// duration may be empty. Malformed rows fail with the file and line number.
std::vector<FixationRecord> read_fixations(const fs::path& path);
void write_fixations(const std::vector<FixationRecord>& fixations, const fs::path& path);

// --- coordinate maps -----------------------------------------------------
// 16-bit-per-channel RGBA PNG: color channels carry the linear coordinate
// encoding, alpha carries the mask (opaque = foreground, 0 = background).
// The scale lives in a JSON sidecar {"min":[...],"range":[...]}.
void write_coordmap_png(const CoordinateMap& map, const fs::path& png_path);
CoordinateMap read_coordmap_png(const fs::path& png_path, const ScaleSpec& scale);
void write_scale_sidecar(const ScaleSpec& scale, const fs::path& json_path);
ScaleSpec read_scale_sidecar(const fs::path& json_path);

// Single-map convenience: <prefix>.png plus <prefix>.scale.json.
void write_coordmap(const CoordinateMap& map, const std::string& path_prefix);
CoordinateMap read_coordmap(const std::string& path_prefix);

// Frame-sequence naming shared by the CLI: <prefix>_NNNN.png.
fs::path frame_png_path(const std::string& prefix, int frame_index);
fs::path scale_sidecar_path(const std::string& prefix);

// --- meshes --------------------------------------------------------------
// ASCII PLY; vertex colors as uchar red/green/blue, region labels as
// `property int region`. Coordinates print with 9 significant digits.
void write_mesh(const SurfaceMesh& mesh, const fs::path& path);
SurfaceMesh read_mesh(const fs::path& path);

// --- fixation clouds -----------------------------------------------------
// ASCII PLY point set with a `float weight` vertex property. The encoding
// scale and per-point provenance travel in header comments.
struct CloudFile {
    FixationCloud3D cloud;
    std::optional<ScaleSpec> scale;
};
void write_cloud(const FixationCloud3D& cloud, const std::optional<ScaleSpec>& scale,
                 const fs::path& path);
CloudFile read_cloud(const fs::path& path);

// --- voxel grids ---------------------------------------------------------
// Little-endian binary: 16-byte magic "g3d-voxelgrid-v1", u32 dims, f64
// origin, f64 voxel size, then dims[0]*dims[1]*dims[2] f64 values with x
// running fastest.
void write_grid(const VoxelGrid& grid, const fs::path& path);
VoxelGrid read_grid(const fs::path& path);

// --- analysis reports ----------------------------------------------------
struct ConditionReport {
    DistributionReport distribution;
    std::map<std::string, double> region_fractions; // by region name; empty if not computed
    std::optional<std::size_t> region_unassigned;
};

struct AnalysisReport {
    std::map<std::string, ConditionReport> conditions; // keyed "question/model/material"
    std::map<std::string, SimilarityReport> pairs;     // keyed "<a> vs <b>"
};

// JSON with sorted keys; byte-identical for identical inputs.
void write_report(const AnalysisReport& report, const fs::path& path);

// --- session manifests ---------------------------------------------------
// JSON description of an experiment session: the mesh, the frame schedule,
// and one entry per condition. Relative paths resolve against the manifest
// file's directory.
struct ManifestSchedule {
    std::optional<double> full_angle_deg;
    std::optional<int> frame_count;
    std::optional<std::string> motion; // "linear" | "sinusoidal"
    std::optional<double> fps;
    std::optional<std::string> playback; // "clamp" | "loop" | "pingpong"
};

struct ManifestCondition {
    std::string question;
    std::string model;
    std::string material;
    fs::path fixations; // required for pipeline runs
    fs::path cloud;     // required for metrics-only runs
    fs::path grid;      // required for metrics-only runs

    std::string key() const { return question + "/" + model + "/" + material; }
};

struct SessionManifest {
    fs::path base_dir;
    fs::path mesh;
    std::map<int, std::string> region_names;
    ManifestSchedule schedule;
    std::vector<ManifestCondition> conditions;
    std::vector<std::pair<std::string, std::string>> pairs; // condition keys

    const ManifestCondition& condition_by_key(const std::string& key) const;
};

SessionManifest read_manifest(const fs::path& path);

} // namespace gaze3d::io
