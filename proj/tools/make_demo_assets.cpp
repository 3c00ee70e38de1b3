// Regenerates the committed demo assets under demo/: a procedurally built
// statue-like mesh with head/body region labels, three synthetic fixation
// logs (one per material condition), the session manifest, and the demo
// configuration. Deterministic: fixed seeds, same bytes on every run.

#include "gaze3d/config.hpp"
#include "gaze3d/io.hpp"
#include "gaze3d/pipeline.hpp"
#include "gaze3d/projection.hpp"
#include "gaze3d/rasterizer.hpp"

#include <cmath>
#include <iostream>
#include <random>
#include <string>
#include <vector>

using namespace gaze3d;

namespace {

constexpr double kHeadZ = 0.82; // label boundary between body and head

// Statue-ish closed surface: an elongated body with a neck and an offset
// head bump, built on a UV-sphere topology.
SurfaceMesh make_statue(int segments, int rings) {
    SurfaceMesh mesh;
    auto radius_at = [](double theta, double phi) {
        const double body = 0.30 + 0.34 * std::pow(std::sin(theta), 1.25);
        const double neck = -0.16 * std::exp(-std::pow((theta - 0.62) / 0.18, 2.0));
        const double head = 0.34 * std::exp(-std::pow((theta - 0.30) / 0.22, 2.0));
        const double detail = 0.05 * std::sin(3.0 * phi + 0.7) * std::sin(theta) * std::sin(theta);
        return body + neck + head + detail;
    };

    mesh.vertices.push_back({0.0, 0.0, 1.25}); // top pole
    for (int ring = 1; ring < rings; ++ring) {
        const double theta = M_PI * ring / rings;
        for (int seg = 0; seg < segments; ++seg) {
            const double phi = 2.0 * M_PI * seg / segments;
            const double s = radius_at(theta, phi);
            // the head sits slightly forward, off the rotation axis
            const double forward = 0.10 * std::exp(-std::pow((theta - 0.30) / 0.25, 2.0));
            mesh.vertices.push_back({s * std::sin(theta) * std::cos(phi),
                                     s * std::sin(theta) * std::sin(phi) + forward,
                                     1.25 * std::cos(theta)});
        }
    }
    mesh.vertices.push_back({0.0, 0.0, -1.25}); // bottom pole

    const auto ring_vertex = [&](int ring, int seg) -> std::uint32_t {
        return 1 + static_cast<std::uint32_t>((ring - 1) * segments + (seg % segments));
    };
    for (int seg = 0; seg < segments; ++seg)
        mesh.faces.push_back({0, ring_vertex(1, seg), ring_vertex(1, seg + 1)});
    for (int ring = 1; ring + 1 < rings; ++ring)
        for (int seg = 0; seg < segments; ++seg) {
            const std::uint32_t a = ring_vertex(ring, seg);
            const std::uint32_t b = ring_vertex(ring, seg + 1);
            const std::uint32_t c = ring_vertex(ring + 1, seg);
            const std::uint32_t d = ring_vertex(ring + 1, seg + 1);
            mesh.faces.push_back({a, b, c});
            mesh.faces.push_back({b, d, c});
        }
    const std::uint32_t bottom = static_cast<std::uint32_t>(mesh.vertices.size() - 1);
    for (int seg = 0; seg < segments; ++seg)
        mesh.faces.push_back({bottom, ring_vertex(rings - 1, seg + 1), ring_vertex(rings - 1, seg)});

    mesh.region_labels.resize(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
        mesh.region_labels[i] = mesh.vertices[i].z > kHeadZ ? 1 : 0;
    mesh.validate();
    return mesh;
}

// Simulated observers: gaze targets sampled from region-labeled vertices
// (head share depends on the material condition), moved with the rotating
// model, projected to the screen, and jittered.
void write_fixation_log(const io::fs::path& path, const SurfaceMesh& mesh,
                        const PipelineConfig& config, double head_share, unsigned seed) {
    const std::vector<FrameSpec> frames =
        make_rotation_schedule(config.full_angle_deg, config.frame_count, config.motion);
    const FrameSchedule schedule = config.frame_schedule();
    const Camera camera = config.camera();

    std::vector<std::size_t> head_vertices;
    std::vector<std::size_t> body_vertices;
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
        (mesh.region_labels[i] == 1 ? head_vertices : body_vertices).push_back(i);

    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> jitter(0.0, 2.0);
    std::uniform_real_distribution<double> dwell(0.08, 0.32);

    std::vector<FixationRecord> records;
    for (int observer = 0; observer < 3; ++observer) {
        double t = 0.05 + 0.03 * observer;
        while (t < 8.0) {
            const auto& pool = unit(rng) < head_share ? head_vertices : body_vertices;
            const std::size_t v = pool[static_cast<std::size_t>(unit(rng) * pool.size()) %
                                       pool.size()];
            const int frame = select_frame(t, schedule);
            const Point3 world = frames[frame].model_transform.apply(mesh.vertices[v]);
            const auto screen = project_to_screen(world, camera);
            if (screen) {
                FixationRecord rec;
                rec.timestamp = std::round(t * 1000.0) / 1000.0;
                rec.col = std::round((screen->col + jitter(rng)) * 100.0) / 100.0;
                rec.row = std::round((screen->row + jitter(rng)) * 100.0) / 100.0;
                rec.duration = std::round(dwell(rng) * 1000.0) / 1000.0;
                rec.observer_id = "obs" + std::to_string(observer + 1);
                records.push_back(rec);
            }
            t += 0.12 + 0.18 * unit(rng);
        }
    }
    io::write_fixations(records, path);
    std::cout << path.string() << ": " << records.size() << " fixations\n";
}

} // namespace

int main(int argc, char** argv) {
    const io::fs::path demo_dir = argc > 1 ? argv[1] : "demo";
    io::fs::create_directories(demo_dir);

    PipelineConfig config;
    config.camera_position = {0.0, -3.4, 0.15};
    config.camera_look_at = {0.0, 0.0, 0.0};
    config.camera_up = {0.0, 0.0, 1.0};
    config.camera_fov_deg = 46.0;
    config.image_width = 256;
    config.image_height = 256;
    config.full_angle_deg = 50.0;
    config.frame_count = 61;
    config.motion = RotationMotion::sinusoidal;
    config.fps = 30.0;
    config.playback = Playback::pingpong;
    config.margin = 0.0;
    config.voxel_resolution = 32;
    config.sigma_voxels = 1.5;
    config.save(demo_dir / "demo.cfg");

    const SurfaceMesh statue = make_statue(40, 32);
    io::write_mesh(statue, demo_dir / "statue.ply");
    std::cout << "statue: " << statue.vertices.size() << " vertices, " << statue.faces.size()
              << " faces\n";

    write_fixation_log(demo_dir / "fixations_smooth.csv", statue, config, 0.45, 101);
    write_fixation_log(demo_dir / "fixations_rough.csv", statue, config, 0.70, 202);
    write_fixation_log(demo_dir / "fixations_coating.csv", statue, config, 0.55, 303);

    const std::string manifest = R"({
  "mesh": "statue.ply",
  "region_names": { "0": "body", "1": "head" },
  "schedule": {
    "full_angle_deg": 50.0,
    "frame_count": 61,
    "motion": "sinusoidal",
    "fps": 30.0,
    "playback": "pingpong"
  },
  "conditions": [
    { "question": "free-viewing", "model": "statue", "material": "smooth",
      "fixations": "fixations_smooth.csv" },
    { "question": "free-viewing", "model": "statue", "material": "rough",
      "fixations": "fixations_rough.csv" },
    { "question": "free-viewing", "model": "statue", "material": "coating",
      "fixations": "fixations_coating.csv" }
  ],
  "pairs": [
    ["free-viewing/statue/rough", "free-viewing/statue/smooth"],
    ["free-viewing/statue/smooth", "free-viewing/statue/coating"],
    ["free-viewing/statue/coating", "free-viewing/statue/rough"]
  ]
}
)";
    io::atomic_write_bytes(demo_dir / "manifest.json", manifest);
    std::cout << "manifest written to " << (demo_dir / "manifest.json").string() << "\n";
    return 0;
}
