#include "gaze3d/projection.hpp"

#include "gaze3d/rasterizer.hpp"
#include "testutil.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace gaze3d;

TEST_CASE("select_frame maps timestamps through the playback mode") {
    FrameSchedule schedule {30.0, 61, Playback::clamp};
    CHECK(select_frame(0.0, schedule) == 0);
    CHECK(select_frame(1.0 / 30.0, schedule) == 1); // floor(t * fps) = 1
    CHECK(select_frame(10.0, schedule) == 60);      // clamps to the last frame

    schedule.playback = Playback::loop;
    CHECK(select_frame(61.0 / 30.0, schedule) == 0); // raw 61 wraps to 0
    CHECK(select_frame(10.0, schedule) == 300 % 61);

    schedule.playback = Playback::pingpong;
    CHECK(select_frame(60.0 / 30.0, schedule) == 60); // raw 60: end of sweep
    CHECK(select_frame(61.0 / 30.0, schedule) == 59); // raw 61 reflects back
    CHECK(select_frame(120.0 / 30.0, schedule) == 0); // full period returns home

    FrameSchedule one {30.0, 1, Playback::pingpong};
    CHECK(select_frame(5.0, one) == 0);

    CHECK_THROWS_AS(select_frame(-0.1, schedule), Error);
    CHECK_THROWS_AS(select_frame(std::numeric_limits<double>::infinity(), schedule), Error);
    CHECK_THROWS_AS(select_frame(std::nan(""), schedule), Error);

    // absurdly distant timestamps still fold into a valid frame
    schedule.playback = Playback::clamp;
    CHECK(select_frame(1e300, schedule) == 60);
    schedule.playback = Playback::loop;
    const int looped = select_frame(1e300, schedule);
    CHECK(looped >= 0);
    CHECK(looped < 61);
    schedule.playback = Playback::pingpong;
    const int reflected = select_frame(1e300, schedule);
    CHECK(reflected >= 0);
    CHECK(reflected < 61);
}

namespace {

const ScaleSpec kScale {{0, 0, 0}, {1, 1, 1}};

CoordinateMap map_with_one_pixel(std::uint16_t r, std::uint16_t g, std::uint16_t b) {
    CoordinateMap map = CoordinateMap::background(4, 4, kScale);
    const std::size_t i = map.index(2, 1);
    map.mask[i] = 1;
    map.r[i] = r;
    map.g[i] = g;
    map.b[i] = b;
    return map;
}

FixationRecord fix_at(double t, double col, double row, const char* obs = "obs1") {
    FixationRecord f;
    f.timestamp = t;
    f.col = col;
    f.row = row;
    f.observer_id = obs;
    return f;
}

} // namespace

TEST_CASE("project_fixations drops misses and keeps hits") {
    const std::vector<CoordinateMap> maps {map_with_one_pixel(100, 200, 300)};
    const FrameSchedule schedule {30.0, 1, Playback::clamp};

    SUBCASE("all-background input gives an empty cloud") {
        std::vector<FixationRecord> fixations;
        for (int i = 0; i < 7; ++i) fixations.push_back(fix_at(0.1 * i, 0.5, 3.5));
        const FixationCloud3D cloud = project_fixations(fixations, maps, schedule);
        CHECK(cloud.empty());
        CHECK(cloud.dropped_count == 7);
        cloud.validate();
    }

    SUBCASE("a hit decodes the pixel and records provenance") {
        const FixationCloud3D cloud =
            project_fixations({fix_at(0.2, 2.6, 1.2, "alice")}, maps, schedule);
        REQUIRE(cloud.size() == 1);
        CHECK(cloud.dropped_count == 0);
        CHECK(cloud.points[0] == decode_pixel(100, 200, 300, kScale));
        CHECK(cloud.weights[0] == 1.0);
        CHECK(cloud.provenance[0].observer_id == "alice");
        CHECK(cloud.provenance[0].frame_index == 0);
    }

    SUBCASE("conservation: hits plus drops equals the input count") {
        std::mt19937 rng(61);
        std::uniform_real_distribution<double> pos(-1.0, 5.0);
        std::vector<FixationRecord> fixations;
        for (int i = 0; i < 200; ++i) fixations.push_back(fix_at(0.01 * i, pos(rng), pos(rng)));
        const FixationCloud3D cloud = project_fixations(fixations, maps, schedule);
        CHECK(cloud.size() + cloud.dropped_count == fixations.size());
    }
}

TEST_CASE("project_fixations validates the map sequence") {
    const std::vector<CoordinateMap> maps {map_with_one_pixel(1, 2, 3)};
    CHECK_THROWS_WITH_AS(project_fixations({}, maps, {30.0, 2, Playback::clamp}),
                         doctest::Contains("does not match schedule"), Error);

    std::vector<CoordinateMap> mixed {map_with_one_pixel(1, 2, 3),
                                      map_with_one_pixel(1, 2, 3)};
    mixed[1].scale.min[0] = 0.5;
    CHECK_THROWS_WITH_AS(project_fixations({}, mixed, {30.0, 2, Playback::clamp}),
                         doctest::Contains("mixed scale"), Error);
}

TEST_CASE("duration weighting is off by default and opt-in") {
    const std::vector<CoordinateMap> maps {map_with_one_pixel(9, 9, 9)};
    const FrameSchedule schedule {30.0, 1, Playback::clamp};
    FixationRecord f = fix_at(0.0, 2.5, 1.5);
    f.duration = 0.25;

    CHECK(project_fixations({f}, maps, schedule).weights[0] == 1.0);

    ProjectOptions weighted;
    weighted.duration_weighting = true;
    CHECK(project_fixations({f}, maps, schedule, weighted).weights[0] == 0.25);

    f.duration.reset(); // no duration recorded: falls back to unit weight
    CHECK(project_fixations({f}, maps, schedule, weighted).weights[0] == 1.0);
}

TEST_CASE("fixations reprojected at pixel centers match the ray-cast oracle") {
    const SurfaceMesh blob = testutil::make_blob(24, 17);
    Camera camera;
    camera.position = {0, -3.4, 0};
    camera.look_at = {0, 0, 0};
    camera.up = {0, 0, 1};
    camera.vertical_fov_deg = 40.0;
    camera.image_width = 128;
    camera.image_height = 128;
    const ScaleSpec scale = scale_from_bbox(mesh_bbox(blob));
    const std::vector<CoordinateMap> maps {
        rasterize_coordmap(blob, camera, {0, {}}, scale)};
    const FrameSchedule schedule {30.0, 1, Playback::clamp};

    const double quant = std::sqrt(scale.coeff(0) * scale.coeff(0) +
                                   scale.coeff(1) * scale.coeff(1) +
                                   scale.coeff(2) * scale.coeff(2)) / 2.0;
    const double tolerance = quant + 1e-6 * mesh_bbox(blob).diagonal();

    std::vector<FixationRecord> fixations;
    std::vector<Point3> expected;
    for (int row = 10; row < 128; row += 9)
        for (int col = 7; col < 128; col += 9) {
            const auto hit = ray_cast(blob, camera, col + 0.5, row + 0.5);
            if (!hit) continue;
            fixations.push_back(fix_at(0.0, col + 0.5, row + 0.5));
            expected.push_back(hit->point);
        }
    REQUIRE(fixations.size() > 30);

    const FixationCloud3D cloud = project_fixations(fixations, maps, schedule);
    REQUIRE(cloud.size() == fixations.size());
    for (std::size_t i = 0; i < cloud.size(); ++i)
        CHECK(norm(cloud.points[i] - expected[i]) <= tolerance);
}

TEST_CASE("reconstruct_cloud decodes every foreground pixel in row-major order") {
    CHECK(reconstruct_cloud(CoordinateMap::background(3, 3, kScale)).empty());

    CoordinateMap map = CoordinateMap::background(3, 2, kScale);
    const auto set = [&](int col, int row, std::uint16_t v) {
        const std::size_t i = map.index(col, row);
        map.mask[i] = 1;
        map.r[i] = v;
    };
    set(2, 0, 10);
    set(0, 1, 20);
    set(1, 1, 30);
    const std::vector<Point3> cloud = reconstruct_cloud(map);
    REQUIRE(cloud.size() == 3);
    CHECK(cloud[0] == decode_pixel(10, 0, 0, kScale));
    CHECK(cloud[1] == decode_pixel(20, 0, 0, kScale));
    CHECK(cloud[2] == decode_pixel(30, 0, 0, kScale));
    CHECK(cloud.size() == map.foreground_count());
}

TEST_CASE("a reconstructed rasterized sphere keeps its radius") {
    const SurfaceMesh sphere = testutil::make_uv_sphere(100, 51);
    Camera camera;
    camera.position = {0, -3, 0};
    camera.look_at = {0, 0, 0};
    camera.up = {0, 0, 1};
    camera.vertical_fov_deg = 42.0;
    camera.image_width = 128;
    camera.image_height = 128;
    const ScaleSpec scale = scale_from_bbox(mesh_bbox(sphere));
    const CoordinateMap map = rasterize_coordmap(sphere, camera, {0, {}}, scale);
    const std::vector<Point3> cloud = reconstruct_cloud(map);
    REQUIRE(cloud.size() > 1000);
    for (const Point3& p : cloud) CHECK(std::abs(norm(p) - 1.0) <= 2e-3);
}

TEST_CASE("triangulation connects smooth 2x2 blocks and honors depth breaks") {
    CoordinateMap map = CoordinateMap::background(2, 2, kScale);
    for (int i = 0; i < 4; ++i) map.mask[i] = 1;

    SUBCASE("smooth block gives two triangles on four vertices") {
        const SurfaceMesh mesh = triangulate_coordmap(map, 0.5);
        CHECK(mesh.vertices.size() == 4);
        CHECK(mesh.faces.size() == 2);
        mesh.validate();
    }

    SUBCASE("a depth jump suppresses the bridging triangles") {
        // right column far away in z
        map.b[map.index(1, 0)] = 65535;
        map.b[map.index(1, 1)] = 65535;
        const SurfaceMesh mesh = triangulate_coordmap(map, 0.5);
        CHECK(mesh.vertices.size() == 4);
        CHECK(mesh.faces.empty());
    }

    SUBCASE("a lone missing corner still yields the remaining triangle") {
        map.mask[map.index(1, 1)] = 0;
        const SurfaceMesh mesh = triangulate_coordmap(map, 0.5);
        CHECK(mesh.vertices.size() == 3);
        CHECK(mesh.faces.size() == 1);
    }
}

TEST_CASE("a rasterized full-frame plane triangulates to the visible area") {
    SurfaceMesh plane;
    plane.vertices = {{-4, 1, -4}, {4, 1, -4}, {4, 1, 4}, {-4, 1, 4}};
    plane.faces = {{0, 1, 2}, {0, 2, 3}};
    Camera camera;
    camera.position = {0, -3, 0}; // plane sits 4 units down the view axis
    camera.look_at = {0, 1, 0};
    camera.up = {0, 0, 1};
    camera.vertical_fov_deg = 40.0;
    camera.image_width = 256;
    camera.image_height = 256;

    const ScaleSpec scale = scale_from_bbox(mesh_bbox(plane));
    const CoordinateMap map = rasterize_coordmap(plane, camera, {0, {}}, scale);
    REQUIRE(map.foreground_count() == 256u * 256u);

    const SurfaceMesh mesh = triangulate_coordmap(map, default_depth_break(scale));
    double area = 0.0;
    for (const auto& f : mesh.faces) {
        const Vec3 e1 = mesh.vertices[f[1]] - mesh.vertices[f[0]];
        const Vec3 e2 = mesh.vertices[f[2]] - mesh.vertices[f[0]];
        area += norm(cross(e1, e2)) / 2.0;
    }
    const double depth = 4.0;
    const double side = 2.0 * depth * std::tan(camera.vertical_fov_deg * M_PI / 360.0);
    const double analytic = side * side;
    CHECK(std::abs(area - analytic) / analytic < 0.01);
}

TEST_CASE("cloud validation catches inconsistent arrays") {
    FixationCloud3D cloud;
    cloud.points = {{0, 0, 0}};
    cloud.weights = {1.0, 2.0};
    cloud.provenance = {{}};
    CHECK_THROWS_AS(cloud.validate(), Error);
    cloud.weights = {0.0};
    CHECK_THROWS_AS(cloud.validate(), Error);
    cloud.weights = {1.0};
    cloud.validate();
}
