#include "gaze3d/rasterizer.hpp"

#include "gaze3d/projection.hpp"
#include "testutil.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace gaze3d;

namespace {

double schedule_angle_deg(const FrameSpec& frame) {
    const Point3 p = frame.model_transform.apply({1, 0, 0});
    return std::atan2(p.y, p.x) * 180.0 / M_PI;
}

Camera sphere_camera(int size, double distance) {
    Camera camera;
    camera.position = {0, -distance, 0};
    camera.look_at = {0, 0, 0};
    camera.up = {0, 0, 1};
    // choose the fov so a unit sphere's silhouette circle is inscribed in
    // the square image: tan(fov/2) = 1 / sqrt(d^2 - 1)
    camera.vertical_fov_deg =
        2.0 * std::atan(1.0 / std::sqrt(distance * distance - 1.0)) * 180.0 / M_PI;
    camera.image_width = size;
    camera.image_height = size;
    return camera;
}

} // namespace

TEST_CASE("rotation schedules sweep from -A/2 to +A/2") {
    for (const RotationMotion motion : {RotationMotion::linear, RotationMotion::sinusoidal}) {
        const auto frames = make_rotation_schedule(50.0, 61, motion);
        REQUIRE(frames.size() == 61);
        CHECK(frames.front().frame_index == 0);
        CHECK(frames.back().frame_index == 60);
        CHECK(schedule_angle_deg(frames.front()) == doctest::Approx(-25.0).epsilon(1e-9));
        CHECK(schedule_angle_deg(frames.back()) == doctest::Approx(25.0).epsilon(1e-9));
        // midpoint of the sweep is the rest pose for both motions
        CHECK(schedule_angle_deg(frames[30]) == doctest::Approx(0.0).epsilon(1e-9));
    }

    const auto single = make_rotation_schedule(50.0, 1, RotationMotion::sinusoidal);
    REQUIRE(single.size() == 1);
    CHECK(schedule_angle_deg(single[0]) == doctest::Approx(0.0));

    // linear spacing is even; sinusoidal eases (smaller first step)
    const auto linear = make_rotation_schedule(50.0, 61, RotationMotion::linear);
    const auto sine = make_rotation_schedule(50.0, 61, RotationMotion::sinusoidal);
    const double linear_step = schedule_angle_deg(linear[1]) - schedule_angle_deg(linear[0]);
    const double sine_step = schedule_angle_deg(sine[1]) - schedule_angle_deg(sine[0]);
    CHECK(linear_step == doctest::Approx(50.0 / 60.0).epsilon(1e-9));
    CHECK(sine_step < linear_step);
    CHECK(make_rotation_schedule(50.0, 2, RotationMotion::linear).size() == 2);
    CHECK_THROWS_AS(make_rotation_schedule(50.0, 0, RotationMotion::linear), Error);
}

TEST_CASE("an empty mesh rasterizes to an all-background map") {
    SurfaceMesh empty;
    const ScaleSpec scale {{0, 0, 0}, {1, 1, 1}};
    Camera camera = sphere_camera(32, 3.0);
    const CoordinateMap map = rasterize_coordmap(empty, camera, {0, {}}, scale);
    CHECK(map.foreground_count() == 0);
    map.validate();
}

TEST_CASE("a triangle spanning the frustum covers every pixel") {
    SurfaceMesh tri;
    tri.vertices = {{-100, 1, -100}, {100, 1, -100}, {0, 1, 200}};
    tri.faces = {{0, 1, 2}};
    Camera camera;
    camera.position = {0, -3, 0};
    camera.look_at = {0, 0, 0};
    camera.up = {0, 0, 1};
    camera.vertical_fov_deg = 40.0;
    camera.image_width = 64;
    camera.image_height = 64;
    const ScaleSpec scale = scale_from_bbox(mesh_bbox(tri));
    const CoordinateMap map = rasterize_coordmap(tri, camera, {0, {}}, scale);
    CHECK(map.foreground_count() == 64u * 64u);
}

TEST_CASE("a unit sphere inscribed in a square image covers ~pi/4 of it") {
    const SurfaceMesh sphere = testutil::make_uv_sphere(50, 51);
    const Camera camera = sphere_camera(512, 3.0);
    const ScaleSpec scale = scale_from_bbox(mesh_bbox(sphere));
    const CoordinateMap map = rasterize_coordmap(sphere, camera, {0, {}}, scale);
    const double fraction =
        static_cast<double>(map.foreground_count()) / (512.0 * 512.0);
    CHECK(std::abs(fraction - M_PI / 4.0) < 0.01);
}

TEST_CASE("rasterization is deterministic") {
    const SurfaceMesh blob = testutil::make_blob(20, 15);
    const Camera camera = sphere_camera(96, 3.2);
    const ScaleSpec scale = scale_from_bbox(mesh_bbox(blob));
    const FrameSpec frame {3, RigidTransform::rotation_z(0.31)};
    const CoordinateMap a = rasterize_coordmap(blob, camera, frame, scale);
    const CoordinateMap b = rasterize_coordmap(blob, camera, frame, scale);
    CHECK(a.r == b.r);
    CHECK(a.g == b.g);
    CHECK(a.b == b.b);
    CHECK(a.mask == b.mask);
}

TEST_CASE("opposite rotations of a mirror-symmetric mesh mirror the mask") {
    // octahedron: its triangulation maps to itself under x -> -x
    SurfaceMesh octa;
    octa.vertices = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    octa.faces = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                  {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
    Camera camera;
    camera.position = {0, -3, 0};
    camera.look_at = {0, 0, 0};
    camera.up = {0, 0, 1};
    camera.vertical_fov_deg = 45.0;
    camera.image_width = 128;
    camera.image_height = 128;
    const ScaleSpec scale = scale_from_bbox(mesh_bbox(octa), 0.05);

    const double theta = 9.0 * M_PI / 180.0;
    const CoordinateMap pos =
        rasterize_coordmap(octa, camera, {0, RigidTransform::rotation_z(theta)}, scale);
    const CoordinateMap neg =
        rasterize_coordmap(octa, camera, {1, RigidTransform::rotation_z(-theta)}, scale);

    int mismatches = 0;
    for (int row = 0; row < 128; ++row)
        for (int col = 0; col < 128; ++col)
            if (pos.mask[pos.index(col, row)] != neg.mask[neg.index(127 - col, row)])
                ++mismatches;
    CHECK(mismatches == 0);
}

TEST_CASE("the nearer triangle wins every contested pixel") {
    SurfaceMesh overlap;
    // a big far triangle and a nearer one in front of the image center
    overlap.vertices = {{-2, 1, -2}, {2, 1, -2}, {0, 1, 3},
                        {-0.4, 0.5, -0.4}, {0.4, 0.5, -0.4}, {0, 0.5, 0.6}};
    overlap.faces = {{0, 1, 2}, {3, 4, 5}};
    Camera camera;
    camera.position = {0, -3, 0};
    camera.look_at = {0, 0, 0};
    camera.up = {0, 0, 1};
    camera.vertical_fov_deg = 50.0;
    camera.image_width = 64;
    camera.image_height = 64;
    const ScaleSpec scale = scale_from_bbox(mesh_bbox(overlap));
    const CoordinateMap map = rasterize_coordmap(overlap, camera, {0, {}}, scale);

    const auto center = lookup_fixation(map, 32.5, 32.5);
    REQUIRE(center.has_value());
    // the near triangle lies in the y = 0.5 plane
    CHECK(center->y == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("triangles crossing the camera plane are clipped, not exploded") {
    // one vertex far behind the camera: the clipped part must still cover
    // the pixels in front, and the projected blow-up must not wrap indices
    SurfaceMesh tri;
    tri.vertices = {{-1, 1, -1}, {1, 1, -1}, {0, -9, 1}};
    tri.faces = {{0, 1, 2}};
    Camera camera;
    camera.position = {0, -3, 0};
    camera.look_at = {0, 0, 0};
    camera.up = {0, 0, 1};
    camera.vertical_fov_deg = 60.0;
    camera.image_width = 64;
    camera.image_height = 64;
    const ScaleSpec scale = scale_from_bbox(mesh_bbox(tri));
    const CoordinateMap map = rasterize_coordmap(tri, camera, {0, {}}, scale);
    map.validate();
    CHECK(map.foreground_count() > 0);
    CHECK(map.foreground_count() < 64u * 64u);

    // every covered pixel decodes to a point on the triangle's plane
    for (int row = 0; row < 64; ++row)
        for (int col = 0; col < 64; ++col) {
            if (!map.foreground(col, row)) continue;
            const auto p = lookup_fixation(map, col + 0.5, row + 0.5);
            REQUIRE(p.has_value());
            // plane through the three vertices: contains all decodings
            const Vec3 n = cross(tri.vertices[1] - tri.vertices[0],
                                 tri.vertices[2] - tri.vertices[0]);
            const double off = dot(n, *p - tri.vertices[0]) / norm(n);
            CHECK(std::abs(off) < 1e-3);
        }
}

TEST_CASE("rasterize rejects a scale that does not cover the mesh") {
    const SurfaceMesh sphere = testutil::make_uv_sphere(12, 9);
    const ScaleSpec tight {{0, 0, 0}, {0.5, 0.5, 0.5}};
    const Camera camera = sphere_camera(32, 3.0);
    CHECK_THROWS_WITH_AS(rasterize_coordmap(sphere, camera, {0, {}}, tight),
                         doctest::Contains("scale volume too small"), Error);
}

TEST_CASE("decoded foreground pixels agree with the ray-cast oracle") {
    const SurfaceMesh blob = testutil::make_blob(30, 21);
    const Camera camera = sphere_camera(160, 3.4);
    const ScaleSpec scale = scale_from_bbox(mesh_bbox(blob));
    const FrameSpec frame {0, RigidTransform::rotation_z(0.22)};
    const CoordinateMap map = rasterize_coordmap(blob, camera, frame, scale);
    const SurfaceMesh posed = transformed(blob, frame.model_transform);

    // loose enough for quantization: eps_geom plus the Euclidean norm of the
    // per-axis half steps
    const double quant = std::sqrt(scale.coeff(0) * scale.coeff(0) +
                                   scale.coeff(1) * scale.coeff(1) +
                                   scale.coeff(2) * scale.coeff(2)) / 2.0;
    const double tolerance = 1e-6 * mesh_bbox(posed).diagonal() + quant;

    std::vector<std::pair<int, int>> foreground, background;
    for (int row = 0; row < map.height; ++row)
        for (int col = 0; col < map.width; ++col)
            (map.foreground(col, row) ? foreground : background).push_back({col, row});
    REQUIRE(foreground.size() > 500);

    std::mt19937 rng(53);
    std::shuffle(foreground.begin(), foreground.end(), rng);
    std::shuffle(background.begin(), background.end(), rng);

    for (std::size_t i = 0; i < 300 && i < foreground.size(); ++i) {
        const auto [col, row] = foreground[i];
        const auto decoded = lookup_fixation(map, col + 0.5, row + 0.5);
        REQUIRE(decoded.has_value());
        const Point3 world = frame.model_transform.apply(*decoded);
        const Ray ray = camera_ray(camera, col + 0.5, row + 0.5);
        const Vec3 offset = world - ray.origin;
        const double along = dot(offset, ray.direction);
        const double dist = norm(offset - ray.direction * along);
        CHECK(dist <= tolerance);
        // and the ray must actually hit the posed surface there
        CHECK(ray_cast(posed, ray).has_value());
    }
    for (std::size_t i = 0; i < 300 && i < background.size(); ++i) {
        const auto [col, row] = background[i];
        CHECK_FALSE(ray_cast(posed, camera, col + 0.5, row + 0.5).has_value());
    }
}

TEST_CASE("rasterize_animation shares one scale across frames") {
    const SurfaceMesh blob = testutil::make_blob(16, 13);
    const Camera camera = sphere_camera(48, 3.4);
    const ScaleSpec scale = scale_from_bbox(mesh_bbox(blob));

    const auto frames = make_rotation_schedule(40.0, 3, RotationMotion::linear);
    const auto maps = rasterize_animation(blob, camera, frames, scale);
    REQUIRE(maps.size() == 3);
    for (const CoordinateMap& map : maps) {
        CHECK(map.scale == scale);
        map.validate();
    }

    // a single identity frame reproduces rasterize_coordmap exactly
    const auto one = rasterize_animation(blob, camera, {{0, {}}}, scale);
    const CoordinateMap direct = rasterize_coordmap(blob, camera, {0, {}}, scale);
    CHECK(one.front().r == direct.r);
    CHECK(one.front().mask == direct.mask);
}
