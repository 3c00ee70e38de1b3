#include "gaze3d/geometry.hpp"

#include "testutil.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace gaze3d;

TEST_CASE("mesh_bbox computes tight bounds") {
    SurfaceMesh cube;
    for (int x : {0, 1})
        for (int y : {0, 1})
            for (int z : {0, 1}) cube.vertices.push_back({double(x), double(y), double(z)});
    const BoundingBox box = mesh_bbox(cube);
    CHECK(box.min == Point3 {0, 0, 0});
    CHECK(box.max == Point3 {1, 1, 1});

    SurfaceMesh single;
    single.vertices.push_back({2, 3, 4});
    const BoundingBox sb = mesh_bbox(single);
    CHECK(sb.min == Point3 {2, 3, 4});
    CHECK(sb.max == Point3 {2, 3, 4});

    SurfaceMesh two;
    two.vertices = {{-1, 0, 0}, {1, 2, 0}};
    const BoundingBox tb = mesh_bbox(two);
    CHECK(tb.min == Point3 {-1, 0, 0});
    CHECK(tb.max == Point3 {1, 2, 0});
}

TEST_CASE("mesh_bbox rejects empty meshes and ignores vertex order") {
    SurfaceMesh empty;
    CHECK_THROWS_WITH_AS(mesh_bbox(empty), "empty geometry", Error);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    SurfaceMesh mesh;
    for (int i = 0; i < 40; ++i) mesh.vertices.push_back({u(rng), u(rng), u(rng)});
    const BoundingBox before = mesh_bbox(mesh);
    std::shuffle(mesh.vertices.begin(), mesh.vertices.end(), rng);
    const BoundingBox after = mesh_bbox(mesh);
    CHECK(before.min == after.min);
    CHECK(before.max == after.max);
}

TEST_CASE("project_to_screen maps the optical axis to the image center") {
    Camera camera;
    camera.position = {0, 0, 5};
    camera.look_at = {0, 0, 0};
    camera.up = {0, 1, 0};
    camera.vertical_fov_deg = 60.0;
    camera.image_width = 640;
    camera.image_height = 480;

    const auto s = project_to_screen({0, 0, 0}, camera);
    REQUIRE(s.has_value());
    CHECK(s->col == doctest::Approx(320.0).epsilon(1e-12));
    CHECK(s->row == doctest::Approx(240.0).epsilon(1e-12));
    CHECK(s->depth == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("project_to_screen flags points at or behind the camera plane") {
    Camera camera;
    camera.position = {0, 0, 5};
    camera.look_at = {0, 0, 0};
    camera.up = {0, 1, 0};

    CHECK_FALSE(project_to_screen({0, 0, 6}, camera).has_value());
    // depth exactly zero: in the camera plane
    CHECK_FALSE(project_to_screen({1, 0, 5}, camera).has_value());
}

TEST_CASE("project_to_screen puts a 45-degree ray on the image border") {
    // fov 90 over a square image: tan(fov/2) = 1, so a point whose lateral
    // offset equals its depth lands exactly at the border column.
    Camera camera;
    camera.position = {0, 0, 0};
    camera.look_at = {0, 0, -1};
    camera.up = {0, 1, 0};
    camera.vertical_fov_deg = 90.0;
    camera.image_width = 512;
    camera.image_height = 512;

    const auto s = project_to_screen({3.0, 0.0, -3.0}, camera);
    REQUIRE(s.has_value());
    CHECK(s->col == doctest::Approx(512.0).epsilon(1e-12));
    CHECK(s->row == doctest::Approx(256.0).epsilon(1e-12));
}

TEST_CASE("projected depth is strictly positive") {
    Camera camera;
    camera.position = {1, -4, 2};
    camera.look_at = {0, 0, 0};
    camera.up = {0, 0, 1};
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 500; ++i) {
        const Point3 p {u(rng), u(rng), u(rng)};
        const auto s = project_to_screen(p, camera);
        if (s) CHECK(s->depth > 0.0);
    }
}

TEST_CASE("camera validation rejects degenerate setups") {
    Camera camera;
    camera.position = {0, 0, 5};
    camera.look_at = {0, 0, 0};
    camera.up = {0, 0, 1}; // parallel to the view direction
    CHECK_THROWS_AS(camera_basis(camera), Error);

    camera.up = {0, 1, 0};
    camera.vertical_fov_deg = 0.0;
    CHECK_THROWS_AS(camera_basis(camera), Error);
    camera.vertical_fov_deg = 180.0;
    CHECK_THROWS_AS(camera_basis(camera), Error);
    camera.vertical_fov_deg = 60.0;
    camera.image_width = 0;
    CHECK_THROWS_AS(camera_basis(camera), Error);
}

namespace {

SurfaceMesh unit_square_at_z0() {
    SurfaceMesh mesh;
    mesh.vertices = {{-0.5, -0.5, 0}, {0.5, -0.5, 0}, {0.5, 0.5, 0}, {-0.5, 0.5, 0}};
    mesh.faces = {{0, 1, 2}, {0, 2, 3}};
    return mesh;
}

Camera downward_camera() {
    Camera camera;
    camera.position = {0, 0, 2};
    camera.look_at = {0, 0, 0};
    camera.up = {0, 1, 0};
    camera.vertical_fov_deg = 45.0;
    camera.image_width = 100;
    camera.image_height = 100;
    return camera;
}

} // namespace

TEST_CASE("ray_cast hits the square center through the center pixel") {
    // analytic: the center ray is the optical axis, meeting z=0 at (0,0,0)
    const auto hit = ray_cast(unit_square_at_z0(), downward_camera(), 50.0, 50.0);
    REQUIRE(hit.has_value());
    CHECK(norm(hit->point - Point3 {0, 0, 0}) < 1e-6);
    CHECK(hit->t == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("ray_cast misses past the silhouette") {
    // column 2: ndc -0.96, far outside the square's projected extent
    const auto hit = ray_cast(unit_square_at_z0(), downward_camera(), 2.0, 2.0);
    CHECK_FALSE(hit.has_value());
}

TEST_CASE("ray_cast keeps the nearest hit and breaks ties by face index") {
    SurfaceMesh stacked;
    stacked.vertices = {{-1, -1, 0}, {1, -1, 0}, {0, 1, 0},
                        {-1, -1, -1}, {1, -1, -1}, {0, 1, -1}};
    stacked.faces = {{3, 4, 5}, {0, 1, 2}}; // farther triangle listed first
    const auto hit = ray_cast(stacked, downward_camera(), 50.0, 50.0);
    REQUIRE(hit.has_value());
    CHECK(hit->point.z == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(hit->face_index == 1);

    SurfaceMesh duplicated;
    duplicated.vertices = {{-1, -1, 0}, {1, -1, 0}, {0, 1, 0}};
    duplicated.faces = {{0, 1, 2}, {0, 1, 2}};
    const auto tie = ray_cast(duplicated, downward_camera(), 50.0, 50.0);
    REQUIRE(tie.has_value());
    CHECK(tie->face_index == 0); // lowest face wins on equal depth
}

TEST_CASE("ray_cast rejects out-of-bounds pixel coordinates") {
    CHECK_THROWS_AS(ray_cast(unit_square_at_z0(), downward_camera(), -1.0, 50.0), Error);
    CHECK_THROWS_AS(ray_cast(unit_square_at_z0(), downward_camera(), 50.0, 101.0), Error);
}

TEST_CASE("rigid transforms compose, invert, and validate") {
    const RigidTransform id = RigidTransform::identity();
    CHECK(id.apply({1.5, -2.0, 0.25}) == Point3 {1.5, -2.0, 0.25});

    const RigidTransform rot = RigidTransform::rotation_z(M_PI / 2.0);
    const Point3 turned = rot.apply({1, 0, 0});
    CHECK(turned.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(turned.y == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(turned.z == doctest::Approx(0.0).epsilon(1e-12));
    rot.validate();

    RigidTransform skew;
    skew.rotation.m[0][1] = 0.5;
    CHECK_THROWS_AS(skew.validate(), Error);
}

TEST_CASE("random rigid transforms round-trip points") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int i = 0; i < 200; ++i) {
        const RigidTransform t = testutil::random_rigid_transform(rng);
        t.validate();
        const Point3 p {u(rng), u(rng), u(rng)};
        const Point3 back = t.inverse().apply(t.apply(p));
        CHECK(norm(back - p) < 1e-9);
    }
}

TEST_CASE("visible surface points survive a project/ray_cast round trip") {
    const SurfaceMesh sphere = testutil::make_uv_sphere(24, 17, 1.0);
    Camera camera;
    camera.position = {0, -4, 0};
    camera.look_at = {0, 0, 0};
    camera.up = {0, 0, 1};
    camera.vertical_fov_deg = 40.0;
    camera.image_width = 256;
    camera.image_height = 256;

    const double eps_geom = 1e-6 * mesh_bbox(sphere).diagonal();
    const Vec3 towards_camera = normalized(camera.position - Point3 {0, 0, 0});
    int tested = 0;
    for (const auto& face : sphere.faces) {
        // face centroids: generic on-surface points; the sphere is convex,
        // so front-facing ones are unoccluded
        const Point3 p = (sphere.vertices[face[0]] + sphere.vertices[face[1]] +
                          sphere.vertices[face[2]]) / 3.0;
        // camera distance 4: the silhouette sits at cos = 1/4, so 0.4 keeps
        // every sampled point safely front-facing (entry point of its ray)
        if (dot(normalized(p), towards_camera) < 0.4) continue;
        const auto s = project_to_screen(p, camera);
        REQUIRE(s.has_value());
        const auto hit = ray_cast(sphere, camera, s->col, s->row);
        REQUIRE(hit.has_value());
        CHECK(norm(hit->point - p) < eps_geom);
        ++tested;
    }
    CHECK(tested > 100);
}

TEST_CASE("mesh validation catches the documented defects") {
    SurfaceMesh bad;
    bad.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    bad.faces = {{0, 1, 3}};
    CHECK_THROWS_AS(bad.validate(), Error);
    bad.faces = {{0, 1, 1}};
    CHECK_THROWS_AS(bad.validate(), Error);
    bad.faces = {{0, 1, 2}};
    bad.region_labels = {1};
    CHECK_THROWS_AS(bad.validate(), Error);
    bad.region_labels = {1, 0, 0};
    bad.validate();
}
