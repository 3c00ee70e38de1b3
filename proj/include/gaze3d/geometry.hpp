#pragma once

#include "gaze3d/error.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace gaze3d {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }

    double operator[](int axis) const { return axis == 0 ? x : axis == 1 ? y : z; }
    double& operator[](int axis) { return axis == 0 ? x : axis == 1 ? y : z; }

    bool operator==(const Vec3&) const = default;
};

// Points and direction vectors share one representation; the distinction is
// carried by parameter names.
using Point3 = Vec3;

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& v);
Vec3 normalized(const Vec3& v); // throws on zero-length input
bool all_finite(const Vec3& v);

// Row-major 3x3 matrix, just enough for rigid motions.
struct Mat3 {
    std::array<std::array<double, 3>, 3> m {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

    Vec3 apply(const Vec3& v) const;
    Mat3 transposed() const;
    Mat3 operator*(const Mat3& o) const;
    double determinant() const;
};

struct BoundingBox {
    Point3 min;
    Point3 max;

    Vec3 extent() const { return max - min; }
    double diagonal() const { return norm(extent()); }
    bool contains(const Point3& p) const;
};

// Pinhole camera. World is right-handed; the camera looks along the view
// axis from position toward look_at. Pixel origin is the top-left corner,
// rows increase downward, pixel (c, r) spans [c, c+1) x [r, r+1) with its
// center at (c + 0.5, r + 0.5).
struct Camera {
    Point3 position;
    Point3 look_at;
    Vec3 up {0.0, 0.0, 1.0};
    double vertical_fov_deg = 40.0;
    int image_width = 512;
    int image_height = 512;
};

// Orthonormal view basis derived from a Camera. forward points from the
// camera into the scene; depth values are distances along forward.
struct CameraBasis {
    Vec3 right;
    Vec3 up;
    Vec3 forward;
    double tan_half_fov = 0.0;
    double aspect = 1.0;
};

// Throws Error if the camera is degenerate (zero view vector, up parallel
// to the view direction, fov outside (0, 180), or non-positive image size).
CameraBasis camera_basis(const Camera& camera);

struct ScreenPoint {
    double col = 0.0;
    double row = 0.0;
    double depth = 0.0; // distance along the view axis, > 0
};

// Perspective projection. Returns nullopt for points at or behind the
// camera plane (the behind-camera marker).
std::optional<ScreenPoint> project_to_screen(const Point3& p, const Camera& camera);

// World-space ray through the (sub)pixel position (col, row).
struct Ray {
    Point3 origin;
    Vec3 direction; // unit length
};
Ray camera_ray(const Camera& camera, double col, double row);

// Indexed triangle mesh. vertex_colors and region_labels are optional:
// empty, or exactly one entry per vertex.
struct SurfaceMesh {
    std::vector<Point3> vertices;
    std::vector<std::array<std::uint32_t, 3>> faces;
    std::vector<std::array<double, 3>> vertex_colors; // RGB in [0, 1]
    std::vector<int> region_labels;

    bool has_colors() const { return !vertex_colors.empty(); }
    bool has_region_labels() const { return !region_labels.empty(); }

    // Throws Error on out-of-range face indices, degenerate faces, or
    // attribute arrays whose length does not match the vertex count.
    void validate() const;
};

// Tight axis-aligned bound of all vertices. Throws "empty geometry" on a
// mesh without vertices.
BoundingBox mesh_bbox(const SurfaceMesh& mesh);

// Rigid motion p -> rotation * p + translation.
struct RigidTransform {
    Mat3 rotation;
    Vec3 translation;

    static RigidTransform identity() { return {}; }
    static RigidTransform rotation_z(double radians);

    Point3 apply(const Point3& p) const;
    RigidTransform inverse() const;

    // Throws unless rotation is orthonormal with determinant +1 (1e-9).
    void validate() const;
};

inline Point3 apply_transform(const Point3& p, const RigidTransform& t) { return t.apply(p); }
inline RigidTransform inverse_transform(const RigidTransform& t) { return t.inverse(); }

// Copy of the mesh with every vertex moved by t.
SurfaceMesh transformed(const SurfaceMesh& mesh, const RigidTransform& t);

struct RayHit {
    Point3 point;
    std::uint32_t face_index = 0;
    double t = 0.0; // distance along the ray
};

// Nearest ray-triangle intersection in front of the camera for the ray
// through (col, row), or nullopt if every face is missed. Ties on equal
// distance resolve to the lowest face index. Precondition: (col, row)
// inside the image bounds.
std::optional<RayHit> ray_cast(const SurfaceMesh& mesh, const Camera& camera,
                               double col, double row);

// Same test against an explicit ray (used by the rasterization oracle).
std::optional<RayHit> ray_cast(const SurfaceMesh& mesh, const Ray& ray);

} // namespace gaze3d
