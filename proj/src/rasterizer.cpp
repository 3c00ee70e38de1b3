#include "gaze3d/rasterizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gaze3d {

std::vector<FrameSpec> make_rotation_schedule(double full_angle_deg, int n_frames,
                                              RotationMotion motion) {
    if (n_frames < 1) throw Error("rotation schedule needs at least one frame");
    std::vector<FrameSpec> frames;
    frames.reserve(n_frames);
    const double half = full_angle_deg / 2.0;
    for (int k = 0; k < n_frames; ++k) {
        double angle_deg = 0.0;
        if (n_frames > 1) {
            const double u = static_cast<double>(k) / (n_frames - 1);
            switch (motion) {
            case RotationMotion::linear: angle_deg = -half + full_angle_deg * u; break;
            case RotationMotion::sinusoidal: angle_deg = -half * std::cos(M_PI * u); break;
            }
        }
        frames.push_back({k, RigidTransform::rotation_z(angle_deg * M_PI / 180.0)});
    }
    return frames;
}

namespace {

constexpr double kNearClip = 1e-6;

// A vertex mid-rasterization: camera-space position plus the object-space
// attribute that gets interpolated into the map.
struct ClipVertex {
    Vec3 cam;    // camera-space (right, up, forward) coordinates
    Point3 obj;  // pre-transform object-space position
};

// Sutherland-Hodgman clip of a triangle against the near plane cam.z >=
// kNearClip. Object-space attributes interpolate linearly in camera space.
int clip_near(const ClipVertex in[3], ClipVertex out[4]) {
    int n = 0;
    for (int i = 0; i < 3; ++i) {
        const ClipVertex& a = in[i];
        const ClipVertex& b = in[(i + 1) % 3];
        const bool a_in = a.cam.z >= kNearClip;
        const bool b_in = b.cam.z >= kNearClip;
        if (a_in) out[n++] = a;
        if (a_in != b_in) {
            const double t = (kNearClip - a.cam.z) / (b.cam.z - a.cam.z);
            out[n++] = {a.cam + (b.cam - a.cam) * t, a.obj + (b.obj - a.obj) * t};
        }
    }
    return n;
}

struct ScreenVertex {
    double x, y;  // continuous pixel coordinates
    double z;     // camera-space depth (> 0 after clipping)
    Point3 obj;
};

double edge(const ScreenVertex& a, const ScreenVertex& b, double px, double py) {
    return (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
}

// With screen-positive orientation the interior lies where the edge
// function is positive; a zero edge value belongs to the triangle only on
// top and left edges so that shared edges paint exactly once.
bool counts_on_boundary(const ScreenVertex& a, const ScreenVertex& b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    return (dy == 0.0 && dx > 0.0) || dy < 0.0;
}

} // namespace

CoordinateMap rasterize_coordmap(const SurfaceMesh& mesh, const Camera& camera,
                                 const FrameSpec& frame, const ScaleSpec& scale) {
    mesh.validate();
    frame.model_transform.validate();
    const CameraBasis basis = camera_basis(camera);

    if (!mesh.vertices.empty()) {
        const BoundingBox box = mesh_bbox(mesh);
        for (int axis = 0; axis < 3; ++axis) {
            const double slack =
                1e-12 * std::max({std::abs(box.min[axis]), std::abs(box.max[axis]), 1.0});
            if (box.min[axis] < scale.min[axis] - slack ||
                box.max[axis] > scale.min[axis] + scale.range[axis] + slack)
                throw Error("scale volume too small: mesh extends outside the encoded volume");
        }
    }

    const int width = camera.image_width;
    const int height = camera.image_height;
    CoordinateMap map = CoordinateMap::background(width, height, scale);
    std::vector<double> depth(static_cast<std::size_t>(width) * height,
                              std::numeric_limits<double>::infinity());

    // Camera-space vertices of the posed mesh; object-space positions ride
    // along as the interpolated attribute.
    std::vector<Vec3> cam_verts(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3 d = frame.model_transform.apply(mesh.vertices[i]) - camera.position;
        cam_verts[i] = {dot(d, basis.right), dot(d, basis.up), dot(d, basis.forward)};
    }

    const double half_w = basis.tan_half_fov * basis.aspect;
    const double half_h = basis.tan_half_fov;

    ClipVertex tri[3];
    ClipVertex clipped[4];
    ScreenVertex sv[4];

    for (const auto& face : mesh.faces) {
        for (int i = 0; i < 3; ++i) tri[i] = {cam_verts[face[i]], mesh.vertices[face[i]]};
        const int n = clip_near(tri, clipped);
        if (n < 3) continue;

        for (int i = 0; i < n; ++i) {
            const ClipVertex& v = clipped[i];
            sv[i].x = (v.cam.x / (v.cam.z * half_w) + 1.0) / 2.0 * width;
            sv[i].y = (1.0 - v.cam.y / (v.cam.z * half_h)) / 2.0 * height;
            sv[i].z = v.cam.z;
            sv[i].obj = v.obj;
        }

        // Fan-triangulate the clipped polygon (3 or 4 vertices).
        for (int k = 1; k + 1 < n; ++k) {
            ScreenVertex v0 = sv[0];
            ScreenVertex v1 = sv[k];
            ScreenVertex v2 = sv[k + 1];

            double area2 = edge(v0, v1, v2.x, v2.y);
            if (area2 == 0.0) continue;
            if (area2 < 0.0) {
                std::swap(v1, v2);
                area2 = -area2;
            }

            // clamp in double space: near-clipped triangles can project far
            // outside the representable int range
            const auto clamp_lo = [](double v, int hi) {
                return static_cast<int>(std::min(std::max(std::floor(v), 0.0),
                                                 static_cast<double>(hi)));
            };
            const auto clamp_hi = [](double v, int hi) {
                return static_cast<int>(std::min(std::max(std::ceil(v), 0.0),
                                                 static_cast<double>(hi)));
            };
            const int col_min = clamp_lo(std::min({v0.x, v1.x, v2.x}) - 0.5, width - 1);
            const int col_max = clamp_hi(std::max({v0.x, v1.x, v2.x}) - 0.5, width - 1);
            const int row_min = clamp_lo(std::min({v0.y, v1.y, v2.y}) - 0.5, height - 1);
            const int row_max = clamp_hi(std::max({v0.y, v1.y, v2.y}) - 0.5, height - 1);
            if (std::max({v0.x, v1.x, v2.x}) < 0.0 || std::min({v0.x, v1.x, v2.x}) > width ||
                std::max({v0.y, v1.y, v2.y}) < 0.0 || std::min({v0.y, v1.y, v2.y}) > height)
                continue;

            const bool tl0 = counts_on_boundary(v1, v2);
            const bool tl1 = counts_on_boundary(v2, v0);
            const bool tl2 = counts_on_boundary(v0, v1);

            for (int row = row_min; row <= row_max; ++row) {
                const double py = row + 0.5;
                for (int col = col_min; col <= col_max; ++col) {
                    const double px = col + 0.5;
                    const double w0 = edge(v1, v2, px, py);
                    const double w1 = edge(v2, v0, px, py);
                    const double w2 = edge(v0, v1, px, py);
                    if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;
                    if (w0 == 0.0 && !tl0) continue;
                    if (w1 == 0.0 && !tl1) continue;
                    if (w2 == 0.0 && !tl2) continue;

                    // Perspective-correct interpolation: attributes over z
                    // are affine in screen space.
                    const double l0 = w0 / area2;
                    const double l1 = w1 / area2;
                    const double l2 = w2 / area2;
                    const double inv_z = l0 / v0.z + l1 / v1.z + l2 / v2.z;
                    const double z = 1.0 / inv_z;

                    const std::size_t idx = map.index(col, row);
                    if (z >= depth[idx]) continue;

                    const double b0 = l0 / v0.z * z;
                    const double b1 = l1 / v1.z * z;
                    const double b2 = l2 / v2.z * z;
                    const Point3 obj = v0.obj * b0 + v1.obj * b1 + v2.obj * b2;

                    const ChannelTriple enc = encode_point(obj, scale);
                    depth[idx] = z;
                    map.r[idx] = enc[0];
                    map.g[idx] = enc[1];
                    map.b[idx] = enc[2];
                    map.mask[idx] = 1;
                }
            }
        }
    }
    return map;
}

std::vector<CoordinateMap> rasterize_animation(const SurfaceMesh& mesh, const Camera& camera,
                                               const std::vector<FrameSpec>& frames,
                                               const ScaleSpec& scale) {
    std::vector<CoordinateMap> maps;
    maps.reserve(frames.size());
    for (const FrameSpec& frame : frames)
        maps.push_back(rasterize_coordmap(mesh, camera, frame, scale));
    return maps;
}

} // namespace gaze3d
