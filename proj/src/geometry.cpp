#include "gaze3d/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gaze3d {

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    if (n == 0.0 || !std::isfinite(n)) throw Error("cannot normalize zero-length vector");
    return v / n;
}

bool all_finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

Vec3 Mat3::apply(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

Mat3 Mat3::transposed() const {
    Mat3 t;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t.m[i][j] = m[j][i];
    return t;
}

Mat3 Mat3::operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            r.m[i][j] = 0.0;
            for (int k = 0; k < 3; ++k) r.m[i][j] += m[i][k] * o.m[k][j];
        }
    return r;
}

double Mat3::determinant() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

bool BoundingBox::contains(const Point3& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y &&
           p.z >= min.z && p.z <= max.z;
}

CameraBasis camera_basis(const Camera& camera) {
    if (camera.image_width < 1 || camera.image_height < 1)
        throw Error("camera image size must be at least 1x1");
    if (!(camera.vertical_fov_deg > 0.0 && camera.vertical_fov_deg < 180.0))
        throw Error("camera vertical fov must lie in (0, 180) degrees");
    const Vec3 view = camera.look_at - camera.position;
    if (norm(view) == 0.0) throw Error("camera position and look_at coincide");
    const Vec3 forward = normalized(view);
    const Vec3 side = cross(forward, camera.up);
    if (norm(side) < 1e-12) throw Error("camera up vector is parallel to the view direction");
    CameraBasis basis;
    basis.forward = forward;
    basis.right = normalized(side);
    basis.up = cross(basis.right, forward);
    basis.tan_half_fov = std::tan(camera.vertical_fov_deg * (M_PI / 180.0) / 2.0);
    basis.aspect = static_cast<double>(camera.image_width) / camera.image_height;
    return basis;
}

std::optional<ScreenPoint> project_to_screen(const Point3& p, const Camera& camera) {
    const CameraBasis basis = camera_basis(camera);
    const Vec3 d = p - camera.position;
    const double depth = dot(d, basis.forward);
    if (depth <= 0.0) return std::nullopt;
    const double xc = dot(d, basis.right);
    const double yc = dot(d, basis.up);
    const double ndc_x = xc / (depth * basis.tan_half_fov * basis.aspect);
    const double ndc_y = yc / (depth * basis.tan_half_fov);
    ScreenPoint s;
    s.col = (ndc_x + 1.0) / 2.0 * camera.image_width;
    s.row = (1.0 - ndc_y) / 2.0 * camera.image_height;
    s.depth = depth;
    return s;
}

Ray camera_ray(const Camera& camera, double col, double row) {
    const CameraBasis basis = camera_basis(camera);
    const double ndc_x = 2.0 * col / camera.image_width - 1.0;
    const double ndc_y = 1.0 - 2.0 * row / camera.image_height;
    const Vec3 dir = basis.forward + basis.right * (ndc_x * basis.tan_half_fov * basis.aspect) +
                     basis.up * (ndc_y * basis.tan_half_fov);
    return {camera.position, normalized(dir)};
}

void SurfaceMesh::validate() const {
    for (const Point3& v : vertices)
        if (!all_finite(v)) throw Error("mesh vertex has non-finite coordinates");
    for (const auto& f : faces) {
        for (std::uint32_t idx : f)
            if (idx >= vertices.size()) throw Error("mesh face index out of range");
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2])
            throw Error("mesh face is degenerate (repeated vertex index)");
    }
    if (!vertex_colors.empty() && vertex_colors.size() != vertices.size())
        throw Error("vertex color count does not match vertex count");
    for (const auto& rgb : vertex_colors)
        for (double c : rgb)
            if (!(c >= 0.0 && c <= 1.0)) throw Error("vertex colors must lie in [0, 1]");
    if (!region_labels.empty() && region_labels.size() != vertices.size())
        throw Error("region label count does not match vertex count");
}

BoundingBox mesh_bbox(const SurfaceMesh& mesh) {
    if (mesh.vertices.empty()) throw Error("empty geometry");
    BoundingBox box {mesh.vertices.front(), mesh.vertices.front()};
    for (const Point3& v : mesh.vertices) {
        for (int axis = 0; axis < 3; ++axis) {
            box.min[axis] = std::min(box.min[axis], v[axis]);
            box.max[axis] = std::max(box.max[axis], v[axis]);
        }
    }
    return box;
}

RigidTransform RigidTransform::rotation_z(double radians) {
    const double c = std::cos(radians);
    const double s = std::sin(radians);
    RigidTransform t;
    t.rotation.m = {{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}}};
    return t;
}

Point3 RigidTransform::apply(const Point3& p) const { return rotation.apply(p) + translation; }

RigidTransform RigidTransform::inverse() const {
    RigidTransform inv;
    inv.rotation = rotation.transposed();
    inv.translation = inv.rotation.apply(translation) * -1.0;
    return inv;
}

void RigidTransform::validate() const {
    const Mat3 gram = rotation * rotation.transposed();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double expect = i == j ? 1.0 : 0.0;
            if (std::abs(gram.m[i][j] - expect) > 1e-9)
                throw Error("rigid transform rotation is not orthonormal");
        }
    if (std::abs(rotation.determinant() - 1.0) > 1e-9)
        throw Error("rigid transform rotation must have determinant +1");
}

SurfaceMesh transformed(const SurfaceMesh& mesh, const RigidTransform& t) {
    SurfaceMesh out = mesh;
    for (Point3& v : out.vertices) v = t.apply(v);
    return out;
}

namespace {

// Watertight ray-triangle test (shear to a ray-aligned frame, 2D edge
// functions). Boundary hits report as hits for every adjacent face; the
// caller's lowest-face-index tie rule keeps the result deterministic.
struct RayFrame {
    int kx, ky, kz;
    double sx, sy, sz;
    Point3 origin;
};

RayFrame make_frame(const Ray& ray) {
    const Vec3& d = ray.direction;
    int kz = 0;
    if (std::abs(d.y) > std::abs(d[kz])) kz = 1;
    if (std::abs(d.z) > std::abs(d[kz])) kz = 2;
    int kx = (kz + 1) % 3;
    int ky = (kx + 1) % 3;
    if (d[kz] < 0.0) std::swap(kx, ky);
    RayFrame f;
    f.kx = kx;
    f.ky = ky;
    f.kz = kz;
    f.sx = d[kx] / d[kz];
    f.sy = d[ky] / d[kz];
    f.sz = 1.0 / d[kz];
    f.origin = ray.origin;
    return f;
}

bool intersect(const RayFrame& f, const Point3& v0, const Point3& v1, const Point3& v2,
               double& t_out) {
    const Vec3 a = v0 - f.origin;
    const Vec3 b = v1 - f.origin;
    const Vec3 c = v2 - f.origin;

    const double ax = a[f.kx] - f.sx * a[f.kz];
    const double ay = a[f.ky] - f.sy * a[f.kz];
    const double bx = b[f.kx] - f.sx * b[f.kz];
    const double by = b[f.ky] - f.sy * b[f.kz];
    const double cx = c[f.kx] - f.sx * c[f.kz];
    const double cy = c[f.ky] - f.sy * c[f.kz];

    const double u = cx * by - cy * bx;
    const double v = ax * cy - ay * cx;
    const double w = bx * ay - by * ax;

    if ((u < 0.0 || v < 0.0 || w < 0.0) && (u > 0.0 || v > 0.0 || w > 0.0)) return false;
    const double det = u + v + w;
    if (det == 0.0) return false;

    const double az = f.sz * a[f.kz];
    const double bz = f.sz * b[f.kz];
    const double cz = f.sz * c[f.kz];
    const double t = (u * az + v * bz + w * cz) / det;
    if (!(t > 0.0)) return false;
    t_out = t;
    return true;
}

bool ray_hits_box(const Ray& ray, const BoundingBox& box) {
    double tmin = 0.0;
    double tmax = std::numeric_limits<double>::infinity();
    for (int axis = 0; axis < 3; ++axis) {
        const double o = ray.origin[axis];
        const double d = ray.direction[axis];
        if (d == 0.0) {
            if (o < box.min[axis] || o > box.max[axis]) return false;
            continue;
        }
        double t0 = (box.min[axis] - o) / d;
        double t1 = (box.max[axis] - o) / d;
        if (t0 > t1) std::swap(t0, t1);
        tmin = std::max(tmin, t0);
        tmax = std::min(tmax, t1);
        if (tmin > tmax) return false;
    }
    return true;
}

} // namespace

std::optional<RayHit> ray_cast(const SurfaceMesh& mesh, const Ray& ray) {
    if (mesh.vertices.empty() || mesh.faces.empty()) return std::nullopt;
    if (!ray_hits_box(ray, mesh_bbox(mesh))) return std::nullopt;

    const RayFrame frame = make_frame(ray);
    std::optional<RayHit> best;
    for (std::uint32_t i = 0; i < mesh.faces.size(); ++i) {
        const auto& f = mesh.faces[i];
        double t = 0.0;
        if (!intersect(frame, mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]], t))
            continue;
        if (!best || t < best->t) best = RayHit {ray.origin + ray.direction * t, i, t};
    }
    return best;
}

std::optional<RayHit> ray_cast(const SurfaceMesh& mesh, const Camera& camera, double col,
                               double row) {
    if (col < 0.0 || col > camera.image_width || row < 0.0 || row > camera.image_height) {
        std::ostringstream msg;
        msg << "ray_cast pixel (" << col << ", " << row << ") outside image bounds";
        throw Error(msg.str());
    }
    return ray_cast(mesh, camera_ray(camera, col, row));
}

} // namespace gaze3d
