#include "gaze3d/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gaze3d {

VoxelGrid VoxelGrid::zeros(const std::array<int, 3>& dims, const Point3& origin,
                           double voxel_size) {
    VoxelGrid grid;
    grid.dims = dims;
    grid.origin = origin;
    grid.voxel_size = voxel_size;
    grid.values.assign(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2], 0.0);
    grid.validate();
    return grid;
}

double VoxelGrid::sum() const {
    double total = 0.0;
    for (double v : values) total += v;
    return total;
}

double VoxelGrid::max_value() const {
    double best = 0.0;
    for (double v : values) best = std::max(best, v);
    return best;
}

void VoxelGrid::validate() const {
    if (dims[0] < 1 || dims[1] < 1 || dims[2] < 1) throw Error("voxel grid dims must be >= 1");
    if (!(voxel_size > 0.0) || !std::isfinite(voxel_size))
        throw Error("voxel size must be positive and finite");
    if (values.size() != static_cast<std::size_t>(dims[0]) * dims[1] * dims[2])
        throw Error("voxel value count does not match dims");
    for (double v : values)
        if (!std::isfinite(v) || v < 0.0) throw Error("voxel values must be finite and >= 0");
}

VoxelGrid voxelize(const FixationCloud3D& cloud, const std::array<int, 3>& dims,
                   const Point3& origin, double voxel_size) {
    cloud.validate();
    VoxelGrid grid = VoxelGrid::zeros(dims, origin, voxel_size);
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const Point3& p = cloud.points[i];
        int cell[3];
        for (int axis = 0; axis < 3; ++axis) {
            // floor puts a boundary point into the higher-index voxel.
            const double f = std::floor((p[axis] - origin[axis]) / voxel_size);
            if (f < 0.0 || f >= dims[axis]) {
                std::ostringstream msg;
                msg << "fixation outside voxel grid: point (" << p.x << ", " << p.y << ", "
                    << p.z << ")";
                throw Error(msg.str());
            }
            cell[axis] = static_cast<int>(f);
        }
        grid.values[grid.index(cell[0], cell[1], cell[2])] += cloud.weights[i];
    }
    return grid;
}

namespace {

std::vector<double> gaussian_kernel(double sigma, int radius) {
    std::vector<double> w(radius + 1); // w[j] for offsets 0..radius
    double sum = 0.0;
    for (int j = -radius; j <= radius; ++j) sum += std::exp(-0.5 * j * j / (sigma * sigma));
    for (int j = 0; j <= radius; ++j) w[j] = std::exp(-0.5 * j * j / (sigma * sigma)) / sum;
    return w;
}

// One separable pass along `axis`. The symmetric pairing w0*x[i] +
// sum_j w[j]*(x[i-j] + x[i+j]) makes the result exactly mirror-invariant.
void blur_axis(const VoxelGrid& in, VoxelGrid& out, int axis, const std::vector<double>& w) {
    const int radius = static_cast<int>(w.size()) - 1;
    const int n = in.dims[axis];
    const std::array<int, 3> strides = {1, in.dims[0], in.dims[0] * in.dims[1]};
    const int stride = strides[axis];

    const int u_axis = axis == 0 ? 1 : 0;
    const int v_axis = axis == 2 ? 1 : 2;
    for (int v = 0; v < in.dims[v_axis]; ++v)
        for (int u = 0; u < in.dims[u_axis]; ++u) {
            int coord[3] = {0, 0, 0};
            coord[u_axis] = u;
            coord[v_axis] = v;
            const std::size_t base = in.index(coord[0], coord[1], coord[2]);
            for (int i = 0; i < n; ++i) {
                double acc = w[0] * in.values[base + static_cast<std::size_t>(i) * stride];
                for (int j = 1; j <= radius; ++j) {
                    const double lo =
                        i - j >= 0 ? in.values[base + static_cast<std::size_t>(i - j) * stride]
                                   : 0.0;
                    const double hi =
                        i + j < n ? in.values[base + static_cast<std::size_t>(i + j) * stride]
                                  : 0.0;
                    acc += w[j] * (lo + hi);
                }
                out.values[base + static_cast<std::size_t>(i) * stride] = acc;
            }
        }
}

} // namespace

VoxelGrid gaussian_blur3d(const VoxelGrid& grid, double sigma_voxels) {
    grid.validate();
    if (!(sigma_voxels > 0.0) || !std::isfinite(sigma_voxels))
        throw Error("blur sigma must be positive and finite");
    const int radius = static_cast<int>(std::ceil(3.0 * sigma_voxels));
    const std::vector<double> w = gaussian_kernel(sigma_voxels, radius);

    VoxelGrid a = grid;
    VoxelGrid b = VoxelGrid::zeros(grid.dims, grid.origin, grid.voxel_size);
    blur_axis(a, b, 0, w);
    blur_axis(b, a, 1, w);
    blur_axis(a, b, 2, w);
    return b;
}

VoxelGrid normalize(const VoxelGrid& grid) {
    grid.validate();
    const double total = grid.sum();
    if (!(total > 0.0)) throw Error("empty saliency map");
    VoxelGrid out = grid;
    for (double& v : out.values) v /= total;
    return out;
}

void ColormapSpec::validate() const {
    if (anchors.size() < 2) throw Error("colormap needs at least two anchors");
    if (anchors.front().position != 0.0 || anchors.back().position != 1.0)
        throw Error("colormap anchors must start at 0 and end at 1");
    for (std::size_t i = 1; i < anchors.size(); ++i)
        if (!(anchors[i].position > anchors[i - 1].position))
            throw Error("colormap anchor positions must be strictly increasing");
    for (const Anchor& a : anchors)
        for (double c : a.color)
            if (!(c >= 0.0 && c <= 1.0)) throw Error("colormap colors must lie in [0, 1]");
}

std::array<double, 3> ColormapSpec::sample(double t) const {
    t = std::min(std::max(t, 0.0), 1.0);
    std::size_t hi = 1;
    while (hi + 1 < anchors.size() && anchors[hi].position < t) ++hi;
    const Anchor& a = anchors[hi - 1];
    const Anchor& b = anchors[hi];
    const double u = (t - a.position) / (b.position - a.position);
    return {a.color[0] + (b.color[0] - a.color[0]) * u,
            a.color[1] + (b.color[1] - a.color[1]) * u,
            a.color[2] + (b.color[2] - a.color[2]) * u};
}

ColormapSpec default_colormap() {
    // Viridis-style ramp, five anchors.
    return {{{0.00, {0.267, 0.005, 0.329}},
             {0.25, {0.229, 0.322, 0.546}},
             {0.50, {0.127, 0.566, 0.551}},
             {0.75, {0.369, 0.789, 0.383}},
             {1.00, {0.993, 0.906, 0.144}}}};
}

SurfaceMesh colorize_mesh(const SurfaceMesh& mesh, const VoxelGrid& grid,
                          const ColormapSpec& colormap) {
    mesh.validate();
    grid.validate();
    colormap.validate();
    const double vmax = grid.max_value();

    SurfaceMesh out = mesh;
    out.vertex_colors.resize(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Point3& p = mesh.vertices[i];
        int cell[3];
        for (int axis = 0; axis < 3; ++axis) {
            const double f = std::floor((p[axis] - grid.origin[axis]) / grid.voxel_size);
            if (f < 0.0 || f >= grid.dims[axis]) {
                std::ostringstream msg;
                msg << "mesh vertex outside voxel grid: (" << p.x << ", " << p.y << ", " << p.z
                    << ")";
                throw Error(msg.str());
            }
            cell[axis] = static_cast<int>(f);
        }
        const double v = grid.values[grid.index(cell[0], cell[1], cell[2])];
        const double t = vmax > 0.0 ? v / vmax : 0.0;
        out.vertex_colors[i] = colormap.sample(t);
    }
    return out;
}

GridLayout fit_grid(const ScaleSpec& scale, int resolution, double padding) {
    if (resolution < 1) throw Error("grid resolution must be >= 1");
    if (padding < 0.0) throw Error("grid padding must be non-negative");

    std::array<double, 3> padded;
    double longest = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
        padded[axis] = scale.range[axis] * (1.0 + 2.0 * padding);
        longest = std::max(longest, padded[axis]);
    }
    if (longest == 0.0) longest = 1.0; // degenerate scene: fall back to a unit cell

    GridLayout layout;
    layout.voxel_size = longest / resolution;
    for (int axis = 0; axis < 3; ++axis) {
        const int n = std::max(
            1, static_cast<int>(std::ceil(padded[axis] / layout.voxel_size - 1e-9)));
        layout.dims[axis] = n;
        const double center = scale.min[axis] + scale.range[axis] / 2.0;
        layout.origin[axis] = center - n * layout.voxel_size / 2.0;
    }
    return layout;
}

} // namespace gaze3d
