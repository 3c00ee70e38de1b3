#pragma once

#include "gaze3d/coordmap.hpp"
#include "gaze3d/geometry.hpp"
#include "gaze3d/projection.hpp"

#include <array>
#include <vector>

namespace gaze3d {

// Regular grid of cubic voxels. values run x-fastest (index = x + nx*(y +
// ny*z)); the grid volume is exactly dims * voxel_size per axis, anchored
// at origin.
struct VoxelGrid {
    std::array<int, 3> dims {1, 1, 1};
    Point3 origin;
    double voxel_size = 1.0;
    std::vector<double> values;

    static VoxelGrid zeros(const std::array<int, 3>& dims, const Point3& origin,
                           double voxel_size);

    std::size_t index(int x, int y, int z) const {
        return static_cast<std::size_t>(x) +
               static_cast<std::size_t>(dims[0]) *
                   (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims[1]) * z);
    }
    std::size_t voxel_count() const { return values.size(); }
    double sum() const;
    double max_value() const;

    void validate() const; // dims >= 1, voxel_size > 0, finite non-negative values
};

// Bins each cloud point into the voxel containing it, adding the point's
// weight. Points exactly on a voxel boundary belong to the higher-index
// voxel. A point outside the grid volume is an error naming the point.
VoxelGrid voxelize(const FixationCloud3D& cloud, const std::array<int, 3>& dims,
                   const Point3& origin, double voxel_size);

// Separable convolution with a discrete Gaussian truncated at radius
// ceil(3*sigma), each 1D kernel normalized to sum 1. Values beyond the grid
// are treated as zero, so mass is conserved whenever the blurred support
// stays inside the grid. Output dims equal input dims.
VoxelGrid gaussian_blur3d(const VoxelGrid& grid, double sigma_voxels);

// Divides by the total sum so the grid becomes a probability map. Throws
// "empty saliency map" on an all-zero grid.
VoxelGrid normalize(const VoxelGrid& grid);

// Piecewise-linear colormap over [0, 1].
struct ColormapSpec {
    struct Anchor {
        double position;               // in [0, 1], strictly increasing
        std::array<double, 3> color;   // RGB in [0, 1]
    };
    std::vector<Anchor> anchors;

    void validate() const; // first anchor at 0, last at 1, strictly increasing
    std::array<double, 3> sample(double t) const;
};

ColormapSpec default_colormap(); // perceptually ordered dark-to-bright ramp

// Colors each vertex by its containing voxel's value, rescaled by the grid
// maximum to [0, 1] for display. An all-zero grid maps every vertex to
// colormap(0); a vertex outside the grid volume is an error.
SurfaceMesh colorize_mesh(const SurfaceMesh& mesh, const VoxelGrid& grid,
                          const ColormapSpec& colormap);

// Grid layout covering the scale volume with a padding fraction per side,
// using cubic voxels sized so the longest padded axis spans `resolution`
// voxels. Shorter axes get proportionally fewer voxels (at least 1).
struct GridLayout {
    std::array<int, 3> dims {1, 1, 1};
    Point3 origin;
    double voxel_size = 1.0;
};
GridLayout fit_grid(const ScaleSpec& scale, int resolution, double padding);

} // namespace gaze3d
