#pragma once

#include "gaze3d/geometry.hpp"
#include "gaze3d/projection.hpp"
#include "gaze3d/saliency.hpp"

#include <cstddef>
#include <map>

namespace gaze3d {

// Compactness and density descriptors of one fixation distribution.
// mean_wss is the mean squared distance to the weighted centroid and always
// equals var_x + var_y + var_z (population variances) up to round-off.
struct DistributionReport {
    double mean_wss = 0.0;
    double var_x = 0.0;
    double var_y = 0.0;
    double var_z = 0.0;
    double map_max = 0.0;
    double map_mean = 0.0;
    std::size_t n_fixations = 0;
};

struct SimilarityReport {
    double cc = 0.0;       // Pearson correlation, [-1, 1]
    double sim = 0.0;      // histogram intersection of sum-normalized maps, [0, 1]
    double wss_diff = 0.0; // mean_wss(a) - mean_wss(b)
};

// Share of fixation weight assigned to each region label, over assigned
// fixations only. Fixations farther than the cutoff from every labeled
// vertex are counted in unassigned_count and excluded from the fractions.
struct RegionReport {
    std::map<int, double> fractions;
    std::size_t unassigned_count = 0;
};

struct WssResult {
    double mean_wss = 0.0;
    double var_x = 0.0;
    double var_y = 0.0;
    double var_z = 0.0;
    Point3 centroid;
};

// Weighted population statistics (division by total weight, not n-1); both
// the direct mean-squared-distance form and the per-axis variance sum are
// computed and cross-checked. Throws "no fixations" on an empty cloud.
WssResult wss(const FixationCloud3D& cloud);

// Max and arithmetic mean over all voxels. Callers pass sum-normalized
// grids; the values are reported as stored.
struct MapStats {
    double max = 0.0;
    double mean = 0.0;
};
MapStats map_stats(const VoxelGrid& grid);

// Pearson correlation over the flattened voxel values. Grids must share
// dims; a constant grid has undefined correlation and is an error.
double cc(const VoxelGrid& a, const VoxelGrid& b);

// Histogram intersection: both grids sum-normalized internally, then
// sum of elementwise minima. Grids must share dims and have positive sums.
double sim(const VoxelGrid& a, const VoxelGrid& b);

// Each fixation takes the label of its nearest mesh vertex when that
// distance is within max_dist. Requires region labels on the mesh.
RegionReport region_fractions(const FixationCloud3D& cloud, const SurfaceMesh& mesh,
                              double max_dist);

// Default assignment cutoff: 5% of the scale volume diagonal.
double default_region_max_dist(const ScaleSpec& scale);

double wss_diff(const FixationCloud3D& a, const FixationCloud3D& b);

} // namespace gaze3d
