#include "gaze3d/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace gaze3d {

WssResult wss(const FixationCloud3D& cloud) {
    cloud.validate();
    if (cloud.empty()) throw Error("no fixations");

    double total_weight = 0.0;
    Vec3 weighted_sum;
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        total_weight += cloud.weights[i];
        weighted_sum += cloud.points[i] * cloud.weights[i];
    }
    const Point3 centroid = weighted_sum / total_weight;

    Vec3 var;
    double sq_dist_sum = 0.0;
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const Vec3 d = cloud.points[i] - centroid;
        const double w = cloud.weights[i];
        var += Vec3 {d.x * d.x, d.y * d.y, d.z * d.z} * w;
        sq_dist_sum += w * dot(d, d);
    }
    var = var / total_weight;

    WssResult result;
    result.mean_wss = sq_dist_sum / total_weight;
    result.var_x = var.x;
    result.var_y = var.y;
    result.var_z = var.z;
    result.centroid = centroid;

    // The two routes must agree; disagreement means a numerics bug.
    const double via_vars = var.x + var.y + var.z;
    const double tol = 1e-9 * std::max(1.0, std::abs(result.mean_wss));
    if (std::abs(result.mean_wss - via_vars) > tol)
        throw Error("internal error: mean WSS does not match the variance sum");
    return result;
}

MapStats map_stats(const VoxelGrid& grid) {
    grid.validate();
    MapStats stats;
    stats.max = grid.max_value();
    stats.mean = grid.values.empty() ? 0.0 : grid.sum() / grid.values.size();
    return stats;
}

namespace {

void require_same_dims(const VoxelGrid& a, const VoxelGrid& b) {
    if (a.dims != b.dims) {
        std::ostringstream msg;
        msg << "voxel grid dims mismatch: " << a.dims[0] << "x" << a.dims[1] << "x" << a.dims[2]
            << " vs " << b.dims[0] << "x" << b.dims[1] << "x" << b.dims[2];
        throw Error(msg.str());
    }
}

} // namespace

double cc(const VoxelGrid& a, const VoxelGrid& b) {
    a.validate();
    b.validate();
    require_same_dims(a, b);

    const std::size_t n = a.values.size();
    double mean_a = 0.0, mean_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_a += a.values[i];
        mean_b += b.values[i];
    }
    mean_a /= n;
    mean_b /= n;

    double cov = 0.0, var_a = 0.0, var_b = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a.values[i] - mean_a;
        const double db = b.values[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0)
        throw Error("constant map has undefined correlation");
    return cov / std::sqrt(var_a * var_b);
}

double sim(const VoxelGrid& a, const VoxelGrid& b) {
    a.validate();
    b.validate();
    require_same_dims(a, b);

    const double sum_a = a.sum();
    const double sum_b = b.sum();
    if (!(sum_a > 0.0) || !(sum_b > 0.0))
        throw Error("histogram intersection requires maps with positive mass");

    double intersection = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        intersection += std::min(a.values[i] / sum_a, b.values[i] / sum_b);
    return intersection;
}

RegionReport region_fractions(const FixationCloud3D& cloud, const SurfaceMesh& mesh,
                              double max_dist) {
    cloud.validate();
    mesh.validate();
    if (!mesh.has_region_labels()) throw Error("mesh carries no region labels");
    if (!(max_dist > 0.0)) throw Error("region assignment cutoff must be positive");

    RegionReport report;
    std::map<int, double> weight_per_label;
    double assigned_weight = 0.0;
    const double max_sq = max_dist * max_dist;

    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const Point3& p = cloud.points[i];
        double best_sq = std::numeric_limits<double>::infinity();
        std::size_t best_vertex = 0;
        for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
            const Vec3 d = mesh.vertices[v] - p;
            const double sq = dot(d, d);
            if (sq < best_sq) {
                best_sq = sq;
                best_vertex = v;
            }
        }
        if (best_sq > max_sq) {
            ++report.unassigned_count;
            continue;
        }
        weight_per_label[mesh.region_labels[best_vertex]] += cloud.weights[i];
        assigned_weight += cloud.weights[i];
    }

    if (assigned_weight > 0.0)
        for (const auto& [label, weight] : weight_per_label)
            report.fractions[label] = weight / assigned_weight;
    return report;
}

double default_region_max_dist(const ScaleSpec& scale) { return 0.05 * scale.diagonal(); }

double wss_diff(const FixationCloud3D& a, const FixationCloud3D& b) {
    return wss(a).mean_wss - wss(b).mean_wss;
}

} // namespace gaze3d
