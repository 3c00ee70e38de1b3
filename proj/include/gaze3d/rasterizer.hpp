#pragma once

#include "gaze3d/coordmap.hpp"
#include "gaze3d/geometry.hpp"

#include <vector>

namespace gaze3d {

// One animation frame: the rigid pose of the model when it was shown.
struct FrameSpec {
    int frame_index = 0;
    RigidTransform model_transform;
};

enum class RotationMotion { linear, sinusoidal };

// Z-axis rotation sweep from -full_angle/2 to +full_angle/2 across n_frames.
// linear spaces angles evenly; sinusoidal eases in and out (slow at the
// endpoints, fastest mid-sweep). A single frame gets angle 0.
std::vector<FrameSpec> make_rotation_schedule(double full_angle_deg, int n_frames,
                                              RotationMotion motion);

// Z-buffered rasterization of the mesh under the frame's pose. Every covered
// pixel stores the encoding of the OBJECT-SPACE surface point (pre-transform
// coordinates, so all frames of an animation share one coordinate system);
// the depth test runs on camera-space geometry. A pixel is covered when its
// center lies inside a triangle; shared edges follow a top-left fill rule.
// Throws "scale volume too small" when scale does not cover the mesh bounds.
CoordinateMap rasterize_coordmap(const SurfaceMesh& mesh, const Camera& camera,
                                 const FrameSpec& frame, const ScaleSpec& scale);

// One map per frame, all sharing the same scale.
std::vector<CoordinateMap> rasterize_animation(const SurfaceMesh& mesh, const Camera& camera,
                                               const std::vector<FrameSpec>& frames,
                                               const ScaleSpec& scale);

} // namespace gaze3d
