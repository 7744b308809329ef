#pragma once
#include <string>

#include "motorkit/mesh_cut.hpp"
#include "motorkit/motion.hpp"

namespace motorkit::scene {

// A skinned scene bundles the triangle mesh, the rig it is bound to, and an
// animation clip. Matrices are the single source of truth on disk; motors
// are derived when a scene is loaded or built.
struct Scene {
  meshops::TriMesh mesh;
  motion::Rig rig;
  motion::AnimationClip clip;
};

// Structural checks shared by loaders and builders: mesh validity, bone
// parents appearing before their children, strictly increasing keyframe
// times, per-keyframe pose counts matching the rig, and motor/matrix
// agreement on probe points within 1e-9. Throws std::invalid_argument.
void validate_scene(const Scene& s);

// JSON layout (all matrices 16 numbers, column-major):
// {
//   "mesh": {
//     "vertices":  [[x, y, z], ...],
//     "triangles": [[a, b, c], ...],
//     "weights":   [[[bone, weight], ...], ...]   // per vertex, 1..4 pairs
//   },
//   "rig":  { "bones": [{"name", "parent", "offset"}, ...] },
//   "keyframes": [{"time", "pose": [[...], ...]}, ...]
// }
Scene load_scene_json(const std::string& text);
std::string save_scene_json(const Scene& s);

Scene load_scene_file(const std::string& path);
void save_scene_file(const Scene& s, const std::string& path);

// Canonical fixtures.
//
// Two-bone cylinder: radius 0.25, axis z in [0, 2], 12 angular segments x 9
// rings (open tube). Bone 0 at the origin, bone 1 bound at z = 1 (offset
// translates by -1 along z). Weights blend from bone 0 to bone 1 by a
// smoothstep over z in [0.8, 1.2]. Three keyframes: rest at t = 0, a 90
// degree elbow bend of bone 1 about x at t = 1, and a combined root motion
// (translate x by 0.5, yaw 45 degrees) with a -45 degree elbow at t = 2.
Scene make_two_bone_cylinder_scene();

// Unit cube [0,1]^3, 12 triangles wound outward, rigidly bound to a single
// bone with an identity rest keyframe.
Scene make_unit_cube_scene();

}  // namespace motorkit::scene
