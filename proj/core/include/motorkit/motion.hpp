#pragma once
#include <span>
#include <string>
#include <vector>

#include "motorkit/conformal.hpp"
#include "motorkit/geom.hpp"

namespace motorkit::motion {

// One bone of a rig. `offset` is the bind-pose inverse (it carries a rest
// vertex into bone-local coordinates); matrix and motor forms are kept in
// lockstep and must agree in action. `parent` is informational hierarchy
// (poses in clips are model-space finals); -1 marks a root.
struct Bone {
  std::string name;
  int parent = -1;
  geom::Mat4 offset_matrix = geom::Mat4::identity();
  cga::Motor offset_motor = cga::Motor::identity();
};

struct Rig {
  std::vector<Bone> bones;
};

struct VertexInfluence {
  int bone = 0;
  double weight = 0.0;
};

// Rest geometry plus per-vertex bone influences. The conformal twins of the
// rest positions are cached so the multivector skinning path does not
// re-embed every frame.
struct SkinnedMesh {
  std::vector<geom::Vec3> rest_positions;
  std::vector<std::vector<VertexInfluence>> influences;
  std::vector<cga::ConformalPoint> rest_conformal;

  void refresh_conformal_cache();
};

// Per-bone model-space pose at one instant, stored in both formalisms.
struct Keyframe {
  double time = 0.0;
  std::vector<geom::Mat4> pose_matrices;
  std::vector<cga::Motor> pose_motors;
};

struct AnimationClip {
  std::vector<Keyframe> keyframes;  // strictly increasing times
};

struct DeformedFrame {
  double time = 0.0;
  std::vector<geom::Vec3> positions;
};

// Throws std::invalid_argument when influences are malformed: empty
// influence set, bone index out of range, negative weight, or weight sum off
// unity by more than 1e-9.
void validate_influences(const SkinnedMesh& mesh, std::size_t bone_count);

// Classic linear blend skinning: v' = sum_n w_n (P_n O_n) v in homogeneous
// coordinates, with the divide made explicit at the end.
DeformedFrame skin_lbs(const SkinnedMesh& mesh, const Rig& rig,
                       std::span<const geom::Mat4> pose, double time = 0.0);

// Multivector skinning: blend the sandwiched conformal points
// sum_n w_n (P_n B_n) c (P_n B_n)^-1 and divide out the e_o weight in
// down(). Agrees with skin_lbs wherever the pose motors match the pose
// matrices.
DeformedFrame skin_cga(const SkinnedMesh& mesh, const Rig& rig,
                       std::span<const cga::Motor> pose, double time = 0.0);

// Hemisphere-aligned linear blend of motor coefficients, renormalized:
// normalize((1-t) M1 + t M2), with M2 negated first when <M1 ~M2>_0 < 0 so
// the blend takes the short arc of the double cover. The sign flip keeps the
// blend norm away from zero for unit inputs; std::domain_error is still
// thrown when a degenerate (near-zero) operand collapses the blend.
cga::Motor motor_lerp(const cga::Motor& m1, const cga::Motor& m2, double t);

// Matrix-pose interpolation flavors used as baselines against motor_lerp.
// Raw is the naive entrywise LERP; GramSchmidt additionally re-orthonormalizes
// the rotation block afterwards.
enum class MatrixInterp { Raw, GramSchmidt };

// Clip sampling. Times clamp to the clip range; keyframe times reproduce the
// stored pose exactly. Throws std::invalid_argument on an empty clip.
std::vector<cga::Motor> sample_clip_motors(const AnimationClip& clip,
                                           double time);
std::vector<geom::Mat4> sample_clip_matrices(const AnimationClip& clip,
                                             double time, MatrixInterp mode);
// Quaternion-SLERP + translation-LERP baseline (uniform scale, when present,
// interpolates log-linearly).
std::vector<geom::Mat4> sample_clip_quatvec(const AnimationClip& clip,
                                            double time);

struct FrameError {
  double rms = 0.0;
  double max = 0.0;
};

// Pointwise Euclidean comparison; throws std::invalid_argument on size
// mismatch.
FrameError frame_error(std::span<const geom::Vec3> a,
                       std::span<const geom::Vec3> b);
FrameError frame_error(const DeformedFrame& a, const DeformedFrame& b);

// ---------------------------------------------------------------------------
// Canonical turn trajectory: rigid rotation about an axis that does NOT pass
// through the origin (an on-axis pivot would make the quaternion baseline
// trivially exact and the comparison meaningless). Pose(t) is rotation by
// omega*t about the line through axis_point along axis_dir.
struct TurnTrajectory {
  geom::Vec3 axis_point{0.6, 0.0, 0.0};
  geom::Vec3 axis_dir{0.0, 0.0, 1.0};
  double omega_deg_per_s = 90.0;
  double duration_s = 4.0;  // one full revolution at the default rate
};

geom::Mat4 turn_pose_matrix(const TurnTrajectory& traj, double t);
cga::Motor turn_pose_motor(const TurnTrajectory& traj, double t);

// Keyframes every `spacing_deg` of turn angle (endpoints included), each
// carrying the exact pose in both forms.
AnimationClip make_turn_clip(const TurnTrajectory& traj, double spacing_deg);

enum class InterpMethod { Motor, QuatVec, MatrixRaw, MatrixGS };

struct InterpSample {
  double time = 0.0;
  double rms = 0.0;
  double max = 0.0;
};

struct InterpSweepResult {
  std::vector<InterpSample> samples;  // per evaluation instant
  double rms = 0.0;                   // over all instants and probes
  double max = 0.0;
  // Worst drift of probe-to-bone-origin distance across the sweep; rigid
  // interpolation keeps this at rounding level.
  double bone_drift_max = 0.0;
};

// Reconstruct the turn trajectory from sparse keyframes with one method and
// measure deviation from the dense analytic ground truth on a set of probe
// points (single-influence vertices of a one-bone rig, run through the real
// skinning path). eval_hz samples per second, endpoints inclusive.
InterpSweepResult evaluate_turn_interpolation(
    const TurnTrajectory& traj, double spacing_deg, InterpMethod method,
    double eval_hz, std::span<const geom::Vec3> probes);

// The probe set used by the bundled comparison (a handful of points at
// different radii from the turn axis).
std::vector<geom::Vec3> default_turn_probes();

}  // namespace motorkit::motion
