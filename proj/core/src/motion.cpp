#include "motorkit/motion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace motorkit::motion {
namespace {

constexpr double kPi = 3.14159265358979323846;

void check_pose_size(std::size_t pose, std::size_t bones, const char* what) {
  if (pose != bones) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s: pose has %zu entries for %zu bones",
                  what, pose, bones);
    throw std::invalid_argument(buf);
  }
}

// Locate the keyframe bracket for `time`: returns {index, blend} such that
// the pose is interpolated between keyframes[index] and keyframes[index+1]
// with parameter blend (0 at the former). Clamped outside the clip range.
std::pair<std::size_t, double> bracket(const AnimationClip& clip,
                                       double time) {
  const auto& keys = clip.keyframes;
  if (keys.empty()) {
    throw std::invalid_argument("sample_clip: empty clip");
  }
  if (keys.size() == 1 || time <= keys.front().time) return {0, 0.0};
  if (time >= keys.back().time) return {keys.size() - 2, 1.0};
  std::size_t hi = 1;
  while (keys[hi].time < time) ++hi;
  const std::size_t lo = hi - 1;
  const double span = keys[hi].time - keys[lo].time;
  return {lo, (time - keys[lo].time) / span};
}

// s, R, t factors of a uniform-scale rigid matrix; same validation route as
// motor_from_matrix, reused by the quaternion baseline.
struct ScaleRotTrans {
  double s = 1.0;
  geom::Quaternion q;
  geom::Vec3 t;
};

ScaleRotTrans decompose(const geom::Mat4& m) {
  const cga::Motor probe = cga::motor_from_matrix(m);  // validates
  const geom::Mat3 a = m.linear_block();
  ScaleRotTrans out;
  out.s = std::cbrt(a.det());
  out.q = geom::Quaternion::from_rotation_matrix(a * (1.0 / out.s));
  out.t = m.translation();
  (void)probe;
  return out;
}

}  // namespace

void SkinnedMesh::refresh_conformal_cache() {
  rest_conformal.clear();
  rest_conformal.reserve(rest_positions.size());
  for (const geom::Vec3& v : rest_positions) rest_conformal.push_back(cga::up(v));
}

void validate_influences(const SkinnedMesh& mesh, std::size_t bone_count) {
  if (mesh.influences.size() != mesh.rest_positions.size()) {
    throw std::invalid_argument(
        "validate_influences: influence list count differs from vertex count");
  }
  for (std::size_t m = 0; m < mesh.influences.size(); ++m) {
    const auto& set = mesh.influences[m];
    if (set.empty()) {
      throw std::invalid_argument("validate_influences: vertex has no influences");
    }
    double sum = 0.0;
    for (const VertexInfluence& inf : set) {
      if (inf.bone < 0 || static_cast<std::size_t>(inf.bone) >= bone_count) {
        throw std::invalid_argument(
            "validate_influences: bone index out of range");
      }
      if (inf.weight < 0.0) {
        throw std::invalid_argument("validate_influences: negative weight");
      }
      sum += inf.weight;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument(
          "validate_influences: weights do not sum to 1");
    }
  }
}

DeformedFrame skin_lbs(const SkinnedMesh& mesh, const Rig& rig,
                       std::span<const geom::Mat4> pose, double time) {
  check_pose_size(pose.size(), rig.bones.size(), "skin_lbs");
  validate_influences(mesh, rig.bones.size());
  // Per-bone combined transform P_n O_n, computed once.
  std::vector<geom::Mat4> combined;
  combined.reserve(rig.bones.size());
  for (std::size_t n = 0; n < rig.bones.size(); ++n) {
    combined.push_back(pose[n] * rig.bones[n].offset_matrix);
  }
  DeformedFrame out;
  out.time = time;
  out.positions.reserve(mesh.rest_positions.size());
  for (std::size_t m = 0; m < mesh.rest_positions.size(); ++m) {
    const geom::Vec3& v = mesh.rest_positions[m];
    // Blend in homogeneous coordinates; the divide stays explicit so the
    // multivector path can mirror it exactly.
    geom::Vec3 acc{0, 0, 0};
    double acc_w = 0.0;
    for (const VertexInfluence& inf : mesh.influences[m]) {
      const geom::Mat4& mat = combined[inf.bone];
      const geom::Vec3 transformed = mat.linear_block() * v + mat.translation();
      const double hw = mat(3, 0) * v.x + mat(3, 1) * v.y + mat(3, 2) * v.z +
                        mat(3, 3);
      acc = acc + transformed * inf.weight;
      acc_w += hw * inf.weight;
    }
    if (std::abs(acc_w) < 1e-300) {
      throw std::domain_error("skin_lbs: homogeneous weight vanished");
    }
    out.positions.push_back(acc / acc_w);
  }
  return out;
}

DeformedFrame skin_cga(const SkinnedMesh& mesh, const Rig& rig,
                       std::span<const cga::Motor> pose, double time) {
  check_pose_size(pose.size(), rig.bones.size(), "skin_cga");
  validate_influences(mesh, rig.bones.size());
  // K_n = P_n B_n and its inverse, once per bone.
  std::vector<ga::Multivector> fwd, inv;
  fwd.reserve(rig.bones.size());
  inv.reserve(rig.bones.size());
  for (std::size_t n = 0; n < rig.bones.size(); ++n) {
    fwd.push_back(pose[n].mv * rig.bones[n].offset_motor.mv);
    inv.push_back(ga::versor_inverse(fwd.back()));
  }
  const bool cached = mesh.rest_conformal.size() == mesh.rest_positions.size();
  DeformedFrame out;
  out.time = time;
  out.positions.reserve(mesh.rest_positions.size());
  for (std::size_t m = 0; m < mesh.rest_positions.size(); ++m) {
    const ga::Multivector c = cached ? mesh.rest_conformal[m].mv
                                     : cga::up(mesh.rest_positions[m]).mv;
    ga::Multivector acc(ga::conformal);
    for (const VertexInfluence& inf : mesh.influences[m]) {
      acc += (fwd[inf.bone] * c * inv[inf.bone]) * inf.weight;
    }
    out.positions.push_back(cga::down(acc));
  }
  return out;
}

cga::Motor motor_lerp(const cga::Motor& m1, const cga::Motor& m2, double t) {
  ga::Multivector b = m2.mv;
  if (ga::scalar_part(m1.mv * ga::reverse(m2.mv)) < 0.0) b = -b;
  cga::Motor blend{m1.mv * (1.0 - t) + b * t,
                   m1.has_dilation || m2.has_dilation};
  return cga::normalize_motor(blend);
}

std::vector<cga::Motor> sample_clip_motors(const AnimationClip& clip,
                                           double time) {
  const auto [lo, u] = bracket(clip, time);
  const Keyframe& a = clip.keyframes[lo];
  if (u == 0.0) return a.pose_motors;
  const Keyframe& b = clip.keyframes[lo + 1];
  if (u == 1.0) return b.pose_motors;
  std::vector<cga::Motor> out;
  out.reserve(a.pose_motors.size());
  for (std::size_t n = 0; n < a.pose_motors.size(); ++n) {
    out.push_back(motor_lerp(a.pose_motors[n], b.pose_motors[n], u));
  }
  return out;
}

std::vector<geom::Mat4> sample_clip_matrices(const AnimationClip& clip,
                                             double time, MatrixInterp mode) {
  const auto [lo, u] = bracket(clip, time);
  const Keyframe& a = clip.keyframes[lo];
  if (u == 0.0) return a.pose_matrices;
  const Keyframe& b = clip.keyframes[lo + 1];
  if (u == 1.0) return b.pose_matrices;
  std::vector<geom::Mat4> out;
  out.reserve(a.pose_matrices.size());
  for (std::size_t n = 0; n < a.pose_matrices.size(); ++n) {
    geom::Mat4 m = geom::lerp(a.pose_matrices[n], b.pose_matrices[n], u);
    if (mode == MatrixInterp::GramSchmidt) {
      m = geom::Mat4::from_rotation_translation(
          geom::orthonormalized(m.linear_block()), m.translation());
    }
    out.push_back(m);
  }
  return out;
}

std::vector<geom::Mat4> sample_clip_quatvec(const AnimationClip& clip,
                                            double time) {
  const auto [lo, u] = bracket(clip, time);
  const Keyframe& a = clip.keyframes[lo];
  if (u == 0.0) return a.pose_matrices;
  const Keyframe& b = clip.keyframes[lo + 1];
  if (u == 1.0) return b.pose_matrices;
  std::vector<geom::Mat4> out;
  out.reserve(a.pose_matrices.size());
  for (std::size_t n = 0; n < a.pose_matrices.size(); ++n) {
    const ScaleRotTrans fa = decompose(a.pose_matrices[n]);
    const ScaleRotTrans fb = decompose(b.pose_matrices[n]);
    const geom::Quaternion q = geom::slerp(fa.q, fb.q, u);
    const geom::Vec3 t = fa.t * (1.0 - u) + fb.t * u;
    const double s = std::exp((1.0 - u) * std::log(fa.s) + u * std::log(fb.s));
    out.push_back(geom::Mat4::from_rotation_translation(
        q.to_rotation_matrix() * s, t));
  }
  return out;
}

FrameError frame_error(std::span<const geom::Vec3> a,
                       std::span<const geom::Vec3> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("frame_error: size mismatch");
  }
  FrameError out;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = geom::distance(a[i], b[i]);
    sum_sq += d * d;
    out.max = std::max(out.max, d);
  }
  out.rms = a.empty() ? 0.0 : std::sqrt(sum_sq / a.size());
  return out;
}

FrameError frame_error(const DeformedFrame& a, const DeformedFrame& b) {
  return frame_error(std::span<const geom::Vec3>(a.positions),
                     std::span<const geom::Vec3>(b.positions));
}

geom::Mat4 turn_pose_matrix(const TurnTrajectory& traj, double t) {
  const double angle = traj.omega_deg_per_s * (kPi / 180.0) * t;
  const geom::Quaternion q =
      geom::Quaternion::from_axis_angle(traj.axis_dir, angle);
  // Conjugate the rotation to the off-origin pivot: T(p) R T(-p).
  const geom::Vec3 shift = traj.axis_point - q.rotate(traj.axis_point);
  return geom::Mat4::from_rotation_translation(q.to_rotation_matrix(), shift);
}

cga::Motor turn_pose_motor(const TurnTrajectory& traj, double t) {
  const double angle = traj.omega_deg_per_s * (kPi / 180.0) * t;
  return cga::motor_compose(
      {cga::to_motor(cga::translator(traj.axis_point)),
       cga::to_motor(cga::rotor_from_axis_angle(traj.axis_dir, angle)),
       cga::to_motor(cga::translator(-traj.axis_point))});
}

AnimationClip make_turn_clip(const TurnTrajectory& traj, double spacing_deg) {
  if (!(spacing_deg > 0.0) || !(traj.omega_deg_per_s > 0.0) ||
      !(traj.duration_s > 0.0)) {
    throw std::invalid_argument("make_turn_clip: nonpositive parameters");
  }
  const double spacing_s = spacing_deg / traj.omega_deg_per_s;
  AnimationClip clip;
  auto push_key = [&](double t) {
    Keyframe key;
    key.time = t;
    key.pose_matrices.push_back(turn_pose_matrix(traj, t));
    key.pose_motors.push_back(turn_pose_motor(traj, t));
    clip.keyframes.push_back(std::move(key));
  };
  for (std::size_t k = 0;; ++k) {
    const double t = k * spacing_s;
    if (t >= traj.duration_s - 1e-12 * traj.duration_s) break;
    push_key(t);
  }
  push_key(traj.duration_s);  // endpoint always present, exactly
  return clip;
}

std::vector<geom::Vec3> default_turn_probes() {
  return {{0.0, 0.0, 0.0},
          {1.0, 0.0, 0.0},
          {0.0, 1.0, 0.5},
          {-0.5, 0.4, -0.3}};
}

InterpSweepResult evaluate_turn_interpolation(
    const TurnTrajectory& traj, double spacing_deg, InterpMethod method,
    double eval_hz, std::span<const geom::Vec3> probes) {
  if (!(eval_hz > 0.0)) {
    throw std::invalid_argument("evaluate_turn_interpolation: eval_hz <= 0");
  }
  const AnimationClip clip = make_turn_clip(traj, spacing_deg);

  // One-bone rig with identity offset; probes are single-influence vertices,
  // so the comparison exercises the real skinning paths end to end.
  Rig rig;
  rig.bones.push_back(Bone{"pivot", -1, geom::Mat4::identity(),
                           cga::Motor::identity()});
  SkinnedMesh mesh;
  mesh.rest_positions.assign(probes.begin(), probes.end());
  mesh.influences.assign(probes.size(), {VertexInfluence{0, 1.0}});
  mesh.refresh_conformal_cache();

  InterpSweepResult result;
  double sum_sq = 0.0;
  std::size_t count = 0;
  const std::size_t steps =
      static_cast<std::size_t>(std::llround(traj.duration_s * eval_hz));
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) / eval_hz;
    DeformedFrame frame;
    geom::Vec3 bone_origin;
    if (method == InterpMethod::Motor) {
      const auto pose = sample_clip_motors(clip, t);
      frame = skin_cga(mesh, rig, pose, t);
      bone_origin = cga::apply_to_point(pose[0], {0, 0, 0});
    } else if (method == InterpMethod::QuatVec) {
      const auto pose = sample_clip_quatvec(clip, t);
      frame = skin_lbs(mesh, rig, pose, t);
      bone_origin = pose[0].transform_point({0, 0, 0});
    } else {
      const auto mode = method == InterpMethod::MatrixRaw
                            ? MatrixInterp::Raw
                            : MatrixInterp::GramSchmidt;
      const auto pose = sample_clip_matrices(clip, t, mode);
      frame = skin_lbs(mesh, rig, pose, t);
      bone_origin = pose[0].transform_point({0, 0, 0});
    }

    const geom::Mat4 truth_pose = turn_pose_matrix(traj, t);
    InterpSample sample;
    sample.time = t;
    double frame_sq = 0.0;
    for (std::size_t m = 0; m < mesh.rest_positions.size(); ++m) {
      const geom::Vec3 truth = truth_pose.transform_point(mesh.rest_positions[m]);
      const double d = geom::distance(frame.positions[m], truth);
      frame_sq += d * d;
      sample.max = std::max(sample.max, d);
      result.max = std::max(result.max, d);
      sum_sq += d * d;
      ++count;
      // Distance to the interpolated bone origin must hold at its rest value
      // under any rigid reconstruction.
      const double rest_dist = mesh.rest_positions[m].norm();
      const double now_dist = geom::distance(frame.positions[m], bone_origin);
      result.bone_drift_max =
          std::max(result.bone_drift_max, std::abs(now_dist - rest_dist));
    }
    sample.rms = std::sqrt(frame_sq / mesh.rest_positions.size());
    result.samples.push_back(sample);
  }
  result.rms = count ? std::sqrt(sum_sq / count) : 0.0;
  return result;
}

}  // namespace motorkit::motion
