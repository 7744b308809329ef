#pragma once
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "motorkit/motion.hpp"
#include "motorkit/wire.hpp"

// Discrete-event transform-sync simulator: a server samples an object's
// trajectory at a fixed rate, serializes each sample under one wire encoding,
// a lossy link delays/drops the packets, and a client reconstructs the pose
// stream behind an interpolation delay. Everything is single-threaded and
// driven by simulated timestamps, so identical inputs give identical outputs
// byte for byte.

namespace motorkit::net {

// Link model: fixed one-way latency plus uniform jitter drawn from
// [-jitter_s, +jitter_s], and i.i.d. Bernoulli drops. All randomness comes
// from one mt19937_64 seeded with `seed`.
struct NetworkModel {
  double latency_s = 0.0;
  double jitter_s = 0.0;
  double drop = 0.0;
  std::uint64_t seed = 0;
};

// One transmitted stream: encoding, send rate, and the client's
// interpolation delay. A negative delay selects the default of two send
// intervals; the resolved delay must be at least one send interval.
struct StreamConfig {
  Encoding encoding = Encoding::Motor8;
  double rate_hz = 20.0;
  double delay_s = -1.0;
};

// The interpolation delay a config resolves to. Throws std::invalid_argument
// when rate_hz <= 0 or the resolved delay is below one send interval.
double resolved_delay(const StreamConfig& config);

struct SentPacket {
  double send_time = 0.0;
  std::vector<std::uint8_t> bytes;
};

struct DeliveredPacket {
  double arrival_time = 0.0;
  std::vector<std::uint8_t> bytes;
};

// Rigid-motion trajectories the server can stream. All kinds are defined for
// every time; spline and sampled kinds clamp outside their knot span.
class Trajectory {
 public:
  enum class Kind { Orbit, ConstantVelocity, Spline, Sampled };

  // Rotation at a constant angular rate about the line through axis_point
  // along axis_dir.
  static Trajectory orbit(const geom::Vec3& axis_point,
                          const geom::Vec3& axis_dir, double omega_deg_per_s);
  // Pure translation at a constant velocity.
  static Trajectory constant_velocity(const geom::Vec3& velocity);
  // Centripetal-free Catmull-Rom position spline through `points` with
  // uniform knots `knot_spacing_s` apart and clamped ends; identity rotation.
  // Needs at least two points.
  static Trajectory spline(std::vector<geom::Vec3> points,
                           double knot_spacing_s);
  // Keyframed poses at strictly increasing times, blended with motor_lerp.
  static Trajectory sampled(std::vector<double> times,
                            std::vector<geom::Mat4> poses);

  Kind kind() const { return kind_; }
  cga::Motor motor_at(double t) const;
  PoseSample sample(double t, std::uint32_t object_id) const;

  // Parameter accessors for serialization.
  const motion::TurnTrajectory& orbit_params() const { return orbit_; }
  const geom::Vec3& velocity() const { return velocity_; }
  const std::vector<geom::Vec3>& spline_points() const { return points_; }
  double knot_spacing_s() const { return knot_spacing_s_; }
  const motion::AnimationClip& sampled_clip() const { return clip_; }

 private:
  Trajectory() = default;

  Kind kind_ = Kind::ConstantVelocity;
  motion::TurnTrajectory orbit_{};
  geom::Vec3 velocity_{};
  std::vector<geom::Vec3> points_;
  double knot_spacing_s_ = 1.0;
  motion::AnimationClip clip_;
};

// A full experiment: one object on one trajectory, one link, several streams
// evaluated side by side. ground_truth_rate_hz is the client render rate and
// the rate at which reconstruction error is measured; probes are the points
// (in object space) the error is measured on. Empty probes fall back to
// default_probes().
struct Scenario {
  std::uint32_t object_id = 1;
  double duration_s = 10.0;
  double ground_truth_rate_hz = 240.0;
  Trajectory trajectory = Trajectory::constant_velocity({0.0, 0.0, 0.0});
  NetworkModel network;
  std::vector<StreamConfig> streams;
  std::vector<geom::Vec3> probes;
};

std::vector<geom::Vec3> default_probes();

// JSON layout:
// {
//   "object_id": 1, "duration_s": 10.0, "ground_truth_rate_hz": 240.0,
//   "trajectory": {"kind": "orbit", "axis_point": [x,y,z],
//                  "axis_dir": [x,y,z], "omega_deg_per_s": 90.0}
//     | {"kind": "constant_velocity", "velocity": [x,y,z]}
//     | {"kind": "spline", "points": [[x,y,z], ...], "knot_spacing_s": 1.0}
//     | {"kind": "sampled", "times": [...], "poses": [[16 col-major], ...]}
//   "network": {"latency_s": 0.05, "jitter_s": 0.01, "drop": 0.01,
//               "seed": 42},
//   "streams": [{"encoding": "Motor8", "rate_hz": 20.0, "delay_s": 0.1},
//               ...],
//   "probes": [[x,y,z], ...]
// }
// Loaders throw std::invalid_argument on malformed input; save -> load is
// lossless and save is byte-deterministic.
Scenario load_scenario_json(const std::string& text);
std::string save_scenario_json(const Scenario& scenario);
Scenario load_scenario_file(const std::string& path);
void save_scenario_file(const Scenario& scenario, const std::string& path);

// Bundled experiment: a quarter-turn-per-second orbit about the vertical
// line through (0.6, 0, 0) on a 50 ms / 10 ms-jitter / 1 %-loss link,
// streamed as Motor8@20, Matrix16@30, QuatVec7@30, and QuatVec7@20.
Scenario make_orbit_scenario();

// Serialize trajectory samples at k / rate_hz for k = 0..floor(duration *
// rate_hz), sequence numbers contiguous from 0. One second at 20 Hz gives 21
// packets (both endpoints included).
std::vector<SentPacket> server_stream(const Trajectory& trajectory,
                                      std::uint32_t object_id,
                                      double duration_s,
                                      const StreamConfig& config);

// Pass packets through the link. Per packet, in send order: one uniform draw
// decides the drop, and surviving packets draw one jitter value; arrival is
// send_time + max(0, latency + jitter). The returned log keeps send order,
// which is not necessarily arrival order.
std::vector<DeliveredPacket> simulate_network(
    std::span<const SentPacket> packets, const NetworkModel& model);

struct RenderedFrame {
  double render_time = 0.0;
  double target_time = 0.0;  // render_time - delay, clamped to the stream span
  geom::Mat4 transform = geom::Mat4::identity();
  bool starved = false;  // buffer held nothing at or beyond the target
};

struct ReconstructionResult {
  std::vector<RenderedFrame> frames;
  // Largest || A^T A - I ||_F of the blended linear block before
  // re-orthonormalization; meaningful for Matrix16 streams, 0 otherwise.
  double max_ortho_departure = 0.0;
  std::size_t packets_kept = 0;
  std::size_t packets_discarded = 0;  // reordered beyond the newest buffered
  std::size_t starved_frames = 0;
};

// Replay a delivery log. Packets are processed in arrival order; a packet
// whose timestamp is older than the newest buffered update is discarded.
// Each render tick t in [0, duration] targets t - delay (clamped to the
// sampled span) and blends the two buffered updates bracketing the target:
// Motor8 by motor blending, QuatVec7 by slerp + vector lerp, Matrix16 by
// entrywise lerp followed by re-orthonormalization. A target outside the
// buffered range holds the nearest update; an empty buffer renders identity.
// Malformed or mixed-encoding payloads throw std::invalid_argument.
ReconstructionResult client_reconstruct(
    std::span<const DeliveredPacket> packets, const StreamConfig& config,
    double duration_s, double render_rate_hz);

// One stream's cost and fidelity. Bandwidth counts transmitted packets with
// send_time in the half-open [0, duration), so lossless payload bandwidth is
// exactly rate_hz * payload_bytes. Error compares the reconstruction at each
// render tick against the trajectory pose at the same (delay-compensated)
// target time, over the probe points.
struct BandwidthReport {
  std::string encoding;
  double rate_hz = 0.0;
  double payload_bytes_per_s = 0.0;
  double total_bytes_per_s = 0.0;
  double rms_error = 0.0;
  double max_error = 0.0;
};

std::vector<BandwidthReport> run_comparison(const Scenario& scenario);

// CSV with header
// encoding,rate_hz,payload_bytes_per_s,total_bytes_per_s,rms_error,max_error
// and one row per report, numbers printed with %.17g (byte-deterministic).
std::string report_csv(std::span<const BandwidthReport> reports);

}  // namespace motorkit::net
