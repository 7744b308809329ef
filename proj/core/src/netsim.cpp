#include "motorkit/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace motorkit::net {

namespace {

using json = nlohmann::ordered_json;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

geom::Vec3 vec3_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3 || !j[0].is_number() ||
      !j[1].is_number() || !j[2].is_number()) {
    throw std::invalid_argument(std::string(what) +
                                ": expected an [x, y, z] number triple");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json vec3_to_json(const geom::Vec3& v) { return json::array({v.x, v.y, v.z}); }

geom::Mat4 mat4_from_json(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 16) {
    throw std::invalid_argument(
        std::string(what) + ": expected 16 column-major matrix entries");
  }
  geom::Mat4 m;
  for (int i = 0; i < 16; ++i) {
    if (!j[i].is_number()) {
      throw std::invalid_argument(std::string(what) +
                                  ": matrix entries must be numbers");
    }
    m.m[i] = j[i].get<double>();
  }
  return m;
}

json mat4_to_json(const geom::Mat4& m) {
  json out = json::array();
  for (const double v : m.m) out.push_back(v);
  return out;
}

double number_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw std::invalid_argument(std::string("scenario: missing numeric \"") +
                                key + "\"");
  }
  return j[key].get<double>();
}

// Uniform draw in [0, 1) from the top 53 bits of one engine output; fixed
// here rather than using std::uniform_real_distribution so the stream is
// identical across standard libraries.
double uniform01(std::mt19937_64& gen) {
  return double(gen() >> 11) * 0x1.0p-53;
}

struct BufferedUpdate {
  double timestamp = 0.0;
  PoseSample pose;
};

geom::Mat4 blend_updates(const BufferedUpdate& a, const BufferedUpdate& b,
                         double u, Encoding encoding,
                         double* ortho_departure) {
  switch (encoding) {
    case Encoding::Motor8: {
      const cga::Motor m =
          motion::motor_lerp(a.pose.motor, b.pose.motor, u);
      return cga::matrix_from_motor(m);
    }
    case Encoding::QuatVec7: {
      const geom::Quaternion q = geom::slerp(a.pose.rotation, b.pose.rotation, u);
      const geom::Vec3 t = a.pose.translation * (1.0 - u) +
                           b.pose.translation * u;
      return geom::Mat4::from_rotation_translation(q.to_rotation_matrix(), t);
    }
    case Encoding::Matrix16: {
      const geom::Mat4 blended = geom::lerp(a.pose.matrix, b.pose.matrix, u);
      const geom::Mat3 lin = blended.linear_block();
      const geom::Mat3 gram = lin.transposed() * lin - geom::Mat3::identity();
      *ortho_departure = std::max(*ortho_departure, gram.frobenius_norm());
      return geom::Mat4::from_rotation_translation(geom::orthonormalized(lin),
                                                   blended.translation());
    }
  }
  throw std::invalid_argument("blend_updates: unknown encoding tag");
}

}  // namespace

double resolved_delay(const StreamConfig& config) {
  require(config.rate_hz > 0.0, "stream: rate_hz must be positive");
  const double interval = 1.0 / config.rate_hz;
  const double delay =
      config.delay_s < 0.0 ? 2.0 * interval : config.delay_s;
  if (delay < interval - 1e-12) {
    throw std::invalid_argument(
        "stream: interpolation delay must be at least one send interval");
  }
  return delay;
}

Trajectory Trajectory::orbit(const geom::Vec3& axis_point,
                             const geom::Vec3& axis_dir,
                             double omega_deg_per_s) {
  require(axis_dir.norm() > 0.0, "orbit: axis direction must be non-zero");
  require(std::isfinite(omega_deg_per_s), "orbit: rate must be finite");
  Trajectory t;
  t.kind_ = Kind::Orbit;
  t.orbit_ = {axis_point, axis_dir, omega_deg_per_s, 0.0};
  return t;
}

Trajectory Trajectory::constant_velocity(const geom::Vec3& velocity) {
  require(velocity.is_finite(), "constant_velocity: velocity must be finite");
  Trajectory t;
  t.kind_ = Kind::ConstantVelocity;
  t.velocity_ = velocity;
  return t;
}

Trajectory Trajectory::spline(std::vector<geom::Vec3> points,
                              double knot_spacing_s) {
  require(points.size() >= 2, "spline: need at least two control points");
  require(knot_spacing_s > 0.0, "spline: knot spacing must be positive");
  for (const auto& p : points) {
    require(p.is_finite(), "spline: control points must be finite");
  }
  Trajectory t;
  t.kind_ = Kind::Spline;
  t.points_ = std::move(points);
  t.knot_spacing_s_ = knot_spacing_s;
  return t;
}

Trajectory Trajectory::sampled(std::vector<double> times,
                               std::vector<geom::Mat4> poses) {
  require(!times.empty(), "sampled: need at least one keyframe");
  require(times.size() == poses.size(),
          "sampled: times and poses must pair up");
  for (std::size_t i = 1; i < times.size(); ++i) {
    require(times[i] > times[i - 1],
            "sampled: keyframe times must be strictly increasing");
  }
  Trajectory t;
  t.kind_ = Kind::Sampled;
  for (std::size_t i = 0; i < times.size(); ++i) {
    motion::Keyframe kf;
    kf.time = times[i];
    kf.pose_matrices = {poses[i]};
    kf.pose_motors = {cga::motor_from_matrix(poses[i])};
    t.clip_.keyframes.push_back(std::move(kf));
  }
  return t;
}

cga::Motor Trajectory::motor_at(double t) const {
  switch (kind_) {
    case Kind::Orbit:
      return motion::turn_pose_motor(orbit_, t);
    case Kind::ConstantVelocity:
      return cga::to_motor(cga::translator(velocity_ * t));
    case Kind::Spline: {
      // Clamped uniform Catmull-Rom through points_, identity rotation.
      const auto& p = points_;
      const double span = knot_spacing_s_ * double(p.size() - 1);
      const double s = std::clamp(t, 0.0, span) / knot_spacing_s_;
      const int last_seg = int(p.size()) - 2;
      const int i = std::clamp(int(std::floor(s)), 0, last_seg);
      const double u = std::clamp(s - double(i), 0.0, 1.0);
      const geom::Vec3& p0 = p[std::size_t(std::max(i - 1, 0))];
      const geom::Vec3& p1 = p[std::size_t(i)];
      const geom::Vec3& p2 = p[std::size_t(i + 1)];
      const geom::Vec3& p3 = p[std::min(std::size_t(i + 2), p.size() - 1)];
      const geom::Vec3 pos =
          0.5 * ((2.0 * p1) + (p2 - p0) * u +
                 (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * (u * u) +
                 (3.0 * p1 - p0 - 3.0 * p2 + p3) * (u * u * u));
      return cga::to_motor(cga::translator(pos));
    }
    case Kind::Sampled:
      return motion::sample_clip_motors(clip_, t)[0];
  }
  throw std::logic_error("Trajectory: unknown kind");
}

PoseSample Trajectory::sample(double t, std::uint32_t object_id) const {
  return PoseSample::from_motor(t, object_id, motor_at(t));
}

std::vector<geom::Vec3> default_probes() {
  return {{0.0, 0.0, 0.0}, {0.5, 0.0, 0.0}, {0.0, 0.5, 0.0}, {0.0, 0.0, 0.5}};
}

Scenario load_scenario_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("scenario: JSON parse error: ") +
                                e.what());
  }
  require(doc.is_object(), "scenario: top level must be an object");

  Scenario s;
  const double id = number_field(doc, "object_id");
  require(id >= 0 && id == std::floor(id) && id <= double(UINT32_MAX),
          "scenario: object_id must be an unsigned 32-bit integer");
  s.object_id = std::uint32_t(id);
  s.duration_s = number_field(doc, "duration_s");
  require(s.duration_s > 0.0, "scenario: duration_s must be positive");
  s.ground_truth_rate_hz = number_field(doc, "ground_truth_rate_hz");
  require(s.ground_truth_rate_hz > 0.0,
          "scenario: ground_truth_rate_hz must be positive");

  require(doc.contains("trajectory") && doc["trajectory"].is_object(),
          "scenario: missing \"trajectory\" object");
  const json& tj = doc["trajectory"];
  require(tj.contains("kind") && tj["kind"].is_string(),
          "scenario: trajectory needs a string \"kind\"");
  const std::string kind = tj["kind"].get<std::string>();
  if (kind == "orbit") {
    require(tj.contains("axis_point") && tj.contains("axis_dir"),
            "scenario: orbit needs axis_point and axis_dir");
    s.trajectory = Trajectory::orbit(
        vec3_from_json(tj["axis_point"], "orbit axis_point"),
        vec3_from_json(tj["axis_dir"], "orbit axis_dir"),
        number_field(tj, "omega_deg_per_s"));
  } else if (kind == "constant_velocity") {
    require(tj.contains("velocity"),
            "scenario: constant_velocity needs a velocity");
    s.trajectory = Trajectory::constant_velocity(
        vec3_from_json(tj["velocity"], "velocity"));
  } else if (kind == "spline") {
    require(tj.contains("points") && tj["points"].is_array(),
            "scenario: spline needs a points array");
    std::vector<geom::Vec3> pts;
    for (const json& pj : tj["points"]) {
      pts.push_back(vec3_from_json(pj, "spline point"));
    }
    s.trajectory =
        Trajectory::spline(std::move(pts), number_field(tj, "knot_spacing_s"));
  } else if (kind == "sampled") {
    require(tj.contains("times") && tj["times"].is_array() &&
                tj.contains("poses") && tj["poses"].is_array(),
            "scenario: sampled needs times and poses arrays");
    std::vector<double> times;
    for (const json& v : tj["times"]) {
      require(v.is_number(), "scenario: sampled times must be numbers");
      times.push_back(v.get<double>());
    }
    std::vector<geom::Mat4> poses;
    for (const json& pj : tj["poses"]) {
      poses.push_back(mat4_from_json(pj, "sampled pose"));
    }
    s.trajectory = Trajectory::sampled(std::move(times), std::move(poses));
  } else {
    throw std::invalid_argument("scenario: unknown trajectory kind \"" + kind +
                                "\"");
  }

  require(doc.contains("network") && doc["network"].is_object(),
          "scenario: missing \"network\" object");
  const json& nj = doc["network"];
  s.network.latency_s = number_field(nj, "latency_s");
  s.network.jitter_s = number_field(nj, "jitter_s");
  s.network.drop = number_field(nj, "drop");
  require(nj.contains("seed") && nj["seed"].is_number_unsigned(),
          "scenario: seed must be a non-negative integer");
  s.network.seed = nj["seed"].get<std::uint64_t>();
  require(s.network.latency_s >= 0.0, "scenario: latency_s must be >= 0");
  require(s.network.jitter_s >= 0.0, "scenario: jitter_s must be >= 0");
  require(s.network.drop >= 0.0 && s.network.drop <= 1.0,
          "scenario: drop must lie in [0, 1]");

  require(doc.contains("streams") && doc["streams"].is_array(),
          "scenario: missing \"streams\" array");
  for (const json& sj : doc["streams"]) {
    require(sj.is_object() && sj.contains("encoding") &&
                sj["encoding"].is_string(),
            "scenario: each stream needs a string \"encoding\"");
    StreamConfig cfg;
    cfg.encoding = encoding_from_name(sj["encoding"].get<std::string>());
    cfg.rate_hz = number_field(sj, "rate_hz");
    cfg.delay_s = sj.contains("delay_s") ? number_field(sj, "delay_s") : -1.0;
    resolved_delay(cfg);  // validates
    s.streams.push_back(cfg);
  }

  if (doc.contains("probes")) {
    require(doc["probes"].is_array(), "scenario: probes must be an array");
    for (const json& pj : doc["probes"]) {
      s.probes.push_back(vec3_from_json(pj, "probe"));
    }
  }
  return s;
}

std::string save_scenario_json(const Scenario& s) {
  json doc;
  doc["object_id"] = s.object_id;
  doc["duration_s"] = s.duration_s;
  doc["ground_truth_rate_hz"] = s.ground_truth_rate_hz;

  json tj;
  switch (s.trajectory.kind()) {
    case Trajectory::Kind::Orbit: {
      const auto& o = s.trajectory.orbit_params();
      tj["kind"] = "orbit";
      tj["axis_point"] = vec3_to_json(o.axis_point);
      tj["axis_dir"] = vec3_to_json(o.axis_dir);
      tj["omega_deg_per_s"] = o.omega_deg_per_s;
      break;
    }
    case Trajectory::Kind::ConstantVelocity:
      tj["kind"] = "constant_velocity";
      tj["velocity"] = vec3_to_json(s.trajectory.velocity());
      break;
    case Trajectory::Kind::Spline: {
      tj["kind"] = "spline";
      json pts = json::array();
      for (const auto& p : s.trajectory.spline_points()) {
        pts.push_back(vec3_to_json(p));
      }
      tj["points"] = std::move(pts);
      tj["knot_spacing_s"] = s.trajectory.knot_spacing_s();
      break;
    }
    case Trajectory::Kind::Sampled: {
      tj["kind"] = "sampled";
      json times = json::array();
      json poses = json::array();
      for (const auto& kf : s.trajectory.sampled_clip().keyframes) {
        times.push_back(kf.time);
        poses.push_back(mat4_to_json(kf.pose_matrices[0]));
      }
      tj["times"] = std::move(times);
      tj["poses"] = std::move(poses);
      break;
    }
  }
  doc["trajectory"] = std::move(tj);

  doc["network"] = {{"latency_s", s.network.latency_s},
                    {"jitter_s", s.network.jitter_s},
                    {"drop", s.network.drop},
                    {"seed", s.network.seed}};

  json streams = json::array();
  for (const auto& cfg : s.streams) {
    streams.push_back({{"encoding", encoding_name(cfg.encoding)},
                       {"rate_hz", cfg.rate_hz},
                       {"delay_s", cfg.delay_s}});
  }
  doc["streams"] = std::move(streams);

  json probes = json::array();
  for (const auto& p : s.probes) probes.push_back(vec3_to_json(p));
  doc["probes"] = std::move(probes);

  return doc.dump(2) + "\n";
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("cannot open scenario file: " + path);
  }
  std::ostringstream text;
  text << in.rdbuf();
  return load_scenario_json(text.str());
}

void save_scenario_file(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("cannot open scenario file for writing: " +
                                path);
  }
  out << save_scenario_json(scenario);
}

Scenario make_orbit_scenario() {
  Scenario s;
  s.object_id = 1;
  s.duration_s = 10.0;
  s.ground_truth_rate_hz = 240.0;
  s.trajectory = Trajectory::orbit({0.6, 0.0, 0.0}, {0.0, 0.0, 1.0}, 90.0);
  s.network = {0.05, 0.01, 0.01, 42};
  s.streams = {{Encoding::Motor8, 20.0, 0.1},
               {Encoding::Matrix16, 30.0, -1.0},
               {Encoding::QuatVec7, 30.0, -1.0},
               {Encoding::QuatVec7, 20.0, -1.0}};
  s.probes = default_probes();
  return s;
}

std::vector<SentPacket> server_stream(const Trajectory& trajectory,
                                      std::uint32_t object_id,
                                      double duration_s,
                                      const StreamConfig& config) {
  require(config.rate_hz > 0.0, "server_stream: rate_hz must be positive");
  require(duration_s >= 0.0, "server_stream: duration must be >= 0");
  const long long n = (long long)(std::floor(duration_s * config.rate_hz));
  std::vector<SentPacket> out;
  out.reserve(std::size_t(n + 1));
  for (long long k = 0; k <= n; ++k) {
    const double t = double(k) / config.rate_hz;
    const PoseSample pose = trajectory.sample(t, object_id);
    out.push_back({t, encode_update(pose, std::uint32_t(k), config.encoding)});
  }
  return out;
}

std::vector<DeliveredPacket> simulate_network(
    std::span<const SentPacket> packets, const NetworkModel& model) {
  require(model.latency_s >= 0.0, "network: latency_s must be >= 0");
  require(model.jitter_s >= 0.0, "network: jitter_s must be >= 0");
  require(model.drop >= 0.0 && model.drop <= 1.0,
          "network: drop must lie in [0, 1]");
  std::mt19937_64 gen(model.seed);
  std::vector<DeliveredPacket> out;
  out.reserve(packets.size());
  for (const SentPacket& p : packets) {
    if (uniform01(gen) < model.drop) continue;
    const double jitter = model.jitter_s * (2.0 * uniform01(gen) - 1.0);
    const double arrival =
        p.send_time + std::max(0.0, model.latency_s + jitter);
    out.push_back({arrival, p.bytes});
  }
  return out;
}

ReconstructionResult client_reconstruct(
    std::span<const DeliveredPacket> packets, const StreamConfig& config,
    double duration_s, double render_rate_hz) {
  const double delay = resolved_delay(config);
  require(duration_s >= 0.0, "client_reconstruct: duration must be >= 0");
  require(render_rate_hz > 0.0,
          "client_reconstruct: render rate must be positive");

  // Replay deliveries in arrival order; the log itself is in send order.
  std::vector<std::size_t> order(packets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return packets[a].arrival_time < packets[b].arrival_time;
                   });

  ReconstructionResult result;
  std::vector<BufferedUpdate> buffer;
  std::size_t next = 0;

  const long long ticks =
      (long long)(std::floor(duration_s * render_rate_hz));
  result.frames.reserve(std::size_t(ticks + 1));
  for (long long k = 0; k <= ticks; ++k) {
    const double t = double(k) / render_rate_hz;
    while (next < order.size() &&
           packets[order[next]].arrival_time <= t) {
      const DeliveredPacket& p = packets[order[next]];
      ++next;
      const TransformUpdate u = decode_update(p.bytes);
      if (u.tag != config.encoding) {
        throw std::invalid_argument(
            "client_reconstruct: stream carries mixed encodings");
      }
      if (!buffer.empty() && u.timestamp < buffer.back().timestamp) {
        ++result.packets_discarded;  // reordered past the newest update
        continue;
      }
      buffer.push_back({u.timestamp, pose_from_update(u)});
      ++result.packets_kept;
    }

    RenderedFrame frame;
    frame.render_time = t;
    frame.target_time = std::clamp(t - delay, 0.0, duration_s);
    if (buffer.empty()) {
      frame.starved = true;
      ++result.starved_frames;
      result.frames.push_back(frame);
      continue;
    }
    const double target = frame.target_time;
    if (target > buffer.back().timestamp + 1e-9) {
      frame.starved = true;
      ++result.starved_frames;
    }
    const auto it = std::lower_bound(
        buffer.begin(), buffer.end(), target,
        [](const BufferedUpdate& b, double v) { return b.timestamp < v; });
    const BufferedUpdate* a = nullptr;
    const BufferedUpdate* b = nullptr;
    double u = 0.0;
    if (it == buffer.end()) {
      a = b = &buffer.back();  // hold the newest
    } else if (it == buffer.begin()) {
      a = b = &buffer.front();  // target precedes the stream
    } else {
      a = &*(it - 1);
      b = &*it;
      const double dt = b->timestamp - a->timestamp;
      u = dt > 0.0 ? (target - a->timestamp) / dt : 0.0;
    }
    frame.transform =
        blend_updates(*a, *b, u, config.encoding, &result.max_ortho_departure);
    result.frames.push_back(frame);
  }
  return result;
}

std::vector<BandwidthReport> run_comparison(const Scenario& scenario) {
  const std::vector<geom::Vec3> probes =
      scenario.probes.empty() ? default_probes() : scenario.probes;
  std::vector<BandwidthReport> reports;
  reports.reserve(scenario.streams.size());
  for (const StreamConfig& cfg : scenario.streams) {
    const std::vector<SentPacket> sent = server_stream(
        scenario.trajectory, scenario.object_id, scenario.duration_s, cfg);
    const std::vector<DeliveredPacket> delivered =
        simulate_network(sent, scenario.network);
    const ReconstructionResult recon = client_reconstruct(
        delivered, cfg, scenario.duration_s, scenario.ground_truth_rate_hz);

    // Offered load over the half-open [0, duration): the packet sent at
    // exactly t = duration belongs to the next accounting window.
    double payload_bytes = 0.0;
    double total_bytes = 0.0;
    for (const SentPacket& p : sent) {
      if (p.send_time >= scenario.duration_s - 1e-12) continue;
      payload_bytes += double(p.bytes.size() - kHeaderBytes);
      total_bytes += double(p.bytes.size());
    }

    double sum_sq = 0.0;
    double max_err = 0.0;
    std::size_t count = 0;
    for (const RenderedFrame& frame : recon.frames) {
      const geom::Mat4 truth =
          scenario.trajectory.sample(frame.target_time, scenario.object_id)
              .matrix;
      for (const geom::Vec3& p : probes) {
        const double err = geom::distance(frame.transform.transform_point(p),
                                          truth.transform_point(p));
        sum_sq += err * err;
        max_err = std::max(max_err, err);
        ++count;
      }
    }

    BandwidthReport report;
    report.encoding = encoding_name(cfg.encoding);
    report.rate_hz = cfg.rate_hz;
    report.payload_bytes_per_s = payload_bytes / scenario.duration_s;
    report.total_bytes_per_s = total_bytes / scenario.duration_s;
    report.rms_error = count ? std::sqrt(sum_sq / double(count)) : 0.0;
    report.max_error = max_err;
    reports.push_back(std::move(report));
  }
  return reports;
}

std::string report_csv(std::span<const BandwidthReport> reports) {
  std::string out =
      "encoding,rate_hz,payload_bytes_per_s,total_bytes_per_s,rms_error,"
      "max_error\n";
  char line[256];
  for (const BandwidthReport& r : reports) {
    std::snprintf(line, sizeof line, "%s,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  r.encoding.c_str(), r.rate_hz, r.payload_bytes_per_s,
                  r.total_bytes_per_s, r.rms_error, r.max_error);
    out += line;
  }
  return out;
}

}  // namespace motorkit::net
