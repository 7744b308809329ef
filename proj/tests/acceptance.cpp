// End-to-end acceptance gate. Nine independent criteria, each printed as one
// PASS/FAIL line with its measured evidence; the process exits nonzero when
// any criterion fails. Runtime-limited criteria enforce their own budgets.
//
// Inputs come from the checked-in fixture files (MOTORKIT_FIXTURE_DIR) and
// the built command-line tool (MOTORKIT_CLI_PATH), both provided as compile
// definitions by the build.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "motorkit/algebra.hpp"
#include "motorkit/conformal.hpp"
#include "motorkit/geom.hpp"
#include "motorkit/mesh_cut.hpp"
#include "motorkit/motion.hpp"
#include "motorkit/netsim.hpp"
#include "motorkit/scene.hpp"
#include "motorkit/wire.hpp"

namespace {

namespace ga = motorkit::ga;
namespace cga = motorkit::cga;
namespace geom = motorkit::geom;
namespace motion = motorkit::motion;
namespace meshops = motorkit::meshops;
namespace scn = motorkit::scene;
namespace net = motorkit::net;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string fixture(const char* name) {
  return std::string(MOTORKIT_FIXTURE_DIR) + "/" + name;
}

// ---------------------------------------------------------------------- 1
Outcome blade_table_oracle() {
  const auto start = Clock::now();
  const ga::Signature sig = ga::conformal;

  int mismatches = 0;
  for (ga::BladeMask a = 0; a < sig.blade_count(); ++a) {
    for (ga::BladeMask b = 0; b < sig.blade_count(); ++b) {
      const ga::BladeProduct fast = ga::blade_product(a, b, sig);
      const ga::BladeProduct ref = ga::blade_product_reference(a, b, sig);
      if (fast.sign != ref.sign || fast.mask != ref.mask) ++mismatches;
    }
  }

  std::mt19937_64 gen(20260822);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < 200; ++s) {
    ga::Multivector a(sig), b(sig);
    for (ga::BladeMask m = 0; m < sig.blade_count(); ++m) a[m] = dist(gen);
    for (ga::BladeMask m = 0; m < sig.blade_count(); ++m) b[m] = dist(gen);
    const ga::Multivector prod = ga::geometric_product(a, b);
    ga::Multivector expect(sig);
    for (ga::BladeMask am = 0; am < sig.blade_count(); ++am) {
      for (ga::BladeMask bm = 0; bm < sig.blade_count(); ++bm) {
        const ga::BladeProduct ref = ga::blade_product_reference(am, bm, sig);
        expect[ref.mask] += ref.sign * a[am] * b[bm];
      }
    }
    worst = std::max(worst, (prod - expect).inf_norm());
  }

  const double dt = seconds_since(start);
  Outcome out;
  out.pass = mismatches == 0 && worst <= 1e-12 && dt < 1.0;
  out.detail = "1024 blade pairs, " + std::to_string(mismatches) +
               " mismatches; random-product deviation " + fmt(worst) +
               " (limit 1e-12); " + fmt(dt) + " s (limit 1 s)";
  return out;
}

// ---------------------------------------------------------------------- 2
Outcome rotor_quaternion_agreement() {
  std::mt19937_64 gen(9242);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  auto rand_unit_quaternion = [&]() {
    for (;;) {
      const geom::Quaternion q{dist(gen), dist(gen), dist(gen), dist(gen)};
      if (q.norm() > 0.1) return q.normalized();
    }
  };

  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const geom::Quaternion q = rand_unit_quaternion();
    const cga::Motor rotor = cga::to_motor(cga::rotor_from_quaternion(q));
    const geom::Vec3 v{2.0 * dist(gen), 2.0 * dist(gen), 2.0 * dist(gen)};
    const geom::Vec3 by_sandwich = cga::apply_to_point(rotor, v);
    const geom::Vec3 by_quat = q.rotate(v);
    worst = std::max({worst, std::abs(by_sandwich.x - by_quat.x),
                      std::abs(by_sandwich.y - by_quat.y),
                      std::abs(by_sandwich.z - by_quat.z)});
  }

  Outcome out;
  out.pass = worst <= 1e-10;
  out.detail = "1000 random unit quaternions, worst component deviation " +
               fmt(worst) + " (limit 1e-10)";
  return out;
}

// ---------------------------------------------------------------------- 3
Outcome conformal_embedding_identities() {
  std::mt19937_64 gen(31415);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  auto rand_vec = [&]() {
    return geom::Vec3{dist(gen), dist(gen), dist(gen)};
  };

  double worst_round_trip = 0.0, worst_null = 0.0, worst_distance = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const geom::Vec3 a = rand_vec();
    const geom::Vec3 b = rand_vec();
    const cga::ConformalPoint pa = cga::up(a);
    const cga::ConformalPoint pb = cga::up(b);

    const geom::Vec3 back = cga::down(pa);
    worst_round_trip =
        std::max({worst_round_trip, std::abs(back.x - a.x),
                  std::abs(back.y - a.y), std::abs(back.z - a.z)});

    worst_null = std::max(
        worst_null,
        std::abs(ga::scalar_part(ga::geometric_product(pa.mv, pa.mv))));

    const double incidence =
        -2.0 * ga::scalar_part(ga::geometric_product(pa.mv, pb.mv));
    worst_distance =
        std::max(worst_distance, std::abs(incidence - (a - b).norm_sq()));
  }

  Outcome out;
  out.pass = worst_round_trip <= 1e-12 && worst_null <= 1e-10 &&
             worst_distance <= 1e-10;
  out.detail = "1000 pairs: round trip " + fmt(worst_round_trip) +
               " (1e-12), null residue " + fmt(worst_null) +
               " (1e-10), distance identity " + fmt(worst_distance) +
               " (1e-10)";
  return out;
}

// ---------------------------------------------------------------------- 4
Outcome keyframe_skinning_identity() {
  const auto start = Clock::now();
  const scn::Scene s = scn::load_scene_file(fixture("two_bone_cylinder.json"));

  double worst = 0.0;
  for (const motion::Keyframe& kf : s.clip.keyframes) {
    const motion::DeformedFrame by_motor =
        motion::skin_cga(s.mesh.skin, s.rig, kf.pose_motors, kf.time);
    const motion::DeformedFrame by_lbs =
        motion::skin_lbs(s.mesh.skin, s.rig, kf.pose_matrices, kf.time);
    for (std::size_t v = 0; v < by_motor.positions.size(); ++v) {
      const geom::Vec3 d = by_motor.positions[v] - by_lbs.positions[v];
      worst = std::max({worst, std::abs(d.x), std::abs(d.y), std::abs(d.z)});
    }
  }

  const double dt = seconds_since(start);
  Outcome out;
  out.pass = worst <= 1e-9 && dt < 1.0;
  out.detail = std::to_string(s.clip.keyframes.size()) +
               " keyframes, worst per-coordinate gap " + fmt(worst) +
               " (limit 1e-9); " + fmt(dt) + " s (limit 1 s)";
  return out;
}

// ---------------------------------------------------------------------- 5
Outcome sparse_turn_interpolation_quality() {
  const motion::TurnTrajectory traj;
  const std::vector<geom::Vec3> probes = motion::default_turn_probes();

  const motion::InterpSweepResult motor = motion::evaluate_turn_interpolation(
      traj, 90.0, motion::InterpMethod::Motor, 60.0, probes);
  const motion::InterpSweepResult quatvec =
      motion::evaluate_turn_interpolation(
          traj, 90.0, motion::InterpMethod::QuatVec, 60.0, probes);
  const motion::InterpSweepResult matrix_raw =
      motion::evaluate_turn_interpolation(
          traj, 90.0, motion::InterpMethod::MatrixRaw, 60.0, probes);

  Outcome out;
  out.pass = motor.rms <= quatvec.rms && motor.rms < matrix_raw.rms &&
             motor.bone_drift_max <= 1e-9;
  out.detail = "rms motor " + fmt(motor.rms) + " <= quatvec " +
               fmt(quatvec.rms) + ", < matrix-raw " + fmt(matrix_raw.rms) +
               "; motor drift " + fmt(motor.bone_drift_max) + " (limit 1e-9)";
  return out;
}

// ---------------------------------------------------------------------- 6
Outcome bandwidth_and_fidelity() {
  const auto start = Clock::now();
  const net::Scenario scenario =
      net::load_scenario_file(fixture("orbit_scenario.json"));

  const std::vector<net::BandwidthReport> reports =
      net::run_comparison(scenario);
  const std::vector<net::BandwidthReport> rerun =
      net::run_comparison(scenario);
  const bool deterministic =
      net::report_csv(reports) == net::report_csv(rerun);

  const net::BandwidthReport* motor20 = nullptr;
  const net::BandwidthReport* matrix30 = nullptr;
  const net::BandwidthReport* quat30 = nullptr;
  for (const net::BandwidthReport& r : reports) {
    if (r.encoding == "Motor8" && r.rate_hz == 20.0) motor20 = &r;
    if (r.encoding == "Matrix16" && r.rate_hz == 30.0) matrix30 = &r;
    if (r.encoding == "QuatVec7" && r.rate_hz == 30.0) quat30 = &r;
  }

  Outcome out;
  if (motor20 == nullptr || matrix30 == nullptr || quat30 == nullptr) {
    out.detail = "scenario is missing a required stream";
    return out;
  }
  const double reduction_pct =
      100.0 * (1.0 - motor20->payload_bytes_per_s / matrix30->payload_bytes_per_s);
  const double dt = seconds_since(start);
  out.pass = std::abs(reduction_pct - 66.7) <= 0.1 &&
             motor20->rms_error <= 1.25 * quat30->rms_error && deterministic &&
             dt < 5.0;
  out.detail = "payload reduction " + fmt(reduction_pct) +
               "% (66.7 +- 0.1); rms motor@20 " + fmt(motor20->rms_error) +
               " <= 1.25 x quatvec@30 " + fmt(quat30->rms_error) + " = " +
               fmt(1.25 * quat30->rms_error) +
               (deterministic ? "; deterministic" : "; NON-DETERMINISTIC") +
               "; " + fmt(dt) + " s (limit 5 s)";
  return out;
}

// ---------------------------------------------------------------------- 7
void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}

Outcome wire_round_trip() {
  std::mt19937_64 gen(0xFACADE);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  auto rand_unit_quaternion = [&]() {
    for (;;) {
      const geom::Quaternion q{dist(gen), dist(gen), dist(gen), dist(gen)};
      if (q.norm() > 0.1) return q.normalized();
    }
  };

  const net::Encoding kAll[] = {net::Encoding::Matrix16,
                                net::Encoding::QuatVec7, net::Encoding::Motor8};
  int mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const cga::Motor m = cga::motor_compose(
        {cga::to_motor(cga::translator(
             {3.0 * dist(gen), 3.0 * dist(gen), 3.0 * dist(gen)})),
         cga::to_motor(cga::rotor_from_quaternion(rand_unit_quaternion()))});
    const net::PoseSample pose = net::PoseSample::from_motor(
        50.0 * (dist(gen) + 1.0), std::uint32_t(i), m);
    for (const net::Encoding tag : kAll) {
      const std::vector<std::uint8_t> bytes =
          net::encode_update(pose, std::uint32_t(i), tag);
      const net::TransformUpdate update = net::decode_update(bytes);

      // Reserialize the decoded update independently; the wire form and the
      // decoded form must carry exactly the same bits in both directions.
      std::vector<std::uint8_t> rebuilt;
      rebuilt.reserve(bytes.size());
      put_u32(rebuilt, update.object_id);
      put_u32(rebuilt, update.seq);
      std::uint64_t time_bits;
      std::memcpy(&time_bits, &update.timestamp, sizeof time_bits);
      for (int k = 0; k < 8; ++k) {
        rebuilt.push_back(std::uint8_t(time_bits >> (8 * k)));
      }
      rebuilt.push_back(std::uint8_t(update.tag));
      for (const float f : update.payload) {
        std::uint32_t fb;
        std::memcpy(&fb, &f, sizeof fb);
        put_u32(rebuilt, fb);
      }

      const bool fields_ok = update.object_id == pose.object_id &&
                             update.seq == std::uint32_t(i) &&
                             update.timestamp == pose.time &&
                             update.tag == tag;
      if (!fields_ok || rebuilt != bytes) ++mismatches;
    }
  }

  // The identity pose must serialize to the canonical rigid-motor payload.
  const net::PoseSample identity =
      net::PoseSample::from_motor(0.0, 1, cga::Motor::identity());
  const std::vector<std::uint8_t> id_bytes =
      net::encode_update(identity, 0, net::Encoding::Motor8);
  const net::TransformUpdate id_update = net::decode_update(id_bytes);
  const float expected[8] = {1.0f, 0.0f, 0.0f, 0.0f, 0.0f, 0.0f, 0.0f, 0.0f};
  bool identity_ok = id_update.payload.size() == 8;
  for (std::size_t k = 0; identity_ok && k < 8; ++k) {
    std::uint32_t got, want;
    std::memcpy(&got, &id_update.payload[k], 4);
    std::memcpy(&want, &expected[k], 4);
    identity_ok = got == want;
  }

  Outcome out;
  out.pass = mismatches == 0 && identity_ok;
  out.detail = "10000 poses x 3 encodings, " + std::to_string(mismatches) +
               " round-trip mismatches; identity payload " +
               (identity_ok ? "(1,0,0,0,0,0,0,0) exact" : "WRONG");
  return out;
}

// ---------------------------------------------------------------------- 8
Outcome cube_cut_topology_and_reskin() {
  const auto start = Clock::now();

  const scn::Scene cube = scn::load_scene_file(fixture("unit_cube.json"));
  const cga::CutPlane px = cga::plane({1.0, 0.0, 0.0}, 0.5);
  const meshops::CutResult cut = meshops::cut_mesh(cube.mesh, px);

  double worst_plane = 0.0;
  for (const auto& [index, origin] : cut.new_vertex_origins) {
    (void)origin;
    worst_plane = std::max(
        worst_plane,
        std::abs(cga::signed_distance(
            px, cut.mesh.skin.rest_positions[std::size_t(index)])));
  }
  double worst_weight = 0.0;
  for (const auto& influences : cut.mesh.skin.influences) {
    double sum = 0.0;
    for (const auto& inf : influences) sum += inf.weight;
    worst_weight = std::max(worst_weight, std::abs(sum - 1.0));
  }
  bool topology_ok = cut.component_count == 2;
  for (const meshops::ComponentStats& cs : cut.components) {
    // Each half of the cube is a disk: V - E + F = 1, one open boundary ring.
    topology_ok = topology_ok && cs.euler == 1 && cs.boundary_rings == 1 &&
                  cs.boundary_edges > 0 && !cs.closed;
  }

  // Rigged cylinder: cut across the elbow, then drive the halves through
  // both skinning paths at every keyframe.
  const scn::Scene cyl = scn::load_scene_file(fixture("two_bone_cylinder.json"));
  const meshops::CutResult cyl_cut =
      meshops::cut_mesh(cyl.mesh, cga::plane({0.0, 0.0, 1.0}, 1.0));
  bool reskin_ok = true;
  try {
    motion::validate_influences(cyl_cut.mesh.skin, cyl.rig.bones.size());
    for (const motion::Keyframe& kf : cyl.clip.keyframes) {
      const motion::DeformedFrame a =
          motion::skin_cga(cyl_cut.mesh.skin, cyl.rig, kf.pose_motors);
      const motion::DeformedFrame b =
          motion::skin_lbs(cyl_cut.mesh.skin, cyl.rig, kf.pose_matrices);
      for (const geom::Vec3& p : a.positions) reskin_ok &= p.is_finite();
      for (const geom::Vec3& p : b.positions) reskin_ok &= p.is_finite();
    }
  } catch (const std::exception&) {
    reskin_ok = false;
  }

  const double dt = seconds_since(start);
  Outcome out;
  out.pass = topology_ok && worst_plane <= 1e-9 && worst_weight <= 1e-9 &&
             reskin_ok && dt < 1.0;
  out.detail = std::to_string(cut.component_count) +
               " cube components (each V-E+F = 1, one open ring); plane "
               "distance " +
               fmt(worst_plane) + ", weight-sum gap " + fmt(worst_weight) +
               " (limits 1e-9); cylinder re-skin " +
               (reskin_ok ? "finite/valid" : "INVALID") + "; " + fmt(dt) +
               " s (limit 1 s)";
  return out;
}

// ---------------------------------------------------------------------- 9
int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -1;
}

std::map<std::string, std::string> slurp_tree(const std::filesystem::path& dir) {
  std::map<std::string, std::string> contents;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    contents[std::filesystem::relative(entry.path(), dir).string()] =
        buf.str();
  }
  return contents;
}

Outcome cli_rerun_determinism() {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "motorkit_acceptance_cli";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);

  const std::string cli = MOTORKIT_CLI_PATH;
  const std::string d = dir.string();
  const std::vector<std::string> commands = {
      cli + " cayley --out '" + d + "/cayley.csv' > '" + d + "/cayley.stdout'",
      cli + " skin '" + fixture("two_bone_cylinder.json") + "' --sweep 7 --out '" +
          d + "/skin.csv' > '" + d + "/skin.stdout'",
      cli + " interp --keyframe-spacing 45 --method all --out '" + d +
          "/interp.csv' > '" + d + "/interp.stdout'",
      cli + " cut '" + fixture("unit_cube.json") + "' --normal 1,0,0 --offset 0.5 --out '" +
          d + "/cut.json' --report '" + d + "/cut_report.json' > '" + d +
          "/cut.stdout'",
      cli + " netbench '" + fixture("orbit_scenario.json") + "' --out '" + d +
          "/netbench.csv' > '" + d + "/netbench.stdout'",
      cli + " fixtures --dir '" + d + "/fx' > '" + d + "/fixtures.stdout'",
  };

  Outcome out;
  // First run, snapshot every produced byte, then rerun the identical
  // command lines (same manifests) and compare the trees.
  for (const std::string& cmd : commands) {
    if (run_command(cmd) != 0) {
      out.detail = "command failed on first run: " + cmd;
      return out;
    }
  }
  const std::map<std::string, std::string> first = slurp_tree(dir);
  for (const std::string& cmd : commands) {
    if (run_command(cmd) != 0) {
      out.detail = "command failed on rerun: " + cmd;
      return out;
    }
  }
  const std::map<std::string, std::string> second = slurp_tree(dir);

  int differing = 0;
  for (const auto& [name, bytes] : first) {
    const auto it = second.find(name);
    if (it == second.end() || it->second != bytes) ++differing;
  }
  out.pass = differing == 0 && !first.empty() && first.size() == second.size();
  out.detail = std::to_string(first.size()) + " output files across 6 "
               "subcommands, " + std::to_string(differing) +
               " differ between reruns";
  std::filesystem::remove_all(dir);
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"blade product table matches the independent oracle",
       blade_table_oracle},
      {"rotor sandwich agrees with quaternion rotation",
       rotor_quaternion_agreement},
      {"conformal embedding: round trip, null, distance identity",
       conformal_embedding_identities},
      {"multivector and linear blend skinning agree at keyframes",
       keyframe_skinning_identity},
      {"motor interpolation beats baselines on the sparse turn",
       sparse_turn_interpolation_quality},
      {"motor stream cuts payload bandwidth at matched fidelity",
       bandwidth_and_fidelity},
      {"wire encodings round trip bit-exactly", wire_round_trip},
      {"plane cut yields two clean components and a valid re-skin",
       cube_cut_topology_and_reskin},
      {"CLI subcommands are rerun-deterministic", cli_rerun_determinism},
  };

  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    Outcome result;
    try {
      result = c.run();
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail = std::string("unexpected exception: ") + e.what();
    }
    if (!result.pass) ++failures;
    std::printf("%s  %d. %s — %s\n", result.pass ? "PASS" : "FAIL", index,
                c.name, result.detail.c_str());
  }

  std::printf("acceptance: %d/9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
