// motorkit command-line tool.
//
// Subcommands:
//   cayley    dump the Cl(4,1) blade product table as CSV and audit it against
//             the independent sort-count oracle plus random product expansions
//   skin      compare multivector skinning with linear blend skinning on a
//             skinned scene, as a per-frame error CSV
//   interp    sparse-keyframe interpolation error sweep on the canonical turn
//             trajectory, one CSV row per evaluation instant
//   cut       slice a skinned scene with a plane; writes the cut scene plus a
//             topology report
//   netbench  replay a transform-sync scenario and report per-stream bandwidth
//             and reconstruction error as CSV
//   fixtures  regenerate the canonical input files (scenes + scenario)
//
// Every generated report embeds a run manifest (subcommand, inputs,
// parameters, seed, outputs, tool version): JSON reports carry it under a
// top-level "manifest" key, CSV reports as a leading "# manifest: ..."
// comment line. Runs are deterministic: the same invocation produces
// byte-identical outputs.
//
// Exit codes: 0 success, 1 self-check failure (cayley audit mismatch),
// 2 malformed input or I/O failure.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

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

using ordered_json = nlohmann::ordered_json;

constexpr const char* kToolVersion = "motorkit 0.1.0";

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

geom::Vec3 parse_vec3(const std::string& text) {
  geom::Vec3 v{};
  int consumed = 0;
  if (std::sscanf(text.c_str(), " %lf , %lf , %lf %n", &v.x, &v.y, &v.z,
                  &consumed) != 3 ||
      text.c_str()[consumed] != '\0') {
    throw std::invalid_argument("expected a vector \"x,y,z\", got: " + text);
  }
  return v;
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::filesystem::create_directories(p.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("cannot open output file: " + path);
  }
  out << text;
  out.flush();
  if (!out) {
    throw std::invalid_argument("write failed: " + path);
  }
}

// The manifest stamped into every generated report.
ordered_json make_manifest(const std::string& subcommand,
                           const std::vector<std::string>& inputs,
                           const ordered_json& parameters,
                           const ordered_json& seed,
                           const std::vector<std::string>& outputs) {
  ordered_json m;
  m["subcommand"] = subcommand;
  m["inputs"] = inputs;
  m["parameters"] = parameters;
  m["seed"] = seed;
  m["outputs"] = outputs;
  m["tool_version"] = kToolVersion;
  return m;
}

std::string manifest_comment(const ordered_json& manifest) {
  return "# manifest: " + manifest.dump() + "\n";
}

// Re-emit a serialized JSON document with the manifest appended as a
// top-level key. Loaders ignore keys they do not know, so stamped documents
// stay loadable.
std::string with_manifest_key(const std::string& json_text,
                              const ordered_json& manifest) {
  ordered_json doc = ordered_json::parse(json_text);
  doc["manifest"] = manifest;
  return doc.dump(2) + "\n";
}

// --------------------------------------------------------------------------
// cayley

int run_cayley(const std::string& out_path, std::uint64_t seed, int samples,
               bool inject_flip) {
  const ga::Signature sig = ga::conformal;
  const ordered_json manifest = make_manifest(
      "cayley", {},
      {{"samples", samples}, {"inject_flip", inject_flip}}, seed, {out_path});

  struct Row {
    ga::BladeMask a;
    ga::BladeMask b;
    int sign;
    ga::BladeMask mask;
  };
  std::vector<Row> rows;
  rows.reserve(sig.blade_count() * sig.blade_count());
  for (ga::BladeMask a = 0; a < sig.blade_count(); ++a) {
    for (ga::BladeMask b = 0; b < sig.blade_count(); ++b) {
      const ga::BladeProduct p = ga::blade_product(a, b, sig);
      rows.push_back({a, b, p.sign, p.mask});
    }
  }
  if (inject_flip) {
    // Deliberate corruption of one emitted row; the audit below must flag it.
    Row& victim = rows[rows.size() / 3];
    victim.sign = -victim.sign;
  }

  // Audit 1: every emitted row against the independent swap-count oracle.
  int mismatches = 0;
  for (const Row& row : rows) {
    const ga::BladeProduct ref = ga::blade_product_reference(row.a, row.b, sig);
    if (ref.sign != row.sign || ref.mask != row.mask) {
      ++mismatches;
    }
  }

  // Audit 2: table-driven geometric products of random dense multivectors
  // against a term-by-term expansion using only the oracle.
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
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
  const bool products_ok = worst <= 1e-12;

  std::string csv = manifest_comment(manifest);
  csv += "a_mask,b_mask,sign,result_mask\n";
  for (const Row& row : rows) {
    csv += std::to_string(row.a) + "," + std::to_string(row.b) + "," +
           std::to_string(row.sign) + "," + std::to_string(row.mask) + "\n";
  }
  write_text_file(out_path, csv);

  std::printf("cayley: table audit %s (%d of %zu rows mismatch the oracle)\n",
              mismatches == 0 ? "PASS" : "FAIL", mismatches, rows.size());
  std::printf(
      "cayley: random product audit %s (max coefficient deviation %s over %d "
      "samples)\n",
      products_ok ? "PASS" : "FAIL", fmt_double(worst).c_str(), samples);
  std::printf("wrote %s\n", out_path.c_str());
  return (mismatches == 0 && products_ok) ? 0 : 1;
}

// --------------------------------------------------------------------------
// skin

int run_skin(const std::string& scene_path, bool have_time, double time,
             bool have_sweep, int sweep, const std::string& out_path) {
  const scn::Scene s = scn::load_scene_file(scene_path);

  std::string mode = "keyframes";
  std::vector<double> times;
  if (have_time) {
    mode = "time";
    times.push_back(time);
  } else if (have_sweep) {
    mode = "sweep";
    const double t0 = s.clip.keyframes.front().time;
    const double t1 = s.clip.keyframes.back().time;
    for (int i = 0; i < sweep; ++i) {
      times.push_back(t0 + (t1 - t0) * static_cast<double>(i) /
                               static_cast<double>(sweep - 1));
    }
  } else {
    for (const motion::Keyframe& kf : s.clip.keyframes) {
      times.push_back(kf.time);
    }
  }

  ordered_json params;
  params["mode"] = mode;
  params["time"] = have_time ? ordered_json(time) : ordered_json(nullptr);
  params["sweep"] = have_sweep ? ordered_json(sweep) : ordered_json(nullptr);
  const ordered_json manifest =
      make_manifest("skin", {scene_path}, params, nullptr, {out_path});

  std::string csv = manifest_comment(manifest);
  csv += "method,time,rms,max\n";
  double worst_rms = 0.0;
  for (const double t : times) {
    const std::vector<cga::Motor> motors = motion::sample_clip_motors(s.clip, t);
    const std::vector<geom::Mat4> mats = motion::sample_clip_matrices(
        s.clip, t, motion::MatrixInterp::GramSchmidt);
    const motion::DeformedFrame by_motor =
        motion::skin_cga(s.mesh.skin, s.rig, motors, t);
    const motion::DeformedFrame by_lbs =
        motion::skin_lbs(s.mesh.skin, s.rig, mats, t);
    const motion::FrameError err = motion::frame_error(by_motor, by_lbs);
    worst_rms = std::max(worst_rms, err.rms);
    csv += std::string("cga,") + fmt_double(t) + "," + fmt_double(err.rms) +
           "," + fmt_double(err.max) + "\n";
  }
  write_text_file(out_path, csv);

  std::printf("skin: %zu rows, worst rms vs LBS %s\n", times.size(),
              fmt_double(worst_rms).c_str());
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

// --------------------------------------------------------------------------
// interp

int run_interp(double spacing_deg, const std::string& method, double eval_hz,
               const std::string& out_path) {
  std::vector<std::pair<std::string, motion::InterpMethod>> selected;
  const std::vector<std::pair<std::string, motion::InterpMethod>> all = {
      {"motor", motion::InterpMethod::Motor},
      {"quatvec", motion::InterpMethod::QuatVec},
      {"matrix-raw", motion::InterpMethod::MatrixRaw},
      {"matrix-gs", motion::InterpMethod::MatrixGS},
  };
  for (const auto& entry : all) {
    if (method == "all" || method == entry.first) {
      selected.push_back(entry);
    }
  }

  const ordered_json manifest = make_manifest(
      "interp", {},
      {{"keyframe_spacing_deg", spacing_deg},
       {"method", method},
       {"eval_hz", eval_hz}},
      nullptr, {out_path});

  const motion::TurnTrajectory traj;  // canonical off-origin turn
  const std::vector<geom::Vec3> probes = motion::default_turn_probes();

  std::string csv = manifest_comment(manifest);
  csv += "method,spacing_deg,time,rms,max\n";
  for (const auto& [name, m] : selected) {
    const motion::InterpSweepResult res = motion::evaluate_turn_interpolation(
        traj, spacing_deg, m, eval_hz, probes);
    for (const motion::InterpSample& sample : res.samples) {
      csv += name + "," + fmt_double(spacing_deg) + "," +
             fmt_double(sample.time) + "," + fmt_double(sample.rms) + "," +
             fmt_double(sample.max) + "\n";
    }
    std::printf("interp: method=%s spacing=%s rms=%s max=%s drift=%s\n",
                name.c_str(), fmt_double(spacing_deg).c_str(),
                fmt_double(res.rms).c_str(), fmt_double(res.max).c_str(),
                fmt_double(res.bone_drift_max).c_str());
  }
  write_text_file(out_path, csv);
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

// --------------------------------------------------------------------------
// cut

ordered_json stats_json(const meshops::ComponentStats& cs) {
  ordered_json j;
  j["vertices"] = cs.vertices;
  j["edges"] = cs.edges;
  j["triangles"] = cs.triangles;
  j["euler"] = cs.euler;
  j["boundary_edges"] = cs.boundary_edges;
  j["boundary_rings"] = cs.boundary_rings;
  j["closed"] = cs.closed;
  return j;
}

int run_cut(const std::string& scene_path, bool have_plane,
            const std::string& normal_text, double offset,
            const std::string& out_scene_path,
            const std::string& out_report_path) {
  const scn::Scene s = scn::load_scene_file(scene_path);

  ordered_json params;
  params["normal"] = have_plane ? ordered_json(normal_text) : ordered_json(nullptr);
  params["offset"] = have_plane ? ordered_json(offset) : ordered_json(nullptr);
  const ordered_json manifest =
      make_manifest("cut", {scene_path}, params, nullptr,
                    {out_scene_path, out_report_path});

  ordered_json report;
  report["manifest"] = manifest;

  scn::Scene out = s;
  if (have_plane) {
    const geom::Vec3 n = parse_vec3(normal_text);
    const cga::CutPlane plane = cga::plane(n, offset);
    const meshops::CutResult result = meshops::cut_mesh(s.mesh, plane);
    out.mesh = result.mesh;
    scn::validate_scene(out);

    double worst_plane_dist = 0.0;
    for (const auto& [index, origin] : result.new_vertex_origins) {
      worst_plane_dist = std::max(
          worst_plane_dist,
          std::abs(cga::signed_distance(
              plane, out.mesh.skin.rest_positions[static_cast<std::size_t>(
                         index)])));
    }

    report["plane"] = {
        {"normal", {plane.normal.x, plane.normal.y, plane.normal.z}},
        {"offset", plane.offset}};
    report["vertices"] = out.mesh.skin.rest_positions.size();
    report["triangles"] = out.mesh.triangles.size();
    report["new_vertices"] = result.new_vertex_origins.size();
    report["max_new_vertex_plane_distance"] = worst_plane_dist;
    report["component_count"] = result.component_count;
    ordered_json comps = ordered_json::array();
    for (const meshops::ComponentStats& cs : result.components) {
      comps.push_back(stats_json(cs));
    }
    report["components"] = comps;
  } else {
    // No plane given: the scene passes through unchanged and the report
    // describes the input mesh topology.
    int component_count = 0;
    const std::vector<int> labels =
        meshops::triangle_components(s.mesh, &component_count);
    const std::vector<meshops::ComponentStats> stats =
        meshops::component_stats(s.mesh, labels, component_count);

    report["plane"] = nullptr;
    report["vertices"] = s.mesh.skin.rest_positions.size();
    report["triangles"] = s.mesh.triangles.size();
    report["new_vertices"] = 0;
    report["max_new_vertex_plane_distance"] = nullptr;
    report["component_count"] = component_count;
    ordered_json comps = ordered_json::array();
    for (const meshops::ComponentStats& cs : stats) {
      comps.push_back(stats_json(cs));
    }
    report["components"] = comps;
  }

  write_text_file(out_scene_path,
                  with_manifest_key(scn::save_scene_json(out), manifest));
  write_text_file(out_report_path, report.dump(2) + "\n");

  std::printf("cut: %d component(s), %s new vertices\n",
              report["component_count"].get<int>(),
              report["new_vertices"].dump().c_str());
  std::printf("wrote %s\n", out_scene_path.c_str());
  std::printf("wrote %s\n", out_report_path.c_str());
  return 0;
}

// --------------------------------------------------------------------------
// netbench

int run_netbench(const std::string& scenario_path, bool have_seed,
                 std::uint64_t seed, const std::string& out_path) {
  net::Scenario scenario = net::load_scenario_file(scenario_path);
  if (have_seed) {
    scenario.network.seed = seed;
  }

  const ordered_json manifest = make_manifest(
      "netbench", {scenario_path}, {{"seed_override", have_seed}},
      scenario.network.seed, {out_path});

  const std::vector<net::BandwidthReport> reports =
      net::run_comparison(scenario);
  write_text_file(out_path, manifest_comment(manifest) +
                                net::report_csv(reports));

  const net::BandwidthReport* motor = nullptr;
  const net::BandwidthReport* matrix = nullptr;
  for (const net::BandwidthReport& r : reports) {
    if (motor == nullptr && r.encoding == "Motor8") motor = &r;
    if (matrix == nullptr && r.encoding == "Matrix16") matrix = &r;
  }
  if (motor != nullptr && matrix != nullptr) {
    const double reduction =
        1.0 - motor->payload_bytes_per_s / matrix->payload_bytes_per_s;
    std::printf(
        "netbench: payload Motor8@%sHz %s B/s vs Matrix16@%sHz %s B/s, "
        "reduction %s%%\n",
        fmt_double(motor->rate_hz).c_str(),
        fmt_double(motor->payload_bytes_per_s).c_str(),
        fmt_double(matrix->rate_hz).c_str(),
        fmt_double(matrix->payload_bytes_per_s).c_str(),
        fmt_double(100.0 * reduction).c_str());
  }
  for (const net::BandwidthReport& r : reports) {
    std::printf("netbench: %s@%sHz rms error %s\n", r.encoding.c_str(),
                fmt_double(r.rate_hz).c_str(), fmt_double(r.rms_error).c_str());
  }
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

// --------------------------------------------------------------------------
// fixtures

int run_fixtures(const std::string& dir) {
  // Fixtures are canonical inputs under version control, not derived
  // reports, so the files themselves stay manifest-free and byte-identical
  // to the in-library builders; the manifest goes to stdout.
  const std::filesystem::path base(dir);
  const std::string cylinder = (base / "two_bone_cylinder.json").string();
  const std::string cube = (base / "unit_cube.json").string();
  const std::string orbit = (base / "orbit_scenario.json").string();

  const ordered_json manifest = make_manifest(
      "fixtures", {}, {{"dir", dir}}, nullptr, {cylinder, cube, orbit});
  std::fputs(manifest_comment(manifest).c_str(), stdout);

  write_text_file(cylinder,
                  scn::save_scene_json(scn::make_two_bone_cylinder_scene()));
  write_text_file(cube, scn::save_scene_json(scn::make_unit_cube_scene()));
  net::save_scenario_file(net::make_orbit_scenario(), orbit);

  std::printf("wrote %s\n", cylinder.c_str());
  std::printf("wrote %s\n", cube.c_str());
  std::printf("wrote %s\n", orbit.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Conformal-motor toolkit: algebra audits, skinning and interpolation "
      "comparisons, mesh cuts, and transform-sync benchmarks"};
  app.require_subcommand(1);

  // cayley
  auto* cayley = app.add_subcommand(
      "cayley", "Dump and audit the Cl(4,1) blade product table");
  std::string cayley_out = "cayley.csv";
  std::uint64_t cayley_seed = 1;
  int cayley_samples = 32;
  bool cayley_flip = false;
  cayley->add_option("--out", cayley_out, "Output CSV path")
      ->capture_default_str();
  cayley->add_option("--seed", cayley_seed, "Seed for the random product audit")
      ->capture_default_str();
  cayley->add_option("--samples", cayley_samples,
                     "Random multivector pairs to audit")
      ->check(CLI::Range(1, 100000))
      ->capture_default_str();
  cayley->add_flag("--inject-flip", cayley_flip,
                   "Corrupt one table row to prove the audit catches it");

  // skin
  auto* skin = app.add_subcommand(
      "skin", "Per-frame multivector vs linear blend skinning error");
  std::string skin_scene;
  std::string skin_out = "skin.csv";
  double skin_time = 0.0;
  int skin_sweep = 0;
  skin->add_option("scene", skin_scene, "Skinned scene JSON")->required();
  auto* skin_time_opt =
      skin->add_option("--time", skin_time, "Evaluate at one clip time");
  auto* skin_sweep_opt =
      skin->add_option("--sweep", skin_sweep,
                       "Evaluate at N evenly spaced times over the clip")
          ->check(CLI::Range(2, 1000000));
  skin_time_opt->excludes(skin_sweep_opt);
  skin->add_option("--out", skin_out, "Output CSV path")->capture_default_str();

  // interp
  auto* interp = app.add_subcommand(
      "interp", "Interpolation error sweep on the canonical turn trajectory");
  double interp_spacing = 90.0;
  std::string interp_method = "all";
  double interp_hz = 60.0;
  std::string interp_out = "interp.csv";
  interp
      ->add_option("--keyframe-spacing", interp_spacing,
                   "Keyframe spacing in degrees of turn")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  interp
      ->add_option("--method", interp_method,
                   "motor | quatvec | matrix-raw | matrix-gs | all")
      ->check(CLI::IsMember(
          {"motor", "quatvec", "matrix-raw", "matrix-gs", "all"}))
      ->capture_default_str();
  interp->add_option("--eval-hz", interp_hz, "Evaluation samples per second")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  interp->add_option("--out", interp_out, "Output CSV path")
      ->capture_default_str();

  // cut
  auto* cut = app.add_subcommand(
      "cut", "Slice a skinned scene with a plane and report the topology");
  std::string cut_scene;
  std::string cut_normal = "1,0,0";
  double cut_offset = 0.0;
  std::string cut_out = "cut_scene.json";
  std::string cut_report = "cut_report.json";
  cut->add_option("scene", cut_scene, "Skinned scene JSON")->required();
  auto* cut_normal_opt = cut->add_option(
      "--normal", cut_normal, "Plane normal \"x,y,z\" (normalized internally)");
  cut_normal_opt->capture_default_str();
  auto* cut_offset_opt = cut->add_option(
      "--offset", cut_offset, "Plane distance from the origin along the normal");
  cut_offset_opt->capture_default_str();
  cut->add_option("--out", cut_out, "Output scene JSON path")
      ->capture_default_str();
  cut->add_option("--report", cut_report, "Output topology report path")
      ->capture_default_str();

  // netbench
  auto* netbench = app.add_subcommand(
      "netbench", "Replay a transform-sync scenario and report bandwidth/error");
  std::string net_scenario;
  std::string net_out = "netbench.csv";
  std::uint64_t net_seed = 0;
  netbench->add_option("scenario", net_scenario, "Scenario JSON")->required();
  auto* net_seed_opt = netbench->add_option(
      "--seed", net_seed, "Override the scenario's network seed");
  netbench->add_option("--out", net_out, "Output CSV path")
      ->capture_default_str();

  // fixtures
  auto* fixtures = app.add_subcommand(
      "fixtures", "Regenerate the canonical scenes and scenario");
  std::string fixtures_dir = "fixtures";
  fixtures->add_option("--dir", fixtures_dir, "Output directory")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit cleanly; bad usage is 2
  }

  try {
    if (cayley->parsed()) {
      return run_cayley(cayley_out, cayley_seed, cayley_samples, cayley_flip);
    }
    if (skin->parsed()) {
      return run_skin(skin_scene, skin_time_opt->count() > 0, skin_time,
                      skin_sweep_opt->count() > 0, skin_sweep, skin_out);
    }
    if (interp->parsed()) {
      return run_interp(interp_spacing, interp_method, interp_hz, interp_out);
    }
    if (cut->parsed()) {
      const bool have_plane =
          cut_normal_opt->count() > 0 || cut_offset_opt->count() > 0;
      return run_cut(cut_scene, have_plane, cut_normal, cut_offset, cut_out,
                     cut_report);
    }
    if (netbench->parsed()) {
      return run_netbench(net_scenario, net_seed_opt->count() > 0, net_seed,
                          net_out);
    }
    if (fixtures->parsed()) {
      return run_fixtures(fixtures_dir);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;  // unreachable: require_subcommand(1) guarantees a branch above
}
