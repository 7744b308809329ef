#include "motorkit/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace motorkit::scene {

namespace {

using json = nlohmann::ordered_json;

json mat4_to_json(const geom::Mat4& m) {
  return json(std::vector<double>(m.m.begin(), m.m.end()));
}

geom::Mat4 mat4_from_json(const json& j) {
  if (!j.is_array() || j.size() != 16) {
    throw std::invalid_argument(
        "scene JSON: matrix must be an array of 16 numbers (column-major)");
  }
  geom::Mat4 m;
  for (std::size_t i = 0; i < 16; ++i) m.m[i] = j[i].get<double>();
  return m;
}

motion::Keyframe keyframe_from_json(const json& j) {
  motion::Keyframe kf;
  kf.time = j.at("time").get<double>();
  for (const auto& pose : j.at("pose")) {
    const geom::Mat4 m = mat4_from_json(pose);
    kf.pose_matrices.push_back(m);
    kf.pose_motors.push_back(cga::motor_from_matrix(m));
  }
  return kf;
}

}  // namespace

void validate_scene(const Scene& s) {
  meshops::validate_mesh(s.mesh);
  motion::validate_influences(s.mesh.skin, s.rig.bones.size());
  for (std::size_t b = 0; b < s.rig.bones.size(); ++b) {
    const auto& bone = s.rig.bones[b];
    if (bone.parent != -1 &&
        (bone.parent < 0 || bone.parent >= static_cast<int>(b))) {
      char msg[96];
      std::snprintf(msg, sizeof msg,
                    "validate_scene: bone %zu has parent %d; parents must "
                    "precede children",
                    b, bone.parent);
      throw std::invalid_argument(msg);
    }
    const geom::Mat4 from_motor = cga::matrix_from_motor(bone.offset_motor);
    for (int i = 0; i < 16; ++i) {
      if (std::abs(from_motor.m[i] - bone.offset_matrix.m[i]) > 1e-9) {
        throw std::invalid_argument(
            "validate_scene: bone offset motor disagrees with its matrix");
      }
    }
  }
  if (s.clip.keyframes.empty()) {
    throw std::invalid_argument("validate_scene: clip has no keyframes");
  }
  for (std::size_t k = 0; k < s.clip.keyframes.size(); ++k) {
    const auto& kf = s.clip.keyframes[k];
    if (k > 0 && !(kf.time > s.clip.keyframes[k - 1].time)) {
      throw std::invalid_argument(
          "validate_scene: keyframe times must be strictly increasing");
    }
    if (kf.pose_matrices.size() != s.rig.bones.size() ||
        kf.pose_motors.size() != s.rig.bones.size()) {
      throw std::invalid_argument(
          "validate_scene: keyframe pose count does not match bone count");
    }
    for (std::size_t b = 0; b < s.rig.bones.size(); ++b) {
      const geom::Mat4 from_motor =
          cga::matrix_from_motor(kf.pose_motors[b]);
      for (int i = 0; i < 16; ++i) {
        if (std::abs(from_motor.m[i] - kf.pose_matrices[b].m[i]) > 1e-9) {
          throw std::invalid_argument(
              "validate_scene: keyframe pose motor disagrees with its matrix");
        }
      }
    }
  }
}

Scene load_scene_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("scene JSON: parse error: ") +
                                e.what());
  }
  Scene s;
  try {
    const auto& mesh = doc.at("mesh");
    for (const auto& v : mesh.at("vertices")) {
      if (!v.is_array() || v.size() != 3) {
        throw std::invalid_argument(
            "scene JSON: each vertex must be [x, y, z]");
      }
      s.mesh.skin.rest_positions.push_back(
          {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()});
    }
    for (const auto& t : mesh.at("triangles")) {
      if (!t.is_array() || t.size() != 3) {
        throw std::invalid_argument(
            "scene JSON: each triangle must be [a, b, c]");
      }
      s.mesh.triangles.push_back(
          {t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
    }
    for (const auto& per_vertex : mesh.at("weights")) {
      if (!per_vertex.is_array() || per_vertex.empty() ||
          per_vertex.size() > 4) {
        throw std::invalid_argument(
            "scene JSON: each vertex needs 1 to 4 [bone, weight] pairs");
      }
      std::vector<motion::VertexInfluence> inf;
      for (const auto& pair : per_vertex) {
        if (!pair.is_array() || pair.size() != 2) {
          throw std::invalid_argument(
              "scene JSON: influence entries must be [bone, weight]");
        }
        inf.push_back({pair[0].get<int>(), pair[1].get<double>()});
      }
      s.mesh.skin.influences.push_back(std::move(inf));
    }
    for (const auto& b : doc.at("rig").at("bones")) {
      motion::Bone bone;
      bone.name = b.at("name").get<std::string>();
      bone.parent = b.at("parent").get<int>();
      bone.offset_matrix = mat4_from_json(b.at("offset"));
      bone.offset_motor = cga::motor_from_matrix(bone.offset_matrix);
      s.rig.bones.push_back(std::move(bone));
    }
    for (const auto& kf : doc.at("keyframes")) {
      s.clip.keyframes.push_back(keyframe_from_json(kf));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("scene JSON: bad structure: ") +
                                e.what());
  }
  s.mesh.skin.refresh_conformal_cache();
  validate_scene(s);
  return s;
}

std::string save_scene_json(const Scene& s) {
  json doc;
  auto& mesh = doc["mesh"];
  mesh["vertices"] = json::array();
  for (const auto& v : s.mesh.skin.rest_positions) {
    mesh["vertices"].push_back({v.x, v.y, v.z});
  }
  mesh["triangles"] = json::array();
  for (const auto& t : s.mesh.triangles) {
    mesh["triangles"].push_back({t[0], t[1], t[2]});
  }
  mesh["weights"] = json::array();
  for (const auto& per_vertex : s.mesh.skin.influences) {
    json pairs = json::array();
    for (const auto& inf : per_vertex) {
      pairs.push_back({inf.bone, inf.weight});
    }
    mesh["weights"].push_back(std::move(pairs));
  }
  doc["rig"]["bones"] = json::array();
  for (const auto& b : s.rig.bones) {
    doc["rig"]["bones"].push_back(
        {{"name", b.name}, {"parent", b.parent},
         {"offset", mat4_to_json(b.offset_matrix)}});
  }
  doc["keyframes"] = json::array();
  for (const auto& kf : s.clip.keyframes) {
    json pose = json::array();
    for (const auto& m : kf.pose_matrices) pose.push_back(mat4_to_json(m));
    doc["keyframes"].push_back({{"time", kf.time}, {"pose", std::move(pose)}});
  }
  return doc.dump(2) + "\n";
}

Scene load_scene_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("load_scene_file: cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_scene_json(buf.str());
}

void save_scene_file(const Scene& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("save_scene_file: cannot open " + path);
  }
  out << save_scene_json(s);
}

namespace {

motion::Keyframe make_keyframe(double time, std::vector<geom::Mat4> poses) {
  motion::Keyframe kf;
  kf.time = time;
  for (const auto& m : poses) {
    kf.pose_matrices.push_back(m);
    kf.pose_motors.push_back(cga::motor_from_matrix(m));
  }
  return kf;
}

geom::Mat4 axis_rotation(const geom::Vec3& axis, double degrees) {
  const double rad = degrees * std::numbers::pi / 180.0;
  return geom::Mat4::from_rotation_translation(
      geom::Quaternion::from_axis_angle(axis, rad).to_rotation_matrix(),
      {0.0, 0.0, 0.0});
}

}  // namespace

Scene make_two_bone_cylinder_scene() {
  constexpr int kSegments = 12;
  constexpr int kRings = 9;
  constexpr double kRadius = 0.25;
  constexpr double kLength = 2.0;

  Scene s;
  auto& skin = s.mesh.skin;
  for (int r = 0; r < kRings; ++r) {
    const double z = kLength * r / (kRings - 1);
    const double u = std::clamp((z - 0.8) / 0.4, 0.0, 1.0);
    const double w1 = u * u * (3.0 - 2.0 * u);  // smoothstep over z in [0.8, 1.2]
    for (int k = 0; k < kSegments; ++k) {
      const double a = 2.0 * std::numbers::pi * k / kSegments;
      skin.rest_positions.push_back(
          {kRadius * std::cos(a), kRadius * std::sin(a), z});
      if (w1 <= 0.0) {
        skin.influences.push_back({{0, 1.0}});
      } else if (w1 >= 1.0) {
        skin.influences.push_back({{1, 1.0}});
      } else {
        skin.influences.push_back({{0, 1.0 - w1}, {1, w1}});
      }
    }
  }
  for (int r = 0; r + 1 < kRings; ++r) {
    for (int k = 0; k < kSegments; ++k) {
      const int i00 = r * kSegments + k;
      const int i01 = r * kSegments + (k + 1) % kSegments;
      const int i10 = (r + 1) * kSegments + k;
      const int i11 = (r + 1) * kSegments + (k + 1) % kSegments;
      s.mesh.triangles.push_back({i00, i01, i11});
      s.mesh.triangles.push_back({i00, i11, i10});
    }
  }
  skin.refresh_conformal_cache();

  motion::Bone root;
  root.name = "root";
  root.parent = -1;
  root.offset_matrix = geom::Mat4::identity();
  root.offset_motor = cga::motor_from_matrix(root.offset_matrix);
  motion::Bone elbow;
  elbow.name = "elbow";
  elbow.parent = 0;
  elbow.offset_matrix = geom::Mat4::translation_matrix({0.0, 0.0, -1.0});
  elbow.offset_motor = cga::motor_from_matrix(elbow.offset_matrix);
  s.rig.bones = {root, elbow};

  const geom::Mat4 bind1 = geom::Mat4::translation_matrix({0.0, 0.0, 1.0});
  const geom::Mat4 rest_root = geom::Mat4::identity();
  const geom::Mat4 bend_root = geom::Mat4::identity();
  const geom::Mat4 bend_elbow = bind1 * axis_rotation({1.0, 0.0, 0.0}, 90.0);
  const geom::Mat4 travel_root =
      geom::Mat4::translation_matrix({0.5, 0.0, 0.0}) *
      axis_rotation({0.0, 0.0, 1.0}, 45.0);
  const geom::Mat4 travel_elbow =
      travel_root * bind1 * axis_rotation({1.0, 0.0, 0.0}, -45.0);
  s.clip.keyframes = {
      make_keyframe(0.0, {rest_root, bind1}),
      make_keyframe(1.0, {bend_root, bend_elbow}),
      make_keyframe(2.0, {travel_root, travel_elbow}),
  };

  validate_scene(s);
  return s;
}

Scene make_unit_cube_scene() {
  Scene s;
  auto& skin = s.mesh.skin;
  for (const double zc : {0.0, 1.0}) {
    skin.rest_positions.push_back({0.0, 0.0, zc});
    skin.rest_positions.push_back({1.0, 0.0, zc});
    skin.rest_positions.push_back({1.0, 1.0, zc});
    skin.rest_positions.push_back({0.0, 1.0, zc});
  }
  skin.influences.assign(8, {{0, 1.0}});
  s.mesh.triangles = {
      {0, 2, 1}, {0, 3, 2},  // bottom, normal -z
      {4, 5, 6}, {4, 6, 7},  // top, normal +z
      {0, 1, 5}, {0, 5, 4},  // front, normal -y
      {2, 3, 7}, {2, 7, 6},  // back, normal +y
      {0, 4, 7}, {0, 7, 3},  // left, normal -x
      {1, 2, 6}, {1, 6, 5},  // right, normal +x
  };
  skin.refresh_conformal_cache();

  motion::Bone root;
  root.name = "root";
  root.parent = -1;
  root.offset_matrix = geom::Mat4::identity();
  root.offset_motor = cga::motor_from_matrix(root.offset_matrix);
  s.rig.bones = {root};
  s.clip.keyframes = {make_keyframe(0.0, {geom::Mat4::identity()})};

  validate_scene(s);
  return s;
}

}  // namespace motorkit::scene
