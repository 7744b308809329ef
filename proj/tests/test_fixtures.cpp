// The checked-in fixture files are canonical: they must stay byte-identical
// to what the in-library builders produce, so that a scene or scenario loaded
// from disk is exactly the one the tests and tools reason about. Any change
// to a builder must be accompanied by regenerating the fixtures
// (`motorkit fixtures --dir fixtures`), and this suite is what notices when
// the two drift apart.

#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "motorkit/netsim.hpp"
#include "motorkit/scene.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(bool(in), "cannot open fixture: " << path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fixture_path(const char* name) {
  return std::string(MOTORKIT_FIXTURE_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("two-bone cylinder fixture matches its builder byte for byte") {
  const auto scene = motorkit::scene::make_two_bone_cylinder_scene();
  CHECK(slurp(fixture_path("two_bone_cylinder.json")) ==
        motorkit::scene::save_scene_json(scene));
}

TEST_CASE("unit cube fixture matches its builder byte for byte") {
  const auto scene = motorkit::scene::make_unit_cube_scene();
  CHECK(slurp(fixture_path("unit_cube.json")) ==
        motorkit::scene::save_scene_json(scene));
}

TEST_CASE("orbit scenario fixture matches its builder byte for byte") {
  const auto scenario = motorkit::net::make_orbit_scenario();
  CHECK(slurp(fixture_path("orbit_scenario.json")) ==
        motorkit::net::save_scenario_json(scenario));
}

TEST_CASE("fixtures load cleanly through the public loaders") {
  const auto cylinder = motorkit::scene::load_scene_file(
      fixture_path("two_bone_cylinder.json"));
  CHECK(cylinder.rig.bones.size() == 2);
  CHECK(cylinder.clip.keyframes.size() == 3);

  const auto cube =
      motorkit::scene::load_scene_file(fixture_path("unit_cube.json"));
  CHECK(cube.mesh.triangles.size() == 12);

  const auto orbit = motorkit::net::load_scenario_file(
      fixture_path("orbit_scenario.json"));
  CHECK(orbit.streams.size() == 4);
  CHECK(orbit.duration_s == 10.0);
}
