// Microbenchmarks for the hot paths: blade/multivector products, versor
// application, skinning, blending, wire serialization, and plane cuts.
// All inputs are seeded deterministically so runs are comparable.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "motorkit/algebra.hpp"
#include "motorkit/conformal.hpp"
#include "motorkit/geom.hpp"
#include "motorkit/mesh_cut.hpp"
#include "motorkit/motion.hpp"
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

struct Rng {
  std::mt19937_64 gen{0xBE7C4};
  std::uniform_real_distribution<double> dist{-1.0, 1.0};

  double operator()() { return dist(gen); }
  geom::Vec3 vec3(double s = 1.0) { return {s * (*this)(), s * (*this)(), s * (*this)()}; }
  geom::Quaternion unit_quaternion() {
    for (;;) {
      const geom::Quaternion q{(*this)(), (*this)(), (*this)(), (*this)()};
      if (q.norm() > 0.1) return q.normalized();
    }
  }
  ga::Multivector multivector(const ga::Signature& sig) {
    ga::Multivector m(sig);
    for (ga::BladeMask i = 0; i < m.size(); ++i) m[i] = (*this)();
    return m;
  }
  cga::Motor rigid_motor() {
    return cga::motor_compose(
        {cga::to_motor(cga::translator(vec3(2.0))),
         cga::to_motor(cga::rotor_from_quaternion(unit_quaternion()))});
  }
};

// ------------------------------------------------------------ algebra

void BM_BladeProductTableBuild(benchmark::State& state) {
  for (auto _ : state) {
    ga::ProductTable table(ga::conformal);
    benchmark::DoNotOptimize(table);
  }
}
BENCHMARK(BM_BladeProductTableBuild);

void BM_BladeProductReference(benchmark::State& state) {
  std::uint32_t a = 0;
  for (auto _ : state) {
    a = (a + 1) & 31u;
    benchmark::DoNotOptimize(
        ga::blade_product_reference(a, 31u - a, ga::conformal));
  }
}
BENCHMARK(BM_BladeProductReference);

void BM_GeometricProductDense(benchmark::State& state) {
  Rng rng;
  const ga::Multivector a = rng.multivector(ga::conformal);
  const ga::Multivector b = rng.multivector(ga::conformal);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ga::geometric_product(a, b));
  }
}
BENCHMARK(BM_GeometricProductDense);

void BM_SandwichPoint(benchmark::State& state) {
  Rng rng;
  const cga::Motor m = rng.rigid_motor();
  const geom::Vec3 p = rng.vec3(2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cga::apply_to_point(m, p));
  }
}
BENCHMARK(BM_SandwichPoint);

void BM_QuaternionRotatePoint(benchmark::State& state) {
  Rng rng;
  const geom::Quaternion q = rng.unit_quaternion();
  const geom::Vec3 p = rng.vec3(2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(q.rotate(p));
  }
}
BENCHMARK(BM_QuaternionRotatePoint);

// ------------------------------------------------------------ motion

void BM_MotorLerp(benchmark::State& state) {
  Rng rng;
  const cga::Motor m1 = rng.rigid_motor();
  const cga::Motor m2 = rng.rigid_motor();
  double t = 0.0;
  for (auto _ : state) {
    t += 0.1;
    if (t > 1.0) t -= 1.0;
    benchmark::DoNotOptimize(motion::motor_lerp(m1, m2, t));
  }
}
BENCHMARK(BM_MotorLerp);

void BM_MotorMatrixRoundTrip(benchmark::State& state) {
  Rng rng;
  const cga::Motor m = rng.rigid_motor();
  for (auto _ : state) {
    benchmark::DoNotOptimize(cga::motor_from_matrix(cga::matrix_from_motor(m)));
  }
}
BENCHMARK(BM_MotorMatrixRoundTrip);

void BM_SkinLbsCylinder(benchmark::State& state) {
  const scn::Scene s = scn::make_two_bone_cylinder_scene();
  const motion::Keyframe& kf = s.clip.keyframes[1];
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        motion::skin_lbs(s.mesh.skin, s.rig, kf.pose_matrices, kf.time));
  }
  state.SetItemsProcessed(state.iterations() *
                          std::int64_t(s.mesh.skin.rest_positions.size()));
}
BENCHMARK(BM_SkinLbsCylinder);

void BM_SkinCgaCylinder(benchmark::State& state) {
  const scn::Scene s = scn::make_two_bone_cylinder_scene();
  const motion::Keyframe& kf = s.clip.keyframes[1];
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        motion::skin_cga(s.mesh.skin, s.rig, kf.pose_motors, kf.time));
  }
  state.SetItemsProcessed(state.iterations() *
                          std::int64_t(s.mesh.skin.rest_positions.size()));
}
BENCHMARK(BM_SkinCgaCylinder);

// ------------------------------------------------------------ wire

void BM_EncodeUpdate(benchmark::State& state) {
  Rng rng;
  const net::PoseSample pose =
      net::PoseSample::from_motor(1.5, 7, rng.rigid_motor());
  const auto tag = net::Encoding(state.range(0));
  std::uint32_t seq = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(net::encode_update(pose, seq++, tag));
  }
}
BENCHMARK(BM_EncodeUpdate)->Arg(0)->Arg(1)->Arg(2);

void BM_DecodeToPose(benchmark::State& state) {
  Rng rng;
  const net::PoseSample pose =
      net::PoseSample::from_motor(1.5, 7, rng.rigid_motor());
  const auto tag = net::Encoding(state.range(0));
  const std::vector<std::uint8_t> bytes = net::encode_update(pose, 3, tag);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net::pose_from_update(net::decode_update(bytes)));
  }
}
BENCHMARK(BM_DecodeToPose)->Arg(0)->Arg(1)->Arg(2);

// ------------------------------------------------------------ mesh

void BM_CutCylinder(benchmark::State& state) {
  const scn::Scene s = scn::make_two_bone_cylinder_scene();
  const cga::CutPlane plane = cga::plane({0.0, 0.0, 1.0}, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(meshops::cut_mesh(s.mesh, plane));
  }
  state.SetItemsProcessed(state.iterations() *
                          std::int64_t(s.mesh.triangles.size()));
}
BENCHMARK(BM_CutCylinder);

}  // namespace

BENCHMARK_MAIN();
