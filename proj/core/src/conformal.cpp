#include "motorkit/conformal.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace motorkit::cga {

using ga::conformal;
using ga::Multivector;
namespace b = blades;

Multivector e_inf() {
  Multivector m(conformal);
  m[b::e4] = 1.0;
  m[b::e5] = 1.0;
  return m;
}

Multivector e_origin() {
  Multivector m(conformal);
  m[b::e4] = -0.5;
  m[b::e5] = 0.5;
  return m;
}

ConformalPoint up(const geom::Vec3& x) {
  if (!x.is_finite()) {
    throw std::invalid_argument("up: point has non-finite coordinates");
  }
  const double half_sq = 0.5 * x.norm_sq();
  Multivector m(conformal);
  m[b::e1] = x.x;
  m[b::e2] = x.y;
  m[b::e3] = x.z;
  // half_sq * e_inf + e_o, expanded onto e4/e5.
  m[b::e4] = half_sq - 0.5;
  m[b::e5] = half_sq + 0.5;
  return {m};
}

double point_weight(const Multivector& P) { return P[b::e5] - P[b::e4]; }

geom::Vec3 down(const Multivector& P) {
  const double w = point_weight(P);
  if (std::abs(w) <= 1e-12) {
    throw std::domain_error("down: point at infinity (e_o weight ~ 0)");
  }
  return geom::Vec3{P[b::e1], P[b::e2], P[b::e3]} / w;
}

Rotor rotor_from_axis_angle(const geom::Vec3& axis, double angle) {
  const double n = axis.norm();
  if (n < 1e-12) {
    throw std::invalid_argument("rotor_from_axis_angle: zero axis");
  }
  const geom::Vec3 u = axis / n;
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  Multivector m(conformal);
  m[b::scalar] = c;
  // B = ux e23 + uy e31 + uz e12, with e31 stored as -e13.
  m[b::e23] = -s * u.x;
  m[b::e13] = s * u.y;
  m[b::e12] = -s * u.z;
  return {m};
}

Rotor rotor_from_quaternion(const geom::Quaternion& q) {
  if (std::abs(q.norm() - 1.0) > 1e-6) {
    throw std::invalid_argument("rotor_from_quaternion: quaternion not unit");
  }
  Multivector m(conformal);
  m[b::scalar] = q.w;
  m[b::e23] = -q.x;
  m[b::e13] = q.y;
  m[b::e12] = -q.z;
  return {m};
}

geom::Quaternion quaternion_from_rotor(const Rotor& r) {
  return {r.mv[b::scalar], -r.mv[b::e23], r.mv[b::e13], -r.mv[b::e12]};
}

Translator translator(const geom::Vec3& t) {
  Multivector m = Multivector::scalar(conformal, 1.0);
  // -t e_inf / 2 lands with equal coefficients on e_i4 and e_i5.
  m[b::e14] = m[b::e15] = -0.5 * t.x;
  m[b::e24] = m[b::e25] = -0.5 * t.y;
  m[b::e34] = m[b::e35] = -0.5 * t.z;
  return {m};
}

Dilator dilator(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw std::invalid_argument("dilator: scale must be positive and finite");
  }
  const double u = 0.5 * std::log(s);
  // e_o ^ e_inf = -e45, and (e45)^2 = +1, so the exponential is hyperbolic.
  Multivector m(conformal);
  m[b::scalar] = std::cosh(u);
  m[b::e45] = -std::sinh(u);
  return {m};
}

Motor to_motor(const Rotor& r) { return {r.mv, false}; }
Motor to_motor(const Translator& t) { return {t.mv, false}; }
Motor to_motor(const Dilator& d) { return {d.mv, d.mv[b::e45] != 0.0}; }

Motor normalize_motor(const Motor& m) {
  const Multivector gram = m.mv * ga::reverse(m.mv);
  const double n2 = ga::scalar_part(gram);
  if (!(n2 > 1e-12) || !std::isfinite(n2)) {
    throw std::domain_error("normalize_motor: scalar norm vanishes");
  }
  // Inverse square root of the full norm: with M ~M = s + G,
  // 1/sqrt(s + G) = (1 - G/(2s)) / sqrt(s) up to O((G/s)^2). For blends of
  // rigid motors G is the null quadvector part (G^2 = 0 and G central in
  // that subalgebra), so the correction lands exactly on the versor
  // manifold; a plain rescale cannot remove G at all.
  Multivector residual = gram;
  residual[b::scalar] -= n2;
  const Multivector corr =
      Multivector::scalar(conformal, 1.0) - residual / (2.0 * n2);
  Motor out{(m.mv * corr) / std::sqrt(n2), m.has_dilation};
  const Multivector check = out.mv * ga::reverse(out.mv);
  if (check.inf_norm_excluding_grade(0) > 1e-6 ||
      std::abs(ga::scalar_part(check) - 1.0) > 1e-6) {
    throw std::domain_error("normalize_motor: operand is not a versor");
  }
  return out;
}

Motor motor_compose(std::span<const Motor> parts) {
  Motor acc = Motor::identity();
  for (const Motor& p : parts) {
    acc.mv = acc.mv * p.mv;
    acc.has_dilation = acc.has_dilation || p.has_dilation;
  }
  return normalize_motor(acc);
}

Motor motor_compose(std::initializer_list<Motor> parts) {
  return motor_compose(std::span<const Motor>(parts.begin(), parts.size()));
}

geom::Vec3 apply_to_point(const Motor& m, const geom::Vec3& x) {
  return down(ga::sandwich(m.mv, up(x).mv));
}

bool has_rigid_support(const Multivector& mv, double tol) {
  static constexpr ga::BladeMask support[] = {
      b::scalar, b::e12, b::e13, b::e23, b::e14, b::e15,
      b::e24,    b::e25, b::e34, b::e35, b::e1234, b::e1235};
  for (ga::BladeMask mask = 0; mask < mv.size(); ++mask) {
    bool in_support = false;
    for (ga::BladeMask s : support) in_support = in_support || (mask == s);
    if (!in_support && std::abs(mv[mask]) > tol) return false;
  }
  // e_inf-blade coefficients must agree pairwise, otherwise the e4/e5
  // content is not purely infinite-direction.
  return std::abs(mv[b::e14] - mv[b::e15]) <= tol &&
         std::abs(mv[b::e24] - mv[b::e25]) <= tol &&
         std::abs(mv[b::e34] - mv[b::e35]) <= tol &&
         std::abs(mv[b::e1234] - mv[b::e1235]) <= tol;
}

Motor motor_from_matrix(const geom::Mat4& m) {
  if (!m.has_affine_bottom_row()) {
    throw std::invalid_argument("motor_from_matrix: bottom row is not 0,0,0,1");
  }
  const geom::Mat3 a = m.linear_block();
  const double det = a.det();
  if (!(det > 1e-12)) {
    throw std::invalid_argument(
        "motor_from_matrix: linear block is singular or reflecting");
  }
  // Uniform scale <=> A^T A = s^2 I. Compare against the average diagonal so
  // the test is relative; 2e-6 on the Gram matrix matches a 1e-6 relative
  // spread of singular values.
  const geom::Mat3 gram = a.transposed() * a;
  const double s2 = (gram(0, 0) + gram(1, 1) + gram(2, 2)) / 3.0;
  for (int row = 0; row < 3; ++row) {
    for (int col = 0; col < 3; ++col) {
      const double expect = row == col ? 1.0 : 0.0;
      if (std::abs(gram(row, col) / s2 - expect) > 2e-6) {
        throw std::invalid_argument(
            "motor_from_matrix: shear or non-uniform scale present");
      }
    }
  }
  const double s = std::cbrt(det);
  const geom::Quaternion q =
      geom::Quaternion::from_rotation_matrix(a * (1.0 / s));
  Motor out = motor_compose({to_motor(translator(m.translation())),
                             to_motor(dilator(s)),
                             to_motor(rotor_from_quaternion(q))});
  out.has_dilation = std::abs(s - 1.0) > 1e-9;
  return out;
}

geom::Mat4 matrix_from_motor(const Motor& m) {
  const geom::Vec3 origin = apply_to_point(m, {0, 0, 0});
  const geom::Vec3 c0 = apply_to_point(m, {1, 0, 0}) - origin;
  const geom::Vec3 c1 = apply_to_point(m, {0, 1, 0}) - origin;
  const geom::Vec3 c2 = apply_to_point(m, {0, 0, 1}) - origin;
  return geom::Mat4::from_rotation_translation(
      geom::Mat3::from_columns(c0, c1, c2), origin);
}

Motor motor_from_dual_quaternion(const geom::DualQuaternion& dq) {
  if (std::abs(dq.real.norm() - 1.0) > 1e-6) {
    throw std::invalid_argument(
        "motor_from_dual_quaternion: real part not unit");
  }
  return motor_compose({to_motor(translator(dq.translation())),
                        to_motor(rotor_from_quaternion(dq.real))});
}

geom::DualQuaternion dual_quaternion_from_motor(const Motor& m) {
  if (m.has_dilation) {
    throw std::invalid_argument(
        "dual_quaternion_from_motor: motor carries a dilation");
  }
  return geom::DualQuaternion::from_rotation_translation(rotation_of(m),
                                                         translation_of(m));
}

geom::Quaternion rotation_of(const Motor& m) {
  if (m.has_dilation) {
    throw std::invalid_argument("rotation_of: motor carries a dilation");
  }
  // For M = T R the Euclidean-blade restriction of M is exactly R.
  Rotor r;
  r.mv[b::scalar] = m.mv[b::scalar];
  r.mv[b::e12] = m.mv[b::e12];
  r.mv[b::e13] = m.mv[b::e13];
  r.mv[b::e23] = m.mv[b::e23];
  return quaternion_from_rotor(r).normalized();
}

geom::Vec3 translation_of(const Motor& m) {
  if (m.has_dilation) {
    throw std::invalid_argument("translation_of: motor carries a dilation");
  }
  return apply_to_point(m, {0, 0, 0});
}

CutPlane plane(const geom::Vec3& normal, double d) {
  const double n = normal.norm();
  if (n < 1e-12) {
    throw std::invalid_argument("plane: zero normal");
  }
  const geom::Vec3 unit = normal / n;
  CutPlane p;
  p.normal = unit;
  p.offset = d;
  p.mv[b::e1] = unit.x;
  p.mv[b::e2] = unit.y;
  p.mv[b::e3] = unit.z;
  // d * e_inf.
  p.mv[b::e4] = d;
  p.mv[b::e5] = d;
  return p;
}

double signed_distance(const CutPlane& p, const geom::Vec3& x) {
  return ga::scalar_part(ga::inner_product(up(x).mv, p.mv));
}

ga::Multivector point_pair(const ConformalPoint& a, const ConformalPoint& b) {
  return a.mv ^ b.mv;
}

}  // namespace motorkit::cga
