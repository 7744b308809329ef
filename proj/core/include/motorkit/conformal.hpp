#pragma once
#include <initializer_list>
#include <span>

#include "motorkit/algebra.hpp"
#include "motorkit/geom.hpp"

namespace motorkit::cga {

// Everything in this module lives in Cl(4,1) with the conformal split
//   e_inf = e4 + e5,   e_o = (e5 - e4) / 2,
// so e_inf^2 = e_o^2 = 0 and e_inf . e_o = -1. Points embed as the null
// vectors up(x) = x + |x|^2/2 e_inf + e_o.

// Named blade masks of the Cl(4,1) basis used throughout the kernel.
namespace blades {
inline constexpr ga::BladeMask scalar = 0;
inline constexpr ga::BladeMask e1 = 1, e2 = 2, e3 = 4, e4 = 8, e5 = 16;
inline constexpr ga::BladeMask e12 = 3, e13 = 5, e23 = 6;
inline constexpr ga::BladeMask e14 = 9, e24 = 10, e34 = 12;
inline constexpr ga::BladeMask e15 = 17, e25 = 18, e35 = 20;
inline constexpr ga::BladeMask e45 = 24;
inline constexpr ga::BladeMask e123 = 7, e1234 = 15, e1235 = 23;
}  // namespace blades

ga::Multivector e_inf();
ga::Multivector e_origin();

// Null grade-1 vector with e_o weight 1; produced by up(), consumed by the
// sandwich/skinning pipeline.
struct ConformalPoint {
  ga::Multivector mv{ga::conformal};
};

// Embed a Euclidean point. Throws std::invalid_argument on non-finite input.
ConformalPoint up(const geom::Vec3& x);

// The e_o weight of a homogeneous point, -<P, e_inf>; zero means the point
// sits at infinity.
double point_weight(const ga::Multivector& P);

// Invert the embedding: divide out the e_o weight, read e1..e3. Throws
// std::domain_error when the weight is below 1e-12 (point at infinity).
geom::Vec3 down(const ga::Multivector& P);
inline geom::Vec3 down(const ConformalPoint& P) { return down(P.mv); }

// Even versors. The wrapper types exist so signatures say which species a
// function expects; the algebra underneath is uniform.
struct Rotor {
  ga::Multivector mv{ga::conformal};
};
struct Translator {
  ga::Multivector mv{ga::conformal};
};
struct Dilator {
  ga::Multivector mv{ga::conformal};
};

// General motion versor: rotation + translation, optionally with a uniform
// scale composed in. The flag tracks scale so rigid-only consumers (the
// 8-float wire encoding, dual quaternions) can refuse early.
struct Motor {
  ga::Multivector mv = ga::Multivector::scalar(ga::conformal, 1.0);
  bool has_dilation = false;

  static Motor identity() { return {}; }
};

// R = cos(a/2) - sin(a/2) B with B the unit bivector dual to the axis;
// sandwiching rotates by `angle` about `axis` through the origin. Throws
// std::invalid_argument on a zero axis.
Rotor rotor_from_axis_angle(const geom::Vec3& axis, double angle);

// The bivector <-> quaternion dictionary (w <-> scalar, x <-> -e23,
// y <-> e13, z <-> -e12), chosen so both sides rotate identically. A
// quaternion off unit norm by more than 1e-6 is rejected, not renormalized.
Rotor rotor_from_quaternion(const geom::Quaternion& q);
geom::Quaternion quaternion_from_rotor(const Rotor& r);

// T = 1 - t e_inf / 2; carries up(x) to up(x + t).
Translator translator(const geom::Vec3& t);

// D scales every point by s about the origin: down(D up(x) D^-1) = s x.
// Built as exp(u e_o ^ e_inf) with u = ln(s)/2. Throws on s <= 0.
Dilator dilator(double s);

Motor to_motor(const Rotor& r);
Motor to_motor(const Translator& t);
Motor to_motor(const Dilator& d);

// Divide by the full norm so M ~M = 1. With M ~M = s + G the inverse square
// root is applied as (1 - G/(2s)) / sqrt(s); on the rigid subalgebra G is a
// null central quadvector (G^2 = 0), making the result exact there — in
// particular, linear blends of rigid motors normalize to exact rigid motors.
// Throws std::domain_error when the scalar norm s is below 1e-12 (antipodal
// blend collapse) or when M ~M still deviates from 1 by more than 1e-6
// afterwards (operand was never near a versor).
Motor normalize_motor(const Motor& m);

// Geometric product of the parts in application order: the rightmost part
// acts first, exactly like matrix composition. Result is normalized.
Motor motor_compose(std::span<const Motor> parts);
Motor motor_compose(std::initializer_list<Motor> parts);

// down(M up(x) M^-1): the workhorse point-transform path.
geom::Vec3 apply_to_point(const Motor& m, const geom::Vec3& x);

// True when mv has support only on the rigid-motor blades {1, e12, e13,
// e23, e1inf, e2inf, e3inf, e123inf}; equality of the paired e_i4/e_i5
// coefficients is part of the check.
bool has_rigid_support(const ga::Multivector& mv, double tol = 1e-9);

// Conversions to and from the matrix world. motor_from_matrix requires an
// affine bottom row and a linear block that factors as uniform scale times
// rotation; shear, non-uniform scale, reflections, and singular blocks are
// reported as std::invalid_argument, never silently approximated.
Motor motor_from_matrix(const geom::Mat4& m);
geom::Mat4 matrix_from_motor(const Motor& m);

// Rigid-motor <-> dual-quaternion dictionary. Motors with dilation are
// rejected (std::invalid_argument); round trips agree up to global sign.
Motor motor_from_dual_quaternion(const geom::DualQuaternion& dq);
geom::DualQuaternion dual_quaternion_from_motor(const Motor& m);

// Component extraction for rigid motors (translation then rotation, i.e.
// M = T R): the rotation quaternion and the translation vector.
geom::Quaternion rotation_of(const Motor& m);
geom::Vec3 translation_of(const Motor& m);

// Oriented cut plane pi = n + d e_inf with unit normal; signed incidence
// against embedded points is <up(x), pi> = x.n - d, positive on the side
// the normal points to.
struct CutPlane {
  ga::Multivector mv{ga::conformal};
  geom::Vec3 normal;
  double offset = 0.0;
};

// Normalizes the given normal direction; d is kept as-is (distance from the
// origin along the unit normal). Throws std::invalid_argument on a zero
// normal.
CutPlane plane(const geom::Vec3& normal, double d);

// <up(x), pi> as a plain scalar.
double signed_distance(const CutPlane& p, const geom::Vec3& x);

// a ^ b: the grade-2 conformal point pair (zero when the points coincide).
ga::Multivector point_pair(const ConformalPoint& a, const ConformalPoint& b);

}  // namespace motorkit::cga
