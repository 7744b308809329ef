#include "motorkit/geom.hpp"

#include <algorithm>
#include <stdexcept>

namespace motorkit::geom {

Vec3 Vec3::normalized() const {
  const double n = norm();
  if (n < 1e-300) {
    throw std::domain_error("cannot normalize zero vector");
  }
  return *this / n;
}

double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

Mat3 Mat3::identity() {
  Mat3 r;
  r(0, 0) = r(1, 1) = r(2, 2) = 1.0;
  return r;
}

Mat3 Mat3::from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
  Mat3 r;
  r.m = {c0.x, c0.y, c0.z, c1.x, c1.y, c1.z, c2.x, c2.y, c2.z};
  return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int c = 0; c < 3; ++c) {
    for (int row = 0; row < 3; ++row) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += (*this)(row, k) * o(k, c);
      r(row, c) = s;
    }
  }
  return r;
}

Vec3 Mat3::operator*(const Vec3& v) const {
  return {(*this)(0, 0) * v.x + (*this)(0, 1) * v.y + (*this)(0, 2) * v.z,
          (*this)(1, 0) * v.x + (*this)(1, 1) * v.y + (*this)(1, 2) * v.z,
          (*this)(2, 0) * v.x + (*this)(2, 1) * v.y + (*this)(2, 2) * v.z};
}

Mat3 Mat3::operator+(const Mat3& o) const {
  Mat3 r;
  for (std::size_t i = 0; i < 9; ++i) r.m[i] = m[i] + o.m[i];
  return r;
}

Mat3 Mat3::operator-(const Mat3& o) const {
  Mat3 r;
  for (std::size_t i = 0; i < 9; ++i) r.m[i] = m[i] - o.m[i];
  return r;
}

Mat3 Mat3::operator*(double s) const {
  Mat3 r;
  for (std::size_t i = 0; i < 9; ++i) r.m[i] = m[i] * s;
  return r;
}

Mat3 Mat3::transposed() const {
  Mat3 r;
  for (int c = 0; c < 3; ++c)
    for (int row = 0; row < 3; ++row) r(c, row) = (*this)(row, c);
  return r;
}

double Mat3::det() const {
  return column(0).dot(column(1).cross(column(2)));
}

double Mat3::frobenius_norm() const {
  double s = 0.0;
  for (double v : m) s += v * v;
  return std::sqrt(s);
}

namespace {

Vec3 fallback_axis(int preferred) {
  switch (preferred % 3) {
    case 0: return {1.0, 0.0, 0.0};
    case 1: return {0.0, 1.0, 0.0};
    default: return {0.0, 0.0, 1.0};
  }
}

}  // namespace

Mat3 orthonormalized(const Mat3& a) {
  constexpr double kDegenerate = 1e-12;
  Vec3 u0 = a.column(0);
  if (u0.norm() < kDegenerate) u0 = fallback_axis(0);
  u0 = u0 / u0.norm();

  Vec3 u1 = a.column(1) - u0 * a.column(1).dot(u0);
  if (u1.norm() < kDegenerate) {
    for (int i = 1; u1.norm() < kDegenerate; ++i) {
      u1 = fallback_axis(i) - u0 * fallback_axis(i).dot(u0);
    }
  }
  u1 = u1 / u1.norm();
  const Vec3 u2 = u0.cross(u1);
  return Mat3::from_columns(u0, u1, u2);
}

Mat4 Mat4::identity() {
  Mat4 r;
  r(0, 0) = r(1, 1) = r(2, 2) = r(3, 3) = 1.0;
  return r;
}

Mat4 Mat4::from_rotation_translation(const Mat3& rot, const Vec3& t) {
  Mat4 r = identity();
  for (int c = 0; c < 3; ++c)
    for (int row = 0; row < 3; ++row) r(row, c) = rot(row, c);
  r(0, 3) = t.x;
  r(1, 3) = t.y;
  r(2, 3) = t.z;
  return r;
}

Mat4 Mat4::translation_matrix(const Vec3& t) {
  return from_rotation_translation(Mat3::identity(), t);
}

Mat4 Mat4::operator*(const Mat4& o) const {
  Mat4 r;
  for (int c = 0; c < 4; ++c) {
    for (int row = 0; row < 4; ++row) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += (*this)(row, k) * o(k, c);
      r(row, c) = s;
    }
  }
  return r;
}

Mat3 Mat4::linear_block() const {
  Mat3 r;
  for (int c = 0; c < 3; ++c)
    for (int row = 0; row < 3; ++row) r(row, c) = (*this)(row, c);
  return r;
}

bool Mat4::has_affine_bottom_row(double tol) const {
  return std::abs((*this)(3, 0)) <= tol && std::abs((*this)(3, 1)) <= tol &&
         std::abs((*this)(3, 2)) <= tol && std::abs((*this)(3, 3) - 1.0) <= tol;
}

Vec3 Mat4::transform_point(const Vec3& p) const {
  const double hx = (*this)(0, 0) * p.x + (*this)(0, 1) * p.y + (*this)(0, 2) * p.z + (*this)(0, 3);
  const double hy = (*this)(1, 0) * p.x + (*this)(1, 1) * p.y + (*this)(1, 2) * p.z + (*this)(1, 3);
  const double hz = (*this)(2, 0) * p.x + (*this)(2, 1) * p.y + (*this)(2, 2) * p.z + (*this)(2, 3);
  const double hw = (*this)(3, 0) * p.x + (*this)(3, 1) * p.y + (*this)(3, 2) * p.z + (*this)(3, 3);
  if (std::abs(hw) < 1e-300) {
    throw std::domain_error("homogeneous divide by zero");
  }
  return {hx / hw, hy / hw, hz / hw};
}

Mat4 lerp(const Mat4& a, const Mat4& b, double t) {
  Mat4 r;
  for (std::size_t i = 0; i < 16; ++i) r.m[i] = (1.0 - t) * a.m[i] + t * b.m[i];
  return r;
}

Quaternion Quaternion::from_axis_angle(const Vec3& axis, double angle) {
  const Vec3 n = axis.normalized();
  const double h = 0.5 * angle;
  const double s = std::sin(h);
  return {std::cos(h), s * n.x, s * n.y, s * n.z};
}

Quaternion Quaternion::from_rotation_matrix(const Mat3& r) {
  // Shepperd's method: branch on the largest diagonal combination.
  const double tr = r(0, 0) + r(1, 1) + r(2, 2);
  Quaternion q;
  if (tr > 0.0) {
    const double s = std::sqrt(tr + 1.0) * 2.0;
    q.w = 0.25 * s;
    q.x = (r(2, 1) - r(1, 2)) / s;
    q.y = (r(0, 2) - r(2, 0)) / s;
    q.z = (r(1, 0) - r(0, 1)) / s;
  } else if (r(0, 0) > r(1, 1) && r(0, 0) > r(2, 2)) {
    const double s = std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2)) * 2.0;
    q.w = (r(2, 1) - r(1, 2)) / s;
    q.x = 0.25 * s;
    q.y = (r(0, 1) + r(1, 0)) / s;
    q.z = (r(0, 2) + r(2, 0)) / s;
  } else if (r(1, 1) > r(2, 2)) {
    const double s = std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2)) * 2.0;
    q.w = (r(0, 2) - r(2, 0)) / s;
    q.x = (r(0, 1) + r(1, 0)) / s;
    q.y = 0.25 * s;
    q.z = (r(1, 2) + r(2, 1)) / s;
  } else {
    const double s = std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1)) * 2.0;
    q.w = (r(1, 0) - r(0, 1)) / s;
    q.x = (r(0, 2) + r(2, 0)) / s;
    q.y = (r(1, 2) + r(2, 1)) / s;
    q.z = 0.25 * s;
  }
  return q.normalized();
}

Quaternion Quaternion::operator*(const Quaternion& o) const {
  return {w * o.w - x * o.x - y * o.y - z * o.z,
          w * o.x + x * o.w + y * o.z - z * o.y,
          w * o.y - x * o.z + y * o.w + z * o.x,
          w * o.z + x * o.y - y * o.x + z * o.w};
}

Quaternion Quaternion::normalized() const {
  const double n = norm();
  if (n < 1e-300) {
    throw std::domain_error("cannot normalize zero quaternion");
  }
  return {w / n, x / n, y / n, z / n};
}

Vec3 Quaternion::rotate(const Vec3& v) const {
  const Quaternion p{0.0, v.x, v.y, v.z};
  const Quaternion r = (*this) * p * conjugate();
  return {r.x, r.y, r.z};
}

Mat3 Quaternion::to_rotation_matrix() const {
  Mat3 r;
  const double xx = x * x, yy = y * y, zz = z * z;
  const double xy = x * y, xz = x * z, yz = y * z;
  const double wx = w * x, wy = w * y, wz = w * z;
  r(0, 0) = 1.0 - 2.0 * (yy + zz);
  r(0, 1) = 2.0 * (xy - wz);
  r(0, 2) = 2.0 * (xz + wy);
  r(1, 0) = 2.0 * (xy + wz);
  r(1, 1) = 1.0 - 2.0 * (xx + zz);
  r(1, 2) = 2.0 * (yz - wx);
  r(2, 0) = 2.0 * (xz - wy);
  r(2, 1) = 2.0 * (yz + wx);
  r(2, 2) = 1.0 - 2.0 * (xx + yy);
  return r;
}

Quaternion slerp(const Quaternion& a, const Quaternion& b, double t) {
  Quaternion bb = b;
  double d = a.dot(b);
  if (d < 0.0) {
    bb = -b;
    d = -d;
  }
  d = std::min(d, 1.0);
  const double theta = std::acos(d);
  if (theta < 1e-9) {
    const Quaternion q = a * (1.0 - t) + bb * t;
    return q.normalized();
  }
  const double s = std::sin(theta);
  const double wa = std::sin((1.0 - t) * theta) / s;
  const double wb = std::sin(t * theta) / s;
  return (a * wa + bb * wb).normalized();
}

DualQuaternion DualQuaternion::from_rotation_translation(const Quaternion& q,
                                                         const Vec3& t) {
  DualQuaternion dq;
  dq.real = q;
  const Quaternion tq{0.0, t.x, t.y, t.z};
  dq.dual = (tq * q) * 0.5;
  return dq;
}

Vec3 DualQuaternion::translation() const {
  const Quaternion t = (dual * 2.0) * real.conjugate();
  return {t.x, t.y, t.z};
}

Vec3 DualQuaternion::transform_point(const Vec3& p) const {
  return real.rotate(p) + translation();
}

}  // namespace motorkit::geom
