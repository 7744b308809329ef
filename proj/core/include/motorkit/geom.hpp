#pragma once
#include <array>
#include <cmath>
#include <cstddef>

namespace motorkit::geom {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  friend Vec3 operator*(double s, const Vec3& v) { return v * s; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm_sq() const { return dot(*this); }
  double norm() const { return std::sqrt(norm_sq()); }
  Vec3 normalized() const;
  bool is_finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

double distance(const Vec3& a, const Vec3& b);

// Column-major 3x3; m[col * 3 + row].
struct Mat3 {
  std::array<double, 9> m{};

  static Mat3 identity();
  static Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2);

  double operator()(int row, int col) const { return m[col * 3 + row]; }
  double& operator()(int row, int col) { return m[col * 3 + row]; }
  Vec3 column(int c) const { return {m[c * 3], m[c * 3 + 1], m[c * 3 + 2]}; }

  Mat3 operator*(const Mat3& o) const;
  Vec3 operator*(const Vec3& v) const;
  Mat3 operator+(const Mat3& o) const;
  Mat3 operator-(const Mat3& o) const;
  Mat3 operator*(double s) const;
  Mat3 transposed() const;
  double det() const;
  double frobenius_norm() const;
};

// Re-orthonormalize a near-rotation: normalize column 0, project column 1,
// take the cross product for column 2 (always yields a proper rotation).
// Degenerate columns fall back to a deterministic axis choice.
Mat3 orthonormalized(const Mat3& a);

// Column-major 4x4 affine transform; bottom row (0,0,0,1) for valid poses.
struct Mat4 {
  std::array<double, 16> m{};

  static Mat4 identity();
  static Mat4 from_rotation_translation(const Mat3& r, const Vec3& t);
  static Mat4 translation_matrix(const Vec3& t);

  double operator()(int row, int col) const { return m[col * 4 + row]; }
  double& operator()(int row, int col) { return m[col * 4 + row]; }

  Mat4 operator*(const Mat4& o) const;
  Mat3 linear_block() const;
  Vec3 translation() const { return {m[12], m[13], m[14]}; }
  bool has_affine_bottom_row(double tol = 1e-9) const;

  // Applies the transform to a point, including the homogeneous divide.
  Vec3 transform_point(const Vec3& p) const;
};

// Entrywise interpolation; the common engine fallback for pose blending.
Mat4 lerp(const Mat4& a, const Mat4& b, double t);

// Hamilton quaternion, w + xi + yj + zk.
struct Quaternion {
  double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

  static Quaternion identity() { return {1.0, 0.0, 0.0, 0.0}; }
  static Quaternion from_axis_angle(const Vec3& axis, double angle);
  static Quaternion from_rotation_matrix(const Mat3& r);

  Quaternion operator*(const Quaternion& o) const;
  Quaternion operator+(const Quaternion& o) const {
    return {w + o.w, x + o.x, y + o.y, z + o.z};
  }
  Quaternion operator*(double s) const { return {w * s, x * s, y * s, z * s}; }
  Quaternion operator-() const { return {-w, -x, -y, -z}; }
  Quaternion conjugate() const { return {w, -x, -y, -z}; }
  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }
  double dot(const Quaternion& o) const {
    return w * o.w + x * o.x + y * o.y + z * o.z;
  }
  Quaternion normalized() const;
  Vec3 rotate(const Vec3& v) const;  // q v q*
  Mat3 to_rotation_matrix() const;
};

// Shortest-arc spherical interpolation; falls back to normalized lerp for
// nearly parallel inputs.
Quaternion slerp(const Quaternion& a, const Quaternion& b, double t);

// real + eps * dual; rigid transform when |real| = 1 and real.dot(dual) = 0.
struct DualQuaternion {
  Quaternion real = Quaternion::identity();
  Quaternion dual{0.0, 0.0, 0.0, 0.0};

  static DualQuaternion identity() { return {}; }
  static DualQuaternion from_rotation_translation(const Quaternion& q,
                                                  const Vec3& t);
  Quaternion rotation() const { return real; }
  Vec3 translation() const;
  Vec3 transform_point(const Vec3& p) const;
};

}  // namespace motorkit::geom
