// Reference implementations used only by the test suite. Each one is written
// from the underlying definition by a different route than the library code
// takes, so that agreement is evidence rather than tautology.
#pragma once
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "motorkit/algebra.hpp"
#include "motorkit/geom.hpp"

namespace oracle {

// --- Blade products, built one basis vector at a time -----------------------
//
// A blade is multiplied on the right by a single basis vector e_axis: the
// vector commutes past every factor with a higher index (one sign flip each),
// then either joins the factor list or contracts against its twin with the
// metric. Folding over the factors of the right-hand blade in ascending
// order yields the full blade product without ever counting swaps between
// two whole blades.

struct BladeTerm {
  std::uint32_t mask = 0;
  int sign = 0;
};

inline BladeTerm times_basis_vector(std::uint32_t mask, int axis,
                                    const motorkit::ga::Signature& sig) {
  const std::uint32_t bit = 1u << axis;
  const std::uint32_t higher = mask & ~((bit << 1) - 1);
  int sign = std::popcount(higher) % 2 == 0 ? 1 : -1;
  if (mask & bit) {
    sign *= sig.metric(axis);
    return {mask & ~bit, sign};
  }
  return {mask | bit, sign};
}

inline BladeTerm blade_product(std::uint32_t a, std::uint32_t b,
                               const motorkit::ga::Signature& sig) {
  BladeTerm acc{a, 1};
  for (int axis = 0; axis < sig.dim(); ++axis) {
    if (b & (1u << axis)) {
      BladeTerm next = times_basis_vector(acc.mask, axis, sig);
      acc.mask = next.mask;
      acc.sign *= next.sign;
    }
  }
  return acc;
}

// Full multivector product as a plain double loop over the blade-pair
// oracle. Returns coefficients keyed by blade mask.
inline std::map<std::uint32_t, double> geometric_product(
    const motorkit::ga::Multivector& a, const motorkit::ga::Multivector& b) {
  std::map<std::uint32_t, double> out;
  const auto& sig = a.signature();
  for (std::uint32_t i = 0; i < a.size(); ++i) {
    for (std::uint32_t j = 0; j < b.size(); ++j) {
      if (a[i] == 0.0 || b[j] == 0.0) continue;
      BladeTerm t = oracle::blade_product(i, j, sig);
      out[t.mask] += t.sign * a[i] * b[j];
    }
  }
  return out;
}

// --- Rotations --------------------------------------------------------------

// Rodrigues' formula, straight from the axis-angle definition:
// v' = v cos t + (k x v) sin t + k (k.v)(1 - cos t).
inline motorkit::geom::Vec3 rodrigues_rotate(const motorkit::geom::Vec3& axis,
                                             double angle,
                                             const motorkit::geom::Vec3& v) {
  using motorkit::geom::Vec3;
  const Vec3 k = axis.normalized();
  const double c = std::cos(angle), s = std::sin(angle);
  return v * c + k.cross(v) * s + k * (k.dot(v) * (1.0 - c));
}

// Rotation matrix from axis-angle via Rodrigues applied to the basis columns.
inline motorkit::geom::Mat3 rodrigues_matrix(const motorkit::geom::Vec3& axis,
                                             double angle) {
  using motorkit::geom::Vec3;
  return motorkit::geom::Mat3::from_columns(
      rodrigues_rotate(axis, angle, Vec3{1, 0, 0}),
      rodrigues_rotate(axis, angle, Vec3{0, 1, 0}),
      rodrigues_rotate(axis, angle, Vec3{0, 0, 1}));
}

// Quaternion rotation expanded from the component formula for q v q*,
// avoiding the library's matrix and rotate paths.
inline motorkit::geom::Vec3 quat_rotate_components(
    const motorkit::geom::Quaternion& q, const motorkit::geom::Vec3& v) {
  const double w = q.w, x = q.x, y = q.y, z = q.z;
  return {
      (w * w + x * x - y * y - z * z) * v.x + 2 * (x * y - w * z) * v.y +
          2 * (x * z + w * y) * v.z,
      2 * (x * y + w * z) * v.x + (w * w - x * x + y * y - z * z) * v.y +
          2 * (y * z - w * x) * v.z,
      2 * (x * z - w * y) * v.x + 2 * (y * z + w * x) * v.y +
          (w * w - x * x - y * y + z * z) * v.z,
  };
}

// Great-circle interpolation from the closed form sin((1-t)h)/sin h q1 +
// sin(th)/sin h q2, with the hemisphere fix applied up front.
inline motorkit::geom::Quaternion slerp_closed_form(
    motorkit::geom::Quaternion a, motorkit::geom::Quaternion b, double t) {
  double d = a.dot(b);
  if (d < 0) {
    b = -b;
    d = -d;
  }
  if (d > 1.0) d = 1.0;
  const double h = std::acos(d);
  if (h < 1e-12) return a;
  const double s = std::sin(h);
  return a * (std::sin((1 - t) * h) / s) + b * (std::sin(t * h) / s);
}

// --- Line / plane intersection ----------------------------------------------

// Parametric solution of n.(p0 + t d) = c; caller guarantees n.d != 0.
inline motorkit::geom::Vec3 line_plane_intersection(
    const motorkit::geom::Vec3& p0, const motorkit::geom::Vec3& d,
    const motorkit::geom::Vec3& n, double c) {
  const double t = (c - n.dot(p0)) / n.dot(d);
  return p0 + d * t;
}

// --- Connected components ---------------------------------------------------

// Union-find over explicit edges; returns per-node component labels,
// relabelled to be dense and ordered by first appearance.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }
  std::vector<int> labels() {
    std::vector<int> label(parent_.size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < parent_.size(); ++i) {
      std::size_t root = find(i);
      if (label[root] < 0) label[root] = next++;
      label[i] = label[root];
    }
    return label;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace oracle
