#pragma once
#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace motorkit::ga {

// Metric signature of Cl(p,q): p basis vectors squaring to +1, q squaring
// to -1. Supported instances are Cl(3,0) and Cl(4,1); anything up to
// p+q = 5 works.
struct Signature {
  int p = 0;
  int q = 0;

  int dim() const { return p + q; }
  std::uint32_t blade_count() const { return 1u << dim(); }
  // +1 or -1 for basis vector e_{axis+1}.
  int metric(int axis) const { return axis < p ? 1 : -1; }

  friend bool operator==(const Signature&, const Signature&) = default;
};

inline constexpr Signature euclidean3{3, 0};
inline constexpr Signature conformal{4, 1};

// Basis blades are bitmasks: bit i set means e_{i+1} is a factor, factors in
// ascending index order.
using BladeMask = std::uint32_t;

inline int blade_grade(BladeMask mask) { return std::popcount(mask); }

// Sign of the reversion map on a grade-k blade: (-1)^(k(k-1)/2).
inline int reverse_sign(int grade) {
  return (grade * (grade - 1) / 2) % 2 == 0 ? 1 : -1;
}

struct BladeProduct {
  BladeMask mask = 0;
  int sign = 0;
};

// Geometric product of two basis blades via swap counting: the number of
// transpositions needed to merge the factor lists, times the metric of every
// annihilated pair. Masks must be valid for the signature.
BladeProduct blade_product(BladeMask a, BladeMask b, const Signature& sig);

// Same product computed the slow way: concatenate the factor symbols, bubble
// sort counting swaps, contract adjacent equal factors against the metric.
// Kept as an independent reference path for table audits.
BladeProduct blade_product_reference(BladeMask a, BladeMask b,
                                     const Signature& sig);

// Precomputed sign table over all blade pairs of one signature. Immutable
// after construction and shareable across threads.
class ProductTable {
 public:
  explicit ProductTable(const Signature& sig);

  const Signature& signature() const { return sig_; }
  int sign(BladeMask a, BladeMask b) const {
    return signs_[(a << dim_) | b];
  }
  static BladeMask result_mask(BladeMask a, BladeMask b) { return a ^ b; }

  // Shared immutable instance per signature.
  static const ProductTable& instance(const Signature& sig);

 private:
  Signature sig_;
  int dim_;
  std::vector<std::int8_t> signs_;
};

// Dense multivector over the 2^(p+q) blades of Cl(p,q), coefficients indexed
// by blade mask. Value semantics throughout; every operation is pure.
class Multivector {
 public:
  explicit Multivector(const Signature& sig) : sig_(sig) {}

  static Multivector scalar(const Signature& sig, double value);
  // Single-blade multivector; throws std::invalid_argument on a mask out of
  // range for the signature.
  static Multivector blade(const Signature& sig, BladeMask mask,
                           double coeff = 1.0);
  // Grade-1 vector from per-axis coefficients (e1, e2, ...).
  static Multivector vector(const Signature& sig,
                            std::span<const double> coeffs);

  const Signature& signature() const { return sig_; }
  std::uint32_t size() const { return sig_.blade_count(); }

  double operator[](BladeMask mask) const { return c_[mask]; }
  double& operator[](BladeMask mask) { return c_[mask]; }
  double at(BladeMask mask) const;

  Multivector operator+(const Multivector& o) const;
  Multivector operator-(const Multivector& o) const;
  Multivector operator-() const;
  Multivector operator*(double s) const;
  Multivector operator/(double s) const { return *this * (1.0 / s); }
  friend Multivector operator*(double s, const Multivector& m) {
    return m * s;
  }
  Multivector& operator+=(const Multivector& o);

  bool is_finite() const;
  double inf_norm() const;
  // Max absolute coefficient outside grade k.
  double inf_norm_excluding_grade(int k) const;

 private:
  Signature sig_;
  std::array<double, 32> c_{};
};

// Geometric product; bilinear, associative. Throws std::invalid_argument on
// signature mismatch.
Multivector geometric_product(const Multivector& a, const Multivector& b);
// Outer (wedge) product: blade pairs with no common factor.
Multivector outer_product(const Multivector& a, const Multivector& b);
// Inner product as the left contraction; coincides with the dot product on
// two vectors.
Multivector inner_product(const Multivector& a, const Multivector& b);
Multivector reverse(const Multivector& a);
Multivector grade_projection(const Multivector& a, int k);
double scalar_part(const Multivector& a);

// Relative gate on the non-scalar part of V * ~V below which V counts as a
// versor.
inline constexpr double kVersorTolerance = 1e-9;

bool is_versor(const Multivector& v, double tol = kVersorTolerance);

// reverse(V) / <V ~V>_0. Throws std::domain_error when V fails the versor
// gate or V ~V is numerically zero.
Multivector versor_inverse(const Multivector& v);

// V X V^-1.
Multivector sandwich(const Multivector& versor, const Multivector& x);

// Operator sugar matching common GA notation.
inline Multivector operator*(const Multivector& a, const Multivector& b) {
  return geometric_product(a, b);
}
inline Multivector operator^(const Multivector& a, const Multivector& b) {
  return outer_product(a, b);
}
inline Multivector operator|(const Multivector& a, const Multivector& b) {
  return inner_product(a, b);
}

}  // namespace motorkit::ga
