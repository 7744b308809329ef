#include "motorkit/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace motorkit::ga {
namespace {

void check_mask(BladeMask mask, const Signature& sig, const char* what) {
  if (mask >= sig.blade_count()) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s: blade mask %u out of range for Cl(%d,%d)",
                  what, mask, sig.p, sig.q);
    throw std::invalid_argument(buf);
  }
}

void check_same_signature(const Multivector& a, const Multivector& b,
                          const char* what) {
  if (!(a.signature() == b.signature())) {
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "%s: mixed signatures Cl(%d,%d) and Cl(%d,%d)", what,
                  a.signature().p, a.signature().q, b.signature().p,
                  b.signature().q);
    throw std::invalid_argument(buf);
  }
}

}  // namespace

BladeProduct blade_product(BladeMask a, BladeMask b, const Signature& sig) {
  check_mask(a, sig, "blade_product");
  check_mask(b, sig, "blade_product");
  // Count the transpositions that carry each factor of a rightward past the
  // lower-indexed factors of b. Shifting a down one axis at a time visits
  // each factor of a once; the popcount picks up every b factor it must
  // cross.
  int swaps = 0;
  BladeMask shifted = a >> 1;
  while (shifted != 0) {
    swaps += std::popcount(shifted & b);
    shifted >>= 1;
  }
  // Factors present in both blades meet and contract against the metric.
  int sign = (swaps % 2 == 0) ? 1 : -1;
  BladeMask common = a & b;
  for (int axis = 0; axis < sig.dim(); ++axis) {
    if (common & (1u << axis)) sign *= sig.metric(axis);
  }
  return {a ^ b, sign};
}

BladeProduct blade_product_reference(BladeMask a, BladeMask b,
                                     const Signature& sig) {
  check_mask(a, sig, "blade_product_reference");
  check_mask(b, sig, "blade_product_reference");
  // Write out the factor symbols of a then b, sort by adjacent swaps, and
  // cancel equal neighbours against the metric. Deliberately naive.
  std::vector<int> factors;
  for (int axis = 0; axis < sig.dim(); ++axis)
    if (a & (1u << axis)) factors.push_back(axis);
  for (int axis = 0; axis < sig.dim(); ++axis)
    if (b & (1u << axis)) factors.push_back(axis);

  int sign = 1;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t i = 0; i + 1 < factors.size(); ++i) {
      if (factors[i] > factors[i + 1]) {
        std::swap(factors[i], factors[i + 1]);
        sign = -sign;
        moved = true;
      }
    }
  }
  std::vector<int> kept;
  for (std::size_t i = 0; i < factors.size();) {
    if (i + 1 < factors.size() && factors[i] == factors[i + 1]) {
      sign *= sig.metric(factors[i]);
      i += 2;
    } else {
      kept.push_back(factors[i]);
      i += 1;
    }
  }
  BladeMask mask = 0;
  for (int axis : kept) mask |= 1u << axis;
  return {mask, sign};
}

ProductTable::ProductTable(const Signature& sig) : sig_(sig), dim_(sig.dim()) {
  const std::uint32_t n = sig.blade_count();
  signs_.resize(std::size_t{n} * n);
  for (BladeMask a = 0; a < n; ++a)
    for (BladeMask b = 0; b < n; ++b)
      signs_[(a << dim_) | b] =
          static_cast<std::int8_t>(blade_product(a, b, sig).sign);
}

const ProductTable& ProductTable::instance(const Signature& sig) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, ProductTable> cache;
  std::scoped_lock lock(mu);
  auto [it, inserted] = cache.try_emplace(std::pair{sig.p, sig.q}, sig);
  return it->second;
}

Multivector Multivector::scalar(const Signature& sig, double value) {
  Multivector m(sig);
  m.c_[0] = value;
  return m;
}

Multivector Multivector::blade(const Signature& sig, BladeMask mask,
                               double coeff) {
  check_mask(mask, sig, "Multivector::blade");
  Multivector m(sig);
  m.c_[mask] = coeff;
  return m;
}

Multivector Multivector::vector(const Signature& sig,
                                std::span<const double> coeffs) {
  if (coeffs.size() != static_cast<std::size_t>(sig.dim())) {
    throw std::invalid_argument(
        "Multivector::vector: coefficient count does not match dimension");
  }
  Multivector m(sig);
  for (std::size_t axis = 0; axis < coeffs.size(); ++axis)
    m.c_[1u << axis] = coeffs[axis];
  return m;
}

double Multivector::at(BladeMask mask) const {
  check_mask(mask, sig_, "Multivector::at");
  return c_[mask];
}

Multivector Multivector::operator+(const Multivector& o) const {
  check_same_signature(*this, o, "operator+");
  Multivector r(sig_);
  for (std::uint32_t i = 0; i < size(); ++i) r.c_[i] = c_[i] + o.c_[i];
  return r;
}

Multivector Multivector::operator-(const Multivector& o) const {
  check_same_signature(*this, o, "operator-");
  Multivector r(sig_);
  for (std::uint32_t i = 0; i < size(); ++i) r.c_[i] = c_[i] - o.c_[i];
  return r;
}

Multivector Multivector::operator-() const {
  Multivector r(sig_);
  for (std::uint32_t i = 0; i < size(); ++i) r.c_[i] = -c_[i];
  return r;
}

Multivector Multivector::operator*(double s) const {
  Multivector r(sig_);
  for (std::uint32_t i = 0; i < size(); ++i) r.c_[i] = c_[i] * s;
  return r;
}

Multivector& Multivector::operator+=(const Multivector& o) {
  check_same_signature(*this, o, "operator+=");
  for (std::uint32_t i = 0; i < size(); ++i) c_[i] += o.c_[i];
  return *this;
}

bool Multivector::is_finite() const {
  for (std::uint32_t i = 0; i < size(); ++i)
    if (!std::isfinite(c_[i])) return false;
  return true;
}

double Multivector::inf_norm() const {
  double m = 0.0;
  for (std::uint32_t i = 0; i < size(); ++i)
    m = std::max(m, std::abs(c_[i]));
  return m;
}

double Multivector::inf_norm_excluding_grade(int k) const {
  double m = 0.0;
  for (std::uint32_t i = 0; i < size(); ++i)
    if (blade_grade(i) != k) m = std::max(m, std::abs(c_[i]));
  return m;
}

Multivector geometric_product(const Multivector& a, const Multivector& b) {
  check_same_signature(a, b, "geometric_product");
  const Signature& sig = a.signature();
  const ProductTable& table = ProductTable::instance(sig);
  const std::uint32_t n = a.size();
  Multivector r(sig);
  for (std::uint32_t i = 0; i < n; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    for (std::uint32_t j = 0; j < n; ++j) {
      const double bj = b[j];
      if (bj == 0.0) continue;
      r[i ^ j] += table.sign(i, j) * ai * bj;
    }
  }
  return r;
}

Multivector outer_product(const Multivector& a, const Multivector& b) {
  check_same_signature(a, b, "outer_product");
  const Signature& sig = a.signature();
  const ProductTable& table = ProductTable::instance(sig);
  const std::uint32_t n = a.size();
  Multivector r(sig);
  for (std::uint32_t i = 0; i < n; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    for (std::uint32_t j = 0; j < n; ++j) {
      if ((i & j) != 0) continue;  // shared factor annihilates the wedge
      const double bj = b[j];
      if (bj == 0.0) continue;
      r[i | j] += table.sign(i, j) * ai * bj;
    }
  }
  return r;
}

Multivector inner_product(const Multivector& a, const Multivector& b) {
  check_same_signature(a, b, "inner_product");
  const Signature& sig = a.signature();
  const ProductTable& table = ProductTable::instance(sig);
  const std::uint32_t n = a.size();
  Multivector r(sig);
  for (std::uint32_t i = 0; i < n; ++i) {
    const double ai = a[i];
    if (ai == 0.0) continue;
    const int gi = blade_grade(i);
    for (std::uint32_t j = 0; j < n; ++j) {
      const double bj = b[j];
      if (bj == 0.0) continue;
      // Left contraction keeps only the grade-(gj - gi) part, which for
      // basis blades means every factor of i must occur in j.
      if (blade_grade(i ^ j) != blade_grade(j) - gi) continue;
      r[i ^ j] += table.sign(i, j) * ai * bj;
    }
  }
  return r;
}

Multivector reverse(const Multivector& a) {
  Multivector r(a.signature());
  for (std::uint32_t i = 0; i < a.size(); ++i)
    r[i] = reverse_sign(blade_grade(i)) * a[i];
  return r;
}

Multivector grade_projection(const Multivector& a, int k) {
  Multivector r(a.signature());
  for (std::uint32_t i = 0; i < a.size(); ++i)
    if (blade_grade(i) == k) r[i] = a[i];
  return r;
}

double scalar_part(const Multivector& a) { return a[0]; }

bool is_versor(const Multivector& v, double tol) {
  const Multivector vv = geometric_product(v, reverse(v));
  const double scale = vv.inf_norm();
  if (!(scale > 0.0) || !std::isfinite(scale)) return false;
  return vv.inf_norm_excluding_grade(0) <= tol * scale;
}

Multivector versor_inverse(const Multivector& v) {
  const Multivector vv = geometric_product(v, reverse(v));
  const double scale = vv.inf_norm();
  if (!(scale > 0.0) || !std::isfinite(scale) ||
      vv.inf_norm_excluding_grade(0) > kVersorTolerance * scale) {
    throw std::domain_error("versor_inverse: operand is not a versor");
  }
  const double s = scalar_part(vv);
  if (std::abs(s) < 1e-12) {
    throw std::domain_error("versor_inverse: V * ~V is numerically zero");
  }
  return reverse(v) / s;
}

Multivector sandwich(const Multivector& versor, const Multivector& x) {
  return geometric_product(geometric_product(versor, x),
                           versor_inverse(versor));
}

}  // namespace motorkit::ga
