#pragma once

// Truncated Taylor (jet) arithmetic to total order 3 in two variables.
// All product/quotient/composition rules are exact at this order, so
// derivative data propagated through it carries no differencing noise.

#include <array>
#include <cmath>
#include <stdexcept>

#include "frontforge/geom.hpp"

namespace frontforge::geom {

inline constexpr int kJetOrder = 3;
inline constexpr double kFact[4] = {1, 1, 2, 6};

// Scalar jet stored as Taylor coefficients t[i][j] of du^i dv^j, i+j <= 3.
struct Jet {
  std::array<std::array<double, 4>, 4> t{};

  static Jet constant(double c) {
    Jet j;
    j.t[0][0] = c;
    return j;
  }
  static Jet var_u(double value) {
    Jet j;
    j.t[0][0] = value;
    j.t[1][0] = 1;
    return j;
  }
  static Jet var_v(double value) {
    Jet j;
    j.t[0][0] = value;
    j.t[0][1] = 1;
    return j;
  }
  // from raw partial derivatives d[i][j] = d^i_u d^j_v f
  static Jet from_derivs(const std::array<std::array<double, 4>, 4>& d) {
    Jet j;
    for (int i = 0; i <= kJetOrder; ++i)
      for (int k = 0; k + i <= kJetOrder; ++k) j.t[i][k] = d[i][k] / (kFact[i] * kFact[k]);
    return j;
  }

  double value() const { return t[0][0]; }
  // partial derivative d^i_u d^j_v
  double d(int i, int j) const { return t[i][j] * kFact[i] * kFact[j]; }
};

inline Jet operator+(const Jet& a, const Jet& b) {
  Jet c;
  for (int i = 0; i <= kJetOrder; ++i)
    for (int j = 0; j + i <= kJetOrder; ++j) c.t[i][j] = a.t[i][j] + b.t[i][j];
  return c;
}

inline Jet operator-(const Jet& a, const Jet& b) {
  Jet c;
  for (int i = 0; i <= kJetOrder; ++i)
    for (int j = 0; j + i <= kJetOrder; ++j) c.t[i][j] = a.t[i][j] - b.t[i][j];
  return c;
}

inline Jet operator-(const Jet& a) {
  Jet c;
  for (int i = 0; i <= kJetOrder; ++i)
    for (int j = 0; j + i <= kJetOrder; ++j) c.t[i][j] = -a.t[i][j];
  return c;
}

inline Jet operator*(const Jet& a, const Jet& b) {
  Jet c;
  for (int i = 0; i <= kJetOrder; ++i)
    for (int j = 0; j + i <= kJetOrder; ++j) {
      double s = 0;
      for (int k = 0; k <= i; ++k)
        for (int l = 0; l <= j; ++l) s += a.t[k][l] * b.t[i - k][j - l];
      c.t[i][j] = s;
    }
  return c;
}

inline Jet operator*(double s, const Jet& a) {
  Jet c;
  for (int i = 0; i <= kJetOrder; ++i)
    for (int j = 0; j + i <= kJetOrder; ++j) c.t[i][j] = s * a.t[i][j];
  return c;
}

inline Jet operator*(const Jet& a, double s) { return s * a; }
inline Jet operator+(const Jet& a, double s) { return a + Jet::constant(s); }
inline Jet operator-(const Jet& a, double s) { return a - Jet::constant(s); }

// g(f) where g_derivs[k] = g^(k) evaluated at f.value()
inline Jet compose1(const std::array<double, 4>& g_derivs, const Jet& f) {
  Jet c = f;
  c.t[0][0] = 0;  // centered increment
  Jet acc = Jet::constant(g_derivs[0]);
  Jet p = Jet::constant(1);
  for (int k = 1; k <= kJetOrder; ++k) {
    p = p * c;
    acc = acc + (g_derivs[k] / kFact[k]) * p;
  }
  return acc;
}

inline Jet recip(const Jet& a) {
  const double x = a.value();
  if (x == 0) throw std::domain_error("jet: reciprocal of zero");
  return compose1({1 / x, -1 / (x * x), 2 / (x * x * x), -6 / (x * x * x * x)}, a);
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * recip(b); }
inline Jet operator/(const Jet& a, double s) { return (1.0 / s) * a; }

inline Jet sqrtj(const Jet& a) {
  const double x = a.value();
  if (x <= 0) throw std::domain_error("jet: sqrt of non-positive value");
  const double r = std::sqrt(x);
  return compose1({r, 0.5 / r, -0.25 / (x * r), 0.375 / (x * x * r)}, a);
}

// x^alpha for real alpha; requires positive base
inline Jet powj(const Jet& a, double alpha) {
  const double x = a.value();
  if (x <= 0) throw std::domain_error("jet: pow of non-positive base");
  const double p = std::pow(x, alpha);
  return compose1({p, alpha * p / x, alpha * (alpha - 1) * p / (x * x),
                   alpha * (alpha - 1) * (alpha - 2) * p / (x * x * x)},
                  a);
}

inline Jet absj(const Jet& a) {
  const double x = a.value();
  if (x == 0) throw std::domain_error("jet: abs at zero");
  return x > 0 ? a : -a;
}

// F(A, B): F's jet is taken at (A.value(), B.value())
inline Jet compose2(const Jet& F, const Jet& A, const Jet& B) {
  Jet ca = A, cb = B;
  ca.t[0][0] = 0;
  cb.t[0][0] = 0;
  std::array<Jet, 4> pa, pb;
  pa[0] = Jet::constant(1);
  pb[0] = Jet::constant(1);
  for (int k = 1; k <= kJetOrder; ++k) {
    pa[k] = pa[k - 1] * ca;
    pb[k] = pb[k - 1] * cb;
  }
  Jet acc;
  for (int i = 0; i <= kJetOrder; ++i)
    for (int j = 0; j + i <= kJetOrder; ++j)
      if (F.t[i][j] != 0) acc = acc + F.t[i][j] * (pa[i] * pb[j]);
  return acc;
}

// Vector-valued jet
struct VJet {
  Jet x, y, z;

  static VJet constant(const Vec3& c) {
    return {Jet::constant(c.x), Jet::constant(c.y), Jet::constant(c.z)};
  }
  Vec3 value() const { return {x.value(), y.value(), z.value()}; }
  Vec3 d(int i, int j) const { return {x.d(i, j), y.d(i, j), z.d(i, j)}; }
};

inline VJet operator+(const VJet& a, const VJet& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline VJet operator-(const VJet& a, const VJet& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline VJet operator-(const VJet& a) { return {-a.x, -a.y, -a.z}; }
inline VJet operator*(const Jet& s, const VJet& a) { return {s * a.x, s * a.y, s * a.z}; }
inline VJet operator*(double s, const VJet& a) { return {s * a.x, s * a.y, s * a.z}; }

inline Jet dot(const VJet& a, const VJet& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline VJet cross(const VJet& a, const VJet& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline Jet det3j(const VJet& a, const VJet& b, const VJet& c) { return dot(a, cross(b, c)); }

inline Jet normj(const VJet& a) { return sqrtj(dot(a, a)); }

inline VJet normalizedj(const VJet& a) { return recip(normj(a)) * a; }

inline VJet compose2(const VJet& F, const Jet& A, const Jet& B) {
  return {compose2(F.x, A, B), compose2(F.y, A, B), compose2(F.z, A, B)};
}

}  // namespace frontforge::geom
