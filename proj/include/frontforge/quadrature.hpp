#pragma once

// Adaptive composite Gauss-Legendre quadrature for line integrals of
// vector-valued 1-forms along piecewise-linear paths in the (u,v) plane.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "frontforge/geom.hpp"

namespace frontforge::geom {

struct PlanarPath {
  std::vector<UV> points;

  PlanarPath() = default;
  explicit PlanarPath(std::vector<UV> pts) : points(std::move(pts)) {
    for (std::size_t i = 1; i < points.size(); ++i)
      if (points[i].u == points[i - 1].u && points[i].v == points[i - 1].v)
        throw std::invalid_argument("PlanarPath: consecutive points must be distinct");
  }

  static PlanarPath l_path(UV from, UV to) {
    std::vector<UV> pts{from};
    if (to.u != from.u) pts.push_back({to.u, from.v});
    if (to.v != from.v || pts.size() == 1) {
      if (pts.back().u != to.u || pts.back().v != to.v) pts.push_back(to);
    }
    if (pts.size() == 1) return PlanarPath{};  // zero-length
    return PlanarPath(std::move(pts));
  }

  static PlanarPath transposed_l_path(UV from, UV to) {
    std::vector<UV> pts{from};
    if (to.v != from.v) pts.push_back({from.u, to.v});
    if (pts.back().u != to.u || pts.back().v != to.v) pts.push_back(to);
    if (pts.size() == 1) return PlanarPath{};
    return PlanarPath(std::move(pts));
  }
};

// one-form sample: (omega_u, omega_v)
using OneForm = std::function<std::pair<Vec3, Vec3>(UV)>;

namespace detail {

inline constexpr double kGl15[15][2] = {
    {-9.87992518020485377e-01, 3.07532419961186465e-02},
    {-9.37273392400705951e-01, 7.03660474881080689e-02},
    {-8.48206583410427206e-01, 1.07159220467171773e-01},
    {-7.24417731360170070e-01, 1.39570677926153908e-01},
    {-5.70972172608538830e-01, 1.66269205816993781e-01},
    {-3.94151347077563385e-01, 1.86161000015561878e-01},
    {-2.01194093997434514e-01, 1.98431485327111246e-01},
    {+0.00000000000000000e+00, 2.02578241925560898e-01},
    {+2.01194093997434514e-01, 1.98431485327111246e-01},
    {+3.94151347077563385e-01, 1.86161000015561878e-01},
    {+5.70972172608538830e-01, 1.66269205816993781e-01},
    {+7.24417731360170070e-01, 1.39570677926153908e-01},
    {+8.48206583410427206e-01, 1.07159220467171773e-01},
    {+9.37273392400705951e-01, 7.03660474881080689e-02},
    {+9.87992518020485377e-01, 3.07532419961186465e-02},
};

// integrand g(s) = omega_u(q(s)) du/ds + omega_v(q(s)) dv/ds on a segment
inline Vec3 gl15_segment(const OneForm& w, UV a, UV d, double s0, double s1) {
  const double mid = 0.5 * (s0 + s1), half = 0.5 * (s1 - s0);
  Vec3 acc{};
  for (const auto& [xi, wt] : kGl15) {
    const double s = mid + half * xi;
    const UV q{a.u + s * d.u, a.v + s * d.v};
    const auto [wu, wv] = w(q);
    const Vec3 g = wu * d.u + wv * d.v;
    if (!std::isfinite(g.x) || !std::isfinite(g.y) || !std::isfinite(g.z))
      throw std::domain_error("line_integral: non-finite integrand sample");
    acc += g * wt;
  }
  return acc * half;
}

inline Vec3 adaptive_segment(const OneForm& w, UV a, UV d, double s0, double s1, double tol,
                             int depth) {
  const Vec3 whole = gl15_segment(w, a, d, s0, s1);
  const double sm = 0.5 * (s0 + s1);
  const Vec3 halves = gl15_segment(w, a, d, s0, sm) + gl15_segment(w, a, d, sm, s1);
  if (max_abs(whole - halves) < tol || depth >= 28) return halves;
  return adaptive_segment(w, a, d, s0, sm, 0.5 * tol, depth + 1) +
         adaptive_segment(w, a, d, sm, s1, 0.5 * tol, depth + 1);
}

}  // namespace detail

inline Vec3 line_integral(const OneForm& one_form, const PlanarPath& path, double tol = 1e-10) {
  Vec3 acc{};
  for (std::size_t i = 1; i < path.points.size(); ++i) {
    const UV a = path.points[i - 1];
    const UV d = path.points[i] - a;
    acc += detail::adaptive_segment(one_form, a, d, 0, 1, tol, 0);
  }
  return acc;
}

// scalar antiderivative helper: integral of g over [a,b]
inline double integrate_1d(const std::function<double(double)>& g, double a, double b,
                           double tol = 1e-10) {
  OneForm w = [&](UV q) { return std::pair<Vec3, Vec3>{Vec3{g(q.u), 0, 0}, Vec3{}}; };
  if (a == b) return 0;
  return line_integral(w, PlanarPath({{a, 0}, {b, 0}}), tol).x;
}

}  // namespace frontforge::geom
