#pragma once

// Front-pair data (metric + Gauss map + regularized mean curvature) and the
// construction theorem's 1-form, hypothesis checks and integrability residual.

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "frontforge/field.hpp"
#include "frontforge/geom.hpp"
#include "frontforge/metric.hpp"

namespace frontforge::kenmotsu {

using field::ScalarFieldPtr;
using field::Vec3FieldPtr;
using geom::Jet;
using geom::UV;
using geom::Vec3;
using geom::VJet;

struct FrontPairData {
  metric::MetricData g;
  Vec3FieldPtr nu;
  ScalarFieldPtr Hhat;        // regularized mean curvature, -2*lambda*H
  ScalarFieldPtr H = nullptr; // mean curvature, defined off S(g)
};

// jet of the u-derivative of a field, valid one order lower
inline Jet shift_u(const Jet& a) {
  std::array<std::array<double, 4>, 4> d{};
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; j + i <= 2; ++j) d[i][j] = a.d(i + 1, j);
  return Jet::from_derivs(d);
}

inline Jet shift_v(const Jet& a) {
  std::array<std::array<double, 4>, 4> d{};
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; j + i <= 2; ++j) d[i][j] = a.d(i, j + 1);
  return Jet::from_derivs(d);
}

inline VJet shift_u(const VJet& a) { return {shift_u(a.x), shift_u(a.y), shift_u(a.z)}; }
inline VJet shift_v(const VJet& a) { return {shift_v(a.x), shift_v(a.y), shift_v(a.z)}; }

struct OneFormJets {
  VJet wu, wv;  // entries above the requested order are unspecified
};

// omega_u = (1/Hhat)(lambda nu_u + F nu x nu_u - E nu x nu_v)
// omega_v = (1/Hhat)(lambda nu_v + G nu x nu_u - F nu x nu_v)
inline OneFormJets one_form_jets(const FrontPairData& d, UV p, int order) {
  const VJet nu = d.nu->jet(p, std::min(3, order + 1));
  const VJet nu_u = shift_u(nu), nu_v = shift_v(nu);
  const Jet E = d.g.E->jet(p, order), F = d.g.F->jet(p, order), G = d.g.G->jet(p, order);
  const Jet lam = d.g.lambda->jet(p, order);
  const Jet a = geom::recip(d.Hhat->jet(p, order));
  const VJet nxu = cross(nu, nu_u), nxv = cross(nu, nu_v);
  OneFormJets out;
  out.wu = a * (lam * nu_u + F * nxu - E * nxv);
  out.wv = a * (lam * nu_v + G * nxu - F * nxv);
  return out;
}

inline std::pair<Vec3, Vec3> one_form(const FrontPairData& d, UV p) {
  const OneFormJets j = one_form_jets(d, p, 0);
  return {j.wu.value(), j.wv.value()};
}

// d_v omega_u - d_u omega_v, expanded with exact derivatives
inline Vec3 integrability_residual(const FrontPairData& d, UV p) {
  const OneFormJets j = one_form_jets(d, p, 1);
  return j.wu.d(0, 1) - j.wv.d(1, 0);
}

// Hhat = -2 H lambda; AST product when both inputs are AST-backed.
// `regular_samples`, when given, are points off S(g) at which H must not vanish.
inline ScalarFieldPtr hhat_from(const ScalarFieldPtr& H, const ScalarFieldPtr& lambda,
                                const std::vector<UV>& regular_samples = {}) {
  for (const UV p : regular_samples)
    if (H->value(p) == 0)
      throw std::domain_error("hhat_from: H vanishes at a sampled regular point");
  const auto* ha = dynamic_cast<const field::AstScalarField*>(H.get());
  const auto* la = dynamic_cast<const field::AstScalarField*>(lambda.get());
  if (ha && la)
    return std::make_shared<field::AstScalarField>(
        expr::mul(expr::constant(-2), expr::mul(ha->ast(), la->ast())));
  return std::make_shared<field::DerivedScalarField>(
      [H, lambda](UV p, int order) { return -2.0 * (H->jet(p, order) * lambda->jet(p, order)); });
}

// lambda*H sampled along rays into p, extrapolated to the limit
struct HhatLimitReport {
  std::vector<double> ray_limits;
  double limit = 0;
  double spread = 0;  // relative disagreement across rays
  bool pass = false;
};

inline HhatLimitReport hhat_limit_check(const std::function<double(UV)>& lambda_times_H, UV p,
                                        double r0 = 1e-2, double tol = 1e-8) {
  HhatLimitReport rep;
  for (int ray = 0; ray < 8; ++ray) {
    const double ang = 2 * M_PI * (ray + 0.5) / 8;
    const UV dir{std::cos(ang), std::sin(ang)};
    // sample at shrinking radii and extrapolate with a cubic fit in r
    std::vector<double> rs, vals;
    for (int k = 0; k < 10; ++k) {
      const double r = r0 * std::pow(0.5, k);
      const UV q = p + dir * r;
      try {
        vals.push_back(lambda_times_H(q));
        rs.push_back(r);
      } catch (const std::exception&) {
        // point outside the usable domain; skip
      }
    }
    if (rs.size() < 4) continue;
    const auto coeff = geom::polyfit(rs, vals, 3);
    rep.ray_limits.push_back(coeff[0]);
  }
  if (rep.ray_limits.empty()) return rep;
  double lo = rep.ray_limits.front(), hi = lo, sum = 0;
  for (double x : rep.ray_limits) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    sum += x;
  }
  rep.limit = sum / rep.ray_limits.size();
  rep.spread = (hi - lo) / (1 + std::abs(rep.limit));
  rep.pass = rep.spread < 1e-4 && std::abs(rep.limit) > tol;
  return rep;
}

inline HhatLimitReport hhat_limit_check(const FrontPairData& d, UV p, double r0 = 1e-2,
                                        double tol = 1e-8) {
  if (!d.H) throw std::invalid_argument("hhat_limit_check: data carries no H field");
  return hhat_limit_check(
      [&](UV q) { return d.g.lambda->value(q) * d.H->value(q); }, p, r0, tol);
}

// eta nu (p) != 0: the front-pair condition at a singular point
inline double front_pair_derivative(const FrontPairData& d, UV p, UV eta) {
  const VJet nu = d.nu->jet(p, 1);
  const Vec3 dn = nu.d(1, 0) * eta.u + nu.d(0, 1) * eta.v;
  return geom::norm(dn);
}

inline bool check_front_pair(const FrontPairData& d, UV p, UV eta, double tol = 1e-8) {
  return front_pair_derivative(d, p, eta) > tol;
}

// Validates the FrontPairData invariants on a sample set.
struct FrontPairReport {
  double max_unit_residual = 0;   // | |nu|-1 |
  double max_hhat_relation = 0;   // |Hhat + 2 H lambda| where H given, off S(g)
  double min_abs_hhat = 0;
  double min_dnu = 0;             // smallest |dnu| over samples
  bool pass = false;
};

inline FrontPairReport check_front_pair_data(const FrontPairData& d, const std::vector<UV>& samples,
                                             double tol = 1e-9) {
  FrontPairReport rep;
  rep.min_abs_hhat = std::numeric_limits<double>::infinity();
  rep.min_dnu = rep.min_abs_hhat;
  for (const UV p : samples) {
    const VJet nu = d.nu->jet(p, 1);
    rep.max_unit_residual =
        std::max(rep.max_unit_residual, std::abs(geom::norm(nu.value()) - 1));
    const double hh = d.Hhat->value(p);
    rep.min_abs_hhat = std::min(rep.min_abs_hhat, std::abs(hh));
    const double dnu = std::max(geom::norm(nu.d(1, 0)), geom::norm(nu.d(0, 1)));
    rep.min_dnu = std::min(rep.min_dnu, dnu);
    if (d.H) {
      const double lam = d.g.lambda->value(p);
      if (std::abs(lam) > 1e-6) {
        try {
          const double h = d.H->value(p);
          rep.max_hhat_relation = std::max(rep.max_hhat_relation,
                                           std::abs(hh + 2 * h * lam) / (1 + std::abs(hh)));
        } catch (const std::exception&) {
          // H may be undefined arbitrarily close to S(g)
        }
      }
    }
  }
  rep.pass = rep.max_unit_residual < 1e-10 && rep.max_hhat_relation < tol * 1e3 &&
             rep.min_abs_hhat > tol && rep.min_dnu > tol;
  return rep;
}

// Reflection pullback sigma(u,v) = (u,-v) with the lambda sign flipped: the
// other branch of the construction; its surface equals f(u,-v) + const.
inline FrontPairData reflected_front_pair(const FrontPairData& d) {
  const auto flip_jet = [](Jet j, bool negate) {
    // jet of h(u,v) = g(u,-v) [optionally -g]: flip odd v-orders
    for (int i = 0; i <= 3; ++i)
      for (int k = 0; k + i <= 3; ++k) {
        if (k % 2 == 1) j.t[i][k] = -j.t[i][k];
        if (negate) j.t[i][k] = -j.t[i][k];
      }
    return j;
  };
  const auto scalar = [flip_jet](ScalarFieldPtr f, bool negate) -> ScalarFieldPtr {
    return std::make_shared<field::DerivedScalarField>([f, negate, flip_jet](UV p, int order) {
      return flip_jet(f->jet({p.u, -p.v}, order), negate);
    });
  };
  FrontPairData out;
  out.g.E = scalar(d.g.E, false);
  out.g.F = scalar(d.g.F, true);
  out.g.G = scalar(d.g.G, false);
  out.g.lambda = scalar(d.g.lambda, true);
  out.g.lambda_sign = -d.g.lambda_sign;
  out.Hhat = scalar(d.Hhat, true);
  if (d.H) out.H = scalar(d.H, false);
  const auto nu = d.nu;
  out.nu = std::make_shared<field::DerivedVec3Field>([nu, flip_jet](UV p, int order) {
    const VJet j = nu->jet({p.u, -p.v}, order);
    return VJet{flip_jet(j.x, false), flip_jet(j.y, false), flip_jet(j.z, false)};
  });
  return out;
}

}  // namespace frontforge::kenmotsu
