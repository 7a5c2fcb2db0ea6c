#pragma once

// Constructed or preset surface jets: fundamental forms, curvatures, signed
// area density, front verification and singular-point classification.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "frontforge/curve.hpp"
#include "frontforge/field.hpp"
#include "frontforge/geom.hpp"
#include "frontforge/kenmotsu.hpp"

namespace frontforge::surface {

using geom::Jet;
using geom::Rect;
using geom::UV;
using geom::Vec3;
using geom::VJet;

// all partial derivatives of f at one point, through order 3
struct FJet {
  Vec3 fu, fv, fuu, fuv, fvv, fuuu, fuuv, fuvv, fvvv;
};

// jets of f_u and f_v as fields, valid to order 2
inline VJet fu_jet(const FJet& j) {
  std::array<std::array<double, 4>, 4> dx{}, dy{}, dz{};
  const Vec3* table[3][3] = {{&j.fu, &j.fuv, &j.fuvv},
                             {&j.fuu, &j.fuuv, nullptr},
                             {&j.fuuu, nullptr, nullptr}};
  for (int i = 0; i <= 2; ++i)
    for (int k = 0; k + i <= 2; ++k) {
      const Vec3& w = *table[i][k];
      dx[i][k] = w.x;
      dy[i][k] = w.y;
      dz[i][k] = w.z;
    }
  return {Jet::from_derivs(dx), Jet::from_derivs(dy), Jet::from_derivs(dz)};
}

inline VJet fv_jet(const FJet& j) {
  std::array<std::array<double, 4>, 4> dx{}, dy{}, dz{};
  const Vec3* table[3][3] = {{&j.fv, &j.fvv, &j.fvvv},
                             {&j.fuv, &j.fuvv, nullptr},
                             {&j.fuuv, nullptr, nullptr}};
  for (int i = 0; i <= 2; ++i)
    for (int k = 0; k + i <= 2; ++k) {
      const Vec3& w = *table[i][k];
      dx[i][k] = w.x;
      dy[i][k] = w.y;
      dz[i][k] = w.z;
    }
  return {Jet::from_derivs(dx), Jet::from_derivs(dy), Jet::from_derivs(dz)};
}

enum class Provenance { Constructed, Preset };

struct SurfaceJet {
  Rect domain;
  Provenance provenance = Provenance::Preset;

  std::function<FJet(UV)> jet_fn;
  std::function<VJet(UV, int)> nu_fn;
  std::function<Vec3(UV)> value_fn;  // may be empty for data-only jets

  // grid of f values (constructed surfaces and mesh export)
  int nx = 0, ny = 0;
  std::vector<Vec3> grid;  // row-major [i*ny + j]

  // the prescribing data, when constructed
  std::shared_ptr<const kenmotsu::FrontPairData> source;

  FJet jet(UV p) const { return jet_fn(p); }
  VJet nu_jet(UV p, int order = 3) const { return nu_fn(p, order); }
  Vec3 nu(UV p) const { return nu_fn(p, 0).value(); }
  Vec3 value(UV p) const {
    if (!value_fn) throw std::logic_error("SurfaceJet: no value evaluator");
    return value_fn(p);
  }
  UV node_point(int i, int j) const {
    return {domain.u0 + (domain.u1 - domain.u0) * i / (nx - 1.0),
            domain.v0 + (domain.v1 - domain.v0) * j / (ny - 1.0)};
  }
  const Vec3& node_value(int i, int j) const { return grid[static_cast<std::size_t>(i) * ny + j]; }
};

// preset front given by closed-form f and its unit normal
inline SurfaceJet surface_from_fields(std::shared_ptr<const field::AstVec3Field> f,
                                      field::Vec3FieldPtr nu, Rect domain) {
  SurfaceJet s;
  s.domain = domain;
  s.provenance = Provenance::Preset;
  s.jet_fn = [f](UV p) {
    const VJet j = f->jet(p, 3);
    return FJet{j.d(1, 0), j.d(0, 1), j.d(2, 0), j.d(1, 1), j.d(0, 2),
                j.d(3, 0), j.d(2, 1), j.d(1, 2), j.d(0, 3)};
  };
  s.nu_fn = [nu](UV p, int order) { return nu->jet(p, order); };
  s.value_fn = [f](UV p) { return f->value(p); };
  return s;
}

// ---- pointwise quantities ----

struct FundamentalForms {
  double E = 0, F = 0, G = 0, L = 0, M = 0, N = 0;
};

inline FundamentalForms fundamental_forms(const SurfaceJet& s, UV p) {
  const FJet j = s.jet(p);
  const Vec3 n = s.nu(p);
  return {dot(j.fu, j.fu), dot(j.fu, j.fv), dot(j.fv, j.fv),
          dot(j.fuu, n),  dot(j.fuv, n),  dot(j.fvv, n)};
}

struct SingularPointError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline double mean_curvature(const SurfaceJet& s, UV p, double tol = 1e-12) {
  const FundamentalForms q = fundamental_forms(s, p);
  const double den = q.E * q.G - q.F * q.F;
  if (den < tol * (1 + q.E * q.E + q.G * q.G))
    throw SingularPointError("mean_curvature: first form degenerates at the point");
  return (q.E * q.N - 2 * q.F * q.M + q.G * q.L) / (2 * den);
}

inline double gaussian_curvature(const SurfaceJet& s, UV p, double tol = 1e-12) {
  const FundamentalForms q = fundamental_forms(s, p);
  const double den = q.E * q.G - q.F * q.F;
  if (den < tol * (1 + q.E * q.E + q.G * q.G))
    throw SingularPointError("gaussian_curvature: first form degenerates at the point");
  return (q.L * q.N - q.M * q.M) / den;
}

inline double signed_area_density(const SurfaceJet& s, UV p) {
  const FJet j = s.jet(p);
  return geom::det3(j.fu, j.fv, s.nu(p));
}

// order-2 jet of det(f_u, f_v, nu) around p
inline Jet area_density_jet(const SurfaceJet& s, UV p) {
  const FJet j = s.jet(p);
  return geom::det3j(fu_jet(j), fv_jet(j), s.nu_jet(p, 2));
}

// smallest singular value of the stacked (df, dnu) 6x2 differential
inline double front_condition_sigma2(const SurfaceJet& s, UV p) {
  const FJet j = s.jet(p);
  const VJet n = s.nu_jet(p, 1);
  const Vec3 nu_u = n.d(1, 0), nu_v = n.d(0, 1);
  const double a = dot(j.fu, j.fu) + geom::dot(nu_u, nu_u);
  const double b = dot(j.fu, j.fv) + geom::dot(nu_u, nu_v);
  const double c = dot(j.fv, j.fv) + geom::dot(nu_v, nu_v);
  return std::sqrt(std::max(0.0, geom::sym_eig2(a, b, c).lambda_min));
}

// ---- singular-point classification (Facts 2.2 / 2.3) ----

enum class FrontTag {
  Regular,
  CuspidalEdge,
  Swallowtail,
  CuspidalButterfly,
  KthKind,
  CuspidalLips,
  CuspidalBeaks,
  DegenerateOther,
};

inline const char* to_string(FrontTag t) {
  switch (t) {
    case FrontTag::Regular: return "Regular";
    case FrontTag::CuspidalEdge: return "CuspidalEdge";
    case FrontTag::Swallowtail: return "Swallowtail";
    case FrontTag::CuspidalButterfly: return "CuspidalButterfly";
    case FrontTag::KthKind: return "KthKind";
    case FrontTag::CuspidalLips: return "CuspidalLips";
    case FrontTag::CuspidalBeaks: return "CuspidalBeaks";
    case FrontTag::DegenerateOther: return "DegenerateOther";
  }
  return "?";
}

struct FrontSingularityLabel {
  FrontTag tag = FrontTag::Regular;
  int k = 0;  // kind, when tag is a kind label
  UV dlambda;
  double hess_det = 0;
  double eta_eta_lambda = 0;
  std::vector<double> phi_jet;
};

struct CorankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Points of the front singular curve through p with unit null directions,
// traced from the signed area density in a local window.
struct FrontSingularCurve {
  std::vector<double> ts;
  std::vector<UV> points, tangents, etas;
  std::vector<double> phis;
};

inline FrontSingularCurve trace_front_singular_curve(const SurfaceJet& s, UV p, double window,
                                                     int cells = 60) {
  const Rect local{std::max(s.domain.u0, p.u - window), std::min(s.domain.u1, p.u + window),
                   std::max(s.domain.v0, p.v - window), std::min(s.domain.v1, p.v + window)};
  const auto traced = geom::trace_zero_curves(
      [&](UV q) { return signed_area_density(s, q); }, local, cells, cells);
  // pick the traced chain passing closest to p
  const geom::TracedCurve* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& c : traced)
    for (const UV q : c.points) {
      const double d = geom::norm(q - p);
      if (d < best_d) {
        best_d = d;
        best = &c;
      }
    }
  if (!best) throw std::invalid_argument("front singular curve: no singular set near the point");

  FrontSingularCurve out;
  out.ts = best->ts;
  out.points = best->points;
  out.tangents.resize(out.points.size());
  out.etas.resize(out.points.size());
  out.phis.resize(out.points.size());
  for (std::size_t k = 0; k < out.points.size(); ++k) {
    const UV q = out.points[k];
    const Jet aj = area_density_jet(s, q);
    UV grad{aj.d(1, 0), aj.d(0, 1)};
    UV tang = geom::norm(grad) > 1e-12 * (1 + std::abs(aj.value()))
                  ? geom::normalized(geom::rot90(grad))
                  : geom::normalized(out.points[std::min(k + 1, out.points.size() - 1)] -
                                     out.points[k > 0 ? k - 1 : 0]);
    const FJet fj = s.jet(q);
    UV eta = geom::svd32(fj.fu, fj.fv).null_dir;
    if (k == 0) {
      if (out.points.size() > 1 && geom::dot(tang, out.points[1] - out.points[0]) < 0)
        tang = -tang;
      const bool flip = std::abs(eta.u) > 1e-9 * (std::abs(eta.u) + std::abs(eta.v)) ? eta.u < 0
                                                                                     : eta.v < 0;
      if (flip) eta = -eta;
    } else {
      if (geom::dot(tang, out.tangents[k - 1]) < 0) tang = -tang;
      if (geom::dot(eta, out.etas[k - 1]) < 0) eta = -eta;
    }
    out.tangents[k] = tang;
    out.etas[k] = eta;
    out.phis[k] = geom::det2(tang, eta);
  }
  return out;
}

inline FrontSingularityLabel classify_front_singularity(const SurfaceJet& s, UV p,
                                                        double trace_window = 0.15,
                                                        double tol_jet = 1e-6) {
  FrontSingularityLabel out;
  const Jet aj = area_density_jet(s, p);
  double jet_scale = 0;
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; j + i <= 2; ++j) jet_scale = std::max(jet_scale, std::abs(aj.d(i, j)));
  const double tol_zero = 1e-9 * (1 + jet_scale);

  if (std::abs(aj.value()) > tol_zero) {
    out.tag = FrontTag::Regular;
    return out;
  }

  const FJet fj = s.jet(p);
  const auto sv = geom::svd32(fj.fu, fj.fv);
  if (sv.sigma1 < 1e-9 * (1 + sv.sigma2))
    throw CorankError("classify_front_singularity: corank 2 (unsupported)");

  out.dlambda = {aj.d(1, 0), aj.d(0, 1)};
  out.hess_det = aj.d(2, 0) * aj.d(0, 2) - aj.d(1, 1) * aj.d(1, 1);
  const UV eta = sv.null_dir;
  out.eta_eta_lambda = eta.u * eta.u * aj.d(2, 0) + 2 * eta.u * eta.v * aj.d(1, 1) +
                       eta.v * eta.v * aj.d(0, 2);

  if (geom::norm(out.dlambda) > tol_zero) {
    const FrontSingularCurve curve = trace_front_singular_curve(s, p, trace_window);
    const auto proj = geom::project_to_polyline(curve.points, curve.ts, p);
    const geom::LocalJetFit fit =
        geom::fit_local_jet(curve.ts, curve.phis, proj.idx, proj.t_param);
    out.phi_jet = fit.coeff;
    // kind cap at 3 (through cuspidal butterfly)
    const int j = geom::first_nonvanishing_order(fit.coeff, fit.window, tol_jet, 2);
    switch (j) {
      case 0: out.tag = FrontTag::CuspidalEdge; out.k = 1; break;
      case 1: out.tag = FrontTag::Swallowtail; out.k = 2; break;
      case 2: out.tag = FrontTag::CuspidalButterfly; out.k = 3; break;
      default: out.tag = FrontTag::DegenerateOther; break;
    }
    return out;
  }

  const double htol = 1e-9 * (1 + jet_scale);
  const double hess_tol = 1e-9 * (1 + jet_scale * jet_scale);
  if (out.hess_det > hess_tol)
    out.tag = FrontTag::CuspidalLips;
  else if (out.hess_det < -hess_tol && std::abs(out.eta_eta_lambda) > htol)
    out.tag = FrontTag::CuspidalBeaks;
  else
    out.tag = FrontTag::DegenerateOther;
  return out;
}

// ---- the proof identities of the construction theorem ----

struct IdentityReport {
  // scaled residuals: E_f, F_f, G_f, L_f, M_f, N_f, area density, H_f vs
  // -Hhat/(2 lambda), H_f vs prescribed H
  std::array<double, 9> max_residual{};
  bool pass = false;
};

inline IdentityReport verify_theorem_identities(const SurfaceJet& s,
                                                const kenmotsu::FrontPairData& data,
                                                const std::vector<UV>& samples,
                                                double tol = 1e-8) {
  IdentityReport rep;
  for (const UV p : samples) {
    const FJet j = s.jet(p);
    const VJet nuj = data.nu->jet(p, 1);
    const Vec3 n = nuj.value(), nu_u = nuj.d(1, 0), nu_v = nuj.d(0, 1);
    const double E = data.g.E->value(p), F = data.g.F->value(p), G = data.g.G->value(p);
    const double lam = data.g.lambda->value(p), hh = data.Hhat->value(p);
    const double P = dot(nu_u, nu_u), Q = dot(nu_u, nu_v), R = dot(nu_v, nu_v);
    const double D = geom::det3(nu_u, nu_v, n);
    const double X = 2 * lam * D + G * P - 2 * F * Q + E * R;

    const double Ef = dot(j.fu, j.fu), Ff = dot(j.fu, j.fv), Gf = dot(j.fv, j.fv);
    const double Lf = dot(j.fuu, n), Mf = dot(j.fuv, n), Nf = dot(j.fvv, n);
    const auto scaled = [](double resid, double scale) { return std::abs(resid) / (1 + scale); };

    rep.max_residual[0] = std::max(rep.max_residual[0], scaled(Ef - X / (hh * hh) * E, std::abs(Ef)));
    rep.max_residual[1] = std::max(rep.max_residual[1], scaled(Ff - X / (hh * hh) * F, std::abs(Ff)));
    rep.max_residual[2] = std::max(rep.max_residual[2], scaled(Gf - X / (hh * hh) * G, std::abs(Gf)));
    rep.max_residual[3] =
        std::max(rep.max_residual[3], scaled(Lf + (lam * P + E * D) / hh, std::abs(Lf)));
    rep.max_residual[4] =
        std::max(rep.max_residual[4], scaled(Mf + (lam * Q + F * D) / hh, std::abs(Mf)));
    rep.max_residual[5] =
        std::max(rep.max_residual[5], scaled(Nf + (lam * R + G * D) / hh, std::abs(Nf)));
    rep.max_residual[6] = std::max(
        rep.max_residual[6],
        scaled(geom::det3(j.fu, j.fv, n) - lam * X / (hh * hh), std::abs(lam * X / (hh * hh))));
    if (std::abs(lam) > 1e-9) {
      const double Hf = (Ef * Nf - 2 * Ff * Mf + Gf * Lf) / (2 * (Ef * Gf - Ff * Ff));
      rep.max_residual[7] =
          std::max(rep.max_residual[7], scaled(Hf + hh / (2 * lam), std::abs(Hf)));
      if (data.H)
        rep.max_residual[8] =
            std::max(rep.max_residual[8], scaled(Hf - data.H->value(p), std::abs(Hf)));
    }
  }
  rep.pass = true;
  for (double r : rep.max_residual) rep.pass = rep.pass && r < tol;
  return rep;
}

}  // namespace frontforge::surface
