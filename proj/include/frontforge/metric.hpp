#pragma once

// Prescribed semi-definite metric data: frontal/admissibility checks,
// singular-set location, and A_k / Morse-type classification of its points.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "frontforge/curve.hpp"
#include "frontforge/field.hpp"
#include "frontforge/geom.hpp"

namespace frontforge::metric {

using field::ScalarFieldPtr;
using geom::Jet;
using geom::Rect;
using geom::UV;

struct MetricData {
  ScalarFieldPtr E, F, G, lambda;
  int lambda_sign = +1;  // which root of EG - F^2 the lambda field records

  geom::SymEig2 eig_at(UV p) const {
    return geom::sym_eig2(E->value(p), F->value(p), G->value(p));
  }
};

// ---- frontal check: EG - F^2 = lambda^2 and semi-definiteness ----

struct FrontalReport {
  double max_residual = 0;
  UV worst_point;
  double min_eigenvalue = 0;
  double max_eigenvalue = 0;
  bool pass = false;
};

inline std::vector<UV> sample_rect(const Rect& r, int n_per_axis) {
  std::vector<UV> pts;
  pts.reserve(static_cast<std::size_t>(n_per_axis) * n_per_axis);
  for (int i = 0; i < n_per_axis; ++i)
    for (int j = 0; j < n_per_axis; ++j)
      pts.push_back({r.u0 + (r.u1 - r.u0) * i / (n_per_axis - 1.0),
                     r.v0 + (r.v1 - r.v0) * j / (n_per_axis - 1.0)});
  return pts;
}

inline FrontalReport check_frontal(const MetricData& m, const std::vector<UV>& samples,
                                   double tol = 1e-9) {
  FrontalReport rep;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  rep.max_eigenvalue = -rep.min_eigenvalue;
  for (const UV p : samples) {
    const double e = m.E->value(p), f = m.F->value(p), g = m.G->value(p);
    const double lam = m.lambda->value(p);
    const double resid = std::abs(e * g - f * f - lam * lam);
    if (resid > rep.max_residual) {
      rep.max_residual = resid;
      rep.worst_point = p;
    }
    const auto eig = geom::sym_eig2(e, f, g);
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, eig.lambda_min);
    rep.max_eigenvalue = std::max(rep.max_eigenvalue, eig.lambda_max);
  }
  rep.pass = rep.max_residual < tol && rep.min_eigenvalue > -tol;
  return rep;
}

// ---- singular set ----

struct MetricSingularCurve {
  std::vector<double> ts;
  std::vector<UV> points;
  std::vector<UV> tangents;  // unit, orientation-continuous
  std::vector<UV> etas;      // unit null vectors, orientation-continuous
  std::vector<double> psis;  // det(gamma', eta)
  bool closed = false;
};

namespace detail {

inline UV null_direction(const MetricData& m, UV p) {
  return m.eig_at(p).kernel_dir;
}

inline void orient_first(UV& w) {
  const bool flip = std::abs(w.u) > 1e-9 * (std::abs(w.u) + std::abs(w.v)) ? w.u < 0 : w.v < 0;
  if (flip) w = -w;
}

}  // namespace detail

inline std::vector<MetricSingularCurve> singular_set(const MetricData& m, const Rect& domain,
                                                     int grid_resolution = 200) {
  const auto traced = geom::trace_zero_curves(
      [&](UV p) { return m.lambda->value(p); }, domain, grid_resolution, grid_resolution);

  std::vector<MetricSingularCurve> out;
  for (const auto& tc : traced) {
    MetricSingularCurve c;
    c.ts = tc.ts;
    c.points = tc.points;
    c.closed = tc.closed;
    c.tangents.resize(c.points.size());
    c.etas.resize(c.points.size());
    c.psis.resize(c.points.size());
    for (std::size_t k = 0; k < c.points.size(); ++k) {
      const UV p = c.points[k];
      const Jet lj = m.lambda->jet(p, 1);
      UV grad{lj.d(1, 0), lj.d(0, 1)};
      UV tang;
      if (geom::norm(grad) > 1e-12 * (1 + std::abs(lj.value()))) {
        tang = geom::normalized(geom::rot90(grad));
      } else {
        // degenerate point on the curve: fall back to the chord
        const std::size_t a = k > 0 ? k - 1 : k, b = k + 1 < c.points.size() ? k + 1 : k;
        tang = geom::normalized(c.points[b] - c.points[a]);
      }
      UV eta = detail::null_direction(m, p);
      if (k == 0) {
        // align the tangent with the marching direction
        if (c.points.size() > 1 && geom::dot(tang, c.points[1] - c.points[0]) < 0) tang = -tang;
        detail::orient_first(eta);
      } else {
        if (geom::dot(tang, c.tangents[k - 1]) < 0) tang = -tang;
        if (geom::dot(eta, c.etas[k - 1]) < 0) eta = -eta;
      }
      c.tangents[k] = tang;
      c.etas[k] = eta;
      c.psis[k] = geom::det2(tang, eta);
    }
    out.push_back(std::move(c));
  }
  return out;
}

// ---- admissibility (Definition 2.5 (1) conditions on S(g)) ----

struct AdmissibleReport {
  struct PerCurve {
    bool swapped_chart = false;  // conditions checked after a u<->v swap
    double max_F = 0, max_G = 0, max_Ev_2Fu = 0, max_Gu = 0, max_Gv = 0;
  };
  std::vector<PerCurve> curves;
  bool vacuous = false;  // no singular set
  double max_residual = 0;
  bool pass = false;
};

inline AdmissibleReport check_admissible(const MetricData& m,
                                         const std::vector<MetricSingularCurve>& curves,
                                         double tol = 1e-9) {
  AdmissibleReport rep;
  if (curves.empty()) {
    rep.vacuous = true;
    rep.pass = true;
    return rep;
  }
  for (const auto& c : curves) {
    AdmissibleReport::PerCurve pc;
    double eta_u = 0, eta_v = 0;
    for (const UV e : c.etas) {
      eta_u += std::abs(e.u);
      eta_v += std::abs(e.v);
    }
    pc.swapped_chart = eta_u > eta_v;  // null direction mostly along d_u
    for (const UV p : c.points) {
      const Jet jE = m.E->jet(p, 1), jF = m.F->jet(p, 1), jG = m.G->jet(p, 1);
      double f_, g_, ev2fu, gu, gv;
      if (!pc.swapped_chart) {
        f_ = jF.value();
        g_ = jG.value();
        ev2fu = jE.d(0, 1) - 2 * jF.d(1, 0);
        gu = jG.d(1, 0);
        gv = jG.d(0, 1);
      } else {
        f_ = jF.value();
        g_ = jE.value();
        ev2fu = jG.d(1, 0) - 2 * jF.d(0, 1);
        gu = jE.d(0, 1);
        gv = jE.d(1, 0);
      }
      pc.max_F = std::max(pc.max_F, std::abs(f_));
      pc.max_G = std::max(pc.max_G, std::abs(g_));
      pc.max_Ev_2Fu = std::max(pc.max_Ev_2Fu, std::abs(ev2fu));
      pc.max_Gu = std::max(pc.max_Gu, std::abs(gu));
      pc.max_Gv = std::max(pc.max_Gv, std::abs(gv));
    }
    rep.max_residual = std::max({rep.max_residual, pc.max_F, pc.max_G, pc.max_Ev_2Fu, pc.max_Gu,
                                 pc.max_Gv});
    rep.curves.push_back(pc);
  }
  rep.pass = rep.max_residual < tol;
  return rep;
}

// ---- pointwise classification ----

enum class MetricTag { Regular, A_k, MorseType, DegenerateOther };

struct MetricPointClass {
  MetricTag tag = MetricTag::Regular;
  int k = 0;  // for A_k
  UV dlambda;
  double hess_det = 0;
  double eta_eta_lambda = 0;
  std::vector<double> psi_jet;  // fitted coefficients of psi(t) around p
};

struct CorankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Newton steps toward the zero set of lambda along its gradient.
inline UV refine_to_singular(const MetricData& m, UV p, int iterations = 6) {
  for (int it = 0; it < iterations; ++it) {
    const Jet lj = m.lambda->jet(p, 1);
    const UV grad{lj.d(1, 0), lj.d(0, 1)};
    const double g2 = geom::dot(grad, grad);
    if (g2 < 1e-24 || std::abs(lj.value()) < 1e-14) break;
    p = p - grad * (lj.value() / g2);
  }
  return p;
}

inline MetricPointClass classify_metric_point(const MetricData& m, UV p,
                                              const MetricSingularCurve* curve = nullptr,
                                              double tol_jet = 1e-6) {
  MetricPointClass out;
  const Jet lj = m.lambda->jet(p, 2);
  double jet_scale = 0;
  for (int i = 0; i <= 2; ++i)
    for (int j = 0; j + i <= 2; ++j) jet_scale = std::max(jet_scale, std::abs(lj.d(i, j)));
  const double tol_zero = 1e-9 * (1 + jet_scale);

  if (std::abs(lj.value()) > tol_zero) {
    out.tag = MetricTag::Regular;
    return out;
  }

  const auto eig = m.eig_at(p);
  const double metric_scale =
      std::max({std::abs(m.E->value(p)), std::abs(m.F->value(p)), std::abs(m.G->value(p)), 1e-30});
  if (eig.lambda_max < 1e-9 * (1 + metric_scale))
    throw CorankError("classify_metric_point: metric has corank 2 at the point (unsupported)");

  out.dlambda = {lj.d(1, 0), lj.d(0, 1)};
  out.hess_det = lj.d(2, 0) * lj.d(0, 2) - lj.d(1, 1) * lj.d(1, 1);
  const UV eta = eig.kernel_dir;
  out.eta_eta_lambda = eta.u * eta.u * lj.d(2, 0) + 2 * eta.u * eta.v * lj.d(1, 1) +
                       eta.v * eta.v * lj.d(0, 2);

  if (geom::norm(out.dlambda) > tol_zero) {
    // non-degenerate: A_k via the psi-jet along the singular curve
    if (!curve || curve->points.size() < 7)
      throw std::invalid_argument("classify_metric_point: A_k test needs the singular curve");
    const auto proj = geom::project_to_polyline(curve->points, curve->ts, p);
    const geom::LocalJetFit fit =
        geom::fit_local_jet(curve->ts, curve->psis, proj.idx, proj.t_param);
    out.psi_jet = fit.coeff;
    // k is capped at 4, so only vanishing orders 0..2 are distinguished
    const int j = geom::first_nonvanishing_order(fit.coeff, fit.window, tol_jet, 2);
    if (j < 0) {
      out.tag = MetricTag::DegenerateOther;
    } else {
      out.tag = MetricTag::A_k;
      out.k = j + 2;  // psi vanishing to order j  =>  A_{j+2}
    }
    return out;
  }

  // degenerate: Morse-type test (det hess scales like the squared jet)
  const double htol = 1e-9 * (1 + jet_scale);
  if (std::abs(out.hess_det) > 1e-9 * (1 + jet_scale * jet_scale) &&
      std::abs(out.eta_eta_lambda) > htol)
    out.tag = MetricTag::MorseType;
  else
    out.tag = MetricTag::DegenerateOther;
  return out;
}

}  // namespace frontforge::metric
