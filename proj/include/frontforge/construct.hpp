#pragma once

// Realizes the construction theorem: validates integrability on a probe
// grid, then builds the surface by integrating the 1-form along axis-aligned
// L-paths from the base point, with cumulative per-row/per-column segments.

#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "frontforge/kenmotsu.hpp"
#include "frontforge/quadrature.hpp"
#include "frontforge/surface.hpp"

namespace frontforge::kenmotsu {

using geom::Rect;

struct ConstructOptions {
  double quad_tol = 1e-10;          // per-segment absolute quadrature tolerance
  double integrability_tol = 1e-8;  // scaled residual bound on the probe grid
  int probe_n = 50;
};

struct IntegrabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline geom::OneForm as_one_form(const FrontPairData& data) {
  return [&data](geom::UV q) { return one_form(data, q); };
}

inline surface::FJet jet_from_one_form(const FrontPairData& data, geom::UV p) {
  const OneFormJets w = one_form_jets(data, p, 2);
  return {w.wu.value(),  w.wv.value(),  w.wu.d(1, 0), w.wu.d(0, 1), w.wv.d(0, 1),
          w.wu.d(2, 0), w.wu.d(1, 1), w.wu.d(0, 2), w.wv.d(0, 2)};
}

inline surface::SurfaceJet construct_surface(std::shared_ptr<const FrontPairData> data,
                                             geom::UV base_point, geom::Vec3 base_value,
                                             Rect domain, int nx, int ny,
                                             const ConstructOptions& opt = {}) {
  // integrability probe
  double max_resid = 0, scale = 0;
  for (int i = 0; i < opt.probe_n; ++i)
    for (int j = 0; j < opt.probe_n; ++j) {
      const geom::UV p{domain.u0 + (domain.u1 - domain.u0) * i / (opt.probe_n - 1.0),
                       domain.v0 + (domain.v1 - domain.v0) * j / (opt.probe_n - 1.0)};
      const auto [wu, wv] = one_form(*data, p);
      scale = std::max({scale, geom::max_abs(wu), geom::max_abs(wv)});
      max_resid = std::max(max_resid, geom::max_abs(integrability_residual(*data, p)));
    }
  if (max_resid > opt.integrability_tol * (1 + scale))
    throw IntegrabilityError("construct_surface: integrability residual " +
                             std::to_string(max_resid) + " exceeds tolerance");

  // the theorem's non-vanishing data on the grid: Hhat and X
  const auto check_node = [&](geom::UV p) {
    const double hh = data->Hhat->value(p);
    const geom::VJet nuj = data->nu->jet(p, 1);
    const geom::Vec3 n = nuj.value(), nu_u = nuj.d(1, 0), nu_v = nuj.d(0, 1);
    const double E = data->g.E->value(p), F = data->g.F->value(p), G = data->g.G->value(p);
    const double lam = data->g.lambda->value(p);
    const double P = dot(nu_u, nu_u), Q = dot(nu_u, nu_v), R = dot(nu_v, nu_v);
    const double D = geom::det3(nu_u, nu_v, n);
    const double X = 2 * lam * D + G * P - 2 * F * Q + E * R;
    const double xs = std::abs(2 * lam * D) + std::abs(G * P) + std::abs(2 * F * Q) +
                      std::abs(E * R);
    if (std::abs(hh) < 1e-12)
      throw IntegrabilityError("construct_surface: Hhat vanishes on the grid");
    if (std::abs(X) < 1e-10 * (1 + xs))
      throw IntegrabilityError("construct_surface: X vanishes on the grid");
  };

  surface::SurfaceJet s;
  s.domain = domain;
  s.provenance = surface::Provenance::Constructed;
  s.source = data;
  s.nx = nx;
  s.ny = ny;
  s.grid.assign(static_cast<std::size_t>(nx) * ny, {});

  const geom::OneForm w = as_one_form(*data);
  const double du = (domain.u1 - domain.u0) / (nx - 1), dv = (domain.v1 - domain.v0) / (ny - 1);

  // row pass along v = base_point.v: cumulative horizontal segments
  std::vector<geom::Vec3> row(nx);
  {
    std::vector<double> us(nx);
    for (int i = 0; i < nx; ++i) us[i] = domain.u0 + i * du;
    // find split: columns left/right of base
    int i0 = 0;
    while (i0 + 1 < nx && us[i0 + 1] <= base_point.u) ++i0;
    // leftward cumulative from base
    geom::Vec3 acc = base_value;
    if (us[i0] != base_point.u)
      acc += geom::line_integral(
          w, geom::PlanarPath({{base_point.u, base_point.v}, {us[i0], base_point.v}}),
          opt.quad_tol);
    row[i0] = acc;
    for (int i = i0 - 1; i >= 0; --i) {
      acc += geom::line_integral(
          w, geom::PlanarPath({{us[i + 1], base_point.v}, {us[i], base_point.v}}), opt.quad_tol);
      row[i] = acc;
    }
    acc = row[i0];
    for (int i = i0 + 1; i < nx; ++i) {
      acc += geom::line_integral(
          w, geom::PlanarPath({{us[i - 1], base_point.v}, {us[i], base_point.v}}), opt.quad_tol);
      row[i] = acc;
    }
  }

  // column passes: cumulative vertical segments from v = base_point.v
  std::vector<double> vs(ny);
  for (int j = 0; j < ny; ++j) vs[j] = domain.v0 + j * dv;
  int j0 = 0;
  while (j0 + 1 < ny && vs[j0 + 1] <= base_point.v) ++j0;
  for (int i = 0; i < nx; ++i) {
    const double ui = domain.u0 + i * du;
    geom::Vec3 acc = row[i];
    if (vs[j0] != base_point.v)
      acc += geom::line_integral(
          w, geom::PlanarPath({{ui, base_point.v}, {ui, vs[j0]}}), opt.quad_tol);
    s.grid[static_cast<std::size_t>(i) * ny + j0] = acc;
    geom::Vec3 down = acc;
    for (int j = j0 - 1; j >= 0; --j) {
      down += geom::line_integral(w, geom::PlanarPath({{ui, vs[j + 1]}, {ui, vs[j]}}),
                                  opt.quad_tol);
      s.grid[static_cast<std::size_t>(i) * ny + j] = down;
    }
    geom::Vec3 up = acc;
    for (int j = j0 + 1; j < ny; ++j) {
      up += geom::line_integral(w, geom::PlanarPath({{ui, vs[j - 1]}, {ui, vs[j]}}), opt.quad_tol);
      s.grid[static_cast<std::size_t>(i) * ny + j] = up;
    }
    check_node({ui, base_point.v});
  }
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) check_node(s.node_point(i, j));

  auto data_keep = data;
  s.jet_fn = [data_keep](geom::UV p) { return jet_from_one_form(*data_keep, p); };
  s.nu_fn = [data_keep](geom::UV p, int order) { return data_keep->nu->jet(p, order); };
  s.value_fn = [data_keep, base_point, base_value, tol = opt.quad_tol](geom::UV p) {
    return base_value +
           geom::line_integral(as_one_form(*data_keep),
                               geom::PlanarPath::l_path(base_point, p), tol);
  };
  return s;
}

}  // namespace frontforge::kenmotsu
