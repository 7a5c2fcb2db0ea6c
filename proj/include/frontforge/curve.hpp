#pragma once

// Zero-set tracing of a scalar function on a rectangle: sign changes on grid
// edges, 1-D root polishing, and marching-squares linking into polylines.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "frontforge/geom.hpp"

namespace frontforge::geom {

struct Rect {
  double u0 = 0, u1 = 1, v0 = 0, v1 = 1;
};

using ScalarFn = std::function<double(UV)>;

struct TracedCurve {
  std::vector<UV> points;
  std::vector<double> ts;  // cumulative chord length
  bool closed = false;
};

namespace detail {

// safeguarded secant/bisection for f along the segment a..b; fa, fb of
// opposite (weak) sign
inline UV root_on_segment(const ScalarFn& f, UV a, UV b, double fa, double fb) {
  if (fa == 0) return a;
  if (fb == 0) return b;
  double lo = 0, hi = 1, flo = fa, fhi = fb;
  double t = lo - flo * (hi - lo) / (fhi - flo);
  for (int it = 0; it < 120; ++it) {
    if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);
    const UV q{a.u + t * (b.u - a.u), a.v + t * (b.v - a.v)};
    const double ft = f(q);
    if (ft == 0 || hi - lo < 1e-15) return q;
    if ((ft < 0) == (flo < 0)) {
      lo = t;
      flo = ft;
    } else {
      hi = t;
      fhi = ft;
    }
    const double ts = lo - flo * (hi - lo) / (fhi - flo);
    t = (std::isfinite(ts) && ts > lo && ts < hi) ? ts : 0.5 * (lo + hi);
  }
  const double tm = 0.5 * (lo + hi);
  return {a.u + tm * (b.u - a.u), a.v + tm * (b.v - a.v)};
}

}  // namespace detail

inline std::vector<TracedCurve> trace_zero_curves(const ScalarFn& f, const Rect& r, int nu_cells,
                                                  int nv_cells) {
  const int nu = nu_cells, nv = nv_cells;
  const double du = (r.u1 - r.u0) / nu, dv = (r.v1 - r.v0) / nv;
  const auto node = [&](int i, int j) { return UV{r.u0 + i * du, r.v0 + j * dv}; };

  std::vector<double> val(static_cast<std::size_t>(nu + 1) * (nv + 1));
  double scale = 0;
  for (int i = 0; i <= nu; ++i)
    for (int j = 0; j <= nv; ++j) {
      const double x = f(node(i, j));
      val[static_cast<std::size_t>(i) * (nv + 1) + j] = x;
      scale = std::max(scale, std::abs(x));
    }
  const auto at = [&](int i, int j) { return val[static_cast<std::size_t>(i) * (nv + 1) + j]; };
  // zero nodes count as positive so curves through nodes are found once
  const auto sgn = [&](int i, int j) { return at(i, j) < 0 ? -1 : 1; };

  const double ztol = 1e-13 * (1 + scale);
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      if (std::abs(at(i, j)) < ztol && std::abs(at(i + 1, j)) < ztol &&
          std::abs(at(i, j + 1)) < ztol && std::abs(at(i + 1, j + 1)) < ztol)
        throw std::domain_error("trace_zero_curves: function vanishes on an open set");
    }

  // crossing points, keyed by edge
  struct Crossing {
    UV p;
    std::vector<int> link;
  };
  std::vector<Crossing> cross;
  std::map<long long, int> h_edge, v_edge;  // (i,j) -> crossing id
  const auto key = [&](int i, int j) { return static_cast<long long>(i) * (nv + 2) + j; };

  const auto edge_crossing = [&](int i0, int j0, int i1, int j1, std::map<long long, int>& table,
                                 long long k) -> int {
    auto it = table.find(k);
    if (it != table.end()) return it->second;
    if (sgn(i0, j0) == sgn(i1, j1)) return -1;
    const UV p = detail::root_on_segment(f, node(i0, j0), node(i1, j1), at(i0, j0), at(i1, j1));
    cross.push_back({p, {}});
    table[k] = static_cast<int>(cross.size()) - 1;
    return static_cast<int>(cross.size()) - 1;
  };

  const auto connect = [&](int a, int b) {
    if (a < 0 || b < 0) return;
    cross[a].link.push_back(b);
    cross[b].link.push_back(a);
  };

  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      const int bottom = edge_crossing(i, j, i + 1, j, h_edge, key(i, j));
      const int top = edge_crossing(i, j + 1, i + 1, j + 1, h_edge, key(i, j + 1));
      const int left = edge_crossing(i, j, i, j + 1, v_edge, key(i, j));
      const int right = edge_crossing(i + 1, j, i + 1, j + 1, v_edge, key(i + 1, j));
      int ids[4], n = 0;
      for (int c : {bottom, right, top, left})
        if (c >= 0) ids[n++] = c;
      if (n == 2) {
        connect(ids[0], ids[1]);
      } else if (n == 4) {
        // ambiguous cell: resolve by the center sample
        const double c = f({r.u0 + (i + 0.5) * du, r.v0 + (j + 0.5) * dv});
        const bool center_like_bl = (c < 0) == (at(i, j) < 0);
        if (center_like_bl) {
          connect(bottom, right);
          connect(top, left);
        } else {
          connect(bottom, left);
          connect(top, right);
        }
      }
    }

  // walk chains
  std::vector<bool> used(cross.size(), false);
  std::vector<TracedCurve> out;
  const auto walk = [&](int start) {
    TracedCurve c;
    int prev = -1, cur = start;
    for (;;) {
      used[cur] = true;
      c.points.push_back(cross[cur].p);
      int next = -1;
      for (int cand : cross[cur].link)
        if (cand != prev && !used[cand]) {
          next = cand;
          break;
        }
      if (next < 0) {
        // loop closure?
        for (int cand : cross[cur].link)
          if (cand == start && c.points.size() > 2) c.closed = true;
        break;
      }
      prev = cur;
      cur = next;
    }
    return c;
  };

  for (std::size_t s = 0; s < cross.size(); ++s)
    if (!used[s] && cross[s].link.size() == 1) out.push_back(walk(static_cast<int>(s)));
  for (std::size_t s = 0; s < cross.size(); ++s)
    if (!used[s] && !cross[s].link.empty()) out.push_back(walk(static_cast<int>(s)));

  for (auto& c : out) {
    // drop coincident consecutive points (curves through grid nodes polish
    // the two adjacent edge crossings to the same point)
    std::vector<UV> dedup;
    for (const UV& q : c.points)
      if (dedup.empty() || norm(q - dedup.back()) > 1e-12) dedup.push_back(q);
    c.points = std::move(dedup);
    // canonical direction: first tangent points toward +u (ties: +v)
    if (c.points.size() >= 2) {
      const UV t0 = c.points[1] - c.points.front();
      const bool flip = std::abs(t0.u) > 1e-9 * (std::abs(t0.u) + std::abs(t0.v)) ? t0.u < 0
                                                                                  : t0.v < 0;
      if (flip) std::reverse(c.points.begin(), c.points.end());
    }
    c.ts.resize(c.points.size());
    for (std::size_t k = 1; k < c.points.size(); ++k)
      c.ts[k] = c.ts[k - 1] + norm(c.points[k] - c.points[k - 1]);
  }
  return out;
}

// Projection of a point onto a sampled curve: nearest polyline parameter.
struct PolylineProjection {
  std::size_t idx = 0;   // nearest sample
  double t_param = 0;    // interpolated curve parameter
  UV point;              // projected point
};

inline PolylineProjection project_to_polyline(const std::vector<UV>& pts,
                                              const std::vector<double>& ts, UV p) {
  PolylineProjection out;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double d = norm(pts[k] - p);
    if (d < best) {
      best = d;
      out.idx = k;
    }
  }
  out.t_param = ts[out.idx];
  out.point = pts[out.idx];
  for (const std::size_t a :
       {out.idx > 0 ? out.idx - 1 : out.idx, out.idx}) {
    const std::size_t b = a + 1;
    if (b >= pts.size()) continue;
    const UV seg = pts[b] - pts[a];
    const double len2 = dot(seg, seg);
    if (len2 == 0) continue;
    const double t = std::min(1.0, std::max(0.0, dot(p - pts[a], seg) / len2));
    const UV q = pts[a] + seg * t;
    if (norm(q - p) < norm(out.point - p) + 1e-15) {
      out.point = q;
      out.t_param = ts[a] + t * (ts[b] - ts[a]);
    }
  }
  return out;
}

// Least-squares jet of samples (ts, vals) re-centered at t_center: a tight
// window and a degree-6 fit keep unmodeled high-order terms out of the low
// coefficients, which order-of-vanishing decisions are sensitive to.
struct LocalJetFit {
  std::vector<double> coeff;
  double window = 0;
};

inline LocalJetFit fit_local_jet(const std::vector<double>& ts, const std::vector<double>& vals,
                                 std::size_t idx, double t_center,
                                 std::size_t half_width = 8) {
  LocalJetFit out;
  const std::size_t lo = idx > half_width ? idx - half_width : 0;
  const std::size_t hi = std::min(ts.size() - 1, idx + half_width);
  std::vector<double> taus, ys;
  for (std::size_t k = lo; k <= hi; ++k) {
    taus.push_back(ts[k] - t_center);
    ys.push_back(vals[k]);
    out.window = std::max(out.window, std::abs(taus.back()));
  }
  if (taus.size() < 5) throw std::invalid_argument("fit_local_jet: too few samples");
  const int degree = std::min<int>(6, static_cast<int>(taus.size()) - 1);
  out.coeff = polyfit(taus, ys, degree);
  return out;
}

inline LocalJetFit fit_local_jet(const std::vector<double>& ts, const std::vector<double>& vals,
                                 std::size_t idx, std::size_t half_width = 8) {
  return fit_local_jet(ts, vals, idx, ts[idx], half_width);
}

// first coefficient index whose contribution over the window is significant
inline int first_nonvanishing_order(const std::vector<double>& coeff, double window,
                                    double tol_jet, int max_index) {
  double scale = 0;
  std::vector<double> mag(coeff.size());
  for (std::size_t j = 0; j < coeff.size(); ++j) {
    mag[j] = std::abs(coeff[j]) * std::pow(window, static_cast<double>(j));
    scale = std::max(scale, mag[j]);
  }
  if (scale == 0) return -1;
  for (int j = 0; j <= max_index && j < static_cast<int>(coeff.size()); ++j)
    if (mag[j] > tol_jet * scale) return j;
  return -1;
}

}  // namespace frontforge::geom
