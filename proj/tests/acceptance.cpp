// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "frontforge/construct.hpp"
#include "frontforge/invariants.hpp"
#include "frontforge/presets.hpp"

using namespace frontforge;
using geom::UV;
using geom::Vec3;

namespace {

int failures = 0;

void report(int number, const std::string& what, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", number, what.c_str(),
              detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

// 1. translation closed form on the full published grid, under 10 seconds
void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto p = presets::translation_half_sin();
  const auto s = kenmotsu::construct_surface(p.pair, {M_PI / 2, 0}, {0, M_PI / 8, 0},
                                             {-4, 4, -1, 1}, 161, 41);
  double worst = 0;
  for (int i = 0; i < s.nx; ++i)
    for (int j = 0; j < s.ny; ++j)
      worst = std::max(worst,
                       geom::max_abs(s.node_value(i, j) - p.closed_form(s.node_point(i, j))));
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(1, "translation example exactness on 161x41", worst < 1e-8 && secs < 10,
         "max deviation " + fmt(worst) + ", " + fmt(secs) + " s");
}

// 2. cosh mean curvature, cuspidal-edge labels, metric/front agreement
void criterion_2() {
  const auto p = presets::cosh_example();
  const auto s = kenmotsu::construct_surface(p.pair, p.base_point, p.base_value,
                                             {-M_PI, M_PI, -0.45, 0.45}, 81, 41);
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> du(-M_PI + 0.1, M_PI - 0.1), dv(0.05, 0.45);
  std::bernoulli_distribution flip(0.5);
  double worst_h = 0;
  for (int k = 0; k < 200; ++k) {
    const double v = dv(rng) * (flip(rng) ? 1 : -1);
    const UV q{du(rng), v};
    const double H = -(-3 + std::cosh(2 * v)) / (2 * std::sinh(v));
    worst_h = std::max(worst_h, std::abs(surface::mean_curvature(s, q) - H) / std::abs(H));
  }

  bool labels_ok = true;
  for (int k = 0; k < 25; ++k) {
    const double u = -2.8 + 5.6 * k / 24.0;
    labels_ok = labels_ok && surface::classify_front_singularity(s, {u, 0}).tag ==
                                 surface::FrontTag::CuspidalEdge;
  }

  const auto curves = metric::singular_set(p.metric, {-M_PI, M_PI, -0.45, 0.45}, 150);
  bool agree = curves.size() == 1;
  int checked = 0;
  if (agree) {
    const auto& c = curves[0];
    const std::size_t stride = std::max<std::size_t>(1, c.points.size() / 50);
    for (std::size_t k = 0; k < c.points.size() && checked < 50; k += stride, ++checked) {
      const auto mc = metric::classify_metric_point(p.metric, c.points[k], &c);
      const auto fc = surface::classify_front_singularity(s, c.points[k]);
      agree = agree && mc.tag == metric::MetricTag::A_k && mc.k == 2 &&
              fc.tag == surface::FrontTag::CuspidalEdge;
    }
  }
  report(2, "cosh example mean curvature and edge labels",
         worst_h < 1e-6 && labels_ok && agree,
         "max rel dH " + fmt(worst_h) + ", labels " + (labels_ok ? "ok" : "bad") +
             ", agreement at " + std::to_string(checked) + " samples " + (agree ? "ok" : "bad"));
}

// 3. cosh invariants by both routes
void criterion_3() {
  const auto p = presets::cosh_example();
  const auto s = kenmotsu::construct_surface(p.pair, p.base_point, p.base_value,
                                             {-2, 2, -0.42, 0.42}, 41, 17);
  const auto curves = metric::singular_set(p.metric, {-2, 2, -0.42, 0.42}, 150);
  bool ok = curves.size() == 1;
  double worst = 0;
  const double root8 = 2 * std::sqrt(2.0);
  for (double u : {-1.5, -0.4, 0.0, 0.8, 1.7}) {
    const auto chart = invariants::adapt_chart(invariants::as_samples(curves[0]), {u, 0});
    const auto direct = invariants::edge_invariants_direct(s, chart);
    const auto closed = invariants::edge_invariants_closed(*p.pair, s, chart);
    ok = ok && std::abs(direct.kappa_nu) < 1e-8 && std::abs(closed.kappa_nu) < 1e-8;
    ok = ok && std::abs(direct.kappa_t) < 1e-8 && std::abs(closed.kappa_t) < 1e-8;
    ok = ok && std::abs(direct.kappa_s - 2) < 1e-6 && std::abs(closed.kappa_s - 2) < 1e-6;
    ok = ok && std::abs(direct.kappa_c - root8) < 1e-6 && std::abs(closed.kappa_c - root8) < 1e-6;
    worst = std::max({worst, std::abs(direct.kappa_s - closed.kappa_s),
                      std::abs(direct.kappa_nu - closed.kappa_nu),
                      std::abs(direct.kappa_t - closed.kappa_t),
                      std::abs(direct.kappa_c - closed.kappa_c)});
  }
  ok = ok && worst < 1e-6;
  report(3, "cosh invariants (2, 0, 0, 2*sqrt(2)) by both routes", ok,
         "worst route disagreement " + fmt(worst));
}

// 4. the nine proof identities on both constructible presets
void criterion_4() {
  bool ok = true;
  double worst = 0;
  std::mt19937 rng(7);
  for (const auto& preset : {presets::cosh_example(), presets::translation_half_sin()}) {
    const geom::Rect r = preset.name == "cosh_example" ? geom::Rect{-2, 2, -0.42, 0.42}
                                                       : geom::Rect{-3.5, 3.5, -0.9, 0.9};
    const auto s =
        kenmotsu::construct_surface(preset.pair, preset.base_point, preset.base_value, r, 25, 13);
    std::uniform_real_distribution<double> du(r.u0, r.u1), dv(r.v0, r.v1);
    std::vector<UV> samples;
    while (samples.size() < 100) {
      const UV q{du(rng), dv(rng)};
      if (std::abs(preset.metric.lambda->value(q)) > 1e-3) samples.push_back(q);
    }
    const auto rep = surface::verify_theorem_identities(s, *preset.pair, samples, 1e-8);
    ok = ok && rep.pass;
    for (double x : rep.max_residual) worst = std::max(worst, x);
  }
  report(4, "theorem proof identities at 100 random points each", ok,
         "worst scaled residual " + fmt(worst));
}

// 5. path independence of the construction integral
void criterion_5() {
  bool ok = true;
  double worst = 0;
  std::mt19937 rng(11);
  for (const auto& preset : {presets::cosh_example(), presets::translation_half_sin()}) {
    const geom::Rect r = preset.name == "cosh_example" ? geom::Rect{-2, 2, -0.4, 0.4}
                                                       : geom::Rect{-3.5, 3.5, -0.9, 0.9};
    const auto w = kenmotsu::as_one_form(*preset.pair);
    std::uniform_real_distribution<double> du(r.u0, r.u1), dv(r.v0, r.v1);
    const UV base{0.5 * (r.u0 + r.u1), 0.5 * (r.v0 + r.v1)};
    for (int k = 0; k < 20; ++k) {
      const UV target{du(rng), dv(rng)};
      const Vec3 a = geom::line_integral(w, geom::PlanarPath::l_path(base, target), 1e-10);
      const Vec3 b =
          geom::line_integral(w, geom::PlanarPath::transposed_l_path(base, target), 1e-10);
      worst = std::max(worst, geom::max_abs(a - b));
    }
  }
  ok = worst < 2e-10;
  report(5, "L-path vs transposed L-path at 20 targets per preset", ok,
         "worst endpoint difference " + fmt(worst));
}

// 6. sign-flip symmetry on the cosh example
void criterion_6() {
  const auto p = presets::cosh_example();
  const geom::Rect r{-1.5, 1.5, -0.4, 0.4};
  const int nx = 31, ny = 17;
  const auto plus = kenmotsu::construct_surface(p.pair, {0, 0}, {0, 0, 0}, r, nx, ny);
  const auto refl =
      std::make_shared<kenmotsu::FrontPairData>(kenmotsu::reflected_front_pair(*p.pair));
  const auto minus = kenmotsu::construct_surface(refl, {0, 0}, {0, 0, 0}, r, nx, ny);
  const Vec3 offset = minus.node_value(nx / 2, ny / 2) - plus.node_value(nx / 2, ny / 2);
  double worst = 0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      worst = std::max(worst, geom::max_abs(minus.node_value(i, j) -
                                            plus.node_value(i, ny - 1 - j) - offset));
  report(6, "sign-flip symmetry f_-(u,v) = f_+(u,-v) + const", worst < 1e-8,
         "max deviation " + fmt(worst));
}

// 7. swallowtail cross-route invariants against the registered oracle
void criterion_7() {
  const auto p = presets::swallowtail_front();
  const auto curves = metric::singular_set(p.metric, p.domain, 160);
  bool ok = curves.size() == 1;
  std::string detail = "singular set not found";
  if (ok) {
    const auto chart = invariants::adapt_chart(invariants::as_samples(curves[0]), {0, 0});
    const auto direct = invariants::swallowtail_invariants_direct(*p.front, chart);
    const auto closed = invariants::swallowtail_invariants_closed(*p.pair, chart);
    const double mu_oracle = -0.5;
    const double tau_oracle = 2 * std::sqrt(3.0) / 3;
    const double cross_mu = std::abs(direct.mu_c - closed.mu_c) / (1 + std::abs(direct.mu_c));
    const double cross_tau =
        std::abs(direct.tau_s - closed.tau_s) / (1 + std::abs(direct.tau_s));
    ok = cross_mu < 1e-5 && cross_tau < 1e-5 &&
         std::abs(direct.mu_c - mu_oracle) < 1e-5 * (1 + std::abs(mu_oracle)) &&
         std::abs(direct.tau_s - tau_oracle) < 1e-5 * (1 + tau_oracle) &&
         std::abs(closed.mu_c - mu_oracle) < 1e-5 * (1 + std::abs(mu_oracle)) &&
         std::abs(closed.tau_s - tau_oracle) < 1e-5 * (1 + tau_oracle);
    detail = "mu_c " + fmt(direct.mu_c) + "/" + fmt(closed.mu_c) + " vs -0.5, tau_s " +
             fmt(direct.tau_s) + "/" + fmt(closed.tau_s) + " vs " + fmt(tau_oracle);
  }
  report(7, "swallowtail mu_c and tau_s by both routes vs oracle", ok, detail);
}

// 8. the classifier matrix
void criterion_8() {
  bool ok = true;
  std::string bad;
  for (const char* name :
       {"cuspidal_edge", "swallowtail", "cuspidal_lips", "cuspidal_beaks"}) {
    const auto p = presets::by_name(name);
    const auto label = surface::classify_front_singularity(*p.front, p.points_of_interest[0]);
    if (label.tag != *p.expected_front_tag) {
      ok = false;
      bad += std::string(name) + "->" + surface::to_string(label.tag) + " ";
    }
  }
  const auto flat = presets::flat_plane();
  if (!metric::singular_set(flat.metric, flat.domain, 60).empty()) {
    ok = false;
    bad += "flat metric has singular points ";
  }
  bool corank2_error = false;
  try {
    metric::classify_metric_point(presets::corank2_cone().metric, {0, 0});
  } catch (const metric::CorankError&) {
    corank2_error = true;
  }
  ok = ok && corank2_error;
  if (!corank2_error) bad += "corank-2 error missing";
  report(8, "classifier matrix, flat metric, corank-2 error", ok,
         bad.empty() ? "all labels as expected" : bad);
}

// 9. decomposition identities and the on-axis integrability identity
void criterion_9() {
  const auto p = presets::cosh_example();
  const geom::Rect r{-2, 2, -0.42, 0.42};
  const auto s = kenmotsu::construct_surface(p.pair, p.base_point, p.base_value, r, 41, 17);
  const auto curves = metric::singular_set(p.metric, r, 150);
  bool ok = curves.size() == 1;
  double worst_k = 0, worst_t = 0, worst_i = 0;
  if (ok) {
    const auto& c = curves[0];
    const std::size_t stride = std::max<std::size_t>(1, c.points.size() / 20);
    for (std::size_t k = 8; k + 8 < c.points.size(); k += stride) {
      const auto chart = invariants::adapt_chart(invariants::as_samples(c), c.points[k]);
      const auto dec = invariants::decompositions(s, chart);
      worst_k = std::max(worst_k, std::abs(dec.kappa_residual));
      worst_t = std::max(worst_t, std::abs(dec.tau_residual));
      worst_i = std::max(worst_i, std::abs(invariants::integsing_residual(*p.pair, chart)));
    }
    ok = worst_k < 1e-6 && worst_t < 1e-5 && worst_i < 1e-8;
  }
  report(9, "curvature/torsion decompositions and integsing identity", ok,
         "residuals " + fmt(worst_k) + ", " + fmt(worst_t) + ", " + fmt(worst_i));
}

// 10. symbolic derivatives vs central finite differences, orders 1..3
void criterion_10() {
  const char* sources[] = {
      "sinh(v)/cosh(v)^2",          "(-3+cosh(2*v))/cosh(v)^2",
      "sin(u)*cos(2*u)+v^3",        "exp(0.3*u-0.2*v)*tanh(u*v)",
      "sqrt(1+u^2+v^4)",            "u^3*v-2*u*v+pi*v^2",
      "log(2+cos(u)+v^2)",          "(u+2*v)^3/(4+u^2)",
      "1/cosh(v)^2",                "tan(0.3*u)+sinh(u*v)",
  };
  std::mt19937 rng(20260811);
  std::uniform_real_distribution<double> pick(-1.1, 1.1);
  std::uniform_int_distribution<int> pick_src(0, 9);
  double worst = 0;
  int count = 0;
  while (count < 100) {
    const auto ast = expr::parse(sources[pick_src(rng)]);
    // random multi-index with total order 1..3
    std::uniform_int_distribution<int> pick_order(1, 3);
    const int total = pick_order(rng);
    std::uniform_int_distribution<int> pick_i(0, total);
    const int du = pick_i(rng), dv = total - du;
    expr::Ast deriv = ast, lower = ast;
    for (int k = 0; k < du; ++k) deriv = expr::differentiate(deriv, expr::Var::U);
    for (int k = 0; k < dv; ++k) deriv = expr::differentiate(deriv, expr::Var::V);
    // one-lower symbolic derivative, finite-differenced in the last variable
    const expr::Var last = dv > 0 ? expr::Var::V : expr::Var::U;
    for (int k = 0; k < (last == expr::Var::U ? du - 1 : du); ++k)
      lower = expr::differentiate(lower, expr::Var::U);
    for (int k = 0; k < (last == expr::Var::V ? dv - 1 : dv); ++k)
      lower = expr::differentiate(lower, expr::Var::V);
    const double u = pick(rng), v = pick(rng), h = 1e-5;
    try {
      const double sym = expr::eval(deriv, u, v);
      const double fd =
          last == expr::Var::U
              ? (expr::eval(lower, u + h, v) - expr::eval(lower, u - h, v)) / (2 * h)
              : (expr::eval(lower, u, v + h) - expr::eval(lower, u, v - h)) / (2 * h);
      worst = std::max(worst, std::abs(sym - fd) / (1 + std::abs(sym)));
      ++count;
    } catch (const expr::EvalError&) {
      // resample points that fall outside a function's domain
    }
  }
  report(10, "symbolic vs finite-difference derivatives, 100 triples", worst < 1e-6,
         "worst relative error " + fmt(worst));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (failures == 0)
    std::printf("acceptance: all 10 criteria passed\n");
  else
    std::printf("acceptance: %d criterion(s) FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}
