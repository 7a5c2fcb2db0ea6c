#pragma once

// Built-in test universes: the paper's two worked examples, the
// translation-surface family, and classical front normal forms with
// reverse-engineered prescribing data.

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "frontforge/kenmotsu.hpp"
#include "frontforge/metric.hpp"
#include "frontforge/surface.hpp"

namespace frontforge::presets {

using field::AstScalarField;
using field::AstVec3Field;
using geom::Rect;
using geom::UV;
using geom::Vec3;

struct Preset {
  std::string name;
  Rect domain;
  metric::MetricData metric;
  std::shared_ptr<const kenmotsu::FrontPairData> pair;  // null for metric-only presets
  std::optional<surface::SurfaceJet> front;             // closed-form fronts
  std::function<Vec3(UV)> closed_form;                  // known exact surface
  UV base_point{};
  Vec3 base_value{};
  std::vector<UV> points_of_interest;
  std::optional<surface::FrontTag> expected_front_tag;
  int expected_metric_k = 0;  // 2..4 for A_k, -1 for Morse type, 0 when n/a
};

namespace detail {

inline field::ScalarFieldPtr sf(const std::string& src) {
  return std::make_shared<AstScalarField>(src);
}

// load-time re-verification of the declared data
inline void validate_pair(const Preset& p) {
  const auto samples = metric::sample_rect(p.domain, 5);
  const auto fr = metric::check_frontal(p.metric, samples, 1e-8);
  if (!fr.pass)
    throw std::logic_error("preset " + p.name + ": frontal residual " +
                           std::to_string(fr.max_residual));
  if (!p.pair) return;
  for (const UV q : samples) {
    const double n = geom::norm(p.pair->nu->value(q));
    if (std::abs(n - 1) > 1e-10)
      throw std::logic_error("preset " + p.name + ": Gauss map is not unit");
    if (std::abs(p.pair->Hhat->value(q)) < 1e-9)
      throw std::logic_error("preset " + p.name + ": Hhat vanishes on the domain");
  }
  for (const UV q : {UV{0.31 * p.domain.u1, 0.42 * p.domain.v1},
                     UV{0.52 * p.domain.u0, 0.23 * p.domain.v0}}) {
    const Vec3 r = kenmotsu::integrability_residual(*p.pair, q);
    if (geom::max_abs(r) > 1e-7)
      throw std::logic_error("preset " + p.name + ": integrability residual " +
                             std::to_string(geom::max_abs(r)));
  }
}

}  // namespace detail

// ---- the cosh worked example ----

inline Preset cosh_example() {
  Preset p;
  p.name = "cosh_example";
  p.domain = {-3.2, 3.2, -0.45, 0.45};
  p.metric = {detail::sf("1/cosh(v)^2"), detail::sf("0"), detail::sf("sinh(v)^2/cosh(v)^2"),
              detail::sf("sinh(v)/cosh(v)^2")};
  auto pair = std::make_shared<kenmotsu::FrontPairData>();
  pair->g = p.metric;
  pair->nu = std::make_shared<AstVec3Field>("cos(u)*sinh(v)/cosh(v)", "sin(u)*sinh(v)/cosh(v)",
                                            "1/cosh(v)");
  pair->Hhat = detail::sf("(-3+cosh(2*v))/cosh(v)^2");
  pair->H = detail::sf("-(-3+cosh(2*v))/(2*sinh(v))");
  p.pair = pair;
  p.base_point = {0, 0};
  p.base_value = {0, 0, 0};
  p.points_of_interest = {{0, 0}};
  p.expected_front_tag = surface::FrontTag::CuspidalEdge;
  p.expected_metric_k = 2;
  detail::validate_pair(p);
  return p;
}

// ---- translation-invariant family ----

struct TranslationSpec {
  std::string H, l;
  std::string theta;  // closed-form primitive of Hhat, "" to integrate numerically
  std::string hhat;   // closed-form Hhat, "" to use the -2*l*H product
  std::function<Vec3(UV)> closed_form;
  Rect domain{-4, 4, -1, 1};
  UV base_point{};
  Vec3 base_value{};
};

inline Preset translation_family(const TranslationSpec& spec, const std::string& name) {
  Preset p;
  p.name = name;
  p.domain = spec.domain;
  const auto l_ast = expr::parse(spec.l);
  p.metric = {std::make_shared<AstScalarField>(expr::mul(l_ast, l_ast)), detail::sf("0"),
              detail::sf("1"), std::make_shared<AstScalarField>(l_ast)};
  auto pair = std::make_shared<kenmotsu::FrontPairData>();
  pair->g = p.metric;
  pair->H = detail::sf(spec.H);
  pair->Hhat = !spec.hhat.empty()
                   ? detail::sf(spec.hhat)
                   : kenmotsu::hhat_from(pair->H, p.metric.lambda);
  if (!spec.theta.empty()) {
    pair->nu = std::make_shared<AstVec3Field>("sin(" + spec.theta + ")",
                                              "-cos(" + spec.theta + ")", "0");
  } else {
    auto theta = std::make_shared<field::AntiderivativeField>(pair->Hhat, 0.0, 0.0);
    pair->nu = std::make_shared<field::DerivedVec3Field>([theta](UV q, int order) {
      const geom::Jet tj = theta->jet(q, order);
      const double t0 = tj.value();
      const geom::Jet s = geom::compose1(
          {std::sin(t0), std::cos(t0), -std::sin(t0), -std::cos(t0)}, tj);
      const geom::Jet c = geom::compose1(
          {std::cos(t0), -std::sin(t0), -std::cos(t0), std::sin(t0)}, tj);
      return geom::VJet{s, -c, geom::Jet::constant(0)};
    });
  }
  p.pair = pair;
  p.closed_form = spec.closed_form;
  p.base_point = spec.base_point;
  p.base_value = spec.base_value;
  p.expected_front_tag = surface::FrontTag::CuspidalEdge;
  p.expected_metric_k = 2;
  // l*H must extend to a nonzero smooth function
  for (int k = 1; k <= 5; ++k) {
    const UV q{p.domain.u0 + (p.domain.u1 - p.domain.u0) * k / 6.0, 0};
    try {
      if (std::abs(pair->Hhat->value(q)) < 1e-12)
        throw std::domain_error("translation_family: l*H vanishes at u = " +
                                std::to_string(q.u));
    } catch (const expr::EvalError&) {
      // sampled a zero of l itself; the registered Hhat covers that case
    }
  }
  return p;
}

// H = -1/sin u, l = sin(u)/2: f = (-cos^2 u/4, (u - cos u sin u)/4, v)
inline Preset translation_half_sin() {
  TranslationSpec s;
  s.H = "-1/sin(u)";
  s.l = "sin(u)/2";
  s.theta = "u";
  s.hhat = "1";
  s.closed_form = [](UV q) {
    return Vec3{-std::cos(q.u) * std::cos(q.u) / 4, (q.u - std::cos(q.u) * std::sin(q.u)) / 4,
                q.v};
  };
  s.domain = {-4, 4, -1, 1};
  s.base_point = {M_PI / 2, 0};
  s.base_value = {0, M_PI / 8, 0};
  Preset p = translation_family(s, "translation_half_sin");
  p.points_of_interest = {{0, 0}};
  detail::validate_pair(p);
  return p;
}

// H = -1/sin u, l = (11/10) sin u: the Figure-1-right surface
inline Preset translation_11_10_sin() {
  TranslationSpec s;
  s.H = "-1/sin(u)";
  s.l = "(11/10)*sin(u)";
  s.theta = "(11/5)*u";
  s.hhat = "11/5";
  s.closed_form = [](UV q) {
    const double u1 = 6 * q.u / 5, u2 = 16 * q.u / 5;
    return Vec3{11 * (8 * std::cos(u1) - 3 * std::cos(u2)) / 192,
                11 * (8 * std::sin(u1) - 3 * std::sin(u2)) / 192, q.v};
  };
  s.domain = {0, 10 * M_PI, -1, 1};
  s.base_point = {0, 0};
  s.base_value = {55.0 / 192, 0, 0};
  Preset p = translation_family(s, "translation_11_10_sin");
  p.points_of_interest = {{M_PI, 0}};
  detail::validate_pair(p);
  return p;
}

// ---- closed-form normal-form fronts with reverse-engineered data ----

namespace detail {

struct ReverseSpec {
  std::string name;
  std::string fx, fy, fz;
  std::string wx, wy, wz;  // unnormalized normal f_u x w_dir
  std::string E, F, G, lambda, hhat;
  Rect domain;
};

inline Preset reverse_engineered(const ReverseSpec& r) {
  Preset p;
  p.name = r.name;
  p.domain = r.domain;
  p.metric = {sf(r.E), sf(r.F), sf(r.G), sf(r.lambda)};
  auto w = std::make_shared<AstVec3Field>(r.wx, r.wy, r.wz);
  auto nu = field::normalized_field(w);
  auto pair = std::make_shared<kenmotsu::FrontPairData>();
  pair->g = p.metric;
  pair->nu = nu;
  pair->Hhat = sf(r.hhat);
  pair->H = std::make_shared<AstScalarField>(
      expr::div(expr::parse(r.hhat), expr::mul(expr::constant(-2), expr::parse(r.lambda))));
  p.pair = pair;
  auto f = std::make_shared<AstVec3Field>(expr::parse(r.fx), expr::parse(r.fy),
                                          expr::parse(r.fz), 5);
  p.front = surface::surface_from_fields(f, nu, r.domain);
  p.closed_form = [f](UV q) { return f->value(q); };
  return p;
}

}  // namespace detail

inline Preset cuspidal_edge_front() {
  detail::ReverseSpec r;
  r.name = "cuspidal_edge";
  r.fx = "u"; r.fy = "v^2"; r.fz = "v^3";
  r.wx = "0"; r.wy = "-3*v"; r.wz = "2";
  r.E = "1"; r.F = "0"; r.G = "9*v^4 + 4*v^2";
  r.lambda = "v*sqrt(9*v^2 + 4)";
  r.hhat = "-6/(9*v^2 + 4)";
  r.domain = {-1, 1, -0.5, 0.5};
  Preset p = detail::reverse_engineered(r);
  p.points_of_interest = {{0, 0}};
  p.expected_front_tag = surface::FrontTag::CuspidalEdge;
  p.expected_metric_k = 2;
  detail::validate_pair(p);
  return p;
}

inline Preset swallowtail_front() {
  detail::ReverseSpec r;
  r.name = "swallowtail";
  r.fx = "u"; r.fy = "4*v^3 + 2*u*v"; r.fz = "3*v^4 + u*v^2";
  r.wx = "v^2"; r.wy = "-v"; r.wz = "1";
  r.E = "v^4 + 4*v^2 + 1";
  r.F = "2*u*v^3 + 4*u*v + 12*v^5 + 24*v^3";
  r.G = "4*u^2*v^2 + 4*u^2 + 48*u*v^4 + 48*u*v^2 + 144*v^6 + 144*v^4";
  r.lambda = "(2*u + 12*v^2)*sqrt(v^4 + v^2 + 1)";
  r.hhat = "(-v^4 - 4*v^2 - 1)/(v^4 + v^2 + 1)";
  r.domain = {-0.4, 0.4, -0.25, 0.25};
  Preset p = detail::reverse_engineered(r);
  p.points_of_interest = {{0, 0}};
  p.expected_front_tag = surface::FrontTag::Swallowtail;
  p.expected_metric_k = 3;
  detail::validate_pair(p);
  return p;
}

inline Preset cuspidal_lips_front() {
  detail::ReverseSpec r;
  r.name = "cuspidal_lips";
  r.fx = "u"; r.fy = "-2*v^3 - u^2*v"; r.fz = "3*v^4 + u^2*v^2";
  r.wx = "-2*u*v^2"; r.wy = "-2*v"; r.wz = "-1";
  r.E = "4*u^2*v^4 + 4*u^2*v^2 + 1";
  r.F = "4*u^3*v^3 + 2*u^3*v + 24*u*v^5 + 12*u*v^3";
  r.G = "4*u^4*v^2 + u^4 + 48*u^2*v^4 + 12*u^2*v^2 + 144*v^6 + 36*v^4";
  r.lambda = "(u^2 + 6*v^2)*sqrt(4*u^2*v^4 + 4*v^2 + 1)";
  r.hhat = "2*(3*u^2*v^2 - 24*v^6 - 6*v^4 + 1)/(4*u^2*v^4 + 4*v^2 + 1)";
  r.domain = {-0.5, 0.5, -0.4, 0.4};
  Preset p = detail::reverse_engineered(r);
  p.points_of_interest = {{0, 0}};
  p.expected_front_tag = surface::FrontTag::CuspidalLips;
  p.expected_metric_k = -1;
  detail::validate_pair(p);
  return p;
}

inline Preset cuspidal_beaks_front() {
  detail::ReverseSpec r;
  r.name = "cuspidal_beaks";
  r.fx = "u"; r.fy = "-2*v^3 + u^2*v"; r.fz = "3*v^4 - u^2*v^2";
  r.wx = "-2*u*v^2"; r.wy = "2*v"; r.wz = "1";
  r.E = "4*u^2*v^4 + 4*u^2*v^2 + 1";
  r.F = "4*u^3*v^3 + 2*u^3*v - 24*u*v^5 - 12*u*v^3";
  r.G = "4*u^4*v^2 + u^4 - 48*u^2*v^4 - 12*u^2*v^2 + 144*v^6 + 36*v^4";
  r.lambda = "(u^2 - 6*v^2)*sqrt(4*u^2*v^4 + 4*v^2 + 1)";
  r.hhat = "2*(3*u^2*v^2 + 24*v^6 + 6*v^4 + 1)/(4*u^2*v^4 + 4*v^2 + 1)";
  r.domain = {-0.5, 0.5, -0.4, 0.4};
  Preset p = detail::reverse_engineered(r);
  p.points_of_interest = {{0, 0}};
  p.expected_front_tag = surface::FrontTag::CuspidalBeaks;
  p.expected_metric_k = -1;
  detail::validate_pair(p);
  return p;
}

inline Preset cuspidal_butterfly_front() {
  detail::ReverseSpec r;
  r.name = "cuspidal_butterfly";
  r.fx = "u"; r.fy = "5*v^4 + 2*u*v"; r.fz = "4*v^5 + u*v^2 - u^2";
  r.wx = "2*u + v^2"; r.wy = "-v"; r.wz = "1";
  r.E = "4*u^2 - 4*u*v^2 + v^4 + 4*v^2 + 1";
  r.F = "-4*u^2*v - 40*u*v^4 + 2*u*v^3 + 4*u*v + 20*v^6 + 40*v^4";
  r.G = "4*u^2*v^2 + 4*u^2 + 80*u*v^5 + 80*u*v^3 + 400*v^8 + 400*v^6";
  r.lambda = "(2*u + 20*v^3)*sqrt(4*u^2 + 4*u*v^2 + v^4 + v^2 + 1)";
  r.hhat = "(-4*u^2 + 8*u*v^2 + 4*u + 40*v^5 - v^4 + 40*v^3 - 4*v^2 - 1)/"
           "(4*u^2 + 4*u*v^2 + v^4 + v^2 + 1)";
  r.domain = {-0.2, 0.2, -0.15, 0.15};
  Preset p = detail::reverse_engineered(r);
  p.points_of_interest = {{0, 0}};
  p.expected_front_tag = surface::FrontTag::CuspidalButterfly;
  p.expected_metric_k = 4;
  detail::validate_pair(p);
  return p;
}

// non-planar cuspidal edge along the twisted cubic (u, u^2, u^3)
inline Preset twisted_edge_front() {
  detail::ReverseSpec r;
  r.name = "twisted_edge";
  r.fx = "u"; r.fy = "u^2 + v^2"; r.fz = "u^3 + v^3";
  r.wx = "-6*u^2 + 6*u*v"; r.wy = "-3*v"; r.wz = "2";
  r.E = "9*u^4 + 4*u^2 + 1";
  r.F = "9*u^2*v^2 + 4*u*v";
  r.G = "9*v^4 + 4*v^2";
  r.lambda = "v*sqrt(36*u^4 - 72*u^3*v + 36*u^2*v^2 + 9*v^2 + 4)";
  r.hhat = "6*(-9*u^4 - 4*u^2 - 18*u*v^3 - 8*u*v + 9*v^4 + 4*v^2 - 1)/"
           "(36*u^4 - 72*u^3*v + 36*u^2*v^2 + 9*v^2 + 4)";
  r.domain = {-0.7, 0.7, -0.2, 0.2};
  Preset p = detail::reverse_engineered(r);
  p.points_of_interest = {{0.3, 0}};
  p.expected_front_tag = surface::FrontTag::CuspidalEdge;
  p.expected_metric_k = 2;
  detail::validate_pair(p);
  return p;
}

// ---- metric-only presets ----

inline Preset flat_plane() {
  Preset p;
  p.name = "flat_plane";
  p.domain = {-1, 1, -1, 1};
  p.metric = {detail::sf("1"), detail::sf("0"), detail::sf("1"), detail::sf("1")};
  return p;
}

inline Preset corank2_cone() {
  Preset p;
  p.name = "corank2_cone";
  p.domain = {-1, 1, -1, 1};
  p.metric = {detail::sf("u^2+v^2"), detail::sf("0"), detail::sf("u^2+v^2"),
              detail::sf("u^2+v^2")};
  p.points_of_interest = {{0, 0}};
  return p;
}

inline Preset beaks_metric() {
  Preset p;
  p.name = "beaks_metric";
  p.domain = {-1, 1, -1, 1};
  p.metric = {detail::sf("1"), detail::sf("0"), detail::sf("(v^2-u^2)^2"),
              detail::sf("v^2-u^2")};
  p.points_of_interest = {{0, 0}};
  p.expected_metric_k = -1;
  return p;
}

inline Preset lips_metric() {
  Preset p;
  p.name = "lips_metric";
  p.domain = {-1, 1, -1, 1};
  p.metric = {detail::sf("1"), detail::sf("0"), detail::sf("(u^2+v^2)^2"),
              detail::sf("u^2+v^2")};
  p.points_of_interest = {{0, 0}};
  p.expected_metric_k = -1;
  return p;
}

inline std::vector<std::string> preset_names() {
  return {"cosh_example",    "translation_half_sin", "translation_11_10_sin",
          "cuspidal_edge",   "swallowtail",          "cuspidal_lips",
          "cuspidal_beaks",  "cuspidal_butterfly",   "twisted_edge",
          "flat_plane",      "corank2_cone",         "beaks_metric",
          "lips_metric"};
}

inline Preset by_name(const std::string& name) {
  if (name == "cosh_example") return cosh_example();
  if (name == "translation_half_sin") return translation_half_sin();
  if (name == "translation_11_10_sin") return translation_11_10_sin();
  if (name == "cuspidal_edge") return cuspidal_edge_front();
  if (name == "swallowtail") return swallowtail_front();
  if (name == "cuspidal_lips") return cuspidal_lips_front();
  if (name == "cuspidal_beaks") return cuspidal_beaks_front();
  if (name == "cuspidal_butterfly") return cuspidal_butterfly_front();
  if (name == "twisted_edge") return twisted_edge_front();
  if (name == "flat_plane") return flat_plane();
  if (name == "corank2_cone") return corank2_cone();
  if (name == "beaks_metric") return beaks_metric();
  if (name == "lips_metric") return lips_metric();
  throw std::invalid_argument("unknown preset `" + name + "`");
}

}  // namespace frontforge::presets
