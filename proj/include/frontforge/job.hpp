#pragma once

// Batch front-end: config ingestion and the check/build/classify/invariants
// pipelines with their report formats.

#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "frontforge/construct.hpp"
#include "frontforge/invariants.hpp"
#include "frontforge/presets.hpp"
#include "frontforge/report.hpp"

namespace frontforge::cli {

using geom::Rect;
using geom::UV;
using geom::Vec3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double quadrature = 1e-10;
  double integrability = 1e-8;
  double check = 1e-9;
  double invariant_match = 1e-6;
};

struct JobConfig {
  std::string preset_name;
  std::map<std::string, std::string> inline_fields;  // E,F,G,lambda,Hhat,H,nu_x,nu_y,nu_z
  bool has_domain = false;
  Rect domain;
  int grid_u = 81, grid_v = 41;
  bool has_base = false;
  UV base_point;
  Vec3 base_value;
  Tolerances tol;
  std::string out_obj, out_csv, out_json;

  static JobConfig parse(const std::string& text);
  static JobConfig parse_file(const std::string& path);
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline double to_number(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: key `" + key + "` expects a number, got `" + value + "`");
  }
}

}  // namespace detail

inline JobConfig JobConfig::parse(const std::string& text) {
  JobConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  bool saw_umin = false, saw_umax = false, saw_vmin = false, saw_vmax = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("config line " + std::to_string(lineno) +
                                             ": malformed section header");
      section = t.substr(1, t.size() - 2);
      if (section != "input" && section != "domain" && section != "output" &&
          section != "tolerances")
        throw ConfigError("config: unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(t.substr(0, eq));
    std::string value = detail::trim(t.substr(eq + 1));
    const bool quoted = value.size() >= 2 && value.front() == '"' && value.back() == '"';
    if (quoted) value = value.substr(1, value.size() - 2);

    if (section == "input") {
      if (key == "preset") {
        cfg.preset_name = value;
      } else if (key == "E" || key == "F" || key == "G" || key == "lambda" || key == "Hhat" ||
                 key == "H" || key == "nu_x" || key == "nu_y" || key == "nu_z") {
        if (!quoted)
          throw ConfigError("config: expression value for `" + key + "` must be quoted");
        cfg.inline_fields[key] = value;
      } else {
        throw ConfigError("config: unknown [input] key `" + key + "`");
      }
    } else if (section == "domain") {
      if (key == "u_min") cfg.domain.u0 = detail::to_number(key, value), saw_umin = true;
      else if (key == "u_max") cfg.domain.u1 = detail::to_number(key, value), saw_umax = true;
      else if (key == "v_min") cfg.domain.v0 = detail::to_number(key, value), saw_vmin = true;
      else if (key == "v_max") cfg.domain.v1 = detail::to_number(key, value), saw_vmax = true;
      else if (key == "grid_u") cfg.grid_u = static_cast<int>(detail::to_number(key, value));
      else if (key == "grid_v") cfg.grid_v = static_cast<int>(detail::to_number(key, value));
      else if (key == "base_u") cfg.base_point.u = detail::to_number(key, value), cfg.has_base = true;
      else if (key == "base_v") cfg.base_point.v = detail::to_number(key, value), cfg.has_base = true;
      else if (key == "base_x") cfg.base_value.x = detail::to_number(key, value), cfg.has_base = true;
      else if (key == "base_y") cfg.base_value.y = detail::to_number(key, value), cfg.has_base = true;
      else if (key == "base_z") cfg.base_value.z = detail::to_number(key, value), cfg.has_base = true;
      else throw ConfigError("config: unknown [domain] key `" + key + "`");
    } else if (section == "output") {
      if (key == "obj") cfg.out_obj = value;
      else if (key == "csv") cfg.out_csv = value;
      else if (key == "json") cfg.out_json = value;
      else throw ConfigError("config: unknown [output] key `" + key + "`");
    } else if (section == "tolerances") {
      if (key == "quadrature") cfg.tol.quadrature = detail::to_number(key, value);
      else if (key == "integrability") cfg.tol.integrability = detail::to_number(key, value);
      else if (key == "check") cfg.tol.check = detail::to_number(key, value);
      else if (key == "invariant_match") cfg.tol.invariant_match = detail::to_number(key, value);
      else throw ConfigError("config: unknown [tolerances] key `" + key + "`");
    } else {
      throw ConfigError("config line " + std::to_string(lineno) + ": key outside any section");
    }
  }
  cfg.has_domain = saw_umin && saw_umax && saw_vmin && saw_vmax;
  if ((saw_umin || saw_umax || saw_vmin || saw_vmax) && !cfg.has_domain)
    throw ConfigError("config: [domain] needs all of u_min, u_max, v_min, v_max");
  return cfg;
}

inline JobConfig JobConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open `" + path + "`");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

// ---- resolution to a runnable job ----

struct Job {
  presets::Preset preset;  // preset or assembled from inline expressions
  Rect domain;
  int grid_u = 0, grid_v = 0;
  UV base_point;
  Vec3 base_value;
  Tolerances tol;
  std::string out_obj, out_csv, out_json;
};

inline Job resolve(const JobConfig& cfg) {
  Job job;
  const bool has_inline = !cfg.inline_fields.empty();
  if (cfg.preset_name.empty() == !has_inline)
    throw ConfigError("config: exactly one of a preset name or inline fields is required");
  if (!cfg.preset_name.empty()) {
    try {
      job.preset = presets::by_name(cfg.preset_name);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  } else {
    const auto need = [&](const std::string& key) -> std::string {
      const auto it = cfg.inline_fields.find(key);
      if (it == cfg.inline_fields.end())
        throw ConfigError("config: inline input is missing `" + key + "`");
      return it->second;
    };
    presets::Preset p;
    p.name = "inline";
    try {
      p.metric = {std::make_shared<field::AstScalarField>(need("E")),
                  std::make_shared<field::AstScalarField>(need("F")),
                  std::make_shared<field::AstScalarField>(need("G")),
                  std::make_shared<field::AstScalarField>(need("lambda"))};
      auto pair = std::make_shared<kenmotsu::FrontPairData>();
      pair->g = p.metric;
      pair->nu = std::make_shared<field::AstVec3Field>(need("nu_x"), need("nu_y"), need("nu_z"));
      if (cfg.inline_fields.count("H"))
        pair->H = std::make_shared<field::AstScalarField>(cfg.inline_fields.at("H"));
      if (cfg.inline_fields.count("Hhat"))
        pair->Hhat = std::make_shared<field::AstScalarField>(cfg.inline_fields.at("Hhat"));
      else if (pair->H)
        pair->Hhat = kenmotsu::hhat_from(pair->H, p.metric.lambda);
      else
        throw ConfigError("config: inline input needs Hhat or H");
      p.pair = pair;
    } catch (const expr::ParseError& e) {
      throw ConfigError(std::string("config: bad expression: ") + e.what());
    }
    if (!cfg.has_domain) throw ConfigError("config: inline input requires a [domain] section");
    p.domain = cfg.domain;
    job.preset = std::move(p);
  }
  job.domain = cfg.has_domain ? cfg.domain : job.preset.domain;
  job.grid_u = cfg.grid_u;
  job.grid_v = cfg.grid_v;
  if (job.grid_u < 8 || job.grid_v < 8) throw ConfigError("config: grid must be at least 8x8");
  job.base_point = cfg.has_base ? cfg.base_point : job.preset.base_point;
  job.base_value = cfg.has_base ? cfg.base_value : job.preset.base_value;
  job.tol = cfg.tol;
  job.out_obj = cfg.out_obj;
  job.out_csv = cfg.out_csv;
  job.out_json = cfg.out_json;
  return job;
}

// ---- commands; return exit codes (0 pass, 1 check failure) ----

namespace detail {

inline void emit(const Job& job, const Json& report, std::ostream& json_out) {
  const std::string text = report.dump();
  json_out << text;
  if (!job.out_json.empty()) {
    std::ofstream f(job.out_json);
    f << text;
  }
}

inline std::vector<metric::MetricSingularCurve> curves_of(const Job& job, int resolution = 200) {
  return metric::singular_set(job.preset.metric, job.domain, resolution);
}

}  // namespace detail

inline int cmd_check(const Job& job, std::ostream& json_out) {
  const auto& preset = job.preset;
  Json report = Json::object();
  report.set("command", "check").set("input", preset.name);
  bool all_pass = true;

  const auto samples = metric::sample_rect(job.domain, 21);
  const auto frontal = metric::check_frontal(preset.metric, samples, job.tol.check);
  report.set("frontal", Json::object()
                            .set("max_residual", frontal.max_residual)
                            .set("min_eigenvalue", frontal.min_eigenvalue)
                            .set("pass", frontal.pass));
  all_pass = all_pass && frontal.pass;

  const auto curves = detail::curves_of(job);
  report.set("singular_curves", Json(static_cast<long>(curves.size())));

  const auto adm = metric::check_admissible(preset.metric, curves, job.tol.check);
  Json adm_json = Json::object();
  adm_json.set("vacuous", adm.vacuous).set("max_residual", adm.max_residual);
  Json per_curve = Json::array();
  for (const auto& c : adm.curves)
    per_curve.push(Json::object()
                       .set("swapped_chart", c.swapped_chart)
                       .set("max_F", c.max_F)
                       .set("max_G", c.max_G)
                       .set("max_Ev_minus_2Fu", c.max_Ev_2Fu)
                       .set("max_Gu", c.max_Gu)
                       .set("max_Gv", c.max_Gv));
  adm_json.set("curves", std::move(per_curve)).set("pass", adm.pass);
  report.set("admissible", std::move(adm_json));
  all_pass = all_pass && adm.pass;

  if (preset.pair) {
    const auto pr = kenmotsu::check_front_pair_data(*preset.pair, samples, job.tol.check);
    report.set("front_pair_data", Json::object()
                                      .set("max_unit_residual", pr.max_unit_residual)
                                      .set("max_hhat_relation", pr.max_hhat_relation)
                                      .set("min_abs_hhat", pr.min_abs_hhat)
                                      .set("min_dnu", pr.min_dnu)
                                      .set("pass", pr.pass));
    all_pass = all_pass && pr.pass;

    // eta nu != 0 along each singular curve
    Json fp = Json::array();
    bool fp_pass = true;
    for (const auto& c : curves) {
      double min_dnu = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < c.points.size(); k += std::max<std::size_t>(1, c.points.size() / 32))
        min_dnu = std::min(min_dnu,
                           kenmotsu::front_pair_derivative(*preset.pair, c.points[k], c.etas[k]));
      const bool pass = min_dnu > job.tol.check;
      fp.push(Json::object().set("min_eta_nu", min_dnu).set("pass", pass));
      fp_pass = fp_pass && pass;
    }
    report.set("front_pair", std::move(fp));
    all_pass = all_pass && fp_pass;

    if (preset.pair->H) {
      Json hl = Json::array();
      bool hl_pass = true;
      for (const auto& c : curves) {
        const UV mid = c.points[c.points.size() / 2];
        const auto rep = kenmotsu::hhat_limit_check(*preset.pair, mid);
        hl.push(Json::object()
                    .set("point_u", mid.u)
                    .set("point_v", mid.v)
                    .set("limit", rep.limit)
                    .set("spread", rep.spread)
                    .set("pass", rep.pass));
        hl_pass = hl_pass && rep.pass;
      }
      report.set("hhat_limit", std::move(hl));
      all_pass = all_pass && hl_pass;
    }

    double max_resid = 0, scale = 0;
    for (const UV q : metric::sample_rect(job.domain, 50)) {
      max_resid =
          std::max(max_resid, geom::max_abs(kenmotsu::integrability_residual(*preset.pair, q)));
      const auto [wu, wv] = kenmotsu::one_form(*preset.pair, q);
      scale = std::max({scale, geom::max_abs(wu), geom::max_abs(wv)});
    }
    const bool integ_pass = max_resid < job.tol.integrability * (1 + scale);
    report.set("integrability", Json::object()
                                    .set("max_residual", max_resid)
                                    .set("one_form_scale", scale)
                                    .set("pass", integ_pass));
    all_pass = all_pass && integ_pass;
  }

  report.set("pass", all_pass);
  detail::emit(job, report, json_out);
  return all_pass ? 0 : 1;
}

inline int cmd_build(const Job& job, std::ostream& json_out) {
  const auto& preset = job.preset;
  if (!preset.pair) throw ConfigError("build: input carries no front-pair data");
  kenmotsu::ConstructOptions opt;
  opt.quad_tol = job.tol.quadrature;
  opt.integrability_tol = job.tol.integrability;
  const auto s = kenmotsu::construct_surface(preset.pair, job.base_point, job.base_value,
                                             job.domain, job.grid_u, job.grid_v, opt);
  Json report = Json::object();
  report.set("command", "build").set("input", preset.name);
  report.set("grid_u", Json(static_cast<long>(job.grid_u)))
      .set("grid_v", Json(static_cast<long>(job.grid_v)));

  double max_dev = -1;
  if (preset.closed_form) {
    max_dev = 0;
    for (int i = 0; i < s.nx; ++i)
      for (int j = 0; j < s.ny; ++j)
        max_dev = std::max(max_dev, geom::max_abs(s.node_value(i, j) -
                                                  preset.closed_form(s.node_point(i, j))));
    report.set("max_closed_form_deviation", max_dev);
  }

  const std::string obj_path = job.out_obj.empty() ? preset.name + ".obj" : job.out_obj;
  {
    std::ofstream obj(obj_path);
    if (!obj) throw ConfigError("build: cannot write `" + obj_path + "`");
    write_obj_mesh(obj, s);
  }
  // image of the singular curves as a polyline companion file
  const std::string stem = obj_path.size() > 4 && obj_path.substr(obj_path.size() - 4) == ".obj"
                               ? obj_path.substr(0, obj_path.size() - 4)
                               : obj_path;
  const std::string curve_path = stem + "_singular.obj";
  std::vector<std::vector<Vec3>> chains;
  for (const auto& c : detail::curves_of(job)) {
    std::vector<Vec3> chain;
    const std::size_t stride = std::max<std::size_t>(1, c.points.size() / 128);
    for (std::size_t k = 0; k < c.points.size(); k += stride) chain.push_back(s.value(c.points[k]));
    chains.push_back(std::move(chain));
  }
  {
    std::ofstream curve_file(curve_path);
    write_obj_polylines(curve_file, chains);
  }
  report.set("obj", obj_path).set("singular_obj", curve_path);
  report.set("pass", true);
  detail::emit(job, report, json_out);
  return 0;
}

inline int cmd_classify(const Job& job, std::ostream& json_out) {
  const auto& preset = job.preset;
  Json points = Json::array();
  bool all_consistent = true;

  // the surface jet for front-side classification, when available
  std::optional<surface::SurfaceJet> sj;
  if (preset.front) {
    sj = *preset.front;
  } else if (preset.pair) {
    kenmotsu::ConstructOptions opt;
    opt.quad_tol = job.tol.quadrature;
    opt.integrability_tol = job.tol.integrability;
    sj = kenmotsu::construct_surface(preset.pair, job.base_point, job.base_value, job.domain,
                                     job.grid_u, job.grid_v, opt);
  }

  const auto curves = detail::curves_of(job);
  const double window = 0.2 * std::min(job.domain.u1 - job.domain.u0,
                                       job.domain.v1 - job.domain.v0);

  const auto classify_at = [&](UV p, const metric::MetricSingularCurve* curve) {
    Json row = Json::object();
    row.set("u", p.u).set("v", p.v);
    std::string metric_tag = "?";
    int metric_k = 0;
    try {
      const auto mc = metric::classify_metric_point(preset.metric, p, curve);
      switch (mc.tag) {
        case metric::MetricTag::Regular: metric_tag = "Regular"; break;
        case metric::MetricTag::A_k: metric_tag = "A_" + std::to_string(mc.k); break;
        case metric::MetricTag::MorseType: metric_tag = "MorseType"; break;
        case metric::MetricTag::DegenerateOther: metric_tag = "DegenerateOther"; break;
      }
      metric_k = mc.k;
      row.set("metric", metric_tag);
    } catch (const std::exception& e) {
      row.set("metric_error", std::string(e.what()));
      all_consistent = false;
    }
    if (sj) {
      try {
        const auto fc = surface::classify_front_singularity(*sj, p, window);
        row.set("front", surface::to_string(fc.tag));
        // Theorem: A_{k+1} metric points give k-th kind front points
        bool agree = true;
        if (metric_k >= 2)
          agree = (metric_k == 2 && fc.tag == surface::FrontTag::CuspidalEdge) ||
                  (metric_k == 3 && fc.tag == surface::FrontTag::Swallowtail) ||
                  (metric_k == 4 && fc.tag == surface::FrontTag::CuspidalButterfly);
        else if (metric_tag == "MorseType")
          agree = fc.tag == surface::FrontTag::CuspidalLips ||
                  fc.tag == surface::FrontTag::CuspidalBeaks;
        row.set("agree", agree);
        all_consistent = all_consistent && agree;
      } catch (const std::exception& e) {
        row.set("front_error", std::string(e.what()));
        all_consistent = false;
      }
    }
    points.push(std::move(row));
  };

  for (const auto& c : curves) {
    const std::size_t stride = std::max<std::size_t>(1, c.points.size() / 40);
    for (std::size_t k = 0; k < c.points.size(); k += stride) classify_at(c.points[k], &c);
    // psi sign changes mark higher-order points between samples
    for (std::size_t k = 1; k < c.points.size(); ++k) {
      if ((c.psis[k - 1] < 0) != (c.psis[k] < 0) && c.psis[k - 1] != 0) {
        const double w = c.psis[k - 1] / (c.psis[k - 1] - c.psis[k]);
        const UV guess = c.points[k - 1] + (c.points[k] - c.points[k - 1]) * w;
        classify_at(metric::refine_to_singular(preset.metric, guess), &c);
      }
    }
  }
  for (const UV poi : preset.points_of_interest) {
    const metric::MetricSingularCurve* ctx = nullptr;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : curves)
      for (const UV q : c.points) {
        const double d = geom::norm(q - poi);
        if (d < best) {
          best = d;
          ctx = &c;
        }
      }
    classify_at(poi, ctx);
  }

  Json report = Json::object();
  report.set("command", "classify").set("input", preset.name);
  report.set("points", std::move(points));
  report.set("pass", all_consistent);
  detail::emit(job, report, json_out);
  return all_consistent ? 0 : 1;
}

inline int cmd_invariants(const Job& job, std::ostream& json_out) {
  const auto& preset = job.preset;
  std::optional<surface::SurfaceJet> sj;
  if (preset.front) {
    sj = *preset.front;
  } else if (preset.pair) {
    kenmotsu::ConstructOptions opt;
    opt.quad_tol = job.tol.quadrature;
    opt.integrability_tol = job.tol.integrability;
    sj = kenmotsu::construct_surface(preset.pair, job.base_point, job.base_value, job.domain,
                                     job.grid_u, job.grid_v, opt);
  } else {
    throw ConfigError("invariants: input carries no front-pair data");
  }

  CsvWriter csv({"t", "u", "v", "kappa_s_direct", "kappa_s_closed", "kappa_nu_direct",
                 "kappa_nu_closed", "kappa_t_direct", "kappa_t_closed", "kappa_c_direct",
                 "kappa_c_closed", "line_flag", "plane_flag", "mu_c_direct", "mu_c_closed",
                 "tau_s_direct", "tau_s_closed"});
  bool routes_match = true;
  double worst_mismatch = 0;

  const auto curves = detail::curves_of(job);
  for (const auto& c : curves) {
    const std::size_t stride = std::max<std::size_t>(1, c.points.size() / 40);
    for (std::size_t k = 0; k < c.points.size(); k += stride) {
      const UV p = c.points[k];
      csv.begin_row();
      csv.cell("t", c.ts[k]);
      csv.cell("u", p.u);
      csv.cell("v", p.v);
      const auto chart = invariants::adapt_chart(invariants::as_samples(c), p);
      if (chart.strongly_adapted) {
        const auto direct = invariants::edge_invariants_direct(*sj, chart);
        const auto closed = invariants::edge_invariants_closed(*preset.pair, *sj, chart);
        csv.cell("kappa_s_direct", direct.kappa_s);
        csv.cell("kappa_s_closed", closed.kappa_s);
        csv.cell("kappa_nu_direct", direct.kappa_nu);
        csv.cell("kappa_nu_closed", closed.kappa_nu);
        csv.cell("kappa_t_direct", direct.kappa_t);
        csv.cell("kappa_t_closed", closed.kappa_t);
        csv.cell("kappa_c_direct", direct.kappa_c);
        csv.cell("kappa_c_closed", closed.kappa_c);
        for (const auto [a, b] : {std::pair{direct.kappa_s, closed.kappa_s},
                                  {direct.kappa_nu, closed.kappa_nu},
                                  {direct.kappa_t, closed.kappa_t},
                                  {direct.kappa_c, closed.kappa_c}}) {
          const double mis = std::abs(a - b) / (1 + std::abs(a));
          worst_mismatch = std::max(worst_mismatch, mis);
          routes_match = routes_match && mis < job.tol.invariant_match;
        }
        csv.cell("line_flag",
                 std::string(invariants::line_criterion(*preset.pair, chart).is_line ? "true"
                                                                                     : "false"));
        csv.cell("plane_flag",
                 std::string(invariants::plane_criterion(*preset.pair, *sj, chart).is_plane
                                 ? "true"
                                 : "false"));
      } else {
        // second-kind point: swallowtail invariants instead
        try {
          const auto direct = invariants::swallowtail_invariants_direct(*sj, chart);
          const auto closed = invariants::swallowtail_invariants_closed(*preset.pair, chart);
          csv.cell("mu_c_direct", direct.mu_c);
          csv.cell("mu_c_closed", closed.mu_c);
          csv.cell("tau_s_direct", direct.tau_s);
          csv.cell("tau_s_closed", closed.tau_s);
          const double mis = std::abs(direct.mu_c - closed.mu_c) / (1 + std::abs(direct.mu_c));
          worst_mismatch = std::max(worst_mismatch, mis);
          routes_match = routes_match && mis < 10 * job.tol.invariant_match;
        } catch (const std::exception&) {
          // row stays empty beyond coordinates
        }
      }
      csv.end_row();
    }
  }

  if (!job.out_csv.empty()) {
    std::ofstream f(job.out_csv);
    if (!f) throw ConfigError("invariants: cannot write `" + job.out_csv + "`");
    csv.write(f);
  } else {
    csv.write(json_out);
  }

  Json report = Json::object();
  report.set("command", "invariants").set("input", preset.name);
  report.set("worst_route_mismatch", worst_mismatch);
  report.set("pass", routes_match);
  if (!job.out_csv.empty()) detail::emit(job, report, json_out);
  return routes_match ? 0 : 1;
}

}  // namespace frontforge::cli
