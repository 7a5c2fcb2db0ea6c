#include <catch_amalgamated.hpp>

#include <cmath>
#include <memory>

#include "frontforge/metric.hpp"

using namespace frontforge;
using geom::Rect;
using geom::UV;

namespace {

metric::MetricData cosh_metric() {
  return {std::make_shared<field::AstScalarField>("1/cosh(v)^2"),
          std::make_shared<field::AstScalarField>("0"),
          std::make_shared<field::AstScalarField>("sinh(v)^2/cosh(v)^2"),
          std::make_shared<field::AstScalarField>("sinh(v)/cosh(v)^2")};
}

metric::MetricData flat_metric() {
  return {field::constant_field(1), field::constant_field(0), field::constant_field(1),
          field::constant_field(1)};
}

metric::MetricData translation_metric() {
  return {std::make_shared<field::AstScalarField>("(sin(u)/2)^2"),
          std::make_shared<field::AstScalarField>("0"), field::constant_field(1),
          std::make_shared<field::AstScalarField>("sin(u)/2")};
}

const Rect cosh_rect{-3.2, 3.2, -0.45, 0.45};

}  // namespace

TEST_CASE("check_frontal on the cosh example metric") {
  const auto m = cosh_metric();
  const auto rep = metric::check_frontal(m, metric::sample_rect(cosh_rect, 21), 1e-12);
  CHECK(rep.max_residual < 1e-12);
  CHECK(rep.min_eigenvalue > -1e-12);
  CHECK(rep.pass);
}

TEST_CASE("check_frontal passes the flat metric and fails a forced mismatch") {
  const auto rep =
      metric::check_frontal(flat_metric(), metric::sample_rect({0, 1, 0, 1}, 5), 1e-9);
  CHECK(rep.pass);

  metric::MetricData bad = flat_metric();
  bad.lambda = field::constant_field(2);
  const auto bad_rep = metric::check_frontal(bad, metric::sample_rect({0, 1, 0, 1}, 5), 1e-9);
  CHECK_FALSE(bad_rep.pass);
  CHECK(bad_rep.max_residual == Catch::Approx(3.0));
}

TEST_CASE("singular_set finds v=0 for the cosh example") {
  const auto curves = metric::singular_set(cosh_metric(), cosh_rect, 150);
  REQUIRE(curves.size() == 1);
  const auto& c = curves.front();
  REQUIRE(c.points.size() > 50);
  for (const UV p : c.points) CHECK(std::abs(p.v) < 1e-12);
  // eta spans the null space and psi == det(gamma', eta) == +-1
  for (std::size_t k = 0; k < c.points.size(); ++k) {
    CHECK(std::abs(std::abs(c.etas[k].v) - 1) < 1e-12);
    CHECK(std::abs(std::abs(c.psis[k]) - 1) < 1e-12);
  }
  // canonical direction: tangent towards +u
  CHECK(c.tangents.front().u > 0.9);
}

TEST_CASE("singular_set finds u in {-pi, 0, pi} for the translation metric") {
  const auto curves = metric::singular_set(translation_metric(), {-4, 4, -1, 1}, 120);
  REQUIRE(curves.size() == 3);
  std::vector<double> us;
  for (const auto& c : curves) {
    us.push_back(c.points.front().u);
    for (const UV p : c.points) CHECK(std::abs(std::remainder(p.u, M_PI)) < 1e-10);
  }
  std::sort(us.begin(), us.end());
  CHECK(us[0] == Catch::Approx(-M_PI).margin(1e-10));
  CHECK(us[1] == Catch::Approx(0.0).margin(1e-10));
  CHECK(us[2] == Catch::Approx(M_PI).margin(1e-10));
}

TEST_CASE("singular_set is empty for the flat metric") {
  CHECK(metric::singular_set(flat_metric(), {0, 1, 0, 1}, 40).empty());
}

TEST_CASE("singular_set rejects an identically-vanishing lambda") {
  metric::MetricData degenerate = flat_metric();
  degenerate.lambda = field::constant_field(0);
  CHECK_THROWS_AS(metric::singular_set(degenerate, {0, 1, 0, 1}, 20), std::domain_error);
}

TEST_CASE("null vectors satisfy the null-space property") {
  const auto m = cosh_metric();
  const auto curves = metric::singular_set(m, cosh_rect, 100);
  REQUIRE(curves.size() == 1);
  for (std::size_t k = 0; k < curves[0].points.size(); ++k) {
    const UV p = curves[0].points[k], eta = curves[0].etas[k];
    const double E = m.E->value(p), F = m.F->value(p), G = m.G->value(p);
    const double scale = std::abs(E) + std::abs(F) + std::abs(G);
    CHECK(std::abs(E * eta.u + F * eta.v) + std::abs(F * eta.u + G * eta.v) < 1e-9 * scale);
  }
}

TEST_CASE("check_admissible on the cosh example (identity chart)") {
  const auto m = cosh_metric();
  const auto curves = metric::singular_set(m, cosh_rect, 100);
  const auto rep = metric::check_admissible(m, curves, 1e-9);
  REQUIRE(rep.curves.size() == 1);
  CHECK_FALSE(rep.curves[0].swapped_chart);
  CHECK(rep.max_residual < 1e-9);
  CHECK(rep.pass);
  CHECK_FALSE(rep.vacuous);
}

TEST_CASE("check_admissible on the translation metric (swapped chart)") {
  const auto m = translation_metric();
  const auto curves = metric::singular_set(m, {-1, 1, -1, 1}, 80);
  REQUIRE(curves.size() == 1);
  const auto rep = metric::check_admissible(m, curves, 1e-9);
  CHECK(rep.curves[0].swapped_chart);
  CHECK(rep.pass);
}

TEST_CASE("check_admissible is a flagged vacuous pass without singular points") {
  const auto rep = metric::check_admissible(flat_metric(), {}, 1e-9);
  CHECK(rep.pass);
  CHECK(rep.vacuous);
}

TEST_CASE("classify: cosh example points are A_2") {
  const auto m = cosh_metric();
  const auto curves = metric::singular_set(m, cosh_rect, 150);
  REQUIRE(curves.size() == 1);
  for (double u : {0.0, 0.5, -1.25, 2.0}) {
    const auto cls = metric::classify_metric_point(m, {u, 0}, &curves[0]);
    CHECK(cls.tag == metric::MetricTag::A_k);
    CHECK(cls.k == 2);
    REQUIRE_FALSE(cls.psi_jet.empty());
    CHECK(std::abs(std::abs(cls.psi_jet[0]) - 1) < 1e-6);
  }
}

TEST_CASE("classify: Morse-type beaks metric") {
  // lambda = v^2 - u^2 with E = 1, G = lambda^2
  metric::MetricData m{field::constant_field(1), field::constant_field(0),
                       std::make_shared<field::AstScalarField>("(v^2-u^2)^2"),
                       std::make_shared<field::AstScalarField>("v^2-u^2")};
  const auto cls = metric::classify_metric_point(m, {0, 0});
  CHECK(cls.tag == metric::MetricTag::MorseType);
  CHECK(cls.hess_det == Catch::Approx(-4.0));
  CHECK(cls.eta_eta_lambda == Catch::Approx(2.0));
}

TEST_CASE("classify: corank-2 input is an explicit unsupported error") {
  metric::MetricData m{std::make_shared<field::AstScalarField>("u^2+v^2"),
                       field::constant_field(0),
                       std::make_shared<field::AstScalarField>("u^2+v^2"),
                       std::make_shared<field::AstScalarField>("u^2+v^2")};
  CHECK_THROWS_AS(metric::classify_metric_point(m, {0, 0}), metric::CorankError);
}

TEST_CASE("classify: regular point reports Regular") {
  const auto cls = metric::classify_metric_point(cosh_metric(), {0.3, 0.2});
  CHECK(cls.tag == metric::MetricTag::Regular);
}

TEST_CASE("A_k verdicts satisfy the defining psi-jet vanishing pattern") {
  const auto m = cosh_metric();
  const auto curves = metric::singular_set(m, cosh_rect, 150);
  const auto cls = metric::classify_metric_point(m, {0.7, 0}, &curves[0]);
  REQUIRE(cls.tag == metric::MetricTag::A_k);
  // A_2: psi(0) != 0 within tolerance of the jet scale
  CHECK(std::abs(cls.psi_jet[0]) > 1e-6);
}

namespace {

// pull the metric E=1, F=0, G=lambda^2 back through a rigid rotation by angle a
metric::MetricData rotated_identifier_metric(const std::string& lambda_of_uv, double a) {
  char buf[64];
  const auto num = [&](double x) {
    std::snprintf(buf, sizeof buf, "(%.17g)", x);
    return std::string(buf);
  };
  const std::string c = num(std::cos(a)), s = num(std::sin(a));
  const std::string cu = "(" + c + "*u-" + s + "*v)", cv = "(" + s + "*u+" + c + "*v)";
  std::string out;
  for (char ch : lambda_of_uv) {
    if (ch == 'u')
      out += cu;
    else if (ch == 'v')
      out += cv;
    else
      out += ch;
  }
  const std::string Ls = "(" + out + ")";
  return {std::make_shared<field::AstScalarField>(c + "^2+" + s + "^2*" + Ls + "^2"),
          std::make_shared<field::AstScalarField>("-" + c + "*" + s + "+" + c + "*" + s + "*" +
                                                  Ls + "^2"),
          std::make_shared<field::AstScalarField>(s + "^2+" + c + "^2*" + Ls + "^2"),
          std::make_shared<field::AstScalarField>(Ls)};
}

}  // namespace

TEST_CASE("classification tags are invariant under chart rotation") {
  // Morse-type (beaks) identifier
  metric::MetricData base{field::constant_field(1), field::constant_field(0),
                          std::make_shared<field::AstScalarField>("(v^2-u^2)^2"),
                          std::make_shared<field::AstScalarField>("v^2-u^2")};
  const auto rot = rotated_identifier_metric("v^2-u^2", 0.6);
  const auto fr = metric::check_frontal(rot, metric::sample_rect({-1, 1, -1, 1}, 9), 1e-9);
  REQUIRE(fr.pass);
  const auto t0 = metric::classify_metric_point(base, {0, 0});
  const auto t1 = metric::classify_metric_point(rot, {0, 0});
  CHECK(t0.tag == metric::MetricTag::MorseType);
  CHECK(t1.tag == t0.tag);

  // A_2 configuration: lambda = v
  metric::MetricData a2{field::constant_field(1), field::constant_field(0),
                        std::make_shared<field::AstScalarField>("v^2"),
                        std::make_shared<field::AstScalarField>("v")};
  const auto a2r = rotated_identifier_metric("v", 0.6);
  const auto c2 = metric::singular_set(a2, {-1, 1, -1, 1}, 80);
  const auto c2r = metric::singular_set(a2r, {-1, 1, -1, 1}, 80);
  REQUIRE(c2.size() == 1);
  REQUIRE(c2r.size() == 1);
  const auto k2 = metric::classify_metric_point(a2, {0, 0}, &c2[0]);
  const auto k2r = metric::classify_metric_point(a2r, {0, 0}, &c2r[0]);
  CHECK(k2.tag == metric::MetricTag::A_k);
  CHECK(k2r.tag == k2.tag);
  CHECK(k2r.k == k2.k);
}
