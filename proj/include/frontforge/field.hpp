#pragma once

// Evaluable scalar/vector fields on the (u,v) plane with derivatives up to
// order 3: AST-backed (exact symbolic partials), grid-backed (FD stencils),
// and derived (jet-algebra combinations of other fields).

#include <array>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "frontforge/expr.hpp"
#include "frontforge/fd.hpp"
#include "frontforge/geom.hpp"
#include "frontforge/jet.hpp"
#include "frontforge/quadrature.hpp"

namespace frontforge::field {

using geom::Jet;
using geom::UV;
using geom::Vec3;
using geom::VJet;

class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual double value(UV p) const = 0;
  // jet of the field at p; entries above `order` are zero
  virtual Jet jet(UV p, int order) const = 0;
};

class Vec3Field {
 public:
  virtual ~Vec3Field() = default;
  virtual Vec3 value(UV p) const = 0;
  virtual VJet jet(UV p, int order) const = 0;
};

using ScalarFieldPtr = std::shared_ptr<const ScalarField>;
using Vec3FieldPtr = std::shared_ptr<const Vec3Field>;

// ---- AST-backed ----

// Symbolic partials of an expression, eagerly differentiated up to max_order
// so lookups are lock-free afterwards.
class AstJetSource {
 public:
  explicit AstJetSource(expr::Ast ast, int max_order = geom::kJetOrder)
      : max_order_(max_order) {
    diffs_.assign(static_cast<std::size_t>(max_order + 1) * (max_order + 1), nullptr);
    at(0, 0) = std::move(ast);
    for (int total = 1; total <= max_order; ++total)
      for (int i = 0; i <= total; ++i) {
        const int j = total - i;
        if (i > 0)
          at(i, j) = expr::differentiate(at(i - 1, j), expr::Var::U);
        else
          at(i, j) = expr::differentiate(at(i, j - 1), expr::Var::V);
      }
  }

  const expr::Ast& partial(int i, int j) const {
    if (i < 0 || j < 0 || i + j > max_order_)
      throw std::out_of_range("AstJetSource: partial order too high");
    return diffs_[static_cast<std::size_t>(i) * (max_order_ + 1) + j];
  }

  double value(UV p) const { return expr::eval(partial(0, 0), p.u, p.v); }

  // jet of the (du,dv) partial-derivative field
  Jet partial_jet(int du, int dv, UV p, int order = geom::kJetOrder) const {
    std::array<std::array<double, 4>, 4> d{};
    for (int i = 0; i <= order; ++i)
      for (int j = 0; j + i <= order; ++j)
        d[i][j] = expr::eval(partial(du + i, dv + j), p.u, p.v);
    return Jet::from_derivs(d);
  }

  int max_order() const { return max_order_; }

 private:
  int max_order_;
  std::vector<expr::Ast> diffs_;

  expr::Ast& at(int i, int j) { return diffs_[static_cast<std::size_t>(i) * (max_order_ + 1) + j]; }
};

class AstScalarField : public ScalarField {
 public:
  explicit AstScalarField(expr::Ast ast, int max_order = geom::kJetOrder)
      : src_(std::move(ast), max_order) {}
  explicit AstScalarField(std::string_view source, int max_order = geom::kJetOrder)
      : src_(expr::parse(source), max_order) {}

  double value(UV p) const override { return src_.value(p); }
  Jet jet(UV p, int order) const override { return src_.partial_jet(0, 0, p, order); }
  const AstJetSource& source() const { return src_; }
  const expr::Ast& ast() const { return src_.partial(0, 0); }

 private:
  AstJetSource src_;
};

class AstVec3Field : public Vec3Field {
 public:
  AstVec3Field(expr::Ast x, expr::Ast y, expr::Ast z, int max_order = geom::kJetOrder)
      : x_(std::move(x), max_order), y_(std::move(y), max_order), z_(std::move(z), max_order) {}
  AstVec3Field(std::string_view x, std::string_view y, std::string_view z,
               int max_order = geom::kJetOrder)
      : x_(expr::parse(x), max_order), y_(expr::parse(y), max_order),
        z_(expr::parse(z), max_order) {}

  Vec3 value(UV p) const override { return {x_.value(p), y_.value(p), z_.value(p)}; }
  VJet jet(UV p, int order) const override {
    return {x_.partial_jet(0, 0, p, order), y_.partial_jet(0, 0, p, order),
            z_.partial_jet(0, 0, p, order)};
  }
  // jet of d^(du,dv) f, usable while du+dv+order <= max_order
  VJet partial_jet(int du, int dv, UV p, int order = geom::kJetOrder) const {
    return {x_.partial_jet(du, dv, p, order), y_.partial_jet(du, dv, p, order),
            z_.partial_jet(du, dv, p, order)};
  }
  const AstJetSource& comp(int k) const { return k == 0 ? x_ : k == 1 ? y_ : z_; }

 private:
  AstJetSource x_, y_, z_;
};

// ---- grid-backed (uniform spacing, node-aligned evaluation) ----

class GridScalarField : public ScalarField {
 public:
  GridScalarField(double u0, double v0, double du, double dv, int nu, int nv,
                  std::vector<double> values)
      : u0_(u0), v0_(v0), du_(du), dv_(dv), nu_(nu), nv_(nv), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != nu_ * nv_)
      throw std::invalid_argument("GridScalarField: value count mismatch");
  }

  static GridScalarField sample(const std::function<double(UV)>& f, double u0, double v0,
                                double du, double dv, int nu, int nv) {
    std::vector<double> vals(static_cast<std::size_t>(nu) * nv);
    for (int i = 0; i < nu; ++i)
      for (int j = 0; j < nv; ++j) vals[static_cast<std::size_t>(i) * nv + j] = f({u0 + i * du, v0 + j * dv});
    return {u0, v0, du, dv, nu, nv, std::move(vals)};
  }

  double value(UV p) const override {
    const auto [i, j] = node_of(p);
    return at(i, j);
  }

  Jet jet(UV p, int order) const override {
    const auto [i, j] = node_of(p);
    std::array<std::array<double, 4>, 4> d{};
    for (int a = 0; a <= order; ++a)
      for (int b = 0; b + a <= order; ++b) d[a][b] = partial_at(i, j, a, b);
    return Jet::from_derivs(d);
  }

  // central-difference partial at a node
  double partial_at(int i, int j, int order_u, int order_v) const {
    const geom::Stencil su = geom::fd_stencil(order_u);
    const geom::Stencil sv = geom::fd_stencil(order_v);
    if (i - su.radius < 0 || i + su.radius >= nu_ || j - sv.radius < 0 || j + sv.radius >= nv_)
      throw std::out_of_range("GridScalarField: point out of stencil range");
    double acc = 0;
    for (int a = -su.radius; a <= su.radius; ++a) {
      const double wa = su.w[a + su.radius];
      if (wa == 0) continue;
      for (int b = -sv.radius; b <= sv.radius; ++b) {
        const double wb = sv.w[b + sv.radius];
        if (wb != 0) acc += wa * wb * at(i + a, j + b);
      }
    }
    return acc / (std::pow(du_, order_u) * std::pow(dv_, order_v));
  }

  double partial(UV p, expr::Var var, int order) const {
    const auto [i, j] = node_of(p);
    return var == expr::Var::U ? partial_at(i, j, order, 0) : partial_at(i, j, 0, order);
  }

 private:
  double u0_, v0_, du_, dv_;
  int nu_, nv_;
  std::vector<double> values_;

  double at(int i, int j) const { return values_[static_cast<std::size_t>(i) * nv_ + j]; }

  std::pair<int, int> node_of(UV p) const {
    const double fi = (p.u - u0_) / du_, fj = (p.v - v0_) / dv_;
    const int i = static_cast<int>(std::lround(fi)), j = static_cast<int>(std::lround(fj));
    if (std::abs(fi - i) > 1e-6 || std::abs(fj - j) > 1e-6)
      throw std::invalid_argument("GridScalarField: evaluation only at grid nodes");
    if (i < 0 || i >= nu_ || j < 0 || j >= nv_)
      throw std::out_of_range("GridScalarField: point outside grid");
    return {i, j};
  }
};

// ---- derived fields (jet-algebra combinations) ----

class DerivedScalarField : public ScalarField {
 public:
  explicit DerivedScalarField(std::function<Jet(UV, int)> jet_fn) : jet_fn_(std::move(jet_fn)) {}
  double value(UV p) const override { return jet_fn_(p, 0).value(); }
  Jet jet(UV p, int order) const override { return jet_fn_(p, order); }

 private:
  std::function<Jet(UV, int)> jet_fn_;
};

class DerivedVec3Field : public Vec3Field {
 public:
  explicit DerivedVec3Field(std::function<VJet(UV, int)> jet_fn) : jet_fn_(std::move(jet_fn)) {}
  Vec3 value(UV p) const override { return jet_fn_(p, 0).value(); }
  VJet jet(UV p, int order) const override { return jet_fn_(p, order); }

 private:
  std::function<VJet(UV, int)> jet_fn_;
};

// unit field w/|w| for an AST-backed direction field w
inline Vec3FieldPtr normalized_field(std::shared_ptr<const AstVec3Field> w) {
  return std::make_shared<DerivedVec3Field>(
      [w = std::move(w)](UV p, int order) { return geom::normalizedj(w->jet(p, order)); });
}

inline ScalarFieldPtr constant_field(double c) {
  return std::make_shared<AstScalarField>(expr::constant(c));
}

// theta(u) = theta0 + integral of rate over [u_ref, u]; derivatives come from
// the rate field's jet, only the value needs quadrature
class AntiderivativeField : public ScalarField {
 public:
  AntiderivativeField(ScalarFieldPtr rate, double u_ref, double theta0, double tol = 1e-12)
      : rate_(std::move(rate)), u_ref_(u_ref), theta0_(theta0), tol_(tol) {}

  double value(UV p) const override {
    return theta0_ +
           geom::integrate_1d([&](double x) { return rate_->value({x, p.v}); }, u_ref_, p.u, tol_);
  }

  Jet jet(UV p, int order) const override {
    Jet r = rate_->jet(p, order > 0 ? order - 1 : 0);
    std::array<std::array<double, 4>, 4> d{};
    d[0][0] = value(p);
    for (int i = 1; i <= order; ++i) d[i][0] = r.d(i - 1, 0);
    return Jet::from_derivs(d);
  }

 private:
  ScalarFieldPtr rate_;
  double u_ref_, theta0_, tol_;
};

}  // namespace frontforge::field
