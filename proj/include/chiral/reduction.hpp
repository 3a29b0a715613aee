#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "complexes.hpp"
#include "form.hpp"
#include "poly1d.hpp"
#include "report.hpp"

namespace chiral {

// Compactly supported density with unit integral on (a, b), and its integrals from the left and to the right.
template <class V>
struct UnitBump {
  Rational a, b;
  PiecewisePoly<V> density;
  PiecewisePoly<V> from_left;  // int_{-inf}^x
  PiecewisePoly<V> to_right;   // int_x^{inf}

  static UnitBump make(const Rational& a, const Rational& b) {
    UnitBump u{a, b, PiecewisePoly<V>::unit_bspline(a, b), {}, {}};
    u.from_left = u.density.cumulative();
    u.to_right = u.density.cumulative_from_right();
    return u;
  }

  V total() const { return density.integrate(); }

  // int_0^1 w(r) int_r^1 w
  V self_moment() const { return (density * to_right).integrate(); }
};

// Fiber integration along the flow, bulk LinObs -> base observables.
template <class V>
Form<V> pi_star(const Form<V>& phi) {
  if (phi.space() != Space::Bulk) throw std::invalid_argument("pi_star expects a bulk observable");
  return fiber_integrate(phi, TAU, Fiber::Full);
}

// alpha -> w(tau) d tau ^ pr^* alpha
template <class V>
Form<V> omega_star(const UnitBump<V>& w, const Form<V>& alpha) {
  if (alpha.space() != Space::Base) throw std::invalid_argument("omega_star expects a base observable");
  const auto& g = alpha.geometry();
  auto om = Form<V>::make(g, Space::Bulk, 1, 0, {{bit(TAU), CoeffField<V>::from_spline(TAU, w.density, g.circle())}});
  auto out = wedge(om, pullback_projection(alpha, Space::Bulk));
  if (out.is_zero()) return Form<V>(g, Space::Bulk, alpha.degree() + 1, alpha.shift() + 1);
  return out.with_shift(alpha.shift() + 1);
}

// K(phi) = int_{-inf}^tau phi - (int_{-inf}^tau w) pr^* pi_* phi
template <class V>
Form<V> reduction_homotopy(const UnitBump<V>& w, const Form<V>& phi) {
  if (phi.degree() == 0) return Form<V>(phi.geometry(), phi.space(), 0, phi.shift());
  auto cum = fiber_integrate(phi, TAU, Fiber::FromMinusInfinity);
  auto p = pullback_projection(pi_star(phi), Space::Bulk).with_shift(phi.shift());
  return cum - p.times(CoeffField<V>::from_spline(TAU, w.from_left, phi.circle()));
}

template <class V>
HomCochain<V> pi_star_cochain() {
  return {"pi_*", 0, ComplexId::of(ComplexTag::LinObs), ComplexId::of(ComplexTag::B_obs), [](const Form<V>& f) { return pi_star(f); }};
}

template <class V>
HomCochain<V> omega_star_cochain(const UnitBump<V>& w) {
  return {"omega_*", 0, ComplexId::of(ComplexTag::B_obs), ComplexId::of(ComplexTag::LinObs), [w](const Form<V>& f) { return omega_star(w, f); }};
}

template <class V>
HomCochain<V> reduction_homotopy_cochain(const UnitBump<V>& w) {
  auto c = ComplexId::of(ComplexTag::LinObs);
  return {"K", -1, c, c, [w](const Form<V>& f) { return reduction_homotopy(w, f); }};
}

// Tubular coordinates: rho in [0,1) in the R slot, the boundary circle at rho = 0.
template <class V>
Form<V> kappa(const UnitBump<V>& w, const Form<V>& phi) {
  if (phi.space() != Space::BoundaryCircle || phi.degree() != 0) throw std::invalid_argument("kappa expects a function on the boundary circle");
  const auto& g = phi.geometry();
  auto f = phi.component(0);
  auto wr = CoeffField<V>::from_spline(R, w.density, g.circle());
  auto rr = CoeffField<V>::from_spline(R, w.to_right, g.circle());
  Form<V> out(g, Space::Tubular, 1, 1);
  out.set(bit(R), wr * f);
  out.set(bit(Y), -(rr * f.derivative(Y)));
  return out;
}

// int_0^1 over rho of the 1-form part; zero elsewhere.
template <class V>
Form<V> lambda(const Form<V>& a) {
  if (a.space() != Space::Tubular) throw std::invalid_argument("lambda expects a tubular observable");
  if (a.degree() != 1) return Form<V>(a.geometry(), Space::BoundaryCircle, 0, 0);
  return fiber_integrate(a, R, Fiber::Full);
}

template <class V>
Form<V> boundary_homotopy(const UnitBump<V>& w, const Form<V>& a) {
  if (a.space() != Space::Tubular) throw std::invalid_argument("boundary homotopy expects a tubular observable");
  if (a.degree() == 0) return Form<V>(a.geometry(), a.space(), 0, a.shift());
  auto i = fiber_integrate(a, R, Fiber::ToOne);
  if (a.degree() == 2) return i;
  auto l = pullback_projection(lambda(a), Space::Tubular).with_shift(a.shift());
  return i - l.times(CoeffField<V>::from_spline(R, w.to_right, a.circle()));
}

template <class V>
HomCochain<V> kappa_cochain(const UnitBump<V>& w) {
  return {"kappa", 0, ComplexId::of(ComplexTag::ChiralBoson), ComplexId::b_obs(Space::Tubular), [w](const Form<V>& f) { return kappa(w, f); }};
}

template <class V>
HomCochain<V> lambda_cochain() {
  return {"lambda", 0, ComplexId::b_obs(Space::Tubular), ComplexId::of(ComplexTag::ChiralBoson), [](const Form<V>& f) { return lambda(f); }};
}

template <class V>
HomCochain<V> boundary_homotopy_cochain(const UnitBump<V>& w) {
  auto c = ComplexId::b_obs(Space::Tubular);
  return {"K_bd", -1, c, c, [w](const Form<V>& f) { return boundary_homotopy(w, f); }};
}

// pi_* omega_* = id and id - omega_* pi_* = dK + Kd.
template <class V>
Report verify_reduction_sdr(const UnitBump<V>& w, const std::vector<Form<V>>& bulk, const std::vector<Form<V>>& base, double tol) {
  Report rep;
  for (std::size_t i = 0; i < base.size(); ++i) rep.add(zero_check("pi*omega*=id", i, pi_star(omega_star(w, base[i])) - base[i], tol, base[i].max_abs()));
  auto k = reduction_homotopy_cochain(w);
  for (std::size_t i = 0; i < bulk.size(); ++i) {
    const auto& x = bulk[i];
    auto rhs = x - omega_star(w, pi_star(x));
    rep.add(zero_check("id-omega*pi*=dK", i, boundary_op(k, x) - rhs, tol, x.max_abs()));
    auto px = pi_star(x);
    bool in_base = member(ComplexId::of(ComplexTag::B_obs), px, tol * std::max(1.0, x.max_abs()));
    rep.add("pi*_lands_in_B_obs", i, in_base ? 0.0 : 1.0, in_base);
    auto kx = reduction_homotopy(w, x).chopped(tol * std::max(1.0, x.max_abs()));
    bool cond = kx.is_zero() || member(ComplexId::of(ComplexTag::LinObs), kx, tol * std::max(1.0, x.max_abs()));
    rep.add("K_keeps_condition", i, cond ? 0.0 : 1.0, cond);
  }
  return rep;
}

// lambda kappa = id, id - kappa lambda = dK + Kd on the tubular complex, K(a) vanishes at rho = 0.
template <class V>
Report verify_boundary_sdr(const UnitBump<V>& w, const std::vector<Form<V>>& circle_fns, const std::vector<Form<V>>& tubular, double tol) {
  Report rep;
  for (std::size_t i = 0; i < circle_fns.size(); ++i) {
    rep.add(zero_check("lambda*kappa=id", i, lambda(kappa(w, circle_fns[i])) - circle_fns[i], tol, circle_fns[i].max_abs()));
    rep.add(zero_check("d(kappa)=0", i, d(kappa(w, circle_fns[i])), tol, circle_fns[i].max_abs()));
  }
  auto k = boundary_homotopy_cochain(w);
  for (std::size_t i = 0; i < tubular.size(); ++i) {
    const auto& x = tubular[i];
    Form<V> rhs = x;
    if (x.degree() == 1) rhs = x - kappa(w, lambda(x));
    rep.add(zero_check("id-kappa*lambda=dK", i, boundary_op(k, x) - rhs, tol, x.max_abs()));
    auto kx = boundary_homotopy(w, x);
    if (kx.degree() == 0) rep.add(zero_check("K|rho=0", i, boundary_restrict(kx), tol, x.max_abs()));
  }
  return rep;
}

// Value of a field that is constant on its single cell.
template <class V>
V constant_value(const CoeffField<V>& f) {
  if (f.is_zero()) return from_rational<V>(0);
  if (f.cell_count() != 1 || f.cell(0).size() != 1 || f.cell(0).front().first != 0) throw std::invalid_argument("field is not constant");
  return f.cell(0).front().second;
}

template <class V>
struct HolonomyResult {
  V alpha;
  V pairing;
  V lambda_value;
  double zigzag_residual = 0;
  bool zigzag_exact = true;
  std::string csv;  // radial profiles of omega and K(omega)
};

// Holonomy of the flat connection alpha d chi seen by omega = w(rho) d rho.
template <class V>
HolonomyResult<V> holonomy_demo(const Geometry& g, const V& alpha, const UnitBump<V>& w) {
  if (g.kind != Kind::Cylinder) throw std::invalid_argument("holonomy example needs the cylinder");
  auto om = Form<V>::make(g, Space::Tubular, 1, 1, {{bit(R), CoeffField<V>::from_spline(R, w.density, true)}});
  auto a = Form<V>::make(g, Space::Tubular, 1, 0, {{bit(Y), CoeffField<V>::constant(alpha, true)}});
  HolonomyResult<V> out;
  out.alpha = alpha;
  out.pairing = integrate(wedge(om, a)) * from_rational<V>(parity_sign(om.cohomological_degree() + 1));
  auto l = lambda(om);
  out.lambda_value = constant_value(l.component(0));
  auto kom = boundary_homotopy(w, om);
  auto res = om - kappa(w, l) + d(kom.with_shift(0)).with_shift(1);
  out.zigzag_residual = res.max_abs();
  out.zigzag_exact = res.is_zero();
  std::ostringstream csv;
  csv << "rho,omega,K_omega\n";
  for (int i = 0; i <= 64; ++i) {
    double r = i / 64.0;
    double kv = kom.is_zero() ? 0.0 : kom.component(0).sample({0, 0, r});
    csv << r << "," << om.component(bit(R)).sample({0, 0, r}) << "," << kv << "\n";
  }
  out.csv = csv.str();
  return out;
}

}  // namespace chiral
