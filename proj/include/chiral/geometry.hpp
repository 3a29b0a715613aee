#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chart.hpp"
#include "form.hpp"

namespace chiral {

using Point3 = std::array<Rational, 3>;

enum class DirectionKind { Line, HalfLine, Interval, Circle };

struct Direction {
  std::string name;
  DirectionKind kind;
};

// Adapted chart directions of the bulk, in slot order.
inline std::vector<Direction> directions(const Geometry& g) {
  if (g.kind == Kind::HalfSpace) return {{"tau", DirectionKind::Line}, {"u", DirectionKind::Line}, {"r", DirectionKind::HalfLine}};
  return {{"tau", DirectionKind::Line}, {"chi", DirectionKind::Circle}, {"r", DirectionKind::Interval}};
}

inline Rational frac(const Rational& x) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  Rational r = x - Rational(fl);
  return r;
}

// Affine chart maps between physical coordinates and flow-adapted coordinates.
// Half-space: physical (t, x, r), adapted (tau, u, r) with tau = t + eps x, u = t - eps x.
// Cylinder: physical (t, phi, r), adapted (tau, chi, r) with tau = 2t, chi = phi - eps r t mod 1.
struct FlowSpec {
  Geometry geom;

  Point3 physical_to_adapted(const Point3& p) const {
    int e = geom.epsilon();
    if (geom.kind == Kind::HalfSpace) return {p[0] + e * p[1], p[0] - e * p[1], p[2]};
    return {2 * p[0], frac(p[1] - e * p[2] * p[0]), p[2]};
  }

  Point3 adapted_to_physical(const Point3& a) const {
    int e = geom.epsilon();
    if (geom.kind == Kind::HalfSpace) return {(a[0] + a[1]) / 2, e * (a[0] - a[1]) / 2, a[2]};
    return {a[0] / 2, frac(a[1] + e * a[2] * a[0] / 2), a[2]};
  }

  // The flow written in physical coordinates.
  Point3 physical_flow(const Rational& s, const Point3& p) const {
    int e = geom.epsilon();
    if (geom.kind == Kind::HalfSpace) return {p[0] + s / 2, p[1] + e * s / 2, p[2]};
    return {p[0] + s / 2, frac(p[1] + e * p[2] * s / 2), p[2]};
  }

  static Point3 adapted_flow(const Rational& s, const Point3& a) { return {a[0] + s, a[1], a[2]}; }

  // Quotient map onto the base.
  static std::array<Rational, 2> project(const Point3& a) { return {a[1], a[2]}; }

  bool same_point(const Point3& a, const Point3& b) const {
    if (geom.kind == Kind::Cylinder) return a[0] == b[0] && frac(a[1] - b[1]) == 0 && a[2] == b[2];
    return a == b;
  }
};

enum class Pointing { NE, NW, SW, SE, NotNull };

inline const char* pointing_name(Pointing p) {
  switch (p) {
    case Pointing::NE: return "NE";
    case Pointing::NW: return "NW";
    case Pointing::SW: return "SW";
    case Pointing::SE: return "SE";
    case Pointing::NotNull: return "NotNull";
  }
  return "";
}

inline Pointing antipode(Pointing p) {
  switch (p) {
    case Pointing::NE: return Pointing::SW;
    case Pointing::SW: return Pointing::NE;
    case Pointing::NW: return Pointing::SE;
    case Pointing::SE: return Pointing::NW;
    default: return p;
  }
}

// Classification in physical boundary components (v_t, v_x) for the metric -dt^2 + dx^2,
// time orientation d/dt and orientation form dt ^ dx.
inline Pointing classify_pointing_physical(const Rational& vt, const Rational& vx) {
  if (vt == 0 && vx == 0) throw std::invalid_argument("degenerate vector");
  if (vx * vx - vt * vt != 0) return Pointing::NotNull;
  bool future = vt > 0;  // g(T, v) = -v_t < 0
  bool positive = vx > 0;  // omega(T, v) = v_x
  if (future) return positive ? Pointing::NE : Pointing::NW;
  return positive ? Pointing::SE : Pointing::SW;
}

// Boundary tangent vector in adapted components (v_tau, v_y) to physical components.
inline std::array<Rational, 2> boundary_vector_to_physical(const Geometry& g, const Rational& vtau, const Rational& vy) {
  int e = g.epsilon();
  if (g.kind == Kind::HalfSpace) return {(vtau + vy) / 2, e * (vtau - vy) / 2};
  // r = 1 on the boundary: phi = chi + eps tau / 2
  return {vtau / 2, vy + e * vtau / 2};
}

inline Pointing classify_pointing(const Geometry& g, const Rational& vtau, const Rational& vy) {
  auto p = boundary_vector_to_physical(g, vtau, vy);
  return classify_pointing_physical(p[0], p[1]);
}

// Hodge star of the boundary coordinate 1-forms: star(d x^b) = sum_a h[b][a] d x^a.
inline std::array<std::array<Rational, 2>, 2> boundary_star_matrix(const Geometry& g) {
  int e = g.epsilon();
  if (g.kind == Kind::HalfSpace) return {{{Rational(-e), Rational(0)}, {Rational(0), Rational(e)}}};
  return {{{Rational(-e), Rational(-2)}, {Rational(0), Rational(e)}}};
}

template <class V>
Form<V> hodge_star_boundary(const Form<V>& a) {
  if (a.space() != Space::Boundary || a.degree() != 1) throw DegreeError("Hodge star expects a boundary 1-form");
  auto h = boundary_star_matrix(a.geometry());
  Form<V> out(a.geometry(), Space::Boundary, 1, a.shift());
  for (int b = 0; b < 2; ++b) {
    auto f = a.component(bit(b));
    if (f.is_zero()) continue;
    for (int c = 0; c < 2; ++c)
      if (h[b][c] != 0) out.set(bit(c), out.component(bit(c)) + f * from_rational<V>(h[b][c]));
  }
  return out;
}

// (self-dual part, anti-self-dual part) = ((1 + star)/2, (1 - star)/2).
template <class V>
std::pair<Form<V>, Form<V>> sd_projectors(const Form<V>& a) {
  auto s = hodge_star_boundary(a);
  V h = from_rational<V>(Rational(1, 2));
  return {(a + s) * h, (a - s) * h};
}

// The flow-invariant chiral coframe: du on the half-space boundary, d chi on the cylinder.
template <class V>
Form<V> invariant_chiral_coframe(const Geometry& g) {
  Form<V> b(g, Space::Boundary, 1);
  b.set(bit(Y), CoeffField<V>::constant(from_rational<V>(1), g.circle()));
  return b;
}

// Pullback of a bulk or boundary form along the time-s flow map (a tau translation).
template <class V>
Form<V> flow_pullback(const Form<V>& a, const Rational& s) {
  if (!(a.dims() & bit(TAU))) throw std::invalid_argument("flow acts only on spaces with a tau direction");
  Form<V> out(a.geometry(), a.space(), a.degree(), a.shift());
  for (const auto& [m, f] : a.components()) out.set(m, f.translated(TAU, s));
  return out;
}

// Physical components (dt, dx or dphi) of a boundary 1-form at a boundary point given in adapted coordinates.
template <class V>
std::array<double, 2> physical_components(const Form<V>& a, double tau, double y) {
  if (a.space() != Space::Boundary || a.degree() != 1) throw DegreeError("expects a boundary 1-form");
  double f = a.component(bit(TAU)).sample({tau, y, 0});
  double g = a.component(bit(Y)).sample({tau, y, 0});
  int e = a.geometry().epsilon();
  // half-space: d tau = dt + eps dx, du = dt - eps dx;  cylinder: d tau = 2 dt, d chi = dphi - eps dt
  if (a.geometry().kind == Kind::HalfSpace) return {f + g, e * (f - g)};
  return {2 * f - e * g, g};
}

}  // namespace chiral
