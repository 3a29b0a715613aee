#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "complexes.hpp"
#include "form.hpp"
#include "poly1d.hpp"
#include "regions.hpp"

namespace chiral {

// Deterministic per-suite seed derived from a master seed and a name (FNV-1a mix).
inline std::uint64_t derive_seed(std::uint64_t master, const std::string& name) {
  std::uint64_t h = 1469598103934665603ull ^ master;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Which boundary condition random samples must satisfy.
enum class Condition {
  None,      // arbitrary values at the boundary
  Chiral,    // 0-forms vanish on the boundary, 1-forms restrict to the chiral eigenspace
  Vanishing  // 0-forms vanish on the boundary
};

// Random compactly supported forms built from quartic bumps and low Fourier modes.
// All interval ends are multiples of 1/4 and all coefficients small rationals, so results are reproducible.
template <class V>
class FormSampler {
 public:
  using Field = CoeffField<V>;

  FormSampler(Geometry g, std::uint64_t seed) : geom_(std::move(g)), rng_(seed) {}

  std::mt19937_64& rng() { return rng_; }

  long uniform(long lo, long hi) { return lo + static_cast<long>(rng_() % static_cast<std::uint64_t>(hi - lo + 1)); }

  Rational small_rational() {
    long num = uniform(-4, 4);
    if (num == 0) num = 1;
    long den = uniform(1, 3);
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  // Bump c (x-a)^2 (b-x)^2 on [a,b] with a < b chosen on the quarter grid inside [lo, hi].
  PiecewisePoly<V> bump_in(const Rational& lo, const Rational& hi) {
    long n = Rational((hi - lo) * 4).get_num().get_si();
    long i = uniform(0, n - 1);
    long j = uniform(i + 1, n);
    return PiecewisePoly<V>::bump(lo + ratio(i, 4), lo + ratio(j, 4), from_rational<V>(small_rational() * 16));
  }

  Field line_factor(int d) {
    if (d == TAU) return Field::from_spline(TAU, bump_in(Rational(-2), Rational(2)), geom_.circle());
    return Field::from_spline(d, bump_in(Rational(-2), Rational(2)), false);
  }

  Field circle_factor() {
    Field f(true);
    int modes = static_cast<int>(uniform(0, 2));
    f = Field::constant(from_rational<V>(small_rational()), true);
    for (int k = 1; k <= modes; ++k) {
      if (uniform(0, 1)) f = f + Field::trig(trig_cos(k), from_rational<V>(small_rational()));
      if (uniform(0, 1)) f = f + Field::trig(trig_sin(k), from_rational<V>(small_rational()));
    }
    return f;
  }

  // Radial factor: either supported inside the r range or reaching the boundary value of r.
  Field radial_factor(Space s, bool reach_boundary) {
    bool circ = geom_.circle();
    if (s == Space::Tubular) {
      // rho in [0,1): boundary at 0, vanish near 1
      if (reach_boundary) {
        long j = uniform(1, 3);
        return Field::from_spline(R, PiecewisePoly<V>::bump(ratio(-j, 4), ratio(j, 4), from_rational<V>(small_rational() * 16)), circ);
      }
      long i = uniform(0, 2);
      long j = uniform(i + 1, 3);
      return Field::from_spline(R, PiecewisePoly<V>::bump(ratio(i, 4), ratio(j, 4), from_rational<V>(small_rational() * 16)), circ);
    }
    if (geom_.kind == Kind::HalfSpace) {
      if (reach_boundary) {
        long a = uniform(1, 4), b = uniform(1, 8);
        return Field::from_spline(R, PiecewisePoly<V>::bump(ratio(-a, 4), ratio(b, 4), from_rational<V>(small_rational() * 16)), circ);
      }
      long i = uniform(0, 6);
      long j = uniform(i + 1, 8);
      return Field::from_spline(R, PiecewisePoly<V>::bump(ratio(i, 4), ratio(j, 4), from_rational<V>(small_rational() * 16)), circ);
    }
    // cylinder: r in [r0, 1] with the boundary at 1; stay away from r0
    Rational r0 = geom_.inner_radius;
    Rational lo = (r0 + 1) / 2;
    if (reach_boundary) {
      long a = uniform(0, 1), b = uniform(1, 3);
      Rational left = lo + ratio(a, 8) * (1 - lo);
      return Field::from_spline(R, PiecewisePoly<V>::bump(left, Rational(1) + ratio(b, 8), from_rational<V>(small_rational() * 16)), circ);
    }
    long i = uniform(0, 2);
    long j = uniform(i + 1, 4);
    Rational step = (1 - lo) / 4;
    return Field::from_spline(R, PiecewisePoly<V>::bump(lo + step * i, lo + step * j, from_rational<V>(small_rational() * 16)), circ);
  }

  Field y_factor() { return geom_.circle() ? circle_factor() : line_factor(Y); }

  Field random_field(Space s, bool reach_boundary) {
    unsigned dims = space_mask(s);
    Field f = Field::constant(from_rational<V>(1), geom_.circle());
    if (dims & bit(TAU)) f = f * line_factor(TAU);
    if (dims & bit(Y)) f = f * y_factor();
    if (dims & bit(R)) f = f * radial_factor(s, reach_boundary);
    return f;
  }

  Field vanishing_factor(Space s) {
    Rational rb = geom_.r_boundary(s);
    return Field::from_poly(R, Poly1<V>::linear_root(rb), geom_.circle());
  }

  // Random form of the given de Rham degree; each component is a sum of one or two product terms.
  Form<V> form(Space s, int degree, int shift, Condition cond = Condition::None) {
    Form<V> out(geom_, s, degree, shift);
    unsigned dims = space_mask(s);
    bool has_r = dims & bit(R);
    for (unsigned m = 0; m < 8; ++m) {
      if ((m & ~dims) || std::popcount(m) != degree) continue;
      if (uniform(0, 3) == 0 && degree > 0) continue;
      int terms = static_cast<int>(uniform(1, 2));
      for (int t = 0; t < terms; ++t) {
        bool reach = has_r && uniform(0, 2) != 0;
        Field f = random_field(s, reach);
        if (reach && has_r) {
          bool vanish = (cond != Condition::None && degree == 0) || (cond == Condition::Chiral && degree == 1 && m == bit(TAU));
          if (vanish) f = f * vanishing_factor(s);
        }
        out.set(m, out.component(m) + f);
      }
    }
    if (out.is_zero()) return form(s, degree, shift, cond);
    return out;
  }

  // Random form of cohomological degree in [lo, hi] for a complex.
  Form<V> member_of(const ComplexId& c, int degree) {
    Condition cond = Condition::None;
    if (c.conditioned()) cond = Condition::Chiral;
    if (c.tag == ComplexTag::B_obs) cond = Condition::Vanishing;
    if (c.tag == ComplexTag::L) return boundary_l_form(degree);
    return form(c.space, degree, c.shift(), cond);
  }

  // Compactly supported boundary form in the boundary condition: 0 in degree 0, f beta in degree 1.
  Form<V> boundary_l_form(int degree) {
    if (degree == 0) return Form<V>(geom_, Space::Boundary, 0, 1);
    if (degree == 1) {
      Form<V> out(geom_, Space::Boundary, 1, 1);
      out.set(bit(Y), random_field(Space::Boundary, false));
      return out;
    }
    return form(Space::Boundary, 2, 1);
  }

  // Bump on [a,b] with ends on the quarter subdivision of [lo, hi].
  PiecewisePoly<V> bump_between(const Rational& lo, const Rational& hi) {
    long i = uniform(0, 3);
    long j = uniform(i + 1, 4);
    Rational step = (hi - lo) / 4;
    return PiecewisePoly<V>::bump(lo + step * i, lo + step * j, from_rational<V>(small_rational() * 16));
  }

  // Random form whose support lies inside the open box (finite ends only where given).
  Form<V> form_in(Space s, int degree, int shift, const Box& box) {
    Form<V> out(geom_, s, degree, shift);
    unsigned dims = space_mask(s);
    for (unsigned m = 0; m < 8; ++m) {
      if ((m & ~dims) || std::popcount(m) != degree) continue;
      if (uniform(0, 3) == 0 && degree > 0) continue;
      Field f = Field::constant(from_rational<V>(1), geom_.circle());
      for (int d = 0; d < 3; ++d) {
        if (!(dims & bit(d))) continue;
        const Interval& iv = box[d];
        if (iv.lo && iv.hi)
          f = f * Field::from_spline(d, bump_between(*iv.lo, *iv.hi), geom_.circle());
        else if (d == Y)
          f = f * y_factor();
        else if (d == R)
          f = f * radial_factor(s, false);
        else
          f = f * line_factor(d);
      }
      out.set(m, out.component(m) + f);
    }
    if (out.is_zero()) return form_in(s, degree, shift, box);
    return out;
  }

  const Geometry& geometry() const { return geom_; }

 private:
  Geometry geom_;
  std::mt19937_64 rng_;
};

}  // namespace chiral
