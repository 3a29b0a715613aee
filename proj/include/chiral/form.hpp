#pragma once

#include <bit>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "chart.hpp"
#include "coeff.hpp"

namespace chiral {

class DegreeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bounding box of a support; an absent end means the support is unbounded that way.
struct SupportBox {
  bool empty = true;
  std::array<End, 3> lo;
  std::array<End, 3> hi;
};

// Differential form on one of the chart spaces. Components are indexed by a bitmask of
// coordinate slots; the cohomological degree is degree - shift.
template <class V>
class Form {
 public:
  using Field = CoeffField<V>;

  Form() = default;
  Form(Geometry g, Space s, int degree, int shift = 0) : geom_(std::move(g)), space_(s), degree_(degree), shift_(shift) {
    if (degree < 0 || degree > space_dim(s)) throw DegreeError("form degree out of range for space");
  }

  static Form function(const Geometry& g, Space s, Field f, int shift = 0) {
    Form out(g, s, 0, shift);
    out.set(0u, std::move(f));
    return out;
  }

  static Form make(const Geometry& g, Space s, int degree, int shift, std::initializer_list<std::pair<unsigned, Field>> comps) {
    Form out(g, s, degree, shift);
    for (const auto& [m, f] : comps) out.set(m, out.component(m) + f);
    return out;
  }

  const Geometry& geometry() const { return geom_; }
  Space space() const { return space_; }
  int degree() const { return degree_; }
  int shift() const { return shift_; }
  int cohomological_degree() const { return degree_ - shift_; }
  unsigned dims() const { return space_mask(space_); }
  bool circle() const { return geom_.circle(); }

  const std::map<unsigned, Field>& components() const { return comps_; }
  Field component(unsigned mask) const {
    auto it = comps_.find(mask);
    return it == comps_.end() ? Field(circle()) : it->second;
  }
  void set(unsigned mask, Field f) {
    if ((mask & ~dims()) != 0 || std::popcount(mask) != degree_) throw DegreeError("component index does not match form degree");
    if (f.circle_y() != circle()) f = f.with_circle(circle());
    if (f.is_zero())
      comps_.erase(mask);
    else
      comps_[mask] = std::move(f);
  }

  Form with_shift(int shift) const {
    Form out = *this;
    out.shift_ = shift;
    return out;
  }

  bool is_zero() const { return comps_.empty(); }

  double max_abs() const {
    double m = 0;
    for (const auto& [k, f] : comps_) m = std::max(m, f.max_abs_coefficient());
    return m;
  }

  friend Form operator+(const Form& a, const Form& b) { return combine(a, b, false); }
  friend Form operator-(const Form& a, const Form& b) { return combine(a, b, true); }
  friend Form operator*(const Form& a, const V& s) {
    Form out(a.geom_, a.space_, a.degree_, a.shift_);
    for (const auto& [m, f] : a.comps_) out.set(m, f * s);
    return out;
  }
  friend Form operator*(const V& s, const Form& a) { return a * s; }
  Form operator-() const { return *this * from_rational<V>(-1); }
  friend bool operator==(const Form& a, const Form& b) { return (a - b).is_zero(); }

  // Pointwise product with a function.
  Form times(const Field& g) const {
    Form out(geom_, space_, degree_, shift_);
    for (const auto& [m, f] : comps_) out.set(m, f * g);
    return out;
  }

  Form chopped(double thr) const {
    Form out(geom_, space_, degree_, shift_);
    for (const auto& [m, f] : comps_) out.set(m, f.chopped(thr));
    return out;
  }

  SupportBox support() const {
    SupportBox box;
    for (const auto& [m, f] : comps_)
      for (const auto& c : f.support_cells()) {
        for (int d = 0; d < 3; ++d) {
          if (!(dims() & bit(d))) continue;
          if (box.empty) {
            box.lo[d] = c.lo[d];
            box.hi[d] = c.hi[d];
          } else {
            if (box.lo[d] && (!c.lo[d] || *c.lo[d] < *box.lo[d])) box.lo[d] = c.lo[d];
            if (box.hi[d] && (!c.hi[d] || *c.hi[d] > *box.hi[d])) box.hi[d] = c.hi[d];
          }
        }
        box.empty = false;
      }
    return box;
  }

  // Compact support in the line directions (circle and bounded r ranges are compact already).
  bool compactly_supported() const {
    SupportBox b = support();
    if (b.empty) return true;
    for (int d = 0; d < 3; ++d) {
      if (!(dims() & bit(d)) || (d == Y && circle())) continue;
      if (d == R) {
        auto [lo, hi] = geom_.r_range(space_);
        if ((!b.lo[d] && !lo) || (!b.hi[d] && !hi)) return false;
        continue;
      }
      if (!b.lo[d] || !b.hi[d]) return false;
    }
    return true;
  }

  void require_compatible(const Form& o) const {
    if (!(geom_ == o.geom_) || space_ != o.space_) throw std::invalid_argument("forms live on different spaces");
  }

  std::string describe() const {
    return std::string(space_name(space_)) + " form of degree " + std::to_string(degree_) + " shift " + std::to_string(shift_);
  }

 private:
  static Form combine(const Form& a, const Form& b, bool subtract) {
    a.require_compatible(b);
    if (b.is_zero()) return a;
    if (a.is_zero()) return subtract ? -b : b;
    if (a.degree_ != b.degree_ || a.shift_ != b.shift_) throw DegreeError("adding forms of different degree");
    Form out = a;
    for (const auto& [m, f] : b.comps_) out.set(m, subtract ? out.component(m) - f : out.component(m) + f);
    return out;
  }

  Geometry geom_;
  Space space_ = Space::Bulk;
  int degree_ = 0;
  int shift_ = 0;
  std::map<unsigned, Field> comps_;
};

// Exterior derivative with the shift sign (-1)^shift.
template <class V>
Form<V> d(const Form<V>& a) {
  if (a.degree() == space_dim(a.space())) return Form<V>(a.geometry(), a.space(), a.degree(), a.shift());
  Form<V> out(a.geometry(), a.space(), a.degree() + 1, a.shift());
  V sh = from_rational<V>(parity_sign(a.shift()));
  for (const auto& [m, f] : a.components())
    for (int j = 0; j < 3; ++j) {
      if (!(a.dims() & bit(j)) || (m & bit(j))) continue;
      V s = from_rational<V>(parity_sign(legs_before(m, j))) * sh;
      out.set(m | bit(j), out.component(m | bit(j)) + f.derivative(j) * s);
    }
  return out;
}

// Plain exterior product; the result is unshifted.
template <class V>
Form<V> wedge(const Form<V>& a, const Form<V>& b) {
  a.require_compatible(b);
  int deg = a.degree() + b.degree();
  if (deg > space_dim(a.space())) return Form<V>(a.geometry(), a.space(), 0, 0);
  Form<V> out(a.geometry(), a.space(), deg, 0);
  for (const auto& [ma, fa] : a.components())
    for (const auto& [mb, fb] : b.components()) {
      if (ma & mb) continue;
      V s = from_rational<V>(wedge_sign(ma, mb));
      out.set(ma | mb, out.component(ma | mb) + (fa * fb) * s);
    }
  return out;
}

// Signed pairing (a, b) = (-1)^{|a|} a ^ b with |a| the cohomological degree.
template <class V>
Form<V> signed_wedge(const Form<V>& a, const Form<V>& b) {
  return wedge(a, b) * from_rational<V>(parity_sign(a.cohomological_degree()));
}

inline Space boundary_of(Space s) {
  switch (s) {
    case Space::Bulk: return Space::Boundary;
    case Space::Base: return Space::BoundaryCircle;
    case Space::Tubular: return Space::BoundaryCircle;
    default: throw std::invalid_argument("space has no boundary in the chart");
  }
}

// Pullback along the boundary inclusion: evaluate at the boundary value of r and drop dr legs.
template <class V>
Form<V> boundary_restrict(const Form<V>& a) {
  Space bs = boundary_of(a.space());
  if (a.degree() > space_dim(bs)) return Form<V>(a.geometry(), bs, 0, a.shift());
  Form<V> out(a.geometry(), bs, a.degree(), a.shift());
  Rational rb = a.geometry().r_boundary(a.space());
  for (const auto& [m, f] : a.components()) {
    if (m & bit(R)) continue;
    out.set(m, f.restrict(R, rb, a.space() == Space::Tubular || a.geometry().kind == Kind::HalfSpace));
  }
  return out;
}

// Pullback along a coordinate projection (base -> bulk, circle -> boundary, circle -> tubular).
template <class V>
Form<V> pullback_projection(const Form<V>& a, Space target) {
  bool ok = (a.space() == Space::Base && target == Space::Bulk) ||
            (a.space() == Space::BoundaryCircle && (target == Space::Boundary || target == Space::Tubular)) ||
            a.space() == target;
  if (!ok) throw std::invalid_argument("no projection between these spaces");
  Form<V> out(a.geometry(), target, a.degree(), a.shift());
  for (const auto& [m, f] : a.components()) out.set(m, f);
  return out;
}

// Integral over the space in its fixed orientation. Forms below top degree integrate to 0.
template <class V>
V integrate(const Form<V>& a) {
  int n = space_dim(a.space());
  if (a.degree() != n) return from_rational<V>(0);
  auto f = a.component(a.dims());
  for (int d = 2; d >= 0; --d) {
    if (!(a.dims() & bit(d))) continue;
    if (d == R) {
      auto [lo, hi] = a.geometry().r_range(a.space());
      f = f.integrate(d, lo, hi);
    } else {
      f = f.integrate(d);
    }
  }
  V total = from_rational<V>(0);
  if (!f.is_zero()) {
    for (const auto& [k, v] : f.cell(0)) total = total + v;
  }
  return total * from_rational<V>(a.geometry().orientation(a.space()));
}

enum class Fiber { Full, FromMinusInfinity, ToPlusInfinity, ToOne };

inline Space quotient_of(Space s, int dir) {
  if (dir == TAU && s == Space::Bulk) return Space::Base;
  if (dir == TAU && s == Space::Boundary) return Space::BoundaryCircle;
  if (dir == R && s == Space::Tubular) return Space::BoundaryCircle;
  throw std::invalid_argument("fiber direction is not a product factor of this space");
}

// Fiber integration along one direction, fiber-first. Components without a leg along the
// fiber map to zero. Full integration removes the direction and lowers the shift by one so the
// cohomological degree is preserved; the cumulative versions keep the space and shift.
template <class V>
Form<V> fiber_integrate(const Form<V>& a, int dir, Fiber mode) {
  if (!(a.dims() & bit(dir))) throw std::invalid_argument("fiber direction absent from space");
  if (dir == Y && a.circle() && mode != Fiber::Full) throw std::invalid_argument("cumulative fiber integral along the circle");
  if (a.degree() == 0) {
    if (mode == Fiber::Full) return Form<V>(a.geometry(), quotient_of(a.space(), dir), 0, a.shift() - 1);
    throw DegreeError("fiber integral of a 0-form");
  }
  Space target = mode == Fiber::Full ? quotient_of(a.space(), dir) : a.space();
  int shift = mode == Fiber::Full ? a.shift() - 1 : a.shift();
  Form<V> out(a.geometry(), target, a.degree() - 1, shift);
  using Field = CoeffField<V>;
  for (const auto& [m, f] : a.components()) {
    if (!(m & bit(dir))) continue;
    V s = from_rational<V>(parity_sign(legs_before(m, dir)));
    Field g;
    switch (mode) {
      case Fiber::Full:
        if (dir == R) {
          auto [lo, hi] = a.geometry().r_range(a.space());
          g = f.integrate(dir, lo, hi);
        } else {
          g = f.integrate(dir);
        }
        break;
      case Fiber::FromMinusInfinity: g = f.antiderivative(dir, Field::Anchor::MinusInfinity); break;
      case Fiber::ToPlusInfinity: g = -f.antiderivative(dir, Field::Anchor::PlusInfinity); break;
      case Fiber::ToOne: g = -f.antiderivative(dir, Field::Anchor::Point, Rational(1)); break;
    }
    unsigned nm = m & ~bit(dir);
    out.set(nm, out.component(nm) + g * s);
  }
  return out;
}

}  // namespace chiral
