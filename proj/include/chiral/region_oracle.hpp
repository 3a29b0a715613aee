#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "regions.hpp"
#include "report.hpp"

namespace chiral {

// Brute-force oracle for the region predicates: membership is tested on a lattice of step 1/8,
// orbits are followed with the flow written in physical coordinates. Random instances only use
// multiples of 1/4, so every breakpoint and every open piece between breakpoints carries a lattice
// point and the lattice answers are exact.
class RegionOracle {
 public:
  RegionOracle(Geometry g, Space s) : geom_(std::move(g)), space_(s), flow_{geom_} {
    if (s != Space::Bulk && s != Space::Boundary) throw std::invalid_argument("oracle needs a space with a flow direction");
    for (int k = -24; k <= 24; ++k) tau_.push_back(ratio(k, 8));
    if (geom_.circle())
      for (int k = 0; k < 8; ++k) y_.push_back(ratio(k, 8));
    else
      for (int k = -16; k <= 16; ++k) y_.push_back(ratio(k, 8));
    if (s == Space::Bulk) {
      auto [lo, hi] = geom_.r_range(Space::Bulk);
      Rational a = *lo, b = hi ? *hi : Rational(2);
      for (Rational r = a; r <= b; r += Rational(1, 8)) r_.push_back(r);
    } else {
      r_.push_back(geom_.r_boundary(Space::Bulk));
    }
  }

  std::size_t lattice_size() const { return tau_.size() * y_.size() * r_.size(); }

  // Random union of 1 to 3 boxes with quarter-multiple ends inside the lattice window.
  Region random_region(std::mt19937_64& rng) const {
    Region out(space_, geom_.circle());
    int n = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < n; ++i) out.add(random_box(rng));
    return out;
  }

  Box random_box(std::mt19937_64& rng) const {
    Box b;
    b[TAU] = random_interval(rng, -8, 8);
    if (geom_.circle()) {
      long lo = static_cast<long>(rng() % 4), len = 1 + static_cast<long>(rng() % 4);
      b[Y] = flags(rng, ratio(lo, 4), ratio(lo + len, 4));
    } else {
      b[Y] = random_interval(rng, -6, 6);
    }
    if (space_ == Space::Bulk) {
      if (geom_.kind == Kind::Cylinder)
        b[R] = random_interval(rng, 1, 4);
      else
        b[R] = random_interval(rng, 0, 6);
    }
    return b;
  }

  // A region inside u: some of its boxes, each possibly shrunk in time or in space.
  Region random_subregion(std::mt19937_64& rng, const Region& u) const {
    Region out(space_, geom_.circle());
    for (const auto& b : u.boxes()) {
      if (rng() % 4 == 0) continue;
      Box c = b;
      if (rng() % 2) c[TAU] = shrink(rng, c[TAU]);
      if (rng() % 3 == 0) c[Y] = shrink(rng, c[Y]);
      out.add(c);
    }
    if (out.empty()) out.add(u.boxes().front());
    return out;
  }

  bool subset(const Region& a, const Region& b) const {
    for (const auto& t : tau_)
      for (const auto& y : y_)
        for (const auto& r : r_)
          if (a.contains({t, y, r}) && !b.contains({t, y, r})) return false;
    return true;
  }

  bool orbit_hits(const Region& u, const Rational& y, const Rational& r) const {
    for (const auto& t : tau_)
      if (u.contains({t, y, r})) return true;
    return false;
  }

  bool convex(const Region& u) const {
    for (const auto& y : y_)
      for (const auto& r : r_) {
        int state = 0;
        for (const auto& t : tau_) {
          bool in = u.contains({t, y, r});
          if (state == 0 && in) state = 1;
          else if (state == 1 && !in) state = 2;
          else if (state == 2 && in) return false;
        }
      }
    return true;
  }

  bool disjoint(const Region& a, const Region& b) const {
    for (const auto& y : y_)
      for (const auto& r : r_)
        if (orbit_hits(a, y, r) && orbit_hits(b, y, r)) return false;
    return true;
  }

  // nullopt when u is not inside uprime
  std::optional<bool> cauchy(const Region& u, const Region& uprime) const {
    if (!subset(u, uprime)) return std::nullopt;
    for (const auto& y : y_)
      for (const auto& r : r_)
        if (orbit_hits(uprime, y, r) && !orbit_hits(u, y, r)) return false;
    return true;
  }

  // p in J^+(u) iff flowing p backwards in physical coordinates lands in u for some s >= 0.
  bool in_future(const Region& u, const Point3& p) const { return reachable(u, p, -1); }
  bool in_past(const Region& u, const Point3& p) const { return reachable(u, p, +1); }

  // Compare every predicate against the implementation on one instance.
  // J-sets are checked on `points` random lattice points.
  void compare(const Region& a, const Region& b, const Region& sub, Report& rep, std::size_t i, std::mt19937_64& rng, int points = 600) const {
    rep.add("is_convex", i, 0, is_convex(a) == convex(a));
    rep.add("is_disjoint", i, 0, is_disjoint(a, b) == disjoint(a, b));
    auto c = cauchy(sub, a);
    bool ok = c.has_value() && is_cauchy(sub, a) == *c;
    rep.add("is_cauchy", i, 0, ok);
    bool threw = false;
    try {
      (void)is_cauchy(b, a);
    } catch (const std::invalid_argument&) {
      threw = true;
    }
    rep.add("is_cauchy_precondition", i, 0, threw == !cauchy(b, a).has_value());
    auto [up, down] = j_sets(a);
    bool jok = true;
    for (int k = 0; k < points && jok; ++k) {
      Point3 p{tau_[rng() % tau_.size()], y_[rng() % y_.size()], r_[rng() % r_.size()]};
      if (up.contains(p) != in_future(a, p) || down.contains(p) != in_past(a, p)) jok = false;
    }
    rep.add("j_sets", i, 0, jok);
  }

 private:
  bool reachable(const Region& u, const Point3& p, int dir) const {
    Point3 phys = flow_.adapted_to_physical(p);
    for (int k = 0; k <= 48; ++k) {
      // instances live in |tau| <= 2
      if (dir < 0 ? p[TAU] - ratio(k, 8) < -2 : p[TAU] + ratio(k, 8) > 2) break;
      Point3 q = flow_.physical_to_adapted(flow_.physical_flow(ratio(dir * k, 8), phys));
      if (u.contains(q)) return true;
    }
    return false;
  }

  static Interval flags(std::mt19937_64& rng, Rational lo, Rational hi) { return {std::move(lo), std::move(hi), rng() % 2 == 0, rng() % 2 == 0}; }

  static Interval random_interval(std::mt19937_64& rng, long lo_q, long hi_q) {
    long span = hi_q - lo_q;
    long a = lo_q + static_cast<long>(rng() % static_cast<std::uint64_t>(span));
    long b = a + 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(hi_q - a));
    return flags(rng, ratio(a, 4), ratio(b, 4));
  }

  static Interval shrink(std::mt19937_64& rng, const Interval& iv) {
    if (!iv.lo || !iv.hi) return iv;
    long n = Rational((*iv.hi - *iv.lo) * 4).get_num().get_si();
    if (n < 2) return iv;
    long a = static_cast<long>(rng() % static_cast<std::uint64_t>(n));
    long b = a + 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(n - a));
    Interval out{*iv.lo + ratio(a, 4), *iv.lo + ratio(b, 4), false, false};
    out.lo_closed = a == 0 ? iv.lo_closed : rng() % 2 == 0;
    out.hi_closed = b == n ? iv.hi_closed : rng() % 2 == 0;
    return out;
  }

  Geometry geom_;
  Space space_;
  FlowSpec flow_;
  std::vector<Rational> tau_, y_, r_;
};

// Agreement of the region predicates with the lattice oracle on random instances.
inline Report regions_oracle_report(const Geometry& g, Space s, std::uint64_t seed, int instances) {
  RegionOracle oracle(g, s);
  std::mt19937_64 rng(seed);
  Report rep;
  for (int i = 0; i < instances; ++i) {
    auto a = oracle.random_region(rng);
    auto b = oracle.random_region(rng);
    auto sub = oracle.random_subregion(rng, a);
    oracle.compare(a, b, sub, rep, static_cast<std::size_t>(i), rng);
  }
  return rep;
}

}  // namespace chiral
