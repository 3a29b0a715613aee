#pragma once

#include <bit>
#include <optional>
#include <utility>
#include <stdexcept>
#include <string>
#include <vector>

#include "scalar.hpp"

namespace chiral {

enum class Kind { HalfSpace, Cylinder };

// Bulk M = (tau, y, r); Base B = (y, r); Boundary dM = (tau, y); BoundaryCircle dB = (y);
// Tubular dB x [0,1) = (y, rho) with rho stored in the r slot.
enum class Space { Bulk, Base, Boundary, BoundaryCircle, Tubular };

constexpr int TAU = 0;
constexpr int Y = 1;
constexpr int R = 2;

constexpr unsigned bit(int d) { return 1u << d; }

inline unsigned space_mask(Space s) {
  switch (s) {
    case Space::Bulk: return 7u;
    case Space::Base: return 6u;
    case Space::Boundary: return 3u;
    case Space::BoundaryCircle: return 2u;
    case Space::Tubular: return 6u;
  }
  return 0;
}

inline int space_dim(Space s) { return std::popcount(space_mask(s)); }

inline const char* space_name(Space s) {
  switch (s) {
    case Space::Bulk: return "bulk";
    case Space::Base: return "base";
    case Space::Boundary: return "boundary";
    case Space::BoundaryCircle: return "boundary_circle";
    case Space::Tubular: return "tubular";
  }
  return "";
}

inline Space parse_space(const std::string& s) {
  for (Space sp : {Space::Bulk, Space::Base, Space::Boundary, Space::BoundaryCircle, Space::Tubular})
    if (s == space_name(sp)) return sp;
  throw std::invalid_argument("unknown space '" + s + "'");
}

// Geometry data shared by every form: the kind, chirality and annulus radius.
struct Geometry {
  Kind kind = Kind::Cylinder;
  int chirality = 1;
  Rational inner_radius = Rational(1, 4);

  static Geometry half_space(int chirality) { return {Kind::HalfSpace, chirality, Rational(1, 4)}; }
  static Geometry cylinder(int chirality, Rational r0 = Rational(1, 4)) {
    if (!(r0 > 0 && r0 < 1)) throw std::invalid_argument("inner_radius must lie in (0,1)");
    return {Kind::Cylinder, chirality, std::move(r0)};
  }

  int epsilon() const { return chirality; }
  bool circle() const { return kind == Kind::Cylinder; }

  // Range of the r slot in the given space; nullopt marks an infinite end.
  std::pair<std::optional<Rational>, std::optional<Rational>> r_range(Space s) const {
    if (s == Space::Tubular) return {Rational(0), Rational(1)};
    if (kind == Kind::HalfSpace) return {Rational(0), std::nullopt};
    return {inner_radius, Rational(1)};
  }

  // Value of the r slot on the boundary component that carries the boundary condition.
  Rational r_boundary(Space s) const {
    if (s == Space::Tubular || kind == Kind::HalfSpace) return Rational(0);
    return Rational(1);
  }

  // Sign of the orientation form relative to the coordinate volume form in increasing slot order.
  int orientation(Space s) const {
    int e = epsilon();
    if (kind == Kind::Cylinder) return s == Space::Tubular ? -1 : 1;
    switch (s) {
      case Space::Bulk:
      case Space::Base:
      case Space::Tubular: return e;
      case Space::Boundary:
      case Space::BoundaryCircle: return -e;
    }
    return 1;
  }

  std::string name() const { return kind == Kind::HalfSpace ? "half_space" : "cylinder"; }
  std::string chirality_str() const { return chirality > 0 ? "+" : "-"; }

  friend bool operator==(const Geometry& a, const Geometry& b) {
    return a.kind == b.kind && a.chirality == b.chirality && a.inner_radius == b.inner_radius;
  }
};

// Sign of the permutation sorting the concatenation of two disjoint index masks.
inline int wedge_sign(unsigned a, unsigned b) {
  int inv = 0;
  for (int i = 0; i < 3; ++i)
    if (a & bit(i))
      for (int j = 0; j < i; ++j)
        if (b & bit(j)) ++inv;
  return inv % 2 ? -1 : 1;
}

// Number of legs of mask strictly before direction d.
inline int legs_before(unsigned mask, int d) { return std::popcount(mask & (bit(d) - 1u)); }

inline int parity_sign(int n) { return n % 2 ? -1 : 1; }

}  // namespace chiral
