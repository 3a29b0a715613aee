#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chart.hpp"
#include "form.hpp"
#include "geometry.hpp"

namespace chiral {

// Interval on a line or an arc of the unit circle inside [0,1]; absent ends are infinite.
struct Interval {
  End lo;
  End hi;
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval open(Rational a, Rational b) { return {std::move(a), std::move(b), false, false}; }
  static Interval closed(Rational a, Rational b) { return {std::move(a), std::move(b), true, true}; }
  static Interval all() { return {}; }

  bool contains(const Rational& x) const {
    if (lo && (x < *lo || (x == *lo && !lo_closed))) return false;
    if (hi && (x > *hi || (x == *hi && !hi_closed))) return false;
    return true;
  }
  bool is_empty() const {
    if (!lo || !hi) return false;
    return *lo > *hi || (*lo == *hi && !(lo_closed && hi_closed));
  }
  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi && (!a.lo || a.lo_closed == b.lo_closed) && (!a.hi || a.hi_closed == b.hi_closed);
  }
};

using Box = std::array<Interval, 3>;

inline Space base_space_of(Space s) {
  if (s == Space::Bulk) return Space::Base;
  if (s == Space::Boundary) return Space::BoundaryCircle;
  throw std::invalid_argument("space has no flow direction");
}

// Finite union of coordinate boxes in adapted coordinates.
class Region {
 public:
  Region() = default;
  Region(Space s, bool circle) : space_(s), circle_(circle) {}
  Region(Space s, bool circle, const std::vector<Box>& boxes) : space_(s), circle_(circle) {
    for (const auto& b : boxes) add(b);
  }

  Space space() const { return space_; }
  bool circle() const { return circle_; }
  unsigned dims() const { return space_mask(space_); }
  const std::vector<Box>& boxes() const { return boxes_; }
  bool empty() const { return boxes_.empty(); }

  // Adds a box; circle arcs are reduced to pieces inside [0,1).
  void add(Box b) {
    for (int d = 0; d < 3; ++d)
      if (!(dims() & bit(d))) b[d] = Interval::all();
    for (int d = 0; d < 3; ++d)
      if ((dims() & bit(d)) && b[d].is_empty()) return;
    if (circle_ && (dims() & bit(Y))) {
      Interval a = b[Y];
      if (!a.lo || !a.hi) throw std::invalid_argument("circle arcs need finite ends");
      if (*a.hi - *a.lo >= 1) {
        b[Y] = Interval{Rational(0), Rational(1), true, false};
        boxes_.push_back(b);
        return;
      }
      Rational shift = *a.lo - frac(*a.lo);
      Rational lo = *a.lo - shift, hi = *a.hi - shift;
      if (hi < 1 || (hi == 1 && !a.hi_closed)) {
        b[Y] = Interval{lo, hi, a.lo_closed, a.hi_closed};
        boxes_.push_back(b);
      } else {
        Box first = b, second = b;
        first[Y] = Interval{lo, Rational(1), a.lo_closed, false};
        second[Y] = Interval{Rational(0), hi - 1, true, a.hi_closed};
        if (!first[Y].is_empty()) boxes_.push_back(first);
        if (!second[Y].is_empty()) boxes_.push_back(second);
      }
      return;
    }
    boxes_.push_back(b);
  }

  bool contains(Point3 p) const {
    if (circle_ && (dims() & bit(Y))) p[Y] = frac(p[Y]);
    for (const auto& b : boxes_) {
      bool in = true;
      for (int d = 0; d < 3 && in; ++d)
        if (dims() & bit(d)) in = b[d].contains(p[d]);
      if (in) return true;
    }
    return false;
  }

 private:
  Space space_ = Space::Bulk;
  bool circle_ = false;
  std::vector<Box> boxes_;
};

// Exact cell decomposition: per direction, the breakpoints split the line (or [0,1) circle) into
// points and open intervals; a region is the set of covered product cells.
class CellSet {
 public:
  CellSet(unsigned dims, bool circle, std::array<std::vector<Rational>, 3> breaks) : dims_(dims), circle_(circle), breaks_(std::move(breaks)) {
    for (int d = 0; d < 3; ++d) {
      auto& b = breaks_[d];
      if (!(dims_ & bit(d))) b.clear();
      if (is_circle(d)) b.push_back(Rational(0));
      std::sort(b.begin(), b.end());
      b.erase(std::unique(b.begin(), b.end()), b.end());
      if (is_circle(d)) b.erase(std::remove_if(b.begin(), b.end(), [](const Rational& x) { return x < 0 || x >= 1; }), b.end());
    }
    flags_.assign(npieces(0) * npieces(1) * npieces(2), 0);
  }

  static std::array<std::vector<Rational>, 3> breakpoints(const Region& r) {
    std::array<std::vector<Rational>, 3> b;
    for (const auto& box : r.boxes())
      for (int d = 0; d < 3; ++d) {
        if (box[d].lo) b[d].push_back(*box[d].lo);
        if (box[d].hi) b[d].push_back(*box[d].hi);
      }
    return b;
  }

  static std::array<std::vector<Rational>, 3> merge(std::array<std::vector<Rational>, 3> a, const std::array<std::vector<Rational>, 3>& b) {
    for (int d = 0; d < 3; ++d) a[d].insert(a[d].end(), b[d].begin(), b[d].end());
    return a;
  }

  static CellSet of(const Region& r, const std::array<std::vector<Rational>, 3>& extra = {}) {
    CellSet c(r.dims(), r.circle(), merge(breakpoints(r), extra));
    for (std::size_t f = 0; f < c.flags_.size(); ++f) c.flags_[f] = r.contains(c.representative(f)) ? 1 : 0;
    return c;
  }

  bool is_circle(int d) const { return circle_ && d == Y && (dims_ & bit(d)); }
  std::size_t npieces(int d) const {
    if (!(dims_ & bit(d))) return 1;
    return is_circle(d) ? 2 * breaks_[d].size() : 2 * breaks_[d].size() + 1;
  }
  const std::array<std::vector<Rational>, 3>& breaks() const { return breaks_; }

  // Representative coordinate of piece i in direction d.
  Rational piece_rep(int d, std::size_t i) const {
    if (!(dims_ & bit(d))) return Rational(0);
    const auto& b = breaks_[d];
    if (is_circle(d)) {
      // pieces: {b0}, (b0,b1), {b1}, ..., (b_{n-1}, 1)
      std::size_t j = i / 2;
      if (i % 2 == 0) return b[j];
      Rational next = j + 1 < b.size() ? b[j + 1] : Rational(1);
      return (b[j] + next) / 2;
    }
    if (b.empty()) return Rational(0);
    if (i == 0) return b.front() - 1;
    if (i == 2 * b.size()) return b.back() + 1;
    if (i % 2 == 1) return b[i / 2];
    return (b[i / 2 - 1] + b[i / 2]) / 2;
  }

  std::array<std::size_t, 3> unflat(std::size_t f) const {
    std::size_t i2 = f % npieces(2);
    f /= npieces(2);
    return {f / npieces(1), f % npieces(1), i2};
  }
  std::size_t flat(const std::array<std::size_t, 3>& i) const { return (i[0] * npieces(1) + i[1]) * npieces(2) + i[2]; }

  Point3 representative(std::size_t f) const {
    auto i = unflat(f);
    return {piece_rep(0, i[0]), piece_rep(1, i[1]), piece_rep(2, i[2])};
  }

  std::size_t size() const { return flags_.size(); }
  bool covered(std::size_t f) const { return flags_[f] != 0; }
  void set(std::size_t f, bool v) { flags_[f] = v ? 1 : 0; }

  bool subset_of(const CellSet& o) const {
    for (std::size_t f = 0; f < flags_.size(); ++f)
      if (flags_[f] && !o.flags_[f]) return false;
    return true;
  }
  bool operator==(const CellSet& o) const { return flags_ == o.flags_; }
  bool intersects(const CellSet& o) const {
    for (std::size_t f = 0; f < flags_.size(); ++f)
      if (flags_[f] && o.flags_[f]) return true;
    return false;
  }

  // Visit every line of cells along direction d.
  template <class Fn>
  void for_each_line(int d, Fn&& fn) const {
    std::array<std::size_t, 3> n{npieces(0), npieces(1), npieces(2)};
    int o1 = (d + 1) % 3, o2 = (d + 2) % 3;
    std::array<std::size_t, 3> idx{};
    std::vector<std::size_t> line(n[d]);
    for (idx[o1] = 0; idx[o1] < n[o1]; ++idx[o1])
      for (idx[o2] = 0; idx[o2] < n[o2]; ++idx[o2]) {
        for (idx[d] = 0; idx[d] < n[d]; ++idx[d]) line[idx[d]] = flat(idx);
        fn(line);
      }
  }

 private:
  unsigned dims_;
  bool circle_;
  std::array<std::vector<Rational>, 3> breaks_;
  std::vector<char> flags_;
};

inline void require_flow_space(const Region& r) {
  if (r.space() != Space::Bulk && r.space() != Space::Boundary) throw std::invalid_argument("region must live on the bulk or its boundary");
}

// Causal future and past along the flow: tau intervals extended to +inf or -inf.
inline std::pair<Region, Region> j_sets(const Region& r) {
  require_flow_space(r);
  Region up(r.space(), r.circle()), down(r.space(), r.circle());
  for (auto b : r.boxes()) {
    Box u = b, d = b;
    u[TAU].hi.reset();
    u[TAU].hi_closed = false;
    d[TAU].lo.reset();
    d[TAU].lo_closed = false;
    up.add(u);
    down.add(d);
  }
  return {up, down};
}

// Every tau-section is a single interval.
inline bool is_convex(const Region& r) {
  require_flow_space(r);
  CellSet c = CellSet::of(r);
  bool ok = true;
  c.for_each_line(TAU, [&](const std::vector<std::size_t>& line) {
    int state = 0;  // 0 before, 1 inside, 2 after
    for (std::size_t f : line) {
      bool cov = c.covered(f);
      if (state == 0 && cov) state = 1;
      else if (state == 1 && !cov) state = 2;
      else if (state == 2 && cov) ok = false;
    }
  });
  return ok;
}

inline Region project(const Region& r) {
  require_flow_space(r);
  Region out(base_space_of(r.space()), r.circle());
  for (auto b : r.boxes()) {
    b[TAU] = Interval::all();
    out.add(b);
  }
  return out;
}

inline Region preimage(const Region& base) {
  Space s = base.space() == Space::Base ? Space::Bulk : base.space() == Space::BoundaryCircle ? Space::Boundary : throw std::invalid_argument("not a base region");
  Region out(s, base.circle());
  for (auto b : base.boxes()) {
    b[TAU] = Interval::all();
    out.add(b);
  }
  return out;
}

inline bool region_subset(const Region& a, const Region& b) {
  if (a.space() != b.space()) throw std::invalid_argument("regions on different spaces");
  auto br = CellSet::merge(CellSet::breakpoints(a), CellSet::breakpoints(b));
  return CellSet::of(a, br).subset_of(CellSet::of(b, br));
}

inline bool region_equal(const Region& a, const Region& b) { return region_subset(a, b) && region_subset(b, a); }

inline bool regions_intersect(const Region& a, const Region& b) {
  if (a.space() != b.space()) throw std::invalid_argument("regions on different spaces");
  auto br = CellSet::merge(CellSet::breakpoints(a), CellSet::breakpoints(b));
  return CellSet::of(a, br).intersects(CellSet::of(b, br));
}

// The orbit of one region misses the other, i.e. their base projections are disjoint.
inline bool is_disjoint(const Region& a, const Region& b) { return !regions_intersect(project(a), project(b)); }

// Inclusion U in U' whose base projections agree.
inline bool is_cauchy(const Region& u, const Region& uprime) {
  if (!region_subset(u, uprime)) throw std::invalid_argument("region is not contained in the target region");
  return region_equal(project(u), project(uprime));
}

// Union of open boxes of the nonzero cells of a form.
template <class V>
Region support_region(const Form<V>& f) {
  Region out(f.space(), f.circle());
  for (const auto& [m, c] : f.components())
    for (const auto& cell : c.support_cells()) {
      Box b;
      for (int d = 0; d < 3; ++d) b[d] = Interval{cell.lo[d], cell.hi[d], false, false};
      out.add(b);
    }
  return out;
}

// Closed bounding box of the support, as a one-box region.
template <class V>
Region support_hull(const Form<V>& f) {
  Region out(f.space(), f.circle());
  SupportBox sb = f.support();
  if (sb.empty) return out;
  Box b;
  for (int d = 0; d < 3; ++d) b[d] = Interval{sb.lo[d], sb.hi[d], true, true};
  if (f.circle() && (f.dims() & bit(Y))) b[Y] = Interval{sb.lo[Y], sb.hi[Y], true, true};
  out.add(b);
  return out;
}

class SupportViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Extension by zero from V into V'; the form itself is unchanged.
template <class V>
Form<V> ext(const Form<V>& f, const Region& from, const Region& into) {
  if (!region_subset(support_region(f), from)) throw SupportViolation("support violation");
  if (!region_subset(from, into)) throw SupportViolation("support violation: source region not contained in target");
  return f;
}

}  // namespace chiral
