#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>
#include <numbers>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "poly1d.hpp"
#include "scalar.hpp"

namespace chiral {

// Monomial key: exponents of the three chart coordinates plus a trigonometric
// index for the circle coordinate (0 -> 1, 2k-1 -> cos 2 pi k x, 2k -> sin 2 pi k x).
using MonoKey = std::uint32_t;

inline MonoKey make_key(int e0, int e1, int e2, int trig) {
  if (e0 > 255 || e1 > 255 || e2 > 255 || trig > 255) throw std::overflow_error("monomial degree overflow");
  return static_cast<MonoKey>(e0) | (static_cast<MonoKey>(e1) << 8) | (static_cast<MonoKey>(e2) << 16) |
         (static_cast<MonoKey>(trig) << 24);
}
inline int key_exp(MonoKey k, int d) { return static_cast<int>((k >> (8 * d)) & 0xffu); }
inline int key_trig(MonoKey k) { return static_cast<int>(k >> 24); }
inline MonoKey key_with_exp(MonoKey k, int d, int e) {
  MonoKey mask = ~(0xffu << (8 * d));
  if (e > 255) throw std::overflow_error("monomial degree overflow");
  return (k & mask) | (static_cast<MonoKey>(e) << (8 * d));
}
inline MonoKey key_with_trig(MonoKey k, int t) { return (k & 0x00ffffffu) | (static_cast<MonoKey>(t) << 24); }

inline int trig_mode(int t) { return (t + 1) / 2; }
inline bool trig_is_sin(int t) { return t > 0 && t % 2 == 0; }
inline int trig_cos(int k) { return k == 0 ? 0 : 2 * k - 1; }
inline int trig_sin(int k) { return 2 * k; }

// Sparse multivariate polynomial with one optional trigonometric factor.
template <class V>
using MPoly = std::vector<std::pair<MonoKey, V>>;

namespace mpoly {

template <class V>
void normalize(MPoly<V>& p) {
  std::sort(p.begin(), p.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  MPoly<V> out;
  out.reserve(p.size());
  for (auto& term : p) {
    if (!out.empty() && out.back().first == term.first)
      out.back().second += term.second;
    else
      out.push_back(std::move(term));
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const auto& t) { return is_zero(t.second); }), out.end());
  p = std::move(out);
}

template <class V>
MPoly<V> add(const MPoly<V>& a, const MPoly<V>& b, bool subtract = false) {
  MPoly<V> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, subtract ? V(-b[j].second) : b[j].second);
      ++j;
    } else {
      V v = subtract ? V(a[i].second - b[j].second) : V(a[i].second + b[j].second);
      if (!is_zero(v)) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

template <class V>
MPoly<V> scale(const MPoly<V>& a, const V& s) {
  if (is_zero(s)) return {};
  MPoly<V> out;
  out.reserve(a.size());
  for (const auto& [k, v] : a) {
    V w = v * s;
    if (!is_zero(w)) out.emplace_back(k, std::move(w));
  }
  return out;
}

// Product of trigonometric basis functions as a combination of basis functions.
inline void trig_product(int t1, int t2, std::vector<std::pair<int, Rational>>& out) {
  out.clear();
  if (t1 == 0) {
    out.emplace_back(t2, 1);
    return;
  }
  if (t2 == 0) {
    out.emplace_back(t1, 1);
    return;
  }
  int a = trig_mode(t1), b = trig_mode(t2);
  bool sa = trig_is_sin(t1), sb = trig_is_sin(t2);
  Rational h(1, 2);
  auto cos_of = [&](int m, Rational c) { out.emplace_back(trig_cos(std::abs(m)), c); };
  auto sin_of = [&](int m, Rational c) {
    if (m == 0) return;
    if (m < 0) c = -c;
    out.emplace_back(trig_sin(std::abs(m)), c);
  };
  if (!sa && !sb) {
    cos_of(a - b, h);
    cos_of(a + b, h);
  } else if (sa && sb) {
    cos_of(a - b, h);
    cos_of(a + b, -h);
  } else if (sa && !sb) {
    sin_of(a + b, h);
    sin_of(a - b, h);
  } else {
    sin_of(a + b, h);
    sin_of(b - a, h);
  }
}

template <class V>
MPoly<V> mul(const MPoly<V>& a, const MPoly<V>& b) {
  if (a.empty() || b.empty()) return {};
  MPoly<V> out;
  out.reserve(a.size() * b.size());
  std::vector<std::pair<int, Rational>> tp;
  for (const auto& [ka, va] : a)
    for (const auto& [kb, vb] : b) {
      int e0 = key_exp(ka, 0) + key_exp(kb, 0);
      int e1 = key_exp(ka, 1) + key_exp(kb, 1);
      int e2 = key_exp(ka, 2) + key_exp(kb, 2);
      int ta = key_trig(ka), tb = key_trig(kb);
      V prod = va * vb;
      if (ta == 0 && tb == 0) {
        out.emplace_back(make_key(e0, e1, e2, 0), std::move(prod));
        continue;
      }
      trig_product(ta, tb, tp);
      for (const auto& [t, c] : tp) out.emplace_back(make_key(e0, e1, e2, t), prod * from_rational<V>(c));
    }
  normalize(out);
  return out;
}

template <class V>
MPoly<V> derivative(const MPoly<V>& a, int d, bool circle) {
  MPoly<V> out;
  for (const auto& [k, v] : a) {
    int e = key_exp(k, d);
    if (e > 0) out.emplace_back(key_with_exp(k, d, e - 1), v * from_rational<V>(Rational(e)));
    if (circle) {
      int t = key_trig(k);
      if (t != 0) {
        int m = trig_mode(t);
        V w = scalar_traits<V>::two_pi() * from_rational<V>(Rational(m)) * v;
        if (trig_is_sin(t))
          out.emplace_back(key_with_trig(k, trig_cos(m)), w);
        else
          out.emplace_back(key_with_trig(k, trig_sin(m)), -w);
      }
    }
  }
  normalize(out);
  return out;
}

// Antiderivative in a line coordinate, vanishing at 0.
template <class V>
MPoly<V> antiderivative(const MPoly<V>& a, int d) {
  MPoly<V> out;
  out.reserve(a.size());
  for (const auto& [k, v] : a) {
    int e = key_exp(k, d);
    out.emplace_back(key_with_exp(k, d, e + 1), v * from_rational<V>(Rational(1, e + 1)));
  }
  normalize(out);
  return out;
}

inline Rational rpow(const Rational& x, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

template <class V>
V trig_value(int t, const Rational& x) {
  if (t == 0) return from_rational<V>(1);
  int m = trig_mode(t);
  return trig_is_sin(t) ? scalar_traits<V>::sin2pi(m, x) : scalar_traits<V>::cos2pi(m, x);
}

// Substitute x_d = c; the result has exponent 0 in d and no trig factor if d is the circle.
template <class V>
MPoly<V> substitute(const MPoly<V>& a, int d, const Rational& c, bool circle) {
  MPoly<V> out;
  out.reserve(a.size());
  for (const auto& [k, v] : a) {
    int e = key_exp(k, d);
    V w = v * from_rational<V>(rpow(c, e));
    MonoKey nk = key_with_exp(k, d, 0);
    if (circle) {
      w = w * trig_value<V>(key_trig(k), c);
      nk = key_with_trig(nk, 0);
    }
    out.emplace_back(nk, std::move(w));
  }
  normalize(out);
  return out;
}

// Integral of x^c * trig_t(x) over [lo, hi].
template <class V>
V trig_moment(int c, int t, const Rational& lo, const Rational& hi) {
  if (t == 0) return from_rational<V>((rpow(hi, c + 1) - rpow(lo, c + 1)) / (c + 1));
  int m = trig_mode(t);
  V inv_w = scalar_traits<V>::inverse(scalar_traits<V>::two_pi() * from_rational<V>(Rational(m)));
  auto bracket = [&](int p, bool sin_fn) {
    V vh = sin_fn ? scalar_traits<V>::sin2pi(m, hi) : scalar_traits<V>::cos2pi(m, hi);
    V vl = sin_fn ? scalar_traits<V>::sin2pi(m, lo) : scalar_traits<V>::cos2pi(m, lo);
    return from_rational<V>(rpow(hi, p)) * vh - from_rational<V>(rpow(lo, p)) * vl;
  };
  // C_p = [x^p sin]/w - (p/w) S_{p-1};  S_p = -[x^p cos]/w + (p/w) C_{p-1}
  V C = bracket(0, true) * inv_w;
  V S = -(bracket(0, false) * inv_w);
  for (int p = 1; p <= c; ++p) {
    V nc = bracket(p, true) * inv_w - from_rational<V>(Rational(p)) * inv_w * S;
    V ns = -(bracket(p, false) * inv_w) + from_rational<V>(Rational(p)) * inv_w * C;
    C = nc;
    S = ns;
  }
  return trig_is_sin(t) ? S : C;
}

// Definite integral over [lo, hi] in direction d; removes d.
template <class V>
MPoly<V> integrate(const MPoly<V>& a, int d, const Rational& lo, const Rational& hi, bool circle) {
  MPoly<V> out;
  out.reserve(a.size());
  for (const auto& [k, v] : a) {
    int e = key_exp(k, d);
    MonoKey nk = key_with_exp(k, d, 0);
    if (circle) {
      out.emplace_back(key_with_trig(nk, 0), v * trig_moment<V>(e, key_trig(k), lo, hi));
    } else {
      out.emplace_back(nk, v * from_rational<V>((rpow(hi, e + 1) - rpow(lo, e + 1)) / (e + 1)));
    }
  }
  normalize(out);
  return out;
}

template <class V>
double eval_double(const MPoly<V>& a, const std::array<double, 3>& x) {
  double s = 0;
  for (const auto& [k, v] : a) {
    double term = scalar_traits<V>::to_double(v);
    for (int d = 0; d < 3; ++d) term *= std::pow(x[d], key_exp(k, d));
    int t = key_trig(k);
    if (t != 0) {
      double ang = 2.0 * std::numbers::pi * trig_mode(t) * x[1];
      term *= trig_is_sin(t) ? std::sin(ang) : std::cos(ang);
    }
    s += term;
  }
  return s;
}

}  // namespace mpoly

// Interval end used by support and cell queries; nullopt stands for an infinite end.
using End = std::optional<Rational>;
struct CellBox {
  std::array<End, 3> lo;
  std::array<End, 3> hi;
};

// Coefficient function on a product chart with up to three coordinates.
// Coordinate 1 may be a unit-circumference circle. The field is a tensor-product
// piecewise polynomial: per-coordinate knot grids, one polynomial per cell.
template <class V>
class CoeffField {
 public:
  CoeffField() : cells_(1) {}
  explicit CoeffField(bool circle_y) : circle_y_(circle_y), cells_(1) {}

  static CoeffField constant(const V& v, bool circle_y = false) {
    CoeffField f(circle_y);
    if (!chiral::is_zero(v)) f.cells_[0].emplace_back(make_key(0, 0, 0, 0), v);
    return f;
  }

  // Polynomial in coordinate d, valid everywhere.
  static CoeffField from_poly(int d, const Poly1<V>& p, bool circle_y = false) {
    CoeffField f(circle_y);
    for (int e = 0; e <= p.degree(); ++e)
      if (!chiral::is_zero(p.coeffs()[e])) f.cells_[0].emplace_back(make_key(d == 0 ? e : 0, d == 1 ? e : 0, d == 2 ? e : 0, 0), p.coeffs()[e]);
    return f;
  }

  // Piecewise polynomial in coordinate d. On the circle, only the part on [0,1] is kept.
  static CoeffField from_spline(int d, const PiecewisePoly<V>& s, bool circle_y = false) {
    CoeffField f(circle_y);
    bool circ = circle_y && d == 1;
    std::vector<Rational> knots;
    for (const auto& k : s.knots())
      if (!circ || (k > 0 && k < 1)) knots.push_back(k);
    f.knots_[d] = knots;
    f.cells_.assign(knots.size() + 1, {});
    for (std::size_t i = 0; i <= knots.size(); ++i) {
      Rational rep = f.representative(d, i);
      const auto& p = s.cells()[s.cell_index(rep)];
      for (int e = 0; e <= p.degree(); ++e)
        if (!chiral::is_zero(p.coeffs()[e]))
          f.cells_[i].emplace_back(make_key(d == 0 ? e : 0, d == 1 ? e : 0, d == 2 ? e : 0, 0), p.coeffs()[e]);
    }
    f.canonicalize();
    return f;
  }

  // Real Fourier sum in the circle coordinate.
  static CoeffField from_fourier(const FourierPoly<V>& fp) {
    CoeffField f(true);
    for (const auto& [k, ab] : fp.real_coefficients()) {
      if (!chiral::is_zero(ab.first)) f.cells_[0].emplace_back(make_key(0, 0, 0, trig_cos(static_cast<int>(k))), ab.first);
      if (k > 0 && !chiral::is_zero(ab.second)) f.cells_[0].emplace_back(make_key(0, 0, 0, trig_sin(static_cast<int>(k))), ab.second);
    }
    mpoly::normalize(f.cells_[0]);
    return f;
  }

  static CoeffField trig(int t, const V& v) {
    CoeffField f(true);
    if (!chiral::is_zero(v)) f.cells_[0].emplace_back(make_key(0, 0, 0, t), v);
    return f;
  }

  bool circle_y() const { return circle_y_; }
  const std::array<std::vector<Rational>, 3>& knots() const { return knots_; }
  std::size_t ncell(int d) const { return knots_[d].size() + 1; }
  std::size_t cell_count() const { return cells_.size(); }
  const MPoly<V>& cell(std::size_t flat) const { return cells_[flat]; }
  std::size_t flat(std::size_t i0, std::size_t i1, std::size_t i2) const { return (i0 * ncell(1) + i1) * ncell(2) + i2; }
  std::array<std::size_t, 3> unflat(std::size_t f) const {
    std::size_t i2 = f % ncell(2);
    f /= ncell(2);
    std::size_t i1 = f % ncell(1);
    return {f / ncell(1), i1, i2};
  }

  bool is_circle(int d) const { return circle_y_ && d == 1; }

  End cell_lo(int d, std::size_t i) const {
    if (i == 0) return is_circle(d) ? End(Rational(0)) : End();
    return knots_[d][i - 1];
  }
  End cell_hi(int d, std::size_t i) const {
    if (i == knots_[d].size()) return is_circle(d) ? End(Rational(1)) : End();
    return knots_[d][i];
  }
  Rational representative(int d, std::size_t i) const {
    End lo = cell_lo(d, i), hi = cell_hi(d, i);
    if (lo && hi) return (*lo + *hi) / 2;
    if (lo) return *lo + 1;
    if (hi) return *hi - 1;
    return Rational(0);
  }
  CellBox cell_box(std::size_t f) const {
    auto idx = unflat(f);
    CellBox b;
    for (int d = 0; d < 3; ++d) {
      b.lo[d] = cell_lo(d, idx[d]);
      b.hi[d] = cell_hi(d, idx[d]);
    }
    return b;
  }

  bool is_zero() const {
    return std::all_of(cells_.begin(), cells_.end(), [](const MPoly<V>& p) { return p.empty(); });
  }

  // Drops coefficients of magnitude at most thr; exact fields are returned unchanged.
  CoeffField chopped(double thr) const {
    CoeffField out = *this;
    if constexpr (!scalar_traits<V>::exact)
      for (auto& c : out.cells_) c.erase(std::remove_if(c.begin(), c.end(), [thr](const auto& t) { return magnitude(t.second) <= thr; }), c.end());
    return out;
  }

  double max_abs_coefficient() const {
    double m = 0;
    for (const auto& c : cells_)
      for (const auto& [k, v] : c) m = std::max(m, magnitude(v));
    return m;
  }

  // Refine to a superset grid.
  CoeffField refined(const std::array<std::vector<Rational>, 3>& grid) const {
    CoeffField out(circle_y_);
    out.knots_ = grid;
    out.cells_.assign(out.ncell(0) * out.ncell(1) * out.ncell(2), {});
    std::array<std::vector<std::size_t>, 3> map;
    for (int d = 0; d < 3; ++d) {
      for (std::size_t i = 0; i < out.ncell(d); ++i) {
        if (i == 0) {
          map[d].push_back(0);
        } else {
          const auto& k = knots_[d];
          map[d].push_back(static_cast<std::size_t>(std::upper_bound(k.begin(), k.end(), grid[d][i - 1]) - k.begin()));
        }
      }
    }
    for (std::size_t a = 0; a < out.ncell(0); ++a)
      for (std::size_t b = 0; b < out.ncell(1); ++b)
        for (std::size_t c = 0; c < out.ncell(2); ++c) out.cells_[out.flat(a, b, c)] = cells_[flat(map[0][a], map[1][b], map[2][c])];
    return out;
  }

  static std::array<std::vector<Rational>, 3> grid_union(const CoeffField& a, const CoeffField& b) {
    std::array<std::vector<Rational>, 3> g;
    for (int d = 0; d < 3; ++d)
      std::set_union(a.knots_[d].begin(), a.knots_[d].end(), b.knots_[d].begin(), b.knots_[d].end(), std::back_inserter(g[d]));
    return g;
  }

  CoeffField with_knots(int d, const std::vector<Rational>& extra) const {
    auto g = knots_;
    std::vector<Rational> merged;
    std::vector<Rational> e = extra;
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    std::set_union(g[d].begin(), g[d].end(), e.begin(), e.end(), std::back_inserter(merged));
    g[d] = merged;
    return refined(g);
  }

  friend CoeffField operator+(const CoeffField& a, const CoeffField& b) { return binary(a, b, 0); }
  friend CoeffField operator-(const CoeffField& a, const CoeffField& b) { return binary(a, b, 1); }
  friend CoeffField operator*(const CoeffField& a, const CoeffField& b) { return binary(a, b, 2); }
  friend CoeffField operator*(const CoeffField& a, const V& s) {
    CoeffField out = a;
    for (auto& c : out.cells_) c = mpoly::scale(c, s);
    out.canonicalize();
    return out;
  }
  CoeffField operator-() const { return *this * from_rational<V>(-1); }
  friend bool operator==(const CoeffField& a, const CoeffField& b) { return (a - b).is_zero(); }

  CoeffField derivative(int d) const {
    CoeffField out = *this;
    for (auto& c : out.cells_) c = mpoly::derivative(c, d, is_circle(d));
    out.canonicalize();
    return out;
  }

  // Zero every cell outside [lo, hi] in direction d.
  CoeffField clipped(int d, End lo, End hi) const {
    std::vector<Rational> extra;
    if (lo) extra.push_back(*lo);
    if (hi) extra.push_back(*hi);
    CoeffField out = with_knots(d, extra);
    for (std::size_t f = 0; f < out.cells_.size(); ++f) {
      auto idx = out.unflat(f);
      End clo = out.cell_lo(d, idx[d]), chi = out.cell_hi(d, idx[d]);
      bool outside = (lo && (!chi || *chi <= *lo)) || (hi && (!clo || *clo >= *hi));
      if (outside) out.cells_[f].clear();
    }
    out.canonicalize();
    return out;
  }

  enum class Anchor { MinusInfinity, PlusInfinity, Point };

  // x_d -> integral from the anchor to x_d (for PlusInfinity: minus the integral from x_d to +inf).
  CoeffField antiderivative(int d, Anchor anchor, const Rational& point = Rational(0)) const {
    if (is_circle(d)) throw std::domain_error("antiderivative along the circle is not supported");
    CoeffField src = anchor == Anchor::Point ? with_knots(d, {point}) : *this;
    CoeffField out = src;
    std::size_t n = src.ncell(d);
    std::size_t start = 0;
    if (anchor == Anchor::Point)
      start = static_cast<std::size_t>(std::lower_bound(src.knots_[d].begin(), src.knots_[d].end(), point) - src.knots_[d].begin()) + 1;
    src.for_each_line(d, [&](const std::vector<std::size_t>& line) {
      if (anchor == Anchor::MinusInfinity) {
        if (!src.cells_[line[0]].empty()) throw std::domain_error("cumulative integral needs compact support toward -inf");
        out.cells_[line[0]].clear();
        MPoly<V> acc;
        for (std::size_t i = 1; i < n; ++i) {
          auto A = mpoly::antiderivative(src.cells_[line[i]], d);
          auto F = mpoly::add(mpoly::add(A, mpoly::substitute(A, d, src.knots_[d][i - 1], false), true), acc);
          if (i + 1 < n) acc = mpoly::substitute(F, d, src.knots_[d][i], false);
          out.cells_[line[i]] = std::move(F);
        }
      } else if (anchor == Anchor::PlusInfinity) {
        if (!src.cells_[line[n - 1]].empty()) throw std::domain_error("cumulative integral needs compact support toward +inf");
        out.cells_[line[n - 1]].clear();
        MPoly<V> acc;
        for (std::size_t i = n - 1; i-- > 0;) {
          auto A = mpoly::antiderivative(src.cells_[line[i]], d);
          // F(x) = -(integral from x to hi) + acc = A(x) - A(hi) + acc
          auto F = mpoly::add(mpoly::add(A, mpoly::substitute(A, d, src.knots_[d][i], false), true), acc);
          if (i > 0) acc = mpoly::substitute(F, d, src.knots_[d][i - 1], false);
          out.cells_[line[i]] = std::move(F);
        }
      } else {
        MPoly<V> acc;
        for (std::size_t i = start; i < n; ++i) {
          auto A = mpoly::antiderivative(src.cells_[line[i]], d);
          auto F = mpoly::add(mpoly::add(A, mpoly::substitute(A, d, src.knots_[d][i - 1], false), true), acc);
          if (i + 1 < n) acc = mpoly::substitute(F, d, src.knots_[d][i], false);
          out.cells_[line[i]] = std::move(F);
        }
        acc.clear();
        for (std::size_t i = start; i-- > 0;) {
          auto A = mpoly::antiderivative(src.cells_[line[i]], d);
          auto F = mpoly::add(mpoly::add(A, mpoly::substitute(A, d, src.knots_[d][i], false), true), acc);
          if (i > 0) acc = mpoly::substitute(F, d, src.knots_[d][i - 1], false);
          out.cells_[line[i]] = std::move(F);
        }
      }
    });
    out.canonicalize();
    return out;
  }

  // Definite integral over [lo, hi] in d (circle: over [0,1] when both ends are absent).
  // The result no longer depends on x_d.
  CoeffField integrate(int d, End lo = End(), End hi = End()) const {
    bool circ = is_circle(d);
    if (circ && !lo && !hi) {
      lo = Rational(0);
      hi = Rational(1);
    }
    std::vector<Rational> extra;
    if (lo) extra.push_back(*lo);
    if (hi) extra.push_back(*hi);
    CoeffField src = with_knots(d, extra);
    CoeffField out(circle_y_);
    out.knots_ = src.knots_;
    out.knots_[d].clear();
    out.cells_.assign(out.ncell(0) * out.ncell(1) * out.ncell(2), {});
    src.for_each_line(d, [&](const std::vector<std::size_t>& line) {
      auto idx = src.unflat(line[0]);
      idx[d] = 0;
      MPoly<V> acc;
      for (std::size_t i = 0; i < line.size(); ++i) {
        const auto& p = src.cells_[line[i]];
        if (p.empty()) continue;
        End clo = src.cell_lo(d, i), chi = src.cell_hi(d, i);
        if (lo && chi && *chi <= *lo) continue;
        if (hi && clo && *clo >= *hi) continue;
        if (!clo || !chi) throw std::domain_error("integral of a field without compact support");
        acc = mpoly::add(acc, mpoly::integrate(p, d, *clo, *chi, circ));
      }
      out.cells_[out.flat(idx[0], idx[1], idx[2])] = std::move(acc);
    });
    out.canonicalize();
    return out;
  }

  // Restrict x_d = c; at a knot the limit is taken from the requested side.
  CoeffField restrict(int d, const Rational& c, bool from_right = true) const {
    CoeffField out(circle_y_);
    out.knots_ = knots_;
    out.knots_[d].clear();
    out.cells_.assign(out.ncell(0) * out.ncell(1) * out.ncell(2), {});
    const auto& k = knots_[d];
    std::size_t ci = static_cast<std::size_t>(
        (from_right ? std::upper_bound(k.begin(), k.end(), c) : std::lower_bound(k.begin(), k.end(), c)) - k.begin());
    for_each_line(d, [&](const std::vector<std::size_t>& line) {
      auto idx = unflat(line[0]);
      idx[d] = 0;
      out.cells_[out.flat(idx[0], idx[1], idx[2])] = mpoly::substitute(cells_[line[ci]], d, c, is_circle(d));
    });
    out.canonicalize();
    return out;
  }

  // g(x) = f(x + s e_d) along a line direction.
  CoeffField translated(int d, const Rational& s) const {
    if (is_circle(d)) throw std::domain_error("translation along the circle is not supported");
    CoeffField out = *this;
    for (auto& k : out.knots_[d]) k -= s;
    for (auto& c : out.cells_) {
      MPoly<V> nc;
      for (const auto& [key, v] : c) {
        int e = key_exp(key, d);
        Rational binom = 1;
        for (int i = 0; i <= e; ++i) {
          // binom(e, i) s^(e-i) x^i
          nc.emplace_back(key_with_exp(key, d, i), v * from_rational<V>(binom * mpoly::rpow(s, e - i)));
          binom = binom * (e - i) / (i + 1);
        }
      }
      mpoly::normalize(nc);
      c = std::move(nc);
    }
    out.canonicalize();
    return out;
  }

  double sample(std::array<double, 3> x) const {
    if (circle_y_) x[1] -= std::floor(x[1]);
    std::array<std::size_t, 3> idx{};
    for (int d = 0; d < 3; ++d) {
      std::size_t i = 0;
      while (i < knots_[d].size() && knots_[d][i].get_d() <= x[d]) ++i;
      idx[d] = i;
    }
    return mpoly::eval_double(cells_[flat(idx[0], idx[1], idx[2])], x);
  }

  // Closed boxes of the nonzero cells.
  std::vector<CellBox> support_cells() const {
    std::vector<CellBox> out;
    for (std::size_t f = 0; f < cells_.size(); ++f)
      if (!cells_[f].empty()) out.push_back(cell_box(f));
    return out;
  }

  // Does the field vanish on the cells touching the given end of direction d?
  bool vanishes_beyond(int d, End bound, bool upper) const {
    for (std::size_t f = 0; f < cells_.size(); ++f) {
      if (cells_[f].empty()) continue;
      auto idx = unflat(f);
      End lo = cell_lo(d, idx[d]), hi = cell_hi(d, idx[d]);
      if (upper) {
        if (!bound ? !hi : (!hi || *hi > *bound)) return false;
      } else {
        if (!bound ? !lo : (!lo || *lo < *bound)) return false;
      }
    }
    return true;
  }

  int max_trig_mode() const {
    int m = 0;
    for (const auto& c : cells_)
      for (const auto& [k, v] : c) m = std::max(m, trig_mode(key_trig(k)));
    return m;
  }

  // Direct construction for deserialization.
  static CoeffField from_parts(bool circle_y, std::array<std::vector<Rational>, 3> knots, std::vector<MPoly<V>> cells) {
    CoeffField f(circle_y);
    f.knots_ = std::move(knots);
    for (int d = 0; d < 3; ++d)
      for (std::size_t i = 1; i < f.knots_[d].size(); ++i)
        if (!(f.knots_[d][i - 1] < f.knots_[d][i])) throw std::invalid_argument("CoeffField: knots must increase");
    if (cells.size() != f.ncell(0) * f.ncell(1) * f.ncell(2)) throw std::invalid_argument("CoeffField: cell count mismatch");
    for (auto& c : cells) mpoly::normalize(c);
    f.cells_ = std::move(cells);
    f.canonicalize();
    return f;
  }

  CoeffField with_circle(bool circle_y) const {
    CoeffField out = *this;
    out.circle_y_ = circle_y;
    return out;
  }

 private:
  template <class F>
  void for_each_line(int d, F&& fn) const {
    std::array<std::size_t, 3> n{ncell(0), ncell(1), ncell(2)};
    std::vector<std::size_t> line(n[d]);
    std::array<std::size_t, 3> idx{};
    int o1 = (d + 1) % 3, o2 = (d + 2) % 3;
    for (idx[o1] = 0; idx[o1] < n[o1]; ++idx[o1])
      for (idx[o2] = 0; idx[o2] < n[o2]; ++idx[o2]) {
        for (idx[d] = 0; idx[d] < n[d]; ++idx[d]) line[idx[d]] = flat(idx[0], idx[1], idx[2]);
        fn(line);
      }
  }

  static CoeffField binary(const CoeffField& a, const CoeffField& b, int op) {
    if (a.circle_y_ != b.circle_y_) throw std::invalid_argument("CoeffField: chart mismatch");
    auto g = grid_union(a, b);
    CoeffField ra = a.knots_ == g ? a : a.refined(g);
    CoeffField rb = b.knots_ == g ? b : b.refined(g);
    for (std::size_t f = 0; f < ra.cells_.size(); ++f) {
      if (op == 0)
        ra.cells_[f] = mpoly::add(ra.cells_[f], rb.cells_[f]);
      else if (op == 1)
        ra.cells_[f] = mpoly::add(ra.cells_[f], rb.cells_[f], true);
      else
        ra.cells_[f] = mpoly::mul(ra.cells_[f], rb.cells_[f]);
    }
    ra.canonicalize();
    return ra;
  }

  void canonicalize() {
    for (int d = 0; d < 3; ++d) {
      std::size_t n = ncell(d);
      if (n == 1) continue;
      std::vector<std::size_t> keep{0};
      for (std::size_t s = 1; s < n; ++s)
        if (!slices_equal(d, s, keep.back())) keep.push_back(s);
      if (keep.size() == n) continue;
      std::vector<Rational> nk;
      for (std::size_t j = 1; j < keep.size(); ++j) nk.push_back(knots_[d][keep[j] - 1]);
      CoeffField out(circle_y_);
      out.knots_ = knots_;
      out.knots_[d] = nk;
      out.cells_.assign(out.ncell(0) * out.ncell(1) * out.ncell(2), {});
      for (std::size_t f = 0; f < out.cells_.size(); ++f) {
        auto idx = out.unflat(f);
        idx[d] = keep[idx[d]];
        out.cells_[f] = std::move(cells_[flat(idx[0], idx[1], idx[2])]);
      }
      *this = std::move(out);
    }
  }

  bool slices_equal(int d, std::size_t s, std::size_t t) const {
    std::array<std::size_t, 3> n{ncell(0), ncell(1), ncell(2)};
    std::array<std::size_t, 3> a{}, b{};
    int o1 = (d + 1) % 3, o2 = (d + 2) % 3;
    for (std::size_t i = 0; i < n[o1]; ++i)
      for (std::size_t j = 0; j < n[o2]; ++j) {
        a[d] = s;
        b[d] = t;
        a[o1] = b[o1] = i;
        a[o2] = b[o2] = j;
        if (cells_[flat(a[0], a[1], a[2])] != cells_[flat(b[0], b[1], b[2])]) return false;
      }
    return true;
  }

  bool circle_y_ = false;
  std::array<std::vector<Rational>, 3> knots_;
  std::vector<MPoly<V>> cells_;
};

}  // namespace chiral
