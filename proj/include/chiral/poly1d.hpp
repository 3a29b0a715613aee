#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "scalar.hpp"

namespace chiral {

// Dense univariate polynomial in a global coordinate, lowest power first.
template <class V>
class Poly1 {
 public:
  Poly1() = default;
  explicit Poly1(std::vector<V> c) : c_(std::move(c)) { trim(); }

  static Poly1 constant(const V& v) { return Poly1(std::vector<V>{v}); }
  static Poly1 monomial(int deg, const V& v) {
    std::vector<V> c(deg + 1, from_rational<V>(0));
    c[deg] = v;
    return Poly1(std::move(c));
  }
  // (x - a)
  static Poly1 linear_root(const Rational& a) {
    return Poly1(std::vector<V>{from_rational<V>(-a), from_rational<V>(1)});
  }

  const std::vector<V>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  V operator()(const Rational& x) const {
    V r = from_rational<V>(0);
    V xv = from_rational<V>(x);
    for (std::size_t i = c_.size(); i-- > 0;) r = r * xv + c_[i];
    return r;
  }
  double eval_double(double x) const {
    double r = 0;
    for (std::size_t i = c_.size(); i-- > 0;) r = r * x + scalar_traits<V>::to_double(c_[i]);
    return r;
  }

  Poly1 derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<V> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * from_rational<V>(Rational(static_cast<long>(i)));
    return Poly1(std::move(d));
  }
  // Antiderivative vanishing at x = 0.
  Poly1 antiderivative() const {
    if (c_.empty()) return {};
    std::vector<V> a(c_.size() + 1, from_rational<V>(0));
    for (std::size_t i = 0; i < c_.size(); ++i) a[i + 1] = c_[i] * from_rational<V>(Rational(1, static_cast<long>(i + 1)));
    return Poly1(std::move(a));
  }

  friend Poly1 operator+(const Poly1& a, const Poly1& b) {
    std::vector<V> r(std::max(a.c_.size(), b.c_.size()), from_rational<V>(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
    return Poly1(std::move(r));
  }
  friend Poly1 operator-(const Poly1& a, const Poly1& b) { return a + b * from_rational<V>(-1); }
  friend Poly1 operator*(const Poly1& a, const Poly1& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<V> r(a.c_.size() + b.c_.size() - 1, from_rational<V>(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Poly1(std::move(r));
  }
  friend Poly1 operator*(const Poly1& a, const V& s) {
    std::vector<V> r(a.c_);
    for (auto& c : r) c *= s;
    return Poly1(std::move(r));
  }
  friend bool operator==(const Poly1& a, const Poly1& b) { return a.c_ == b.c_; }

 private:
  void trim() {
    while (!c_.empty() && is_zero_v(c_.back())) c_.pop_back();
  }
  static bool is_zero_v(const V& v) { return chiral::is_zero(v); }
  std::vector<V> c_;
};

// Piecewise polynomial on the real line. cells_[0] is the left tail
// (-inf, k0), cells_[i] covers (k_{i-1}, k_i), cells_.back() is the right tail.
template <class V>
class PiecewisePoly {
 public:
  PiecewisePoly() : cells_(1) {}
  explicit PiecewisePoly(const Poly1<V>& global) : cells_{global} {}
  PiecewisePoly(std::vector<Rational> knots, std::vector<Poly1<V>> cells) : knots_(std::move(knots)), cells_(std::move(cells)) {
    if (cells_.size() != knots_.size() + 1) throw std::invalid_argument("PiecewisePoly: need knots+1 cells");
    for (std::size_t i = 1; i < knots_.size(); ++i)
      if (!(knots_[i - 1] < knots_[i])) throw std::invalid_argument("PiecewisePoly: knots must increase");
    canonicalize();
  }

  // Polynomial p restricted to [a, b], zero outside.
  static PiecewisePoly on_interval(const Rational& a, const Rational& b, const Poly1<V>& p) {
    if (!(a < b)) throw std::invalid_argument("PiecewisePoly: empty interval");
    return PiecewisePoly({a, b}, {Poly1<V>(), p, Poly1<V>()});
  }

  // C1 bump c (x-a)^2 (b-x)^2 supported on [a, b].
  static PiecewisePoly bump(const Rational& a, const Rational& b, const V& c) {
    auto l = Poly1<V>::linear_root(a);
    auto r = Poly1<V>::linear_root(b);
    return on_interval(a, b, l * l * r * r * c);
  }

  // Normalized C1 quadratic B-spline on [a, b] with uniform knots; unit integral.
  static PiecewisePoly unit_bspline(const Rational& a, const Rational& b) {
    if (!(a < b)) throw std::invalid_argument("unit_bspline: empty interval");
    Rational h = (b - a) / 3;
    Rational t1 = a + h, t2 = a + 2 * h;
    // Cardinal quadratic B-spline N(x) with knots a, t1, t2, b; integral is h.
    auto u = [&](const Rational& s) { return Poly1<V>(std::vector<V>{from_rational<V>(-s / h), from_rational<V>(1 / h)}); };
    auto p1 = u(a) * u(a) * from_rational<V>(Rational(1, 2));
    auto w = u(a);
    // middle piece: (-2w^2 + 6w - 3)/2
    auto p2 = (w * w * from_rational<V>(-2) + w * from_rational<V>(6) + Poly1<V>::constant(from_rational<V>(-3))) *
              from_rational<V>(Rational(1, 2));
    auto v = Poly1<V>::constant(from_rational<V>(3)) - w;
    auto p3 = v * v * from_rational<V>(Rational(1, 2));
    V scale = from_rational<V>(1 / h);
    return PiecewisePoly({a, t1, t2, b}, {Poly1<V>(), p1 * scale, p2 * scale, p3 * scale, Poly1<V>()});
  }

  const std::vector<Rational>& knots() const { return knots_; }
  const std::vector<Poly1<V>>& cells() const { return cells_; }
  const Poly1<V>& left_tail() const { return cells_.front(); }
  const Poly1<V>& right_tail() const { return cells_.back(); }
  bool is_compact() const { return left_tail().is_zero() && right_tail().is_zero(); }
  bool is_zero() const {
    return std::all_of(cells_.begin(), cells_.end(), [](const Poly1<V>& p) { return p.is_zero(); });
  }

  std::size_t cell_index(const Rational& x, bool from_right = true) const {
    auto it = from_right ? std::upper_bound(knots_.begin(), knots_.end(), x) : std::lower_bound(knots_.begin(), knots_.end(), x);
    return static_cast<std::size_t>(it - knots_.begin());
  }

  V operator()(const Rational& x) const { return cells_[cell_index(x)](x); }
  V eval_left(const Rational& x) const { return cells_[cell_index(x, false)](x); }
  double eval_double(double x) const {
    std::size_t i = 0;
    while (i < knots_.size() && knots_[i].get_d() <= x) ++i;
    return cells_[i].eval_double(x);
  }

  PiecewisePoly derivative() const {
    std::vector<Poly1<V>> d;
    for (const auto& p : cells_) d.push_back(p.derivative());
    return PiecewisePoly(knots_, d);
  }

  friend PiecewisePoly operator+(const PiecewisePoly& a, const PiecewisePoly& b) { return combine(a, b, 0); }
  friend PiecewisePoly operator-(const PiecewisePoly& a, const PiecewisePoly& b) { return combine(a, b, 1); }
  friend PiecewisePoly operator*(const PiecewisePoly& a, const PiecewisePoly& b) { return combine(a, b, 2); }
  friend PiecewisePoly operator*(const PiecewisePoly& a, const V& s) {
    std::vector<Poly1<V>> c;
    for (const auto& p : a.cells_) c.push_back(p * s);
    return PiecewisePoly(a.knots_, c);
  }
  friend bool operator==(const PiecewisePoly& a, const PiecewisePoly& b) { return (a - b).is_zero(); }

  // Definite integral over [a, b]; either end may be infinite (nullopt).
  V integrate(std::optional<Rational> a = std::nullopt, std::optional<Rational> b = std::nullopt) const {
    V total = from_rational<V>(0);
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (cells_[i].is_zero()) continue;
      std::optional<Rational> lo = i == 0 ? std::nullopt : std::optional<Rational>(knots_[i - 1]);
      std::optional<Rational> hi = i == knots_.size() ? std::nullopt : std::optional<Rational>(knots_[i]);
      if (a && (!lo || *lo < *a)) lo = a;
      if (b && (!hi || *b < *hi)) hi = b;
      if (lo && hi && !(*lo < *hi)) continue;
      if (!lo || !hi) throw std::domain_error("integral of a non-compactly supported piecewise polynomial");
      auto A = cells_[i].antiderivative();
      total += A(*hi) - A(*lo);
    }
    return total;
  }

  // x -> integral from -inf to x; requires a zero left tail.
  PiecewisePoly cumulative() const {
    if (!left_tail().is_zero()) throw std::domain_error("cumulative integral needs a zero left tail");
    std::vector<Poly1<V>> out(cells_.size());
    V acc = from_rational<V>(0);
    for (std::size_t i = 1; i < cells_.size(); ++i) {
      auto A = cells_[i].antiderivative();
      const Rational& lo = knots_[i - 1];
      out[i] = A - Poly1<V>::constant(A(lo)) + Poly1<V>::constant(acc);
      if (i < knots_.size()) acc = out[i](knots_[i]);
    }
    return PiecewisePoly(knots_, out);
  }

  // x -> integral from x to +inf; requires a zero right tail.
  PiecewisePoly cumulative_from_right() const {
    if (!right_tail().is_zero()) throw std::domain_error("cumulative integral needs a zero right tail");
    std::vector<Poly1<V>> out(cells_.size());
    V acc = from_rational<V>(0);
    for (std::size_t i = cells_.size() - 1; i-- > 0;) {
      auto A = cells_[i].antiderivative();
      const Rational& hi = knots_[i];
      out[i] = Poly1<V>::constant(A(hi) + acc) - A;
      if (i > 0) acc = out[i](knots_[i - 1]);
    }
    return PiecewisePoly(knots_, out);
  }

  // Support hull [lo, hi]; nullopt ends mean unbounded. Empty for the zero function.
  std::optional<std::pair<std::optional<Rational>, std::optional<Rational>>> support() const {
    std::size_t first = cells_.size(), last = 0;
    for (std::size_t i = 0; i < cells_.size(); ++i)
      if (!cells_[i].is_zero()) {
        first = std::min(first, i);
        last = i;
      }
    if (first == cells_.size()) return std::nullopt;
    std::optional<Rational> lo = first == 0 ? std::nullopt : std::optional<Rational>(knots_[first - 1]);
    std::optional<Rational> hi = last == knots_.size() ? std::nullopt : std::optional<Rational>(knots_[last]);
    return std::make_pair(lo, hi);
  }

  // Largest k such that derivatives of order < k are continuous at every knot (capped).
  int continuity_order(int cap = 4) const {
    int order = cap;
    for (std::size_t j = 0; j < knots_.size(); ++j) {
      auto l = cells_[j], r = cells_[j + 1];
      int k = 0;
      while (k < cap && l(knots_[j]) == r(knots_[j])) {
        l = l.derivative();
        r = r.derivative();
        ++k;
      }
      order = std::min(order, k);
    }
    return order;
  }

 private:
  static PiecewisePoly combine(const PiecewisePoly& a, const PiecewisePoly& b, int op) {
    std::vector<Rational> k;
    std::set_union(a.knots_.begin(), a.knots_.end(), b.knots_.begin(), b.knots_.end(), std::back_inserter(k));
    std::vector<Poly1<V>> cells;
    for (std::size_t i = 0; i <= k.size(); ++i) {
      // a representative point inside cell i picks the matching source cells
      std::size_t ia, ib;
      if (i == 0) {
        ia = 0;
        ib = 0;
      } else {
        ia = a.cell_index(k[i - 1]);
        ib = b.cell_index(k[i - 1]);
      }
      const auto& pa = a.cells_[ia];
      const auto& pb = b.cells_[ib];
      cells.push_back(op == 0 ? pa + pb : op == 1 ? pa - pb : pa * pb);
    }
    return PiecewisePoly(std::move(k), std::move(cells));
  }

  void canonicalize() {
    std::vector<Rational> k;
    std::vector<Poly1<V>> c{cells_[0]};
    for (std::size_t j = 0; j < knots_.size(); ++j) {
      if (cells_[j + 1] == c.back()) continue;
      k.push_back(knots_[j]);
      c.push_back(cells_[j + 1]);
    }
    knots_ = std::move(k);
    cells_ = std::move(c);
  }

  std::vector<Rational> knots_;
  std::vector<Poly1<V>> cells_;
};

// Finite Fourier sum on the unit-circumference circle: sum_k c_k exp(2 pi i k x).
template <class V>
class FourierPoly {
 public:
  using C = Complex<V>;
  FourierPoly() = default;
  explicit FourierPoly(std::map<long, C> modes) : modes_(std::move(modes)) { prune(); }

  static FourierPoly constant(const V& v) { return FourierPoly({{0, C(v)}}); }
  static FourierPoly cos_mode(long k, const V& a) {
    if (k == 0) return constant(a);
    V h = a * from_rational<V>(Rational(1, 2));
    return FourierPoly({{k, C(h)}, {-k, C(h)}});
  }
  static FourierPoly sin_mode(long k, const V& b) {
    if (k == 0) return FourierPoly();
    V h = b * from_rational<V>(Rational(1, 2));
    // sin = (e^{ikx} - e^{-ikx}) / (2i)
    return FourierPoly({{k, C(from_rational<V>(0), -h)}, {-k, C(from_rational<V>(0), h)}});
  }

  const std::map<long, C>& modes() const { return modes_; }
  bool is_zero() const { return modes_.empty(); }

  bool is_real() const {
    for (const auto& [k, c] : modes_) {
      auto it = modes_.find(-k);
      C other = it == modes_.end() ? C() : it->second;
      if (!(other == c.conj())) return false;
    }
    return true;
  }

  FourierPoly derivative() const {
    std::map<long, C> out;
    for (const auto& [k, c] : modes_) {
      if (k == 0) continue;
      C factor(from_rational<V>(0), scalar_traits<V>::two_pi() * from_rational<V>(Rational(k)));
      out[k] = c * factor;
    }
    return FourierPoly(out);
  }

  friend FourierPoly operator+(const FourierPoly& a, const FourierPoly& b) {
    auto out = a.modes_;
    for (const auto& [k, c] : b.modes_) out[k] += c;
    return FourierPoly(out);
  }
  friend FourierPoly operator*(const FourierPoly& a, const FourierPoly& b) {
    std::map<long, C> out;
    for (const auto& [k, c] : a.modes_)
      for (const auto& [l, d] : b.modes_) out[k + l] += c * d;
    return FourierPoly(out);
  }
  friend bool operator==(const FourierPoly& a, const FourierPoly& b) { return a.modes_ == b.modes_; }

  V mean() const {
    auto it = modes_.find(0);
    return it == modes_.end() ? from_rational<V>(0) : it->second.re;
  }

  double eval_double(double x) const {
    double re = 0;
    for (const auto& [k, c] : modes_) {
      double ang = 2.0 * std::numbers::pi * k * x;
      re += scalar_traits<V>::to_double(c.re) * std::cos(ang) - scalar_traits<V>::to_double(c.im) * std::sin(ang);
    }
    return re;
  }

  // Real trigonometric coefficients: a_0 + sum_k a_k cos + b_k sin (k >= 1).
  std::map<long, std::pair<V, V>> real_coefficients() const {
    if (!is_real()) throw std::domain_error("FourierPoly is not real");
    std::map<long, std::pair<V, V>> out;
    for (const auto& [k, c] : modes_) {
      if (k < 0) continue;
      if (k == 0) {
        out[0] = {c.re, from_rational<V>(0)};
      } else {
        V two = from_rational<V>(2);
        out[k] = {c.re * two, -(c.im * two)};
      }
    }
    return out;
  }

 private:
  void prune() {
    for (auto it = modes_.begin(); it != modes_.end();) {
      if (it->second.is_zero())
        it = modes_.erase(it);
      else
        ++it;
    }
  }
  std::map<long, C> modes_;
};

}  // namespace chiral
