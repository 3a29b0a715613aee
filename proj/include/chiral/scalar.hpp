#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chiral {

using Rational = mpq_class;

// mpq_class(n, d) does not reduce; arithmetic on unreduced values is undefined.
inline Rational ratio(long n, long d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline Rational parse_rational(const std::string& text) {
  std::string s = text;
  while (!s.empty() && s.front() == ' ') s.erase(s.begin());
  while (!s.empty() && s.back() == ' ') s.pop_back();
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    bool neg = s[0] == '-';
    std::string body = (neg || s[0] == '+') ? s.substr(1) : s;
    dot = body.find('.');
    std::string ip = body.substr(0, dot);
    std::string fp = body.substr(dot + 1);
    if ((ip.empty() && fp.empty()) ||
        ip.find_first_not_of("0123456789") != std::string::npos ||
        fp.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("malformed rational '" + text + "'");
    mpz_class scale = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
    mpz_class num = mpz_class(ip.empty() ? "0" : ip, 10) * scale + (fp.empty() ? mpz_class(0) : mpz_class(fp, 10));
    Rational r(num, scale);
    r.canonicalize();
    return neg ? Rational(-r) : r;
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    bool ok = std::isdigit(static_cast<unsigned char>(c)) || c == '/' || (i == 0 && (c == '-' || c == '+'));
    if (!ok) throw std::invalid_argument("malformed rational '" + text + "'");
  }
  if (s[0] == '+') s.erase(s.begin());
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational '" + text + "'");
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

inline std::string to_string(Rational r) {
  r.canonicalize();
  return r.get_str();
}

// Dense polynomials over Q in the indeterminate pi, lowest power first.
namespace pipoly {

using Coeffs = std::vector<Rational>;

inline void trim(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Coeffs add(const Coeffs& a, const Coeffs& b, int sign = 1) {
  Coeffs r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += sign > 0 ? b[i] : Rational(-b[i]);
  trim(r);
  return r;
}

inline Coeffs mul(const Coeffs& a, const Coeffs& b) {
  if (a.empty() || b.empty()) return {};
  Coeffs r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

inline Coeffs scale(const Coeffs& a, const Rational& s) {
  if (s == 0) return {};
  Coeffs r(a);
  for (auto& c : r) c *= s;
  return r;
}

inline std::pair<Coeffs, Coeffs> divmod(Coeffs a, const Coeffs& b) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  Coeffs q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
  while (!a.empty() && a.size() >= b.size()) {
    std::size_t shift = a.size() - b.size();
    Rational f = a.back() / b.back();
    q[shift] = f;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= f * b[i];
    a.pop_back();
    trim(a);
  }
  trim(q);
  return {q, a};
}

inline Coeffs monic(const Coeffs& a) {
  if (a.empty()) return a;
  return scale(a, Rational(1) / a.back());
}

inline Coeffs gcd(Coeffs a, Coeffs b) {
  while (!b.empty()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

inline double eval(const Coeffs& a, double x) {
  double r = 0;
  for (std::size_t i = a.size(); i-- > 0;) r = r * x + a[i].get_d();
  return r;
}

}  // namespace pipoly

// Exact element of the field Q(pi). Plain rationals take a fast path; the
// rational-function form appears only once a Fourier derivative brings in pi.
class QPi {
 public:
  QPi() = default;
  QPi(int v) : q_(v) {}
  QPi(long v) : q_(v) {}
  QPi(const Rational& r) : q_(r) {}

  static QPi pi() {
    QPi r;
    r.ext_ = std::make_shared<Ext>(Ext{{Rational(0), Rational(1)}, {Rational(1)}});
    return r;
  }

  static QPi from_fraction(pipoly::Coeffs num, pipoly::Coeffs den) {
    pipoly::trim(num);
    pipoly::trim(den);
    if (den.empty()) throw std::domain_error("QPi: zero denominator");
    return normalized(std::move(num), std::move(den));
  }

  bool is_rational() const { return !ext_; }
  const Rational& rational() const {
    if (ext_) throw std::domain_error("QPi value is not rational");
    return q_;
  }
  pipoly::Coeffs numerator() const { return ext_ ? ext_->num : constant(q_); }
  pipoly::Coeffs denominator() const { return ext_ ? ext_->den : pipoly::Coeffs{Rational(1)}; }

  bool is_zero() const { return !ext_ && q_ == 0; }

  double to_double() const {
    if (!ext_) return q_.get_d();
    return pipoly::eval(ext_->num, std::numbers::pi) / pipoly::eval(ext_->den, std::numbers::pi);
  }

  QPi operator-() const {
    QPi r;
    if (!ext_) {
      r.q_ = -q_;
      return r;
    }
    r.ext_ = std::make_shared<Ext>(Ext{pipoly::scale(ext_->num, -1), ext_->den});
    return r;
  }

  QPi& operator+=(const QPi& o) { return *this = *this + o; }
  QPi& operator-=(const QPi& o) { return *this = *this - o; }
  QPi& operator*=(const QPi& o) { return *this = *this * o; }
  QPi& operator/=(const QPi& o) { return *this = *this / o; }

  friend QPi operator+(const QPi& a, const QPi& b) {
    if (!a.ext_ && !b.ext_) return QPi(Rational(a.q_ + b.q_));
    if (b.is_zero()) return a;
    if (a.is_zero()) return b;
    auto an = a.numerator(), ad = a.denominator(), bn = b.numerator(), bd = b.denominator();
    if (ad == bd) return normalized(pipoly::add(an, bn), ad);
    return normalized(pipoly::add(pipoly::mul(an, bd), pipoly::mul(bn, ad)), pipoly::mul(ad, bd));
  }
  friend QPi operator-(const QPi& a, const QPi& b) { return a + (-b); }
  friend QPi operator*(const QPi& a, const QPi& b) {
    if (!a.ext_ && !b.ext_) return QPi(Rational(a.q_ * b.q_));
    if (!a.ext_) return b.scaled(a.q_);
    if (!b.ext_) return a.scaled(b.q_);
    return normalized(pipoly::mul(a.ext_->num, b.ext_->num), pipoly::mul(a.ext_->den, b.ext_->den));
  }
  friend QPi operator/(const QPi& a, const QPi& b) { return a * b.inverse(); }

  QPi inverse() const {
    if (is_zero()) throw std::domain_error("QPi: division by zero");
    if (!ext_) return QPi(Rational(1 / q_));
    return normalized(ext_->den, ext_->num);
  }

  friend bool operator==(const QPi& a, const QPi& b) {
    if (!a.ext_ && !b.ext_) return a.q_ == b.q_;
    if (!a.ext_ || !b.ext_) return false;
    return a.ext_->num == b.ext_->num && a.ext_->den == b.ext_->den;
  }
  friend bool operator!=(const QPi& a, const QPi& b) { return !(a == b); }

  std::string str() const {
    if (!ext_) return q_.get_str();
    auto poly = [](const pipoly::Coeffs& c) {
      std::string s;
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        if (!s.empty()) s += " + ";
        s += "(" + c[i].get_str() + ")";
        if (i == 1) s += "*pi";
        if (i > 1) s += "*pi^" + std::to_string(i);
      }
      return s;
    };
    if (ext_->den.size() == 1) return poly(ext_->num);
    return "(" + poly(ext_->num) + ")/(" + poly(ext_->den) + ")";
  }

 private:
  struct Ext {
    pipoly::Coeffs num;
    pipoly::Coeffs den;
  };

  static pipoly::Coeffs constant(const Rational& q) {
    if (q == 0) return {};
    return {q};
  }

  QPi scaled(const Rational& s) const {
    if (s == 0) return QPi();
    if (!ext_) return QPi(Rational(q_ * s));
    QPi r;
    r.ext_ = std::make_shared<Ext>(Ext{pipoly::scale(ext_->num, s), ext_->den});
    return r;
  }

  static QPi normalized(pipoly::Coeffs num, pipoly::Coeffs den) {
    if (num.empty()) return QPi();
    if (den.size() > 1) {
      auto g = pipoly::gcd(num, den);
      if (g.size() > 1) {
        num = pipoly::divmod(num, g).first;
        den = pipoly::divmod(den, g).first;
      }
    }
    Rational lead = den.back();
    if (lead != 1) {
      num = pipoly::scale(num, Rational(1) / lead);
      den = pipoly::scale(den, Rational(1) / lead);
    }
    if (den.size() == 1 && num.size() == 1) return QPi(num[0]);
    QPi r;
    r.ext_ = std::make_shared<Ext>(Ext{std::move(num), std::move(den)});
    return r;
  }

  Rational q_{0};
  std::shared_ptr<const Ext> ext_;
};

template <class V>
struct scalar_traits;

template <>
struct scalar_traits<QPi> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";
  static QPi from_rational(const Rational& r) { return QPi(r); }
  static double to_double(const QPi& v) { return v.to_double(); }
  static bool is_zero(const QPi& v) { return v.is_zero(); }
  static double magnitude(const QPi& v) { return std::fabs(v.to_double()); }
  static QPi two_pi() { return QPi::pi() * QPi(2); }
  static bool invertible(const QPi& v) { return !v.is_zero(); }
  static QPi inverse(const QPi& v) { return v.inverse(); }
  static std::string str(const QPi& v) { return v.str(); }
  // cos(2 pi k x) and sin(2 pi k x) are only exact when 4 k x is an integer.
  static QPi cos2pi(long k, const Rational& x) {
    Rational t = x * k * 4;
    if (t.get_den() != 1) throw std::domain_error("trigonometric value not representable exactly");
    long m = mpz_class((t.get_num() % 4) + 4).get_si() % 4;
    static const int table[4] = {1, 0, -1, 0};
    return QPi(table[m]);
  }
  static QPi sin2pi(long k, const Rational& x) {
    Rational t = x * k * 4;
    if (t.get_den() != 1) throw std::domain_error("trigonometric value not representable exactly");
    long m = mpz_class((t.get_num() % 4) + 4).get_si() % 4;
    static const int table[4] = {0, 1, 0, -1};
    return QPi(table[m]);
  }
};

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  static double from_rational(const Rational& r) { return r.get_d(); }
  static double to_double(double v) { return v; }
  static bool is_zero(double v) { return v == 0.0; }
  static double magnitude(double v) { return std::fabs(v); }
  static double two_pi() { return 2.0 * std::numbers::pi; }
  static bool invertible(double v) { return std::fabs(v) > 1e-12; }
  static double inverse(double v) { return 1.0 / v; }
  static std::string str(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
  static double cos2pi(long k, const Rational& x) { return std::cos(2.0 * std::numbers::pi * k * x.get_d()); }
  static double sin2pi(long k, const Rational& x) { return std::sin(2.0 * std::numbers::pi * k * x.get_d()); }
};

template <class V>
V from_rational(const Rational& r) {
  return scalar_traits<V>::from_rational(r);
}

template <class V>
bool is_zero(const V& v) {
  return scalar_traits<V>::is_zero(v);
}

template <class V>
double magnitude(const V& v) {
  return scalar_traits<V>::magnitude(v);
}

template <class V>
struct Complex {
  V re{};
  V im{};

  Complex() = default;
  Complex(V r) : re(std::move(r)), im(from_rational<V>(0)) {}
  Complex(V r, V i) : re(std::move(r)), im(std::move(i)) {}

  static Complex i() { return {from_rational<V>(0), from_rational<V>(1)}; }

  Complex conj() const { return {re, -im}; }
  bool is_zero() const { return chiral::is_zero(re) && chiral::is_zero(im); }
  double magnitude() const { return std::hypot(scalar_traits<V>::to_double(re), scalar_traits<V>::to_double(im)); }

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  Complex operator-() const { return {-re, -im}; }
  Complex& operator+=(const Complex& o) { return *this = *this + o; }
  Complex& operator-=(const Complex& o) { return *this = *this - o; }
  Complex& operator*=(const Complex& o) { return *this = *this * o; }
  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
};

}  // namespace chiral
