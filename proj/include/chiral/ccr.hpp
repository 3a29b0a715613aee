#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "complexes.hpp"
#include "linalg.hpp"
#include "poisson.hpp"
#include "regions.hpp"
#include "report.hpp"

namespace chiral {

// Finite ordered set of linear observables with their pairing matrix and differential.
template <class V>
class GeneratorSet {
 public:
  GeneratorSet(ComplexId complex, PairingKind kind, std::vector<std::pair<std::string, Form<V>>> gens, double tol = 1e-10)
      : complex_(std::move(complex)), kind_(kind), tol_(tol) {
    std::set<std::string> seen;
    for (auto& [label, f] : gens) {
      if (!seen.insert(label).second) throw std::invalid_argument("duplicate generator label '" + label + "'");
      if (!member(complex_, f, tol * std::max(1.0, f.max_abs()))) throw std::invalid_argument("generator '" + label + "' is not a member of " + complex_.name());
      labels_.push_back(label);
      forms_.push_back(std::move(f));
    }
    for (const auto& f : forms_) degrees_.push_back(f.cohomological_degree());
    build_span();
    build_pairing();
    build_differential();
  }

  std::size_t size() const { return forms_.size(); }
  const ComplexId& complex() const { return complex_; }
  PairingKind kind() const { return kind_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const Form<V>& form(std::size_t i) const { return forms_[i]; }
  int degree(std::size_t i) const { return degrees_[i]; }
  bool odd(std::size_t i) const { return degrees_[i] % 2 != 0; }
  const V& pairing(std::size_t i, std::size_t j) const { return tau_[i][j]; }
  const std::vector<std::vector<V>>& pairing_matrix() const { return tau_; }
  // d x_i = sum_j dmat[i][j] x_j
  const std::vector<std::vector<V>>& dmat() const { return dmat_; }
  double tolerance() const { return tol_; }

  // Coefficients of forms in the generator span (nullopt for those outside it).
  std::vector<std::optional<std::vector<V>>> express_all(const std::vector<Form<V>>& fs) const {
    std::vector<const Form<V>*> all;
    for (const auto& g : forms_) all.push_back(&g);
    for (const auto& f : fs) all.push_back(&f);
    FormVectorizer<V> vec(all);
    SpanSolver<V> s(tol_);
    for (const auto& g : forms_) s.add(vec(g));
    std::vector<std::optional<std::vector<V>>> out;
    for (const auto& f : fs) out.push_back(f.is_zero() ? std::optional<std::vector<V>>(std::vector<V>(size(), from_rational<V>(0))) : s.solve(vec(f)));
    return out;
  }

  std::optional<std::vector<V>> express(const Form<V>& f) const { return express_all({f}).front(); }

 private:
  void build_span() {
    std::vector<const Form<V>*> all;
    for (const auto& g : forms_) all.push_back(&g);
    FormVectorizer<V> vec(all);
    SpanSolver<V> s(tol_);
    for (std::size_t i = 0; i < forms_.size(); ++i)
      if (!s.add(vec(forms_[i]))) throw std::invalid_argument("generator '" + labels_[i] + "' is linearly dependent on earlier ones");
  }

  // Upper triangle from the pairing itself, lower triangle by graded antisymmetry.
  void build_pairing() {
    std::size_t n = size();
    tau_.assign(n, std::vector<V>(n, from_rational<V>(0)));
    Pairing p{kind_, std::nullopt};
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        auto v = pair(p, forms_[i], forms_[j]);
        double tol = tol_ * std::max(1.0, forms_[i].max_abs() * forms_[j].max_abs());
        if (v.base_route && !negligible(v.value - *v.base_route, tol)) throw std::logic_error("tau_0 routes disagree on generators");
        tau_[i][j] = negligible(v.value, tol) ? from_rational<V>(0) : v.value;
        tau_[j][i] = -tau_[i][j] * from_rational<V>(parity_sign(degrees_[i] * degrees_[j]));
        if (i == j && !negligible(v.value - tau_[i][i], tol)) throw std::logic_error("pairing matrix is not graded antisymmetric");
      }
  }

  void build_differential() {
    std::vector<Form<V>> images;
    for (const auto& f : forms_) images.push_back(differential(complex_, f));
    std::vector<const Form<V>*> all;
    for (const auto& g : forms_) all.push_back(&g);
    for (const auto& g : images) all.push_back(&g);
    FormVectorizer<V> vec(all);
    SpanSolver<V> s(tol_);
    for (const auto& g : forms_) s.add(vec(g));
    for (std::size_t i = 0; i < images.size(); ++i) {
      auto c = s.solve(vec(images[i]), forms_[i].max_abs());
      if (!c) throw std::invalid_argument("generator set not d-closed");
      dmat_.push_back(*c);
    }
  }

  ComplexId complex_;
  PairingKind kind_;
  double tol_;
  std::vector<std::string> labels_;
  std::vector<Form<V>> forms_;
  std::vector<int> degrees_;
  std::vector<std::vector<V>> tau_;
  std::vector<std::vector<V>> dmat_;
};

using Word = std::vector<int>;

// Element of the CCR algebra: normal-ordered words (ascending, odd generators not repeated) with complex coefficients.
template <class V>
class CCRElement {
 public:
  using C = Complex<V>;

  CCRElement() = default;
  explicit CCRElement(std::shared_ptr<const GeneratorSet<V>> gens) : gens_(std::move(gens)) {}

  const std::shared_ptr<const GeneratorSet<V>>& generators() const { return gens_; }
  const std::map<Word, C>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Word& w, const C& c) {
    auto& slot = terms_[w];
    slot += c;
    if (slot.is_zero()) terms_.erase(w);
  }

  friend CCRElement operator+(const CCRElement& a, const CCRElement& b) {
    a.require_same(b);
    CCRElement out = a;
    for (const auto& [w, c] : b.terms_) out.add_term(w, c);
    return out;
  }
  friend CCRElement operator-(const CCRElement& a, const CCRElement& b) { return a + b * C(from_rational<V>(-1)); }
  friend CCRElement operator*(const CCRElement& a, const C& s) {
    CCRElement out(a.gens_);
    for (const auto& [w, c] : a.terms_) out.add_term(w, c * s);
    return out;
  }
  friend bool operator==(const CCRElement& a, const CCRElement& b) { return (a - b).is_zero(); }

  double max_abs() const {
    double m = 0;
    for (const auto& [w, c] : terms_) m = std::max(m, c.magnitude());
    return m;
  }

  void require_same(const CCRElement& o) const {
    if (gens_ && o.gens_ && gens_ != o.gens_) throw std::invalid_argument("generator-set mismatch");
  }

 private:
  std::shared_ptr<const GeneratorSet<V>> gens_;
  std::map<Word, C> terms_;
};

// The CCR dg-*-algebra on a generator set.
template <class V>
class CCRAlgebra {
 public:
  using C = Complex<V>;
  using Elem = CCRElement<V>;

  explicit CCRAlgebra(std::shared_ptr<const GeneratorSet<V>> gens) : gens_(std::move(gens)) {}

  const GeneratorSet<V>& generators() const { return *gens_; }
  std::shared_ptr<const GeneratorSet<V>> generator_ptr() const { return gens_; }

  Elem zero() const { return Elem(gens_); }
  Elem one() const { return scalar(C(from_rational<V>(1))); }
  Elem scalar(const C& c) const {
    Elem e(gens_);
    e.add_term({}, c);
    return e;
  }
  Elem gen(std::size_t i) const {
    if (i >= gens_->size()) throw std::out_of_range("generator index");
    Elem e(gens_);
    e.add_term({static_cast<int>(i)}, C(from_rational<V>(1)));
    return e;
  }

  int word_degree(const Word& w) const {
    int s = 0;
    for (int i : w) s += gens_->degree(i);
    return s;
  }

  // Normal form of c * w by the commutation rewriting x_j x_i -> s x_i x_j + i tau(x_j, x_i).
  Elem normal_order(const Word& w, const C& c) const {
    Elem out(gens_);
    std::vector<std::pair<Word, C>> work{{w, c}};
    C half_i(from_rational<V>(0), from_rational<V>(Rational(1, 2)));
    while (!work.empty()) {
      auto [u, k] = std::move(work.back());
      work.pop_back();
      if (k.is_zero()) continue;
      std::size_t pos = u.size();
      for (std::size_t p = 0; p + 1 < u.size(); ++p)
        if (u[p] > u[p + 1] || (u[p] == u[p + 1] && gens_->odd(u[p]))) {
          pos = p;
          break;
        }
      if (pos == u.size()) {
        out.add_term(u, k);
        continue;
      }
      int a = u[pos], b = u[pos + 1];
      Word rest;
      rest.insert(rest.end(), u.begin(), u.begin() + pos);
      rest.insert(rest.end(), u.begin() + pos + 2, u.end());
      const V& t = gens_->pairing(a, b);
      if (a == b) {
        // odd x: x x = (i/2) tau(x, x)
        if (!is_zero(t)) work.emplace_back(rest, k * half_i * C(t));
        continue;
      }
      Word swapped = u;
      std::swap(swapped[pos], swapped[pos + 1]);
      V s = from_rational<V>(parity_sign(gens_->degree(a) * gens_->degree(b)));
      work.emplace_back(swapped, k * C(s));
      if (!is_zero(t)) work.emplace_back(rest, k * C::i() * C(t));
    }
    return out;
  }

  Elem normalize(const Elem& e) const {
    Elem out(gens_);
    for (const auto& [w, c] : e.terms()) out = out + normal_order(w, c);
    return out;
  }

  Elem product(const Elem& a, const Elem& b) const {
    check(a);
    check(b);
    Elem out(gens_);
    for (const auto& [wa, ca] : a.terms())
      for (const auto& [wb, cb] : b.terms()) {
        Word w = wa;
        w.insert(w.end(), wb.begin(), wb.end());
        out = out + normal_order(w, ca * cb);
      }
    return out;
  }

  Elem word(const Word& w) const { return normal_order(w, C(from_rational<V>(1))); }

  // Graded commutator ab - (-1)^{|a||b|} ba for homogeneous a, b.
  Elem commutator(const Elem& a, const Elem& b) const {
    int da = homogeneous_degree(a), db = homogeneous_degree(b);
    return product(a, b) - product(b, a) * C(from_rational<V>(parity_sign(da * db)));
  }

  int homogeneous_degree(const Elem& e) const {
    std::optional<int> deg;
    for (const auto& [w, c] : e.terms()) {
      int k = word_degree(w);
      if (deg && *deg != k) throw std::invalid_argument("element is not homogeneous");
      deg = k;
    }
    return deg.value_or(0);
  }

  // Conjugate-linear anti-involution fixing generators, with (ab)* = (-1)^{|a||b|} b* a*.
  Elem star(const Elem& e, bool graded = true) const {
    check(e);
    Elem out(gens_);
    for (const auto& [w, c] : e.terms()) {
      Word r(w.rbegin(), w.rend());
      int sign = 1;
      if (graded)
        for (std::size_t p = 0; p < w.size(); ++p)
          for (std::size_t q = p + 1; q < w.size(); ++q) sign *= parity_sign(gens_->degree(w[p]) * gens_->degree(w[q]));
      out = out + normal_order(r, c.conj() * C(from_rational<V>(sign)));
    }
    return out;
  }

  // Derivation extending the generator differential with the Koszul sign.
  Elem differential(const Elem& e) const {
    check(e);
    Elem out(gens_);
    for (const auto& [w, c] : e.terms()) {
      int before = 0;
      for (std::size_t p = 0; p < w.size(); ++p) {
        const auto& row = gens_->dmat()[w[p]];
        C sc = c * C(from_rational<V>(parity_sign(before)));
        for (std::size_t j = 0; j < row.size(); ++j) {
          if (is_zero(row[j])) continue;
          Word u = w;
          u[p] = static_cast<int>(j);
          out = out + normal_order(u, sc * C(row[j]));
        }
        before += gens_->degree(w[p]);
      }
    }
    return out;
  }

  // Image of the two-sided relation x_j x_i - s x_i x_j - i tau(x_j, x_i) under star, reduced to normal form.
  Elem star_relation_defect(std::size_t j, std::size_t i, bool graded) const {
    C s(from_rational<V>(parity_sign(gens_->degree(i) * gens_->degree(j))));
    Word ji{static_cast<int>(j), static_cast<int>(i)}, ij{static_cast<int>(i), static_cast<int>(j)};
    // raw relation as an element of the free algebra, starred word by word, then reduced
    Elem out(gens_);
    auto star_word = [&](const Word& w, const C& c) {
      Word r(w.rbegin(), w.rend());
      int sign = graded ? parity_sign(gens_->degree(w[0]) * gens_->degree(w[1])) : 1;
      return normal_order(r, c.conj() * C(from_rational<V>(sign)));
    };
    out = out + star_word(ji, C(from_rational<V>(1)));
    out = out - star_word(ij, s);
    out = out - scalar((C::i() * C(gens_->pairing(j, i))).conj());
    return out;
  }

  void check(const Elem& e) const {
    if (e.generators() && e.generators() != gens_) throw std::invalid_argument("generator-set mismatch");
  }

 private:
  std::shared_ptr<const GeneratorSet<V>> gens_;
};

// Algebra morphism induced by a cochain map sending generators into the target span.
template <class V>
class Transport {
 public:
  using C = Complex<V>;

  Transport(std::string name, const CCRAlgebra<V>& source, const CCRAlgebra<V>& target, const std::function<Form<V>(const Form<V>&)>& map)
      : name_(std::move(name)), source_(source), target_(target) {
    const auto& sg = source.generators();
    const auto& tg = target.generators();
    std::vector<Form<V>> imgs;
    for (std::size_t i = 0; i < sg.size(); ++i) imgs.push_back(map(sg.form(i)).chopped(sg.tolerance() * std::max(1.0, sg.form(i).max_abs())));
    auto coeffs = tg.express_all(imgs);
    for (std::size_t i = 0; i < sg.size(); ++i) {
      if (!coeffs[i]) throw std::invalid_argument("image of generator '" + sg.label(i) + "' outside the target span");
      images_.push_back(*coeffs[i]);
    }
    for (std::size_t i = 0; i < sg.size(); ++i)
      for (std::size_t j = 0; j < sg.size(); ++j) {
        V t = from_rational<V>(0);
        for (std::size_t k = 0; k < tg.size(); ++k)
          for (std::size_t l = 0; l < tg.size(); ++l)
            if (!is_zero(images_[i][k]) && !is_zero(images_[j][l])) t = t + images_[i][k] * images_[j][l] * tg.pairing(k, l);
        double tol = sg.tolerance() * std::max(1.0, sg.form(i).max_abs() * sg.form(j).max_abs());
        if (!negligible(t - sg.pairing(i, j), tol)) throw std::invalid_argument("not a Poisson morphism");
      }
  }

  const std::string& name() const { return name_; }
  const std::vector<std::vector<V>>& matrix() const { return images_; }

  CCRElement<V> operator()(const CCRElement<V>& e) const {
    source_.check(e);
    auto out = target_.zero();
    for (const auto& [w, c] : e.terms()) {
      auto acc = target_.scalar(c);
      for (int g : w) {
        auto img = target_.zero();
        for (std::size_t k = 0; k < images_[g].size(); ++k)
          if (!is_zero(images_[g][k])) img = img + target_.gen(k) * C(images_[g][k]);
        acc = target_.product(acc, img);
      }
      out = out + acc;
    }
    return out;
  }

 private:
  std::string name_;
  CCRAlgebra<V> source_;
  CCRAlgebra<V> target_;
  std::vector<std::vector<V>> images_;
};

// Cross commutators between generators supported in disjoint regions vanish.
template <class V>
Report ccr_causality_check(const CCRAlgebra<V>& alg, const std::vector<std::size_t>& s1, const Region& u1, const std::vector<std::size_t>& s2,
                           const Region& u2) {
  bool bulk = u1.space() == Space::Bulk || u1.space() == Space::Boundary;
  bool apart = bulk ? is_disjoint(u1, u2) : !regions_intersect(u1, u2);
  if (!apart) throw std::invalid_argument("regions are not disjoint");
  const auto& g = alg.generators();
  for (auto i : s1)
    if (!region_subset(support_region(g.form(i)), u1)) throw SupportViolation("support violation: generator '" + g.label(i) + "'");
  for (auto j : s2)
    if (!region_subset(support_region(g.form(j)), u2)) throw SupportViolation("support violation: generator '" + g.label(j) + "'");
  Report rep;
  std::size_t n = 0;
  for (auto i : s1)
    for (auto j : s2) {
      auto c = alg.commutator(alg.gen(i), alg.gen(j));
      bool ok = scalar_traits<V>::exact ? c.is_zero() : c.max_abs() <= g.tolerance();
      rep.add("ccr_causality/" + g.label(i) + "," + g.label(j), n++, c.max_abs(), ok);
    }
  return rep;
}

// Twelve bulk generators in degrees -2..1 whose span is closed under d.
template <class V>
std::vector<std::pair<std::string, Form<V>>> bulk_generator_family(FormSampler<V>& smp) {
  auto c = ComplexId::of(ComplexTag::LinObs);
  std::vector<std::pair<std::string, Form<V>>> out;
  auto f1 = smp.member_of(c, 0), f2 = smp.member_of(c, 0);
  auto a1 = smp.member_of(c, 1), a2 = smp.member_of(c, 1);
  auto b1 = smp.member_of(c, 2);
  out.emplace_back("f1", f1);
  out.emplace_back("f2", f2);
  out.emplace_back("df1", d(f1));
  out.emplace_back("df2", d(f2));
  out.emplace_back("a1", a1);
  out.emplace_back("a2", a2);
  out.emplace_back("da1", d(a1));
  out.emplace_back("da2", d(a2));
  out.emplace_back("b1", b1);
  out.emplace_back("db1", d(b1));
  out.emplace_back("c1", smp.member_of(c, 3));
  out.emplace_back("c2", smp.member_of(c, 3));
  return out;
}

// Functions on the boundary circle (or line): low Fourier modes or bumps.
template <class V>
std::vector<std::pair<std::string, Form<V>>> boundary_generator_family(FormSampler<V>& smp, int n) {
  std::vector<std::pair<std::string, Form<V>>> out;
  const auto& g = smp.geometry();
  for (int k = 0; k < n; ++k) {
    CoeffField<V> f(g.circle());
    if (g.circle())
      f = CoeffField<V>::trig(k % 2 == 0 ? trig_cos(k / 2 + 1) : trig_sin(k / 2 + 1), from_rational<V>(1)) + smp.circle_factor();
    else
      f = smp.line_factor(Y);
    out.emplace_back("phi" + std::to_string(k + 1), Form<V>::function(g, Space::BoundaryCircle, f));
  }
  return out;
}

// Independent nonzero images of a family under a map, labelled after their sources.
template <class V>
std::vector<std::pair<std::string, Form<V>>> image_family(const std::vector<std::pair<std::string, Form<V>>>& src,
                                                           const std::function<Form<V>(const Form<V>&)>& map, double tol = 1e-10) {
  std::vector<std::pair<std::string, Form<V>>> imgs;
  for (const auto& [l, f] : src) {
    auto g = map(f).chopped(tol * std::max(1.0, f.max_abs()));
    if (!g.is_zero()) imgs.emplace_back(l + "'", g);
  }
  std::vector<const Form<V>*> all;
  for (const auto& p : imgs) all.push_back(&p.second);
  FormVectorizer<V> vec(all);
  SpanSolver<V> s(tol);
  std::vector<std::pair<std::string, Form<V>>> out;
  for (const auto& p : imgs)
    if (s.add(vec(p.second))) out.push_back(p);
  return out;
}

}  // namespace chiral
