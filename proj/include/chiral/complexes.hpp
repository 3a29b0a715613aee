#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "form.hpp"
#include "geometry.hpp"
#include "linalg.hpp"
#include "regions.hpp"

namespace chiral {

enum class ComplexTag { F_M, F_bd, L, F_L_M, LinObs, B_obs, ChiralBoson };

inline const char* complex_name(ComplexTag t) {
  switch (t) {
    case ComplexTag::F_M: return "F_M";
    case ComplexTag::F_bd: return "F_bd";
    case ComplexTag::L: return "L";
    case ComplexTag::F_L_M: return "F_L_M";
    case ComplexTag::LinObs: return "LinObs";
    case ComplexTag::B_obs: return "B_obs";
    case ComplexTag::ChiralBoson: return "ChiralBoson";
  }
  return "";
}

struct ComplexId {
  ComplexTag tag = ComplexTag::F_M;
  Space space = Space::Bulk;
  std::optional<Region> region;

  static ComplexId of(ComplexTag t) {
    switch (t) {
      case ComplexTag::F_M:
      case ComplexTag::F_L_M:
      case ComplexTag::LinObs: return {t, Space::Bulk, std::nullopt};
      case ComplexTag::F_bd:
      case ComplexTag::L: return {t, Space::Boundary, std::nullopt};
      case ComplexTag::B_obs: return {t, Space::Base, std::nullopt};
      case ComplexTag::ChiralBoson: return {t, Space::BoundaryCircle, std::nullopt};
    }
    return {};
  }
  static ComplexId b_obs(Space s) {
    if (s != Space::Base && s != Space::Tubular) throw std::invalid_argument("B_obs lives on the base or its tubular neighbourhood");
    return {ComplexTag::B_obs, s, std::nullopt};
  }
  ComplexId on(Region r) const {
    ComplexId c = *this;
    c.region = std::move(r);
    return c;
  }

  int shift() const {
    switch (tag) {
      case ComplexTag::LinObs: return 2;
      case ComplexTag::ChiralBoson: return 0;
      default: return 1;
    }
  }
  bool compact() const { return tag == ComplexTag::LinObs || tag == ComplexTag::B_obs || tag == ComplexTag::ChiralBoson; }
  bool conditioned() const { return tag == ComplexTag::F_L_M || tag == ComplexTag::LinObs; }
  int max_degree() const { return tag == ComplexTag::ChiralBoson ? 0 : space_dim(space); }
  std::string name() const { return std::string(complex_name(tag)) + "/" + space_name(space); }
};

template <class V>
bool within_tolerance(const Form<V>& f, double tol) {
  if constexpr (scalar_traits<V>::exact) {
    (void)tol;
    return f.is_zero();
  } else {
    return f.max_abs() <= tol;
  }
}

// The boundary 1-form lies in the chiral eigenspace: star(a) = eps a, i.e. no d tau coefficient.
template <class V>
bool is_chiral_boundary_form(const Form<V>& a, double tol = 1e-9) {
  auto s = hodge_star_boundary(a);
  return within_tolerance(s - a * from_rational<V>(a.geometry().epsilon()), tol);
}

// Forms on the cylinder must vanish near the inner circle; tubular forms may reach rho = 1 only at the closed end of their support.
template <class V>
bool support_admissible(const Form<V>& f, bool compact) {
  if (f.is_zero()) return true;
  if (compact && !f.compactly_supported()) return false;
  if (!(f.dims() & bit(R))) return true;
  SupportBox b = f.support();
  auto [lo, hi] = f.geometry().r_range(f.space());
  if (f.space() == Space::Tubular) return b.hi[R] && *b.hi[R] <= 1;
  if (f.geometry().kind == Kind::Cylinder) return b.lo[R] && *b.lo[R] > *lo;
  return true;
}

template <class V>
bool member(const ComplexId& c, const Form<V>& f, double tol = 1e-9) {
  if (f.space() != c.space) throw std::invalid_argument("space mismatch: " + f.describe() + " tested against " + c.name());
  if (f.shift() != c.shift()) return false;
  if (f.degree() > c.max_degree()) return false;
  if (!support_admissible(f, c.compact())) return false;
  if (c.region && !f.is_zero() && !region_subset(support_region(f), *c.region)) return false;
  switch (c.tag) {
    case ComplexTag::L:
      if (f.degree() == 0) return within_tolerance(f, tol);
      if (f.degree() == 1) return is_chiral_boundary_form(f, tol);
      return true;
    case ComplexTag::F_L_M:
    case ComplexTag::LinObs:
      if (f.degree() == 0) return within_tolerance(boundary_restrict(f), tol);
      if (f.degree() == 1) return is_chiral_boundary_form(boundary_restrict(f), tol);
      return true;
    case ComplexTag::B_obs:
      if (f.degree() == 0) return within_tolerance(boundary_restrict(f), tol);
      return true;
    default: return true;
  }
}

// Differential of a complex; the chiral boson complex is concentrated in degree 0.
template <class V>
Form<V> differential(const ComplexId& c, const Form<V>& f) {
  if (c.tag == ComplexTag::ChiralBoson) return Form<V>(f.geometry(), f.space(), std::min(f.degree() + 1, space_dim(f.space())), f.shift());
  return d(f);
}

// Linear operator of fixed cohomological degree between two complexes.
template <class V>
struct HomCochain {
  std::string name;
  int degree = 0;
  ComplexId source;
  ComplexId target;
  std::function<Form<V>(const Form<V>&)> apply;

  Form<V> operator()(const Form<V>& f) const { return apply(f); }
};

template <class V>
HomCochain<V> compose(const HomCochain<V>& a, const HomCochain<V>& b) {
  auto fa = a.apply, fb = b.apply;
  return {a.name + " o " + b.name, a.degree + b.degree, b.source, a.target, [fa, fb](const Form<V>& f) { return fa(fb(f)); }};
}

template <class V>
HomCochain<V> identity_map(const ComplexId& c) {
  return {"id", 0, c, c, [](const Form<V>& f) { return f; }};
}

template <class V>
HomCochain<V> linear_combination(const std::string& name, const HomCochain<V>& a, const V& ca, const HomCochain<V>& b, const V& cb) {
  if (a.degree != b.degree) throw DegreeError("combining operators of different degree");
  auto fa = a.apply, fb = b.apply;
  return {name, a.degree, a.source, a.target, [fa, fb, ca, cb](const Form<V>& f) { return fa(f) * ca + fb(f) * cb; }};
}

// (dL - (-1)^{|L|} L d)(x) using the differentials of the target and source complexes.
template <class V>
Form<V> boundary_op(const HomCochain<V>& h, const Form<V>& x) {
  Form<V> hx = h(x);
  Form<V> dx = differential(h.source, x);
  if (hx.cohomological_degree() != x.cohomological_degree() + h.degree && !hx.is_zero())
    throw DegreeError("operator '" + h.name + "' does not have degree " + std::to_string(h.degree));
  Form<V> a = differential(h.target, hx);
  Form<V> b = h(dx);
  V s = from_rational<V>(parity_sign(h.degree));
  if (a.is_zero()) return -(b * s);
  if (b.is_zero()) return a;
  return a - b * s;
}

// Boundary operator as a cochain of the same source and target, degree + 1.
template <class V>
HomCochain<V> boundary_of(const HomCochain<V>& h) {
  return {"d(" + h.name + ")", h.degree + 1, h.source, h.target, [h](const Form<V>& f) { return boundary_op(h, f); }};
}

// Ranks of cohomology of a finite complex given by basis forms per degree, closed under the differential.
template <class V>
std::map<int, int> cohomology_small(const std::map<int, std::vector<Form<V>>>& basis, const ComplexId& c, double tol = 1e-10) {
  std::vector<const Form<V>*> all;
  std::map<int, std::vector<Form<V>>> images;
  for (const auto& [k, fs] : basis)
    for (const auto& f : fs) {
      all.push_back(&f);
      images[k].push_back(differential(c, f));
    }
  for (auto& [k, fs] : images)
    for (auto& f : fs) all.push_back(&f);
  FormVectorizer<V> vec(all);
  std::map<int, int> rank_d;
  for (const auto& [k, fs] : basis) {
    SpanSolver<V> target(tol);
    if (auto it = basis.find(k + 1); it != basis.end())
      for (const auto& g : it->second) target.add(vec(g));
    SpanSolver<V> img(tol);
    int r = 0;
    for (const auto& df : images[k]) {
      auto v = vec(df);
      if (!v.empty() && !target.solve(v)) throw std::invalid_argument("not a subcomplex");
      if (img.add(v)) ++r;
    }
    rank_d[k] = r;
  }
  std::map<int, int> betti;
  for (const auto& [k, fs] : basis) {
    SpanSolver<V> s(tol);
    int dim = 0;
    for (const auto& f : fs)
      if (s.add(vec(f))) ++dim;
    int prev = rank_d.count(k - 1) ? rank_d[k - 1] : 0;
    betti[k] = dim - rank_d[k] - prev;
  }
  return betti;
}

// Cohomology of a finite complex given by matrices d_k : C^k -> C^{k+1} (rows index C^{k+1}).
template <class V>
std::map<int, int> cohomology_matrices(const std::map<int, int>& dims, const std::map<int, std::vector<std::vector<V>>>& dmat, double tol = 1e-10) {
  std::map<int, int> rank;
  for (const auto& [k, m] : dmat) rank[k] = static_cast<int>(matrix_rank(m, tol));
  for (const auto& [k, m] : dmat)
    if (dmat.count(k + 1)) {
      // d_{k+1} d_k must vanish
      const auto& n = dmat.at(k + 1);
      for (std::size_t i = 0; i < n.size(); ++i)
        for (std::size_t j = 0; j < (m.empty() ? 0 : m[0].size()); ++j) {
          V s = from_rational<V>(0);
          for (std::size_t l = 0; l < m.size(); ++l) s = s + n[i][l] * m[l][j];
          if (!negligible(s, tol)) throw std::invalid_argument("not a subcomplex");
        }
    }
  std::map<int, int> betti;
  for (const auto& [k, n] : dims) betti[k] = n - (rank.count(k) ? rank[k] : 0) - (rank.count(k - 1) ? rank[k - 1] : 0);
  return betti;
}

}  // namespace chiral
