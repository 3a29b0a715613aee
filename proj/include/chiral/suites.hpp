#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccr.hpp"
#include "greens.hpp"
#include "poisson.hpp"
#include "reduction.hpp"
#include "region_oracle.hpp"
#include "sampling.hpp"
#include "serialize.hpp"

namespace chiral {

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"greens_identities", "difference_identity", "boundary_restriction", "poisson_antisymmetry",
                                              "causality",         "naturality",          "ccr_relations",        "ccr_transport",
                                              "regions_oracle",    "reduction_sdr",       "boundary_sdr",         "holonomy"};
  return names;
}

inline bool is_suite(const std::string& s) {
  const auto& n = suite_names();
  return std::find(n.begin(), n.end(), s) != n.end();
}

struct SuiteConfig {
  Geometry geometry = Geometry::cylinder(1);
  std::uint64_t seed = 1;
  double float_tolerance = 1e-9;
  int default_samples = 20;
  std::map<std::string, int> samples;
  std::vector<Rational> holonomy_alphas{Rational(1), Rational(0), Rational(-2), Rational(7, 2)};
  std::vector<std::pair<Rational, Rational>> bumps{{Rational(1, 2), Rational(1)}};
  std::optional<std::pair<Region, Region>> causality_regions;
  std::optional<std::vector<Region>> naturality_chain;

  int count(const std::string& suite) const {
    auto it = samples.find(suite);
    return it == samples.end() ? default_samples : it->second;
  }
};

struct SuiteResult {
  std::string suite;
  std::string backend;
  std::size_t n_samples = 0;
  Report report;
};

namespace detail {

template <class V>
using Pairs = std::vector<std::pair<Form<V>, Form<V>>>;

template <class V>
double tol_for(const SuiteConfig& c) {
  return scalar_traits<V>::exact ? 0.0 : c.float_tolerance;
}

// Failing records carry the offending sample for replay.
template <class V>
void attach_replay(Report& rep, std::size_t first, const std::vector<Form<V>>& samples) {
  for (std::size_t k = first; k < rep.records.size(); ++k) {
    auto& r = rep.records[k];
    if (!r.pass && r.detail.empty() && r.sample < samples.size()) r.detail = form_json(samples[r.sample]).dump();
  }
}

template <class V>
void attach_replay(Report& rep, std::size_t first, const Pairs<V>& samples) {
  for (std::size_t k = first; k < rep.records.size(); ++k) {
    auto& r = rep.records[k];
    if (!r.pass && r.detail.empty() && r.sample < samples.size())
      r.detail = Json::array({form_json(samples[r.sample].first), form_json(samples[r.sample].second)}).dump();
  }
}

template <class V>
void merge_with_replay(Report& rep, const Report& part, const std::vector<Form<V>>& samples) {
  std::size_t first = rep.records.size();
  rep.merge(part);
  attach_replay(rep, first, samples);
}

template <class V>
void merge_with_replay(Report& rep, const Report& part, const Pairs<V>& samples) {
  std::size_t first = rep.records.size();
  rep.merge(part);
  attach_replay(rep, first, samples);
}

template <class V>
std::vector<Form<V>> members(FormSampler<V>& smp, const ComplexId& c, int n) {
  std::vector<Form<V>> out;
  for (int i = 0; i < n; ++i) out.push_back(smp.member_of(c, static_cast<int>(smp.uniform(0, c.max_degree()))));
  return out;
}

template <class V>
Form<V> boundary_function(FormSampler<V>& smp) {
  const auto& g = smp.geometry();
  return Form<V>::function(g, Space::BoundaryCircle, g.circle() ? smp.circle_factor() : smp.line_factor(Y));
}

template <class V>
UnitBump<V> main_bump(const SuiteConfig& c) {
  return UnitBump<V>::make(c.bumps.front().first, c.bumps.front().second);
}

inline Interval quarter_interval(std::mt19937_64& rng, long lo_q, long hi_q, long max_len) {
  long a = lo_q + static_cast<long>(rng() % static_cast<std::uint64_t>(hi_q - lo_q));
  long room = std::min(max_len, hi_q - a);
  long b = a + 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(room));
  return Interval::open(ratio(a, 4), ratio(b, 4));
}

// Finite open bulk box away from the inner circle, with arcs inside [0,1].
inline Box random_bulk_box(const Geometry& g, std::mt19937_64& rng) {
  Box b;
  b[TAU] = quarter_interval(rng, -8, 8, 8);
  if (g.circle()) {
    b[Y] = quarter_interval(rng, 0, 4, 2);
    b[R] = Interval::open(Rational(1, 2) + ratio(static_cast<long>(rng() % 2), 8), Rational(1) - ratio(static_cast<long>(rng() % 2), 8));
  } else {
    b[Y] = quarter_interval(rng, -8, 8, 6);
    b[R] = quarter_interval(rng, 1, 8, 4);
  }
  return b;
}

inline Box grow(const Geometry& g, Box b, std::mt19937_64& rng) {
  auto widen = [&](Interval& iv, const Rational& lo_cap, const Rational& hi_cap) {
    Rational a = *iv.lo - ratio(1 + static_cast<long>(rng() % 2), 8), z = *iv.hi + ratio(1 + static_cast<long>(rng() % 2), 8);
    iv.lo = std::max(a, lo_cap);
    iv.hi = std::min(z, hi_cap);
  };
  widen(b[TAU], Rational(-4), Rational(4));
  if (g.circle()) {
    widen(b[Y], Rational(0), Rational(1));
    widen(b[R], Rational(1, 2), Rational(1));
  } else {
    widen(b[Y], Rational(-4), Rational(4));
    widen(b[R], Rational(1, 8), Rational(4));
  }
  return b;
}

inline Box first_box(const Region& r) {
  if (r.empty()) throw std::invalid_argument("empty region");
  const auto& b = r.boxes().front();
  for (int d = 0; d < 3; ++d)
    if ((r.dims() & bit(d)) && (!b[d].lo || !b[d].hi)) throw std::invalid_argument("sampling needs boxes with finite ends");
  return b;
}

template <class V>
Pairs<V> pairs_in(FormSampler<V>& smp, const Box& b1, const Box& b2, int n) {
  Pairs<V> out;
  for (int i = 0; i < n; ++i) {
    int p = static_cast<int>(smp.uniform(1, 3));
    out.emplace_back(smp.form_in(Space::Bulk, p, 2, b1), smp.form_in(Space::Bulk, 4 - p, 2, b2));
  }
  return out;
}

template <class V>
CCRElement<V> random_element(const CCRAlgebra<V>& alg, std::mt19937_64& rng, int max_len) {
  using C = Complex<V>;
  auto e = alg.zero();
  int terms = 1 + static_cast<int>(rng() % 2);
  for (int t = 0; t < terms; ++t) {
    Word w;
    int len = static_cast<int>(rng() % static_cast<std::uint64_t>(max_len + 1));
    for (int k = 0; k < len; ++k) w.push_back(static_cast<int>(rng() % alg.generators().size()));
    C c(from_rational<V>(ratio(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 2))), from_rational<V>(Rational(static_cast<long>(rng() % 3) - 1)));
    e = e + alg.normal_order(w, c);
  }
  return e;
}

// Float residuals are relative to the larger side.
template <class V>
CheckRecord element_check(const std::string& identity, std::size_t i, const CCRElement<V>& lhs, const CCRElement<V>& rhs, double tol, double scale = 1) {
  auto defect = lhs - rhs;
  double r = defect.max_abs();
  if (!scalar_traits<V>::exact) r /= std::max({1.0, lhs.max_abs(), rhs.max_abs(), scale});
  bool ok = scalar_traits<V>::exact ? defect.is_zero() : r <= tol;
  return {identity, i, r, ok, ok ? std::string() : ccr_element_json(defect).dump(), {}};
}

// ---- suites ----

template <class V>
std::size_t greens_identities(const SuiteConfig& c, FormSampler<V>& smp, Report& rep) {
  int n = c.count("greens_identities");
  double tol = tol_for<V>(c);
  std::size_t total = 0;
  for (auto tag : {ComplexTag::F_M, ComplexTag::LinObs, ComplexTag::F_bd}) {
    auto cid = ComplexId::of(tag);
    auto xs = members(smp, cid, n);
    total += xs.size();
    for (Flow f : {Flow::Forward, Flow::Backward}) {
      merge_with_replay(rep, verify_homotopy_identity(f, cid, xs, tol), xs);
      if (tag != ComplexTag::F_bd) merge_with_replay(rep, verify_support_property(f, xs), xs);
    }
  }
  return total;
}

template <class V>
std::size_t difference_identity(const SuiteConfig& c, FormSampler<V>& smp, Report& rep) {
  int n = c.count("difference_identity");
  auto xs = members(smp, ComplexId::of(ComplexTag::F_M), n);
  auto bs = members(smp, ComplexId::of(ComplexTag::F_bd), n);
  merge_with_replay(rep, verify_difference_identity(xs, tol_for<V>(c)), xs);
  merge_with_replay(rep, verify_difference_identity(bs, tol_for<V>(c)), bs);
  return xs.size() + bs.size();
}

template <class V>
std::size_t boundary_restriction(const SuiteConfig& c, FormSampler<V>& smp, Report& rep) {
  int n = c.count("boundary_restriction");
  double tol = tol_for<V>(c);
  std::vector<Form<V>> ls;
  for (int i = 0; i < n; ++i) ls.push_back(smp.boundary_l_form(static_cast<int>(smp.uniform(0, 2))));
  auto xs = members(smp, ComplexId::of(ComplexTag::LinObs), n);
  for (Flow f : {Flow::Forward, Flow::Backward}) {
    merge_with_replay(rep, verify_boundary_condition_restriction(f, ls, tol), ls);
    merge_with_replay(rep, verify_bulk_boundary_compatibility(f, xs, tol), xs);
    Report cond;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      auto gx = greens_apply(f, xs[i]).with_shift(1);
      bool ok = gx.is_zero() || member(ComplexId::of(ComplexTag::F_L_M), gx, tol * std::max(1.0, xs[i].max_abs()));
      cond.add(std::string("G(LinObs)_in_F_L/") + flow_name(f), i, ok ? 0.0 : 1.0, ok);
    }
    merge_with_replay(rep, cond, xs);
  }
  return ls.size() + xs.size();
}

template <class V>
std::size_t poisson_antisymmetry(const SuiteConfig& c, FormSampler<V>& smp, Report& rep) {
  int n = c.count("poisson_antisymmetry");
  double tol = tol_for<V>(c);
  auto taus = tau_zero_pairs(smp, n);
  merge_with_replay(rep, check_antisymmetry(Pairing{PairingKind::TauZero, {}}, taus, tol), taus);
  Pairs<V> sig, ups, evs;
  auto bobs = ComplexId::of(ComplexTag::B_obs);
  for (int i = 0; i < n; ++i) {
    int p = static_cast<int>(smp.uniform(0, 2));
    sig.emplace_back(smp.member_of(bobs, p), smp.member_of(bobs, 2 - p));
    ups.emplace_back(boundary_function(smp), boundary_function(smp));
  }
  merge_with_replay(rep, check_antisymmetry(Pairing{PairingKind::SigmaZero, {}}, sig, tol), sig);
  merge_with_replay(rep, check_antisymmetry(Pairing{PairingKind::UpsilonZero, {}}, ups, tol), ups);
  for (int i = 0; i < std::max(1, n / 4); ++i) {
    int p = static_cast<int>(smp.uniform(0, 2));
    evs.emplace_back(smp.member_of(ComplexId::of(ComplexTag::LinObs), p), smp.member_of(ComplexId::of(ComplexTag::F_L_M), 2 - p));
  }
  merge_with_replay(rep, check_ev_cochain(evs, tol), evs);
  return taus.size() + sig.size() + ups.size() + evs.size();
}

template <class V>
std::size_t causality(const SuiteConfig& c, FormSampler<V>& smp, Report& rep) {
  int n = c.count("causality");
  double tol = tol_for<V>(c);
  const auto& g = c.geometry;
  std::size_t used = 0;
  auto one_pair = [&](const Box& b1, const Box& b2, std::size_t k) {
    Region u1(Space::Bulk, g.circle(), {b1}), u2(Space::Bulk, g.circle(), {b2});
    auto ps = pairs_in(smp, b1, b2, 2);
    Report part;
    merge_with_replay(part, check_causality(Pairing{}, u1, u2, ps, tol), ps);
    for (auto& r : part.records) r.sample = k;
    rep.merge(part);
    // cross commutators in the algebra generated by observables from both regions
    std::vector<std::pair<std::string, Form<V>>> gens;
    auto u_1 = smp.form_in(Space::Bulk, 1, 2, b1), v_1 = smp.form_in(Space::Bulk, 1, 2, b2);
    gens = {{"u3", smp.form_in(Space::Bulk, 3, 2, b1)}, {"u1", u_1}, {"du1", d(u_1)}, {"v3", smp.form_in(Space::Bulk, 3, 2, b2)}, {"v1", v_1}, {"dv1", d(v_1)}};
    CCRAlgebra<V> alg(std::make_shared<GeneratorSet<V>>(ComplexId::of(ComplexTag::LinObs), PairingKind::TauZero, gens));
    Report cc = ccr_causality_check(alg, {0, 1, 2}, u1, {3, 4, 5}, u2);
    for (auto& r : cc.records) r.sample = k;
    rep.merge(cc);
    used += ps.size() + gens.size();
  };
  if (c.causality_regions) {
    auto b1 = first_box(c.causality_regions->first), b2 = first_box(c.causality_regions->second);
    if (!is_disjoint(Region(Space::Bulk, g.circle(), {b1}), Region(Space::Bulk, g.circle(), {b2})))
      throw std::invalid_argument("regions.causality: regions are not disjoint");
    one_pair(b1, b2, 0);
  }
  std::mt19937_64 rng(smp.rng()());
  for (int k = 0; k < n; ++k) {
    Box b1, b2;
    do {
      b1 = random_bulk_box(g, rng);
      b2 = random_bulk_box(g, rng);
    } while (!is_disjoint(Region(Space::Bulk, g.circle(), {b1}), Region(Space::Bulk, g.circle(), {b2})));
    one_pair(b1, b2, static_cast<std::size_t>(k) + 1);
  }
  return used;
}

template <class V>
std::size_t naturality(const SuiteConfig& c, FormSampler<V>& smp, Report& rep) {
  int n = c.count("naturality");
  double tol = tol_for<V>(c);
  const auto& g = c.geometry;
  std::vector<Region> chain;
  std::mt19937_64 rng(smp.rng()());
  if (c.naturality_chain) {
    chain = *c.naturality_chain;
    for (std::size_t k = 1; k < chain.size(); ++k)
      if (!region_subset(chain[k - 1], chain[k])) throw std::invalid_argument("regions.naturality: chain is not nested");
  } else {
    Box b0 = random_bulk_box(g, rng), b1 = grow(g, b0, rng), b2 = grow(g, b1, rng);
    chain = {Region(Space::Bulk, g.circle(), {b0}), Region(Space::Bulk, g.circle(), {b1}), Region(Space::Bulk, g.circle(), {b2})};
  }
  Box inner = first_box(chain.front());
  auto ps = pairs_in(smp, inner, inner, n);
  merge_with_replay(rep, check_naturality(Pairing{}, chain, ps, tol), ps);
  return ps.size();
}

template <class V>
std::size_t ccr_relations(const SuiteConfig& c, FormSampler<V>& smp, Report& rep) {
  int n = c.count("ccr_relations");
  double tol = tol_for<V>(c);
  using C = Complex<V>;
  auto set = std::make_shared<GeneratorSet<V>>(ComplexId::of(ComplexTag::LinObs), PairingKind::TauZero, bulk_generator_family(smp));
  CCRAlgebra<V> alg(set);
  const auto& gs = alg.generators();
  std::size_t k = 0;
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (std::size_t j = 0; j < gs.size(); ++j) {
      auto comm = alg.commutator(alg.gen(i), alg.gen(j));
      rep.add(element_check("relation/" + gs.label(i) + "," + gs.label(j), k++, comm, alg.scalar(C::i() * C(gs.pairing(i, j))), tol));
      rep.add(element_check("star_relation/" + gs.label(i) + "," + gs.label(j), k - 1, alg.star_relation_defect(j, i, true), alg.zero(), tol));
    }
  std::mt19937_64 rng(smp.rng()());
  for (int s = 0; s < n; ++s) {
    auto i = static_cast<std::size_t>(s);
    auto a = random_element(alg, rng, 2), b = random_element(alg, rng, 2), e = random_element(alg, rng, 2);
    rep.add(element_check("associativity", i, alg.product(alg.product(a, b), e), alg.product(a, alg.product(b, e)), tol));
    rep.add(element_check("unit", i, alg.product(alg.one(), a), a, tol));
    Word w;
    for (int l = 0; l < 4; ++l) w.push_back(static_cast<int>(rng() % gs.size()));
    auto direct = alg.word(w);
    auto acc = alg.one();
    for (auto it = w.rbegin(); it != w.rend(); ++it) acc = alg.product(alg.gen(static_cast<std::size_t>(*it)), acc);
    rep.add(element_check("confluence", i, acc, direct, tol));
    rep.add(element_check("d^2=0", i, alg.differential(alg.differential(a)), alg.zero(), tol));
    rep.add(element_check("star_involution", i, alg.star(alg.star(a)), a, tol));
  }
  return static_cast<std::size_t>(n) + gs.size();
}

template <class V>
std::size_t ccr_transport(const SuiteConfig& c, FormSampler<V>& smp, Report& rep) {
  int n = c.count("ccr_transport");
  double tol = tol_for<V>(c);
  std::mt19937_64 rng(smp.rng()());
  std::size_t used = 0;
  auto run = [&](const std::string& name, const ComplexId& src_c, PairingKind src_k, const ComplexId& tgt_c, const std::vector<std::pair<std::string, Form<V>>>& fam,
                 const std::function<Form<V>(const Form<V>&)>& map) {
    auto src = std::make_shared<GeneratorSet<V>>(src_c, src_k, fam);
    auto tgt = std::make_shared<GeneratorSet<V>>(tgt_c, PairingKind::SigmaZero, image_family(fam, map, tol));
    CCRAlgebra<V> as(src), at(tgt);
    bool morphism = true;
    std::string why;
    std::optional<Transport<V>> t;
    try {
      t.emplace(name, as, at, map);
    } catch (const std::invalid_argument& e) {
      morphism = false;
      why = e.what();
    }
    rep.add("poisson_morphism/" + name, 0, morphism ? 0.0 : 1.0, morphism, why);
    if (!t) return;
    // float products reorder through the pairing, so residuals are measured against its scale
    double ptau = 1;
    for (const auto& row : tgt->pairing_matrix())
      for (const auto& x : row) ptau = std::max(ptau, magnitude(x));
    for (int s = 0; s < n; ++s) {
      auto i = static_cast<std::size_t>(s);
      auto a = random_element(as, rng, 2), b = random_element(as, rng, 1);
      auto ta = (*t)(a), tb = (*t)(b);
      double sa = ptau * ta.max_abs(), sab = sa * std::max(1.0, tb.max_abs());
      rep.add(element_check("product/" + name, i, (*t)(as.product(a, b)), at.product(ta, tb), tol, sab));
      rep.add(element_check("star/" + name, i, (*t)(as.star(a)), at.star(ta), tol, sa));
      rep.add(element_check("differential/" + name, i, (*t)(as.differential(a)), at.differential(ta), tol, sa));
    }
    used += fam.size() + static_cast<std::size_t>(n);
  };
  run("pi_*", ComplexId::of(ComplexTag::LinObs), PairingKind::TauZero, ComplexId::of(ComplexTag::B_obs), bulk_generator_family(smp),
      [](const Form<V>& f) { return pi_star(f); });
  auto w = main_bump<V>(c);
  run("kappa", ComplexId::of(ComplexTag::ChiralBoson), PairingKind::UpsilonZero, ComplexId::b_obs(Space::Tubular), boundary_generator_family(smp, 4),
      [w](const Form<V>& f) { return kappa(w, f); });
  return used;
}

inline std::size_t regions_oracle(const SuiteConfig& c, std::uint64_t seed, Report& rep) {
  int n = c.count("regions_oracle");
  rep.merge(regions_oracle_report(c.geometry, Space::Bulk, seed, n));
  rep.merge(regions_oracle_report(c.geometry, Space::Boundary, seed + 1, n));
  return 2 * static_cast<std::size_t>(n);
}

template <class V>
std::size_t reduction_sdr(const SuiteConfig& c, FormSampler<V>& smp, Report& rep) {
  int n = c.count("reduction_sdr");
  auto bulk = members(smp, ComplexId::of(ComplexTag::LinObs), n);
  auto base = members(smp, ComplexId::of(ComplexTag::B_obs), n);
  auto w = main_bump<V>(c);
  Report part = verify_reduction_sdr(w, bulk, base, tol_for<V>(c));
  // records of the base identity index base samples
  for (auto& r : part.records)
    if (!r.pass && r.sample < base.size() && r.identity == "pi*omega*=id") r.detail = form_json(base[r.sample]).dump();
  merge_with_replay(rep, part, bulk);
  for (std::size_t i = 0; i < c.bumps.size(); ++i) {
    auto u = UnitBump<V>::make(c.bumps[i].first, c.bumps[i].second);
    rep.add(scalar_check("unit_bump/total", i, u.total() - from_rational<V>(1), tol_for<V>(c)));
    rep.add(scalar_check("unit_bump/self_moment", i, u.self_moment() - from_rational<V>(Rational(1, 2)), tol_for<V>(c)));
  }
  return bulk.size() + base.size();
}

template <class V>
std::size_t boundary_sdr(const SuiteConfig& c, FormSampler<V>& smp, Report& rep) {
  int n = c.count("boundary_sdr");
  std::vector<Form<V>> fns;
  const auto& g = c.geometry;
  for (int i = 0; i < n; ++i) fns.push_back(Form<V>::function(g, Space::BoundaryCircle, smp.y_factor()));
  auto tub = members(smp, ComplexId::b_obs(Space::Tubular), n);
  Report part = verify_boundary_sdr(main_bump<V>(c), fns, tub, tol_for<V>(c));
  for (auto& r : part.records)
    if (!r.pass && r.sample < fns.size() && r.identity == "lambda*kappa=id") r.detail = form_json(fns[r.sample]).dump();
  merge_with_replay(rep, part, tub);
  return fns.size() + tub.size();
}

template <class V>
std::size_t holonomy(const SuiteConfig& c, Report& rep) {
  if (c.geometry.kind != Kind::Cylinder) throw std::invalid_argument("holonomy: needs geometry cylinder");
  double tol = tol_for<V>(c);
  auto w = main_bump<V>(c);
  for (std::size_t i = 0; i < c.holonomy_alphas.size(); ++i) {
    V alpha = from_rational<V>(c.holonomy_alphas[i]);
    auto h = holonomy_demo(c.geometry, alpha, w);
    std::string a = to_string(c.holonomy_alphas[i]);
    auto pr = scalar_check("holonomy/pairing=-alpha/" + a, i, h.pairing + alpha, tol);
    pr.value = scalar_traits<V>::str(h.pairing);
    rep.add(pr);
    rep.add(scalar_check("holonomy/lambda=1/" + a, i, h.lambda_value - from_rational<V>(1), tol));
    rep.add("holonomy/zigzag/" + a, i, h.zigzag_residual, scalar_traits<V>::exact ? h.zigzag_exact : h.zigzag_residual <= tol);
  }
  return c.holonomy_alphas.size();
}

}  // namespace detail

template <class V>
SuiteResult run_suite(const std::string& name, const SuiteConfig& c) {
  if (!is_suite(name)) throw std::invalid_argument("unknown suite '" + name + "'");
  SuiteResult out{name, scalar_traits<V>::name, 0, {}};
  std::uint64_t seed = derive_seed(c.seed, name);
  FormSampler<V> smp(c.geometry, seed);
  auto& rep = out.report;
  if (name == "greens_identities") out.n_samples = detail::greens_identities(c, smp, rep);
  else if (name == "difference_identity") out.n_samples = detail::difference_identity(c, smp, rep);
  else if (name == "boundary_restriction") out.n_samples = detail::boundary_restriction(c, smp, rep);
  else if (name == "poisson_antisymmetry") out.n_samples = detail::poisson_antisymmetry(c, smp, rep);
  else if (name == "causality") out.n_samples = detail::causality(c, smp, rep);
  else if (name == "naturality") out.n_samples = detail::naturality(c, smp, rep);
  else if (name == "ccr_relations") out.n_samples = detail::ccr_relations(c, smp, rep);
  else if (name == "ccr_transport") out.n_samples = detail::ccr_transport(c, smp, rep);
  else if (name == "regions_oracle") out.n_samples = detail::regions_oracle(c, seed, rep);
  else if (name == "reduction_sdr") out.n_samples = detail::reduction_sdr(c, smp, rep);
  else if (name == "boundary_sdr") out.n_samples = detail::boundary_sdr(c, smp, rep);
  else out.n_samples = detail::holonomy<V>(c, rep);
  return out;
}

inline Json suite_report_json(const SuiteResult& r, const Geometry& g) {
  Json records = Json::array();
  for (const auto& rec : r.report.records) records.push_back(record_json(rec));
  return Json{{"suite", r.suite},
              {"geometry", geometry_json(g)},
              {"chirality", g.chirality_str()},
              {"backend", r.backend},
              {"n_samples", r.n_samples},
              {"max_residual", r.report.max_residual()},
              {"pass", r.report.pass() && !r.report.records.empty()},
              {"records", records}};
}

}  // namespace chiral
