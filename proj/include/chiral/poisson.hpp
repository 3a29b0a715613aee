#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "greens.hpp"
#include "regions.hpp"
#include "report.hpp"
#include "sampling.hpp"

namespace chiral {

enum class PairingKind { Ev, TauShifted, TauZero, SigmaZero, UpsilonZero };

inline const char* pairing_name(PairingKind k) {
  switch (k) {
    case PairingKind::Ev: return "ev";
    case PairingKind::TauShifted: return "tau_-1";
    case PairingKind::TauZero: return "tau_0";
    case PairingKind::SigmaZero: return "sigma_0";
    case PairingKind::UpsilonZero: return "upsilon_0";
  }
  return "?";
}

// Total cohomological degree on which the pairing can be nonzero.
inline int pairing_target_degree(PairingKind k) { return k == PairingKind::TauShifted ? -1 : 0; }

struct Pairing {
  PairingKind kind = PairingKind::TauZero;
  std::optional<Region> region;
};

template <class V>
struct PairValue {
  V value;
  std::optional<V> base_route;  // second evaluation of tau_0 through the base
};

namespace detail {

template <class V>
void check_region(const Pairing& p, const Form<V>& a) {
  if (!p.region || a.is_zero()) return;
  if (a.space() != p.region->space()) throw std::invalid_argument("pairing region lives on a different space");
  if (!region_subset(support_region(a), *p.region)) throw SupportViolation("support violation");
}

}  // namespace detail

template <class V>
V ev(const Form<V>& phi, const Form<V>& alpha) {
  return integrate(wedge(phi, alpha)) * from_rational<V>(parity_sign(phi.cohomological_degree() + 1));
}

template <class V>
V tau_shifted(const Form<V>& phi, const Form<V>& psi) {
  return integrate(wedge(phi, psi));
}

// Definition route: (-1)^{|phi|} int phi ^ (G_up psi - G_down psi), unshifted G.
template <class V>
V tau_zero_definition(const Form<V>& phi, const Form<V>& psi) {
  if (psi.degree() == 0) return from_rational<V>(0);
  auto diff = greens_unshifted(Flow::Forward, psi) - greens_unshifted(Flow::Backward, psi);
  return integrate(wedge(phi, diff)) * from_rational<V>(parity_sign(phi.cohomological_degree()));
}

template <class V>
V sigma_zero(const Form<V>& a, const Form<V>& b) {
  return integrate(wedge(a, b)) * from_rational<V>(parity_sign(a.cohomological_degree()));
}

// Base route for tau_0: sigma_0 of the pushforwards.
template <class V>
V tau_zero_base(const Form<V>& phi, const Form<V>& psi) {
  if (phi.degree() == 0 || psi.degree() == 0) return from_rational<V>(0);
  return sigma_zero(fiber_integrate(phi, TAU, Fiber::Full), fiber_integrate(psi, TAU, Fiber::Full));
}

// -int_W phi d psi for boundary-circle functions.
template <class V>
V upsilon_zero(const Form<V>& phi, const Form<V>& psi) {
  if (phi.degree() != 0 || psi.degree() != 0) return from_rational<V>(0);
  return -integrate(wedge(phi, d(psi.with_shift(0))));
}

template <class V>
PairValue<V> pair(const Pairing& p, const Form<V>& a, const Form<V>& b) {
  detail::check_region(p, a);
  detail::check_region(p, b);
  V zero = from_rational<V>(0);
  int total = a.cohomological_degree() + b.cohomological_degree();
  if (p.kind == PairingKind::Ev) {
    // a compactly supported observable, b a field
    if (total != 0) return {zero, std::nullopt};
    return {ev(a, b), std::nullopt};
  }
  if (total != pairing_target_degree(p.kind)) {
    if (p.kind == PairingKind::TauZero) return {zero, zero};
    return {zero, std::nullopt};
  }
  switch (p.kind) {
    case PairingKind::TauShifted: return {tau_shifted(a, b), std::nullopt};
    case PairingKind::TauZero: return {tau_zero_definition(a, b), tau_zero_base(a, b)};
    case PairingKind::SigmaZero: return {sigma_zero(a, b), std::nullopt};
    case PairingKind::UpsilonZero: return {upsilon_zero(a, b), std::nullopt};
    default: break;
  }
  return {zero, std::nullopt};
}

template <class V>
V pair_value(const Pairing& p, const Form<V>& a, const Form<V>& b) {
  return pair(p, a, b).value;
}

// p(a,b) + (-1)^{|a||b|} p(b,a) on each pair, plus agreement of the two tau_0 routes.
template <class V>
Report check_antisymmetry(const Pairing& p, const std::vector<std::pair<Form<V>, Form<V>>>& samples, double tol) {
  Report rep;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& [a, b] = samples[i];
    auto ab = pair(p, a, b);
    auto ba = pair(p, b, a);
    V s = from_rational<V>(parity_sign(a.cohomological_degree() * b.cohomological_degree()));
    double scale = a.max_abs() * b.max_abs();
    rep.add(scalar_check(std::string("antisymmetry/") + pairing_name(p.kind), i, ab.value + s * ba.value, tol, scale));
    if (ab.base_route) rep.add(scalar_check(std::string("two_routes/") + pairing_name(p.kind), i, ab.value - *ab.base_route, tol, scale));
  }
  return rep;
}

// Observables supported in disjoint regions pair to zero.
template <class V>
Report check_causality(const Pairing& p, const Region& u1, const Region& u2, const std::vector<std::pair<Form<V>, Form<V>>>& samples,
                       double tol) {
  if (!is_disjoint(u1, u2)) throw std::invalid_argument("regions are not disjoint");
  Report rep;
  Pairing p1 = p, p2 = p;
  p1.region = u1;
  p2.region = u2;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& [a, b] = samples[i];
    detail::check_region(p1, a);
    detail::check_region(p2, b);
    Pairing global = p;
    global.region.reset();
    auto v = pair(global, a, b);
    double scale = a.max_abs() * b.max_abs();
    rep.add(scalar_check(std::string("causality/") + pairing_name(p.kind), i, v.value, tol, scale));
    if (v.base_route) rep.add(scalar_check(std::string("causality_base/") + pairing_name(p.kind), i, *v.base_route, tol, scale));
  }
  return rep;
}

// Pairing in U agrees with the pairing in U' after extension by zero; `chain` lists U in U' in U'' ...
template <class V>
Report check_naturality(const Pairing& p, const std::vector<Region>& chain, const std::vector<std::pair<Form<V>, Form<V>>>& samples,
                        double tol) {
  if (chain.empty()) throw std::invalid_argument("naturality needs at least one region");
  Report rep;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto a = samples[i].first, b = samples[i].second;
    Pairing base = p;
    base.region = chain.front();
    V v0 = pair(base, a, b).value;
    double scale = a.max_abs() * b.max_abs();
    for (std::size_t k = 1; k < chain.size(); ++k) {
      a = ext(a, chain[k - 1], chain[k]);
      b = ext(b, chain[k - 1], chain[k]);
      Pairing pk = p;
      pk.region = chain[k];
      rep.add(scalar_check(std::string("naturality/") + pairing_name(p.kind) + "/" + std::to_string(k), i, pair(pk, a, b).value - v0, tol, scale));
    }
  }
  return rep;
}

// ev(d phi, alpha) + (-1)^{|phi|} ev(phi, d alpha) for compactly supported phi and conditioned alpha.
template <class V>
Report check_ev_cochain(const std::vector<std::pair<Form<V>, Form<V>>>& samples, double tol) {
  Report rep;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& [phi, alpha] = samples[i];
    V r = ev(d(phi), alpha) + from_rational<V>(parity_sign(phi.cohomological_degree())) * ev(phi, d(alpha));
    rep.add(scalar_check("ev_cochain_map", i, r, tol, phi.max_abs() * alpha.max_abs()));
  }
  return rep;
}

// Random LinObs pairs whose degrees make tau_0 admissible.
template <class V>
std::vector<std::pair<Form<V>, Form<V>>> tau_zero_pairs(FormSampler<V>& smp, int n) {
  std::vector<std::pair<Form<V>, Form<V>>> out;
  auto c = ComplexId::of(ComplexTag::LinObs);
  for (int i = 0; i < n; ++i) {
    int p = static_cast<int>(smp.uniform(1, 3));
    out.emplace_back(smp.member_of(c, p), smp.member_of(c, 4 - p));
  }
  return out;
}

}  // namespace chiral
