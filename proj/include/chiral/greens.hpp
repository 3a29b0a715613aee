#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "complexes.hpp"
#include "form.hpp"
#include "regions.hpp"
#include "report.hpp"

namespace chiral {

enum class Flow { Forward, Backward };

inline const char* flow_name(Flow f) { return f == Flow::Forward ? "G_up" : "G_down"; }

// Unshifted Green's homotopy: f d tau ^ phi -> (int_{-inf}^tau f) phi, or -(int_tau^inf f) phi;
// forms without a d tau leg map to zero.
template <class V>
Form<V> greens_unshifted(Flow dir, const Form<V>& a) {
  if (!(a.dims() & bit(TAU))) throw std::invalid_argument("Green's homotopy needs a flow direction");
  if (!a.compactly_supported()) throw std::domain_error("Green's homotopy needs compact support");
  if (a.degree() == 0) return Form<V>(a.geometry(), a.space(), 0, a.shift());
  if (dir == Flow::Forward) return fiber_integrate(a, TAU, Fiber::FromMinusInfinity);
  return -fiber_integrate(a, TAU, Fiber::ToPlusInfinity);
}

// Green's homotopy on the shifted complex: G_[k] = (-1)^k G with k the shift of the input.
template <class V>
Form<V> greens_apply(Flow dir, const Form<V>& a) {
  return greens_unshifted(dir, a) * from_rational<V>(parity_sign(a.shift()));
}

// The operator on a complex of compactly supported sections into all sections.
template <class V>
HomCochain<V> greens_cochain(Flow dir, const ComplexId& source) {
  ComplexId target = source;
  if (target.tag == ComplexTag::LinObs) target.tag = ComplexTag::F_L_M;
  return {flow_name(dir), -1, source, target, [dir](const Form<V>& f) { return greens_apply(dir, f); }};
}

// residual of dG - (-1)^{-1} G d - j on each sample
template <class V>
Report verify_homotopy_identity(Flow dir, const ComplexId& c, const std::vector<Form<V>>& samples, double tol) {
  Report rep;
  auto g = greens_cochain<V>(dir, c);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto res = boundary_op(g, samples[i]) - samples[i];
    rep.add(zero_check(std::string("dG=j/") + flow_name(dir) + "/" + space_name(c.space), i, res, tol, samples[i].max_abs()));
  }
  return rep;
}

// pi^* pi_* along the flow direction, back on the original space and shift.
template <class V>
Form<V> pullback_pushforward(const Form<V>& a) {
  auto p = fiber_integrate(a, TAU, Fiber::Full);
  return pullback_projection(p, a.space()).with_shift(a.shift());
}

template <class V>
Report verify_difference_identity(const std::vector<Form<V>>& samples, double tol) {
  Report rep;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& a = samples[i];
    auto lhs = greens_unshifted(Flow::Forward, a) - greens_unshifted(Flow::Backward, a);
    auto res = lhs - pullback_pushforward(a);
    rep.add(zero_check(std::string("Gup-Gdown=pi*pi_*/") + space_name(a.space()), i, res, tol, a.max_abs()));
  }
  return rep;
}

// Support of G(a) stays inside the causal future (or past) of the support hull of a.
template <class V>
Report verify_support_property(Flow dir, const std::vector<Form<V>>& samples) {
  Report rep;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto hull = support_hull(samples[i]);
    auto [up, down] = j_sets(hull);
    auto out = support_region(greens_unshifted(dir, samples[i]));
    bool ok = out.empty() || region_subset(out, dir == Flow::Forward ? up : down);
    rep.add(std::string("supp(G)_in_J/") + flow_name(dir), i, ok ? 0.0 : 1.0, ok);
  }
  return rep;
}

// On boundary samples of the conditioned complex, G lands back in the condition.
template <class V>
Report verify_boundary_condition_restriction(Flow dir, const std::vector<Form<V>>& boundary_samples, double tol) {
  Report rep;
  for (std::size_t i = 0; i < boundary_samples.size(); ++i) {
    auto out = greens_apply(dir, boundary_samples[i]);
    bool ok = out.is_zero() || member(ComplexId::of(ComplexTag::L), out, tol * std::max(1.0, boundary_samples[i].max_abs()));
    rep.add(std::string("G(L_c)_in_L/") + flow_name(dir), i, ok ? 0.0 : std::max(out.max_abs(), 1.0), ok);
  }
  return rep;
}

// iota^* G_bulk = G_boundary iota^*.
template <class V>
Report verify_bulk_boundary_compatibility(Flow dir, const std::vector<Form<V>>& bulk_samples, double tol) {
  Report rep;
  for (std::size_t i = 0; i < bulk_samples.size(); ++i) {
    const auto& a = bulk_samples[i];
    auto lhs = boundary_restrict(greens_apply(dir, a));
    auto rhs = greens_apply(dir, boundary_restrict(a));
    rep.add(zero_check(std::string("i*G=Gi*/") + flow_name(dir), i, lhs - rhs, tol, a.max_abs()));
  }
  return rep;
}

}  // namespace chiral
