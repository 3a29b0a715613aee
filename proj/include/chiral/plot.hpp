#pragma once

#include <iomanip>
#include <map>
#include <sstream>
#include <string>

#include "config.hpp"
#include "greens.hpp"
#include "reduction.hpp"

namespace chiral {

namespace plot_detail {

inline std::ostringstream csv_stream() {
  std::ostringstream os;
  os << std::setprecision(12);
  return os;
}

// G_up of w(tau) phi(y) psi(r) d tau along the tau axis through the peak of phi psi, next to the
// cumulative integral of w times phi psi.
template <class V>
std::string greens_profile(const ScenarioConfig& c) {
  const auto& g = c.suite.geometry;
  auto w = detail::main_bump<V>(c.suite);
  auto phi = PiecewisePoly<V>::unit_bspline(Rational(0), Rational(1, 2));
  auto psi = PiecewisePoly<V>::unit_bspline(Rational(1, 2), Rational(1));
  auto f = CoeffField<V>::from_spline(TAU, w.density, g.circle()) * CoeffField<V>::from_spline(Y, phi, g.circle()) * CoeffField<V>::from_spline(R, psi, g.circle());
  auto a = Form<V>::make(g, Space::Bulk, 1, 1, {{bit(TAU), f}});
  auto up = greens_unshifted(Flow::Forward, a);
  double y0 = 0.25, r0 = 0.75;
  double peak = phi.eval_double(y0) * psi.eval_double(r0);
  auto os = csv_stream();
  os << "tau,density,G_up,cumulative\n";
  double lo = w.a.get_d() - 0.25, hi = w.b.get_d() + 0.25;
  for (int i = 0; i <= 64; ++i) {
    double t = lo + (hi - lo) * i / 64.0;
    os << t << "," << w.density.eval_double(t) * peak << "," << up.component(0).sample({t, y0, r0}) << "," << w.from_left.eval_double(t) * peak << "\n";
  }
  return os.str();
}

// Physical components of the invariant self-dual forms of both chiralities over a boundary grid.
template <class V>
std::string beta_components(const ScenarioConfig& c) {
  const auto& g = c.suite.geometry;
  auto with = [&](int e) { return g.kind == Kind::HalfSpace ? Geometry::half_space(e) : Geometry::cylinder(e, g.inner_radius); };
  auto bp = invariant_chiral_coframe<V>(with(1)), bm = invariant_chiral_coframe<V>(with(-1));
  auto os = csv_stream();
  os << "tau,y,beta_plus_t,beta_plus_x,beta_minus_t,beta_minus_x\n";
  for (int i = 0; i <= 8; ++i)
    for (int k = 0; k <= 8; ++k) {
      double t = -1 + i / 4.0, y = k / 8.0;
      auto p = physical_components(bp, t, y), m = physical_components(bm, t, y);
      os << t << "," << y << "," << p[0] << "," << p[1] << "," << m[0] << "," << m[1] << "\n";
    }
  return os.str();
}

}  // namespace plot_detail

// File name -> CSV text for every plot selected in the config.
template <class V>
std::map<std::string, std::string> plot_tables(const ScenarioConfig& c) {
  std::map<std::string, std::string> out;
  for (const auto& p : c.plots) {
    if (p == "greens_profile") out["greens_profile.csv"] = plot_detail::greens_profile<V>(c);
    if (p == "beta") out["beta.csv"] = plot_detail::beta_components<V>(c);
    if (p == "holonomy") {
      auto w = detail::main_bump<V>(c.suite);
      out["holonomy.csv"] = holonomy_demo(c.suite.geometry, from_rational<V>(1), w).csv;
    }
  }
  return out;
}

}  // namespace chiral
