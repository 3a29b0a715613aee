#include <gtest/gtest.h>

#include <cmath>

#include "chiral/form.hpp"
#include "chiral/regions.hpp"
#include "chiral/sampling.hpp"

using namespace chiral;
using Fm = Form<QPi>;
using F = CoeffField<QPi>;

namespace {

const Space kSpaces[] = {Space::Bulk, Space::Base, Space::Boundary, Space::BoundaryCircle, Space::Tubular};

std::vector<Geometry> geometries() { return {Geometry::half_space(1), Geometry::cylinder(1), Geometry::half_space(-1), Geometry::cylinder(-1)}; }

F tau_bump(bool circle) { return F::from_spline(TAU, PiecewisePoly<QPi>::bump(Rational(0), Rational(1), QPi(30)), circle); }

// Midpoint-rule integral of a top-degree bulk component over a box.
double quadrature(const F& f, std::array<double, 3> lo, std::array<double, 3> hi, int n) {
  double h0 = (hi[0] - lo[0]) / n, h1 = (hi[1] - lo[1]) / n, h2 = (hi[2] - lo[2]) / n;
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s += f.sample({lo[0] + (i + 0.5) * h0, lo[1] + (j + 0.5) * h1, lo[2] + (k + 0.5) * h2});
  return s * h0 * h1 * h2;
}

}  // namespace

TEST(Forms, DSquaredVanishesOnEverySpace) {
  for (const auto& g : geometries()) {
    FormSampler<QPi> smp(g, 11);
    for (Space s : kSpaces)
      for (int i = 0; i < 10; ++i) {
        int deg = static_cast<int>(smp.uniform(0, space_dim(s)));
        auto a = smp.form(s, deg, static_cast<int>(smp.uniform(0, 2)));
        EXPECT_TRUE(d(d(a)).is_zero());
      }
  }
}

TEST(Forms, ShiftedDifferentialOnGhostIsMinusD) {
  auto g = Geometry::cylinder(1);
  FormSampler<QPi> smp(g, 3);
  auto c = smp.form(Space::Bulk, 0, 1);
  EXPECT_EQ(c.cohomological_degree(), -1);
  EXPECT_EQ(d(c), -d(c.with_shift(0)).with_shift(1));
}

TEST(Forms, DerivativeMatchesFiniteDifferences) {
  auto g = Geometry::half_space(1);
  auto b = Fm::function(g, Space::Bulk, tau_bump(false) * F::from_spline(Y, PiecewisePoly<QPi>::bump(Rational(-1), Rational(1), QPi(1))));
  auto db = d(b);
  const double h = 1e-5;
  for (int i = 0; i < 20; ++i) {
    double t = -0.2 + 0.07 * i, y = 0.3 - 0.05 * i;
    double fd = (b.component(0).sample({t + h, y, 0}) - b.component(0).sample({t - h, y, 0})) / (2 * h);
    EXPECT_NEAR(db.component(bit(TAU)).sample({t, y, 0}), fd, 1e-6);
  }
}

TEST(Forms, OddFormsSquareToZeroAndWedgeIsGradedCommutative) {
  for (const auto& g : geometries()) {
    FormSampler<QPi> smp(g, 5);
    for (int i = 0; i < 10; ++i) {
      auto a = smp.form(Space::Bulk, 1, 0);
      EXPECT_TRUE(wedge(a, a).is_zero());
      int p = static_cast<int>(smp.uniform(0, 2)), q = static_cast<int>(smp.uniform(0, 3 - p));
      auto x = smp.form(Space::Bulk, p, 0), y = smp.form(Space::Bulk, q, 0);
      EXPECT_EQ(wedge(x, y), wedge(y, x) * QPi(parity_sign(p * q)));
    }
  }
}

TEST(Forms, WedgeCoefficientIsPointwiseProduct) {
  auto g = Geometry::cylinder(1);
  FormSampler<QPi> smp(g, 8);
  auto f = smp.random_field(Space::Bulk, true), h = smp.random_field(Space::Bulk, true);
  auto a = Fm::make(g, Space::Bulk, 1, 0, {{bit(TAU), f}});
  auto b = Fm::make(g, Space::Bulk, 2, 0, {{bit(Y) | bit(R), h}});
  auto w = wedge(a, b).component(7u);
  for (int i = 0; i < 50; ++i) {
    std::array<double, 3> x{-2 + 0.08 * i, 0.02 * i, 0.6 + 0.008 * i};
    EXPECT_NEAR(w.sample(x), f.sample(x) * h.sample(x), 1e-6 * (1 + std::fabs(f.sample(x) * h.sample(x))));
  }
}

TEST(Forms, SignedPairingIsGradedAntisymmetric) {
  auto g = Geometry::half_space(-1);
  FormSampler<QPi> smp(g, 9);
  for (int i = 0; i < 10; ++i) {
    int p = static_cast<int>(smp.uniform(0, 3));
    auto a = smp.form(Space::Bulk, p, 1), b = smp.form(Space::Bulk, 3 - p, 1);
    int sa = a.cohomological_degree(), sb = b.cohomological_degree();
    EXPECT_EQ(integrate(signed_wedge(a, b)), -integrate(signed_wedge(b, a)) * QPi(parity_sign(sa * sb)));
  }
}

TEST(Forms, WedgeIsAssociativeAndLeibniz) {
  for (const auto& g : geometries()) {
    FormSampler<QPi> smp(g, 13);
    for (int i = 0; i < 8; ++i) {
      auto a = smp.form(Space::Bulk, static_cast<int>(smp.uniform(0, 1)), 0);
      auto b = smp.form(Space::Bulk, 1, 0);
      auto c = smp.form(Space::Bulk, static_cast<int>(smp.uniform(0, 1)), 0);
      EXPECT_EQ(wedge(wedge(a, b), c), wedge(a, wedge(b, c)));
      EXPECT_EQ(d(wedge(a, b)), wedge(d(a), b) + wedge(a, d(b)) * QPi(parity_sign(a.degree())));
    }
  }
}

TEST(Forms, BoundaryRestriction) {
  auto g = Geometry::cylinder(1);
  auto dr = Fm::make(g, Space::Bulk, 1, 0, {{bit(R), F::constant(QPi(1), true)}});
  EXPECT_TRUE(boundary_restrict(dr).is_zero());
  FormSampler<QPi> smp(g, 17);
  auto f = smp.random_field(Space::Bulk, true);
  auto a = Fm::make(g, Space::Bulk, 1, 0, {{bit(TAU), f}});
  auto ia = boundary_restrict(a);
  for (double t : {-1.0, 0.1, 0.7})
    for (double y : {0.0, 0.4})
      EXPECT_NEAR(ia.component(bit(TAU)).sample({t, y, 0}), f.sample({t, y, 1.0 - 1e-12}), 1e-6);
  for (const auto& gg : geometries()) {
    FormSampler<QPi> s2(gg, 19);
    for (int i = 0; i < 10; ++i) {
      auto x = s2.form(Space::Bulk, static_cast<int>(s2.uniform(0, 2)), 1);
      EXPECT_EQ(boundary_restrict(d(x)), d(boundary_restrict(x)));
    }
  }
}

TEST(Forms, CircleNormalizationAndBumpIntegral) {
  auto g = Geometry::cylinder(1);
  auto dchi = Fm::make(g, Space::BoundaryCircle, 1, 0, {{bit(Y), F::constant(QPi(1), true)}});
  EXPECT_EQ(integrate(dchi), QPi(1));
  auto vol = Fm::make(g, Space::Bulk, 3, 0, {{7u, tau_bump(true)}});
  EXPECT_EQ(integrate(vol), QPi(1) - QPi(g.inner_radius));
  EXPECT_EQ(integrate(Fm(g, Space::Bulk, 2, 0)), QPi(0));
}

TEST(Forms, StokesWithBoundaryTerm) {
  for (const auto& g : geometries()) {
    FormSampler<QPi> smp(g, 23);
    for (int i = 0; i < 8; ++i) {
      int p = static_cast<int>(smp.uniform(0, 2));
      auto a = smp.form(Space::Bulk, p, 0), b = smp.form(Space::Bulk, 2 - p, 0);
      auto lhs = integrate(d(wedge(a, b)));
      auto rhs = integrate(wedge(boundary_restrict(a), boundary_restrict(b)));
      // outward normal first: the boundary orientation makes the signs agree
      EXPECT_EQ(lhs, rhs);
    }
  }
}

TEST(Forms, ExtensionByZeroKeepsFormAndIntegral) {
  auto g = Geometry::half_space(1);
  auto vol = Fm::make(g, Space::Bulk, 3, 0,
                      {{7u, tau_bump(false) * F::from_spline(Y, PiecewisePoly<QPi>::bump(Rational(0), Rational(1), QPi(30))) *
                                F::from_spline(R, PiecewisePoly<QPi>::bump(Rational(1), Rational(2), QPi(30)))}});
  Box inner{Interval::open(Rational(-1), Rational(2)), Interval::open(Rational(-1), Rational(2)), Interval::open(Rational(0), Rational(3))};
  Box outer{Interval::open(Rational(-2), Rational(3)), Interval::open(Rational(-2), Rational(3)), Interval::open(Rational(0), Rational(4))};
  Region u(Space::Bulk, false, {inner}), up(Space::Bulk, false, {outer});
  EXPECT_EQ(ext(vol, u, u), vol);
  EXPECT_EQ(ext(ext(vol, u, up), up, up), ext(vol, u, up));
  EXPECT_EQ(integrate(ext(vol, u, up)), integrate(vol));
  double q = quadrature(vol.component(7u), {0, 0, 1}, {1, 1, 2}, 40);
  EXPECT_NEAR(q, QPi(1).to_double() * g.orientation(Space::Bulk), 1e-3);
  Box tiny{Interval::open(Rational(0), Rational(1, 2)), Interval::all(), Interval::all()};
  EXPECT_THROW(ext(vol, Region(Space::Bulk, false, {tiny}), up), SupportViolation);
}

TEST(Forms, FiberIntegration) {
  auto g = Geometry::cylinder(1);
  FormSampler<QPi> smp(g, 29);
  auto psi = Fm::make(g, Space::Bulk, 2, 1, {{bit(Y) | bit(R), smp.random_field(Space::Bulk, false)}});
  EXPECT_TRUE(fiber_integrate(psi, TAU, Fiber::FromMinusInfinity).is_zero());
  auto f = tau_bump(true);
  auto phi = Fm::make(g, Space::Bulk, 1, 0, {{bit(TAU), f}});
  auto up = fiber_integrate(phi, TAU, Fiber::FromMinusInfinity);
  EXPECT_EQ(up.component(0), f.antiderivative(TAU, F::Anchor::MinusInfinity));
  EXPECT_EQ(up.component(0).restrict(TAU, Rational(2)), F::constant(QPi(1), true));
  // fiber-wise Stokes: d of the cumulative integral recovers the form
  EXPECT_EQ(d(up), phi);
  EXPECT_THROW(fiber_integrate(Fm(g, Space::Base, 1), TAU, Fiber::Full), std::invalid_argument);
}

TEST(Forms, ProjectionFormulaAndFubini) {
  for (const auto& g : geometries()) {
    FormSampler<QPi> smp(g, 31);
    for (int i = 0; i < 8; ++i) {
      int p = static_cast<int>(smp.uniform(1, 2));
      auto a = smp.form(Space::Bulk, p, 0);
      auto b = smp.form(Space::Base, 3 - p, 0);
      auto pb = pullback_projection(b, Space::Bulk);
      EXPECT_EQ(fiber_integrate(wedge(a, pb), TAU, Fiber::Full).with_shift(0), wedge(fiber_integrate(a, TAU, Fiber::Full).with_shift(0), b));
      EXPECT_EQ(integrate(wedge(a, pb)), integrate(wedge(fiber_integrate(a, TAU, Fiber::Full).with_shift(0), b)));
    }
  }
}
