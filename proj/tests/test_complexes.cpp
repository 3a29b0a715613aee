#include <gtest/gtest.h>

#include "chiral/complexes.hpp"
#include "chiral/sampling.hpp"

using namespace chiral;
using Fm = Form<QPi>;
using F = CoeffField<QPi>;

namespace {

std::vector<Geometry> geometries() { return {Geometry::half_space(1), Geometry::cylinder(1), Geometry::half_space(-1), Geometry::cylinder(-1)}; }

F tau_bump(FormSampler<QPi>& smp) { return smp.line_factor(TAU); }

}  // namespace

TEST(Complexes, ShiftsAndSpaces) {
  EXPECT_EQ(ComplexId::of(ComplexTag::LinObs).shift(), 2);
  EXPECT_EQ(ComplexId::of(ComplexTag::ChiralBoson).shift(), 0);
  for (auto t : {ComplexTag::F_M, ComplexTag::F_bd, ComplexTag::L, ComplexTag::F_L_M, ComplexTag::B_obs}) EXPECT_EQ(ComplexId::of(t).shift(), 1);
  EXPECT_EQ(ComplexId::of(ComplexTag::L).space, Space::Boundary);
  EXPECT_EQ(ComplexId::of(ComplexTag::ChiralBoson).max_degree(), 0);
  EXPECT_EQ(ComplexId::b_obs(Space::Tubular).space, Space::Tubular);
  EXPECT_THROW(ComplexId::b_obs(Space::Bulk), std::invalid_argument);
}

TEST(Complexes, SampledMembersBelong) {
  const ComplexTag tags[] = {ComplexTag::F_M, ComplexTag::F_bd, ComplexTag::L, ComplexTag::F_L_M, ComplexTag::LinObs, ComplexTag::B_obs, ComplexTag::ChiralBoson};
  for (const auto& g : geometries()) {
    FormSampler<QPi> smp(g, 23);
    for (auto t : tags) {
      auto c = ComplexId::of(t);
      for (int k = 0; k <= c.max_degree(); ++k)
        for (int n = 0; n < 3; ++n) EXPECT_TRUE(member(c, smp.member_of(c, k))) << c.name() << " degree " << k;
    }
    for (int k = 0; k <= 2; ++k) EXPECT_TRUE(member(ComplexId::b_obs(Space::Tubular), smp.member_of(ComplexId::b_obs(Space::Tubular), k)));
  }
}

TEST(Complexes, BoundaryConditions) {
  for (const auto& g : geometries()) {
    FormSampler<QPi> smp(g, 29);
    auto lin = ComplexId::of(ComplexTag::LinObs);
    auto reach = smp.random_field(Space::Bulk, true);
    auto vanish = reach * smp.vanishing_factor(Space::Bulk);
    auto bump = tau_bump(smp);
    EXPECT_FALSE(member(lin, Fm::function(g, Space::Bulk, reach * bump, 2)));
    EXPECT_TRUE(member(lin, Fm::function(g, Space::Bulk, vanish * bump, 2)));
    EXPECT_FALSE(member(lin, Fm::function(g, Space::Bulk, vanish * bump, 1)));  // wrong shift
    // d tau restricts to the anti-chiral direction, d y to the chiral one
    auto dtau = Fm::make(g, Space::Bulk, 1, 2, {{bit(TAU), reach * bump}});
    auto dy = Fm::make(g, Space::Bulk, 1, 2, {{bit(Y), reach * bump}});
    EXPECT_FALSE(member(lin, dtau));
    EXPECT_TRUE(member(lin, dy));
    EXPECT_TRUE(member(ComplexId::of(ComplexTag::F_M), dtau.with_shift(1)));
    // compact support is required of observables only
    auto spread = Fm::make(g, Space::Bulk, 1, 1, {{bit(Y), F::constant(QPi(1), g.circle())}});
    if (g.kind == Kind::HalfSpace) {
      EXPECT_TRUE(member(ComplexId::of(ComplexTag::F_L_M), spread));
      EXPECT_FALSE(member(lin, spread.with_shift(2)));
    }
    auto b = invariant_chiral_coframe<QPi>(g).with_shift(1);
    EXPECT_TRUE(member(ComplexId::of(ComplexTag::L), b));
    EXPECT_FALSE(member(ComplexId::of(ComplexTag::L), Fm::make(g, Space::Boundary, 1, 1, {{bit(TAU), F::constant(QPi(1), g.circle())}})));
    EXPECT_THROW(member(lin, b), std::invalid_argument);
  }
}

TEST(Complexes, CylinderFormsStayOffTheInnerCircle) {
  auto g = Geometry::cylinder(1);
  FormSampler<QPi> smp(g, 31);
  auto touching = F::from_spline(R, PiecewisePoly<QPi>::bump(Rational(1, 8), Rational(1, 2), QPi(1)), true) * tau_bump(smp);
  EXPECT_FALSE(member(ComplexId::of(ComplexTag::F_M), Fm::make(g, Space::Bulk, 3, 1, {{7u, touching}})));
  auto inside = F::from_spline(R, PiecewisePoly<QPi>::bump(Rational(1, 2), Rational(3, 4), QPi(1)), true) * tau_bump(smp);
  EXPECT_TRUE(member(ComplexId::of(ComplexTag::F_M), Fm::make(g, Space::Bulk, 3, 1, {{7u, inside}})));
}

TEST(Complexes, RegionRestriction) {
  auto g = Geometry::half_space(1);
  FormSampler<QPi> smp(g, 37);
  Box b{Interval::open(Rational(-1), Rational(1)), Interval::open(Rational(0), Rational(1)), Interval::open(Rational(1, 4), Rational(1))};
  Region u(Space::Bulk, false, {b});
  auto f = smp.form_in(Space::Bulk, 3, 2, b);
  auto c = ComplexId::of(ComplexTag::LinObs).on(u);
  EXPECT_TRUE(member(c, f));
  Box far = b;
  far[TAU] = Interval::open(Rational(3), Rational(4));
  EXPECT_FALSE(member(c, smp.form_in(Space::Bulk, 3, 2, far)));
}

TEST(Complexes, BoundaryOperator) {
  auto g = Geometry::cylinder(-1);
  FormSampler<QPi> smp(g, 41);
  auto c = ComplexId::of(ComplexTag::F_M);
  HomCochain<QPi> dd{"d", 1, c, c, [](const Fm& f) { return d(f); }};
  HomCochain<QPi> scale{"2", 0, c, c, [](const Fm& f) { return f * QPi(2); }};
  for (int k = 0; k <= 3; ++k) {
    auto x = smp.member_of(c, k);
    EXPECT_TRUE(boundary_op(identity_map<QPi>(c), x).is_zero());
    EXPECT_TRUE(boundary_op(scale, x).is_zero());
    // [d, d] = 2 d^2 = 0 with the graded sign
    EXPECT_TRUE(boundary_op(dd, x).is_zero());
    EXPECT_EQ(compose(scale, dd)(x), d(x) * QPi(2));
    EXPECT_EQ(linear_combination<QPi>("s", scale, QPi(1), identity_map<QPi>(c), QPi(-2))(x), Fm(g, Space::Bulk, k, 1));
  }
  HomCochain<QPi> wrong{"d", 0, c, c, [](const Fm& f) { return d(f); }};
  EXPECT_THROW(boundary_op(wrong, smp.member_of(c, 1)), DegreeError);
  auto boson = ComplexId::of(ComplexTag::ChiralBoson);
  EXPECT_TRUE(differential(boson, smp.member_of(boson, 0)).is_zero());
}

TEST(Complexes, CohomologyOfSmallComplexes) {
  auto g = Geometry::half_space(1);
  FormSampler<QPi> smp(g, 43);
  auto c = ComplexId::of(ComplexTag::F_M);
  auto f = smp.member_of(c, 0);
  auto extra = Fm::make(g, Space::Bulk, 1, 1, {{bit(TAU), smp.random_field(Space::Bulk, false)}});
  // cohomological degrees: functions sit in -1, one-forms in 0
  std::map<int, std::vector<Fm>> basis{{-1, {f}}, {0, {d(f)}}};
  auto h = cohomology_small(basis, c);
  EXPECT_EQ(h[-1], 0);
  EXPECT_EQ(h[0], 0);
  // d(extra) is missing from the basis
  EXPECT_THROW(cohomology_small(std::map<int, std::vector<Fm>>{{0, {extra}}}, c), std::invalid_argument);
  std::map<int, std::vector<Fm>> with_closed{{-1, {f}}, {0, {d(f), d(extra)}}};
  EXPECT_EQ(cohomology_small(with_closed, c)[0], 1);
}

TEST(Complexes, CohomologyFromMatrices) {
  // triangle: three vertices, three edges
  std::vector<std::vector<double>> d0{{-1, 1, 0}, {0, -1, 1}, {1, 0, -1}};
  auto h = cohomology_matrices<double>({{0, 3}, {1, 3}}, {{0, d0}});
  EXPECT_EQ(h[0], 1);
  EXPECT_EQ(h[1], 1);
  // filled triangle
  std::vector<std::vector<double>> d1{{1, 1, 1}};
  auto filled = cohomology_matrices<double>({{0, 3}, {1, 3}, {2, 1}}, {{0, d0}, {1, d1}});
  EXPECT_EQ(filled[1], 0);
  EXPECT_EQ(filled[2], 0);
  std::vector<std::vector<double>> bad{{1, 0, 0}};
  EXPECT_THROW(cohomology_matrices<double>({{0, 3}, {1, 3}, {2, 1}}, {{0, d0}, {1, bad}}), std::invalid_argument);
}
