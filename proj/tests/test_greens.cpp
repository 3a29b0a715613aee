#include <gtest/gtest.h>

#include "chiral/greens.hpp"
#include "chiral/sampling.hpp"

using namespace chiral;
using Fm = Form<QPi>;
using F = CoeffField<QPi>;

namespace {

std::vector<Geometry> geometries() { return {Geometry::half_space(1), Geometry::cylinder(1), Geometry::half_space(-1), Geometry::cylinder(-1)}; }

std::vector<Fm> samples(FormSampler<QPi>& smp, const ComplexId& c, int n) {
  std::vector<Fm> out;
  for (int i = 0; i < n; ++i) out.push_back(smp.member_of(c, static_cast<int>(smp.uniform(0, space_dim(c.space)))));
  return out;
}

}  // namespace

TEST(Greens, HomotopyIdentityOnBulkAndBoundary) {
  for (const auto& g : geometries()) {
    FormSampler<QPi> smp(g, 41);
    for (auto tag : {ComplexTag::F_M, ComplexTag::LinObs, ComplexTag::F_bd}) {
      auto c = ComplexId::of(tag);
      auto xs = samples(smp, c, 8);
      for (Flow f : {Flow::Forward, Flow::Backward}) {
        auto rep = verify_homotopy_identity(f, c, xs, 0.0);
        EXPECT_TRUE(rep.pass()) << g.name() << " " << c.name() << " " << flow_name(f);
      }
    }
  }
}

TEST(Greens, DifferenceIsPullbackOfPushforward) {
  for (const auto& g : geometries()) {
    FormSampler<QPi> smp(g, 43);
    auto xs = samples(smp, ComplexId::of(ComplexTag::F_M), 8);
    auto bs = samples(smp, ComplexId::of(ComplexTag::F_bd), 8);
    EXPECT_TRUE(verify_difference_identity(xs, 0.0).pass());
    EXPECT_TRUE(verify_difference_identity(bs, 0.0).pass());
  }
}

TEST(Greens, CumulativeIntegralOfBump) {
  auto g = Geometry::half_space(1);
  auto f = F::from_spline(TAU, PiecewisePoly<QPi>::bump(Rational(0), Rational(1), QPi(30)));
  auto yr = F::from_spline(Y, PiecewisePoly<QPi>::bump(Rational(0), Rational(1), QPi(30))) *
            F::from_spline(R, PiecewisePoly<QPi>::bump(Rational(0), Rational(1), QPi(30)));
  auto a = Fm::make(g, Space::Bulk, 1, 0, {{bit(TAU), f * yr}});
  auto up = greens_unshifted(Flow::Forward, a);
  auto down = greens_unshifted(Flow::Backward, a);
  EXPECT_TRUE(up.component(0).restrict(TAU, Rational(-1)).is_zero());
  EXPECT_EQ(up.component(0).restrict(TAU, Rational(2)), yr.restrict(TAU, Rational(0)));
  EXPECT_EQ(down.component(0).restrict(TAU, Rational(-1)), -yr.restrict(TAU, Rational(0)));
  EXPECT_TRUE(down.component(0).restrict(TAU, Rational(2)).is_zero());
  // shifted by one the sign flips
  EXPECT_EQ(greens_apply(Flow::Forward, a.with_shift(1)), -up.with_shift(1));
  auto dy = Fm::make(g, Space::Bulk, 1, 0, {{bit(Y), f * yr}});
  EXPECT_TRUE(greens_unshifted(Flow::Forward, dy).is_zero());
}

TEST(Greens, RejectsNonCompactInput) {
  auto g = Geometry::half_space(1);
  auto a = Fm::make(g, Space::Bulk, 1, 0, {{bit(TAU), F::constant(QPi(1))}});
  EXPECT_THROW(greens_unshifted(Flow::Forward, a), std::domain_error);
  EXPECT_THROW(greens_unshifted(Flow::Forward, Fm(g, Space::BoundaryCircle, 0)), std::invalid_argument);
}

TEST(Greens, SupportStaysInCausalSet) {
  for (const auto& g : geometries()) {
    FormSampler<QPi> smp(g, 47);
    auto xs = samples(smp, ComplexId::of(ComplexTag::F_M), 8);
    for (Flow f : {Flow::Forward, Flow::Backward}) EXPECT_TRUE(verify_support_property(f, xs).pass());
  }
}

TEST(Greens, PreservesBoundaryConditionAndCommutesWithRestriction) {
  for (const auto& g : geometries()) {
    FormSampler<QPi> smp(g, 53);
    std::vector<Fm> ls;
    for (int k = 0; k <= 2; ++k)
      for (int i = 0; i < 3; ++i) ls.push_back(smp.boundary_l_form(k));
    auto xs = samples(smp, ComplexId::of(ComplexTag::F_M), 8);
    for (Flow f : {Flow::Forward, Flow::Backward}) {
      EXPECT_TRUE(verify_boundary_condition_restriction(f, ls, 0.0).pass());
      EXPECT_TRUE(verify_bulk_boundary_compatibility(f, xs, 0.0).pass());
    }
  }
}

TEST(Greens, BulkOutputOfConditionedInputStaysConditioned) {
  for (const auto& g : geometries()) {
    FormSampler<QPi> smp(g, 59);
    auto c = ComplexId::of(ComplexTag::LinObs);
    for (int i = 0; i < 6; ++i) {
      auto x = smp.member_of(c, static_cast<int>(smp.uniform(1, 3)));
      auto gx = greens_apply(Flow::Forward, x).with_shift(1);
      EXPECT_TRUE(gx.is_zero() || member(ComplexId::of(ComplexTag::F_L_M), gx)) << g.name();
    }
  }
}
