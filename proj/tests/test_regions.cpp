#include <gtest/gtest.h>

#include "chiral/region_oracle.hpp"
#include "chiral/sampling.hpp"

using namespace chiral;

namespace {

Box box(Rational t0, Rational t1, Rational y0, Rational y1, Rational r0, Rational r1) {
  return {Interval::open(t0, t1), Interval::open(y0, y1), Interval::open(r0, r1)};
}

}  // namespace

TEST(Regions, IntervalMembership) {
  auto i = Interval{Rational(0), Rational(1), true, false};
  EXPECT_TRUE(i.contains(Rational(0)));
  EXPECT_FALSE(i.contains(Rational(1)));
  EXPECT_TRUE(Interval::all().contains(Rational(-100)));
  EXPECT_TRUE(Interval::open(Rational(1), Rational(1)).is_empty());
  EXPECT_FALSE(Interval::closed(Rational(1), Rational(1)).is_empty());
}

TEST(Regions, CircleArcsWrap) {
  Region r(Space::Bulk, true);
  r.add(box(Rational(0), Rational(1), Rational(3, 4), Rational(5, 4), Rational(1, 2), Rational(1)));
  EXPECT_EQ(r.boxes().size(), 2u);
  EXPECT_TRUE(r.contains({Rational(1, 2), Rational(1, 8), Rational(3, 4)}));
  EXPECT_TRUE(r.contains({Rational(1, 2), Rational(0), Rational(3, 4)}));
  EXPECT_TRUE(r.contains({Rational(1, 2), Rational(-1, 8), Rational(3, 4)}));
  EXPECT_FALSE(r.contains({Rational(1, 2), Rational(1, 2), Rational(3, 4)}));
  Region full(Space::Bulk, true, {box(Rational(0), Rational(1), Rational(-1), Rational(3), Rational(1, 2), Rational(1))});
  EXPECT_TRUE(full.contains({Rational(1, 2), Rational(7, 8), Rational(3, 4)}));
}

TEST(Regions, ConvexityExamples) {
  Region one(Space::Bulk, false, {box(Rational(0), Rational(1), Rational(0), Rational(1), Rational(0), Rational(1))});
  EXPECT_TRUE(is_convex(one));
  Region gap(Space::Bulk, false,
             {box(Rational(0), Rational(1), Rational(0), Rational(1), Rational(0), Rational(1)),
              box(Rational(2), Rational(3), Rational(0), Rational(1), Rational(0), Rational(1))});
  EXPECT_FALSE(is_convex(gap));
  // a shared open end leaves a missing point
  Region touch(Space::Bulk, false,
               {box(Rational(0), Rational(1), Rational(0), Rational(1), Rational(0), Rational(1)),
                box(Rational(1), Rational(2), Rational(0), Rational(1), Rational(0), Rational(1))});
  EXPECT_FALSE(is_convex(touch));
  Box closed_end = box(Rational(0), Rational(1), Rational(0), Rational(1), Rational(0), Rational(1));
  closed_end[TAU].hi_closed = true;
  Region glued(Space::Bulk, false, {closed_end, box(Rational(1), Rational(2), Rational(0), Rational(1), Rational(0), Rational(1))});
  EXPECT_TRUE(is_convex(glued));
  EXPECT_THROW(is_convex(Region(Space::Base, false)), std::invalid_argument);
}

TEST(Regions, DisjointAndCauchyExamples) {
  Region a(Space::Bulk, true, {box(Rational(-1), Rational(1), Rational(0), Rational(1, 2), Rational(1, 2), Rational(1))});
  Region b(Space::Bulk, true, {box(Rational(5), Rational(6), Rational(1, 2), Rational(1), Rational(1, 2), Rational(1))});
  Region c(Space::Bulk, true, {box(Rational(5), Rational(6), Rational(1, 4), Rational(3, 4), Rational(1, 2), Rational(1))});
  EXPECT_TRUE(is_disjoint(a, b));
  EXPECT_FALSE(is_disjoint(a, c));
  EXPECT_FALSE(is_disjoint(a, a));
  Region slab(Space::Bulk, true, {box(Rational(-2), Rational(2), Rational(0), Rational(1, 2), Rational(1, 2), Rational(1))});
  EXPECT_TRUE(is_cauchy(a, slab));
  Region thin(Space::Bulk, true, {box(Rational(-1), Rational(1), Rational(0), Rational(1, 4), Rational(1, 2), Rational(1))});
  EXPECT_FALSE(is_cauchy(thin, slab));
  EXPECT_THROW(is_cauchy(slab, a), std::invalid_argument);
}

TEST(Regions, JSetsExtendAlongTheFlow) {
  Region a(Space::Bulk, false, {box(Rational(0), Rational(1), Rational(0), Rational(1), Rational(0), Rational(1))});
  auto [up, down] = j_sets(a);
  EXPECT_TRUE(up.contains({Rational(100), Rational(1, 2), Rational(1, 2)}));
  EXPECT_FALSE(up.contains({Rational(0), Rational(1, 2), Rational(1, 2)}));
  EXPECT_TRUE(down.contains({Rational(-100), Rational(1, 2), Rational(1, 2)}));
  EXPECT_FALSE(down.contains({Rational(2), Rational(1, 2), Rational(1, 2)}));
  EXPECT_TRUE(region_subset(a, up));
  EXPECT_TRUE(region_equal(project(up), project(a)));
}

TEST(Regions, ProjectionAndPreimage) {
  Region a(Space::Bulk, true, {box(Rational(0), Rational(1), Rational(1, 4), Rational(1, 2), Rational(1, 2), Rational(3, 4))});
  auto p = project(a);
  EXPECT_EQ(p.space(), Space::Base);
  auto back = preimage(p);
  EXPECT_TRUE(region_subset(a, back));
  EXPECT_TRUE(region_equal(project(back), p));
}

TEST(Regions, SupportOfFormsAndExtension) {
  auto g = Geometry::half_space(1);
  FormSampler<QPi> smp(g, 181);
  Box b = box(Rational(-1), Rational(1), Rational(0), Rational(1), Rational(1, 2), Rational(3, 2));
  auto f = smp.form_in(Space::Bulk, 2, 2, b);
  Region u(Space::Bulk, false, {b});
  EXPECT_TRUE(region_subset(support_region(f), u));
  EXPECT_TRUE(region_subset(support_region(f), support_hull(f)));
  EXPECT_EQ(ext(f, u, u), f);
}

TEST(Regions, AgreeWithLatticeOracle) {
  for (const auto& g : {Geometry::half_space(1), Geometry::cylinder(-1)}) {
    RegionOracle o(g, Space::Bulk);
    EXPECT_GE(o.lattice_size(), 500u);
    auto rep = regions_oracle_report(g, Space::Bulk, 191, 25);
    EXPECT_TRUE(rep.pass()) << g.name() << " failures " << rep.failures();
  }
  auto rep = regions_oracle_report(Geometry::cylinder(1), Space::Boundary, 193, 25);
  EXPECT_TRUE(rep.pass());
}

TEST(Regions, OracleFollowsTheFlow) {
  auto g = Geometry::cylinder(1);
  RegionOracle o(g, Space::Bulk);
  Region a(Space::Bulk, true, {box(Rational(0), Rational(1), Rational(0), Rational(1, 2), Rational(1, 2), Rational(3, 4))});
  Point3 later{Rational(2), Rational(1, 4), Rational(5, 8)};
  EXPECT_TRUE(o.in_future(a, later));
  EXPECT_FALSE(o.in_past(a, later));
  EXPECT_FALSE(o.in_future(a, {Rational(2), Rational(3, 4), Rational(5, 8)}));
}
