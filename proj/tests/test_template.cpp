#include <gtest/gtest.h>

#include "support.hpp"

using namespace abelcode;

TEST(Template, ChainAtThree) {
  auto u = unroll_template(testing_support::chain_template(), 3);
  auto w = u.window;
  ASSERT_EQ(u.subgroup.generators().size(), 2u);
  EXPECT_EQ(u.subgroup.generators()[0], Element(w, {2, 1, 0}));
  EXPECT_EQ(u.subgroup.generators()[1], Element(w, {0, 1, 1}));
  ASSERT_EQ(u.skipped.size(), 1u);
  EXPECT_EQ(u.skipped[0].start, 3u);
  EXPECT_EQ(u.skipped[0].extent, 4u);
  EXPECT_EQ(u.margin, 2u);
  // the cut instance still contributes its visible part to the closure
  EXPECT_TRUE(u.truncated.contains(Element(w, {0, 0, 1})));
  EXPECT_FALSE(u.subgroup.contains(Element(w, {0, 0, 1})));
}

TEST(Template, FiniteAndClosureOrders) {
  for (std::size_t n : {4, 6, 8}) {
    auto u = unroll_template(testing_support::chain_template(), n);
    EXPECT_EQ(u.subgroup.order(), BigInt(1) << (2 * (n - 1)));
    EXPECT_EQ(u.truncated.order(), BigInt(1) << (2 * n - 1));
  }
}

TEST(Template, EmptyTemplateIsTrivial) {
  TemplateSpec t;
  t.orders = {ComponentGroup({3})};
  auto u = unroll_template(t, 5);
  EXPECT_TRUE(u.subgroup.is_trivial());
  EXPECT_EQ(u.window->size(), 5u);
}

TEST(Template, NarrowWindowSkipsWidePattern) {
  auto u = unroll_template(testing_support::chain_template(), 2);
  EXPECT_EQ(u.skipped.size(), 1u);
  TemplateSpec t;
  t.orders = {ComponentGroup({2})};
  t.shifted_generators = {ShiftedPattern{1, 1, SupportMap{{0, {1}}, {1, {1}}}}};
  auto v = unroll_template(t, 1);
  EXPECT_TRUE(v.subgroup.is_trivial());
  ASSERT_EQ(v.skipped.size(), 1u);
  EXPECT_EQ(v.skipped[0].start, 1u);
}

TEST(Template, Errors) {
  auto t = testing_support::chain_template();
  EXPECT_THROW(unroll_template(t, 1), InputError);  // fixed generator reaches coordinate 2
  t.period = 2;
  EXPECT_THROW(unroll_template(t, 4), InputError);
  auto bad = testing_support::chain_template();
  bad.fixed_generators = {SupportMap{{1, {4}}}};
  EXPECT_THROW(unroll_template(bad, 3), InputError);
}

TEST(Template, PeriodicComponents) {
  TemplateSpec t;
  t.period = 2;
  t.orders = {ComponentGroup({2}), ComponentGroup({3})};
  t.shifted_generators = {ShiftedPattern{1, 2, SupportMap{{0, {1}}, {1, {2}}}}};
  auto u = unroll_template(t, 4);
  EXPECT_EQ(u.window->component(2), ComponentGroup({3}));
  EXPECT_EQ(u.subgroup.order(), 36);
}
