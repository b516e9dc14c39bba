// Copyright 2026 The maskfuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "maskfuse/maskcore.hpp"
#include "oracles.hpp"

namespace maskfuse
{
namespace
{

using oracle::labels_from_rows;
using oracle::mask_from_rows;

TEST(Area, EmptyFullAndRectangle)
{
  EXPECT_EQ(area(empty_mask(3, 3)), 0);
  EXPECT_EQ(area(BinaryMask::Constant(2, 2, true)), 4);

  BinaryMask m = empty_mask(4, 4);
  m.block(1, 0, 2, 3) = true;  // 2 rows x 3 cols
  EXPECT_EQ(area(m), oracle::count_pixels(m));
  EXPECT_EQ(area(m), 6);
}

TEST(Area, AcceptsExpressions)
{
  const BinaryMask a = mask_from_rows({{1, 1, 1, 0}});
  const BinaryMask b = mask_from_rows({{0, 1, 1, 1}});
  EXPECT_EQ(area(a && b), 2);
  EXPECT_EQ(area(a || b), 4);
}

TEST(IntersectionArea, Cases)
{
  const BinaryMask a = mask_from_rows({{1, 1, 1, 0}});
  const BinaryMask b = mask_from_rows({{0, 1, 1, 1}});
  EXPECT_EQ(intersection_area(a, a), area(a));
  EXPECT_EQ(intersection_area(a, b), 2);
  EXPECT_EQ(intersection_area(b, a), 2);
  EXPECT_EQ(intersection_area(mask_from_rows({{1, 0}}), mask_from_rows({{0, 1}})), 0);
  EXPECT_THROW(intersection_area(empty_mask(2, 2), empty_mask(3, 2)), InvalidArgument);
}

TEST(IouDice, HandComputedRow)
{
  const BinaryMask a = mask_from_rows({{1, 1, 1, 0}});
  const BinaryMask b = mask_from_rows({{0, 1, 1, 1}});
  EXPECT_DOUBLE_EQ(iou(a, b), 0.5);           // 2 / 4
  EXPECT_DOUBLE_EQ(dice(a, b), 4.0 / 6.0);    // 2*2 / (3+3)
  EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
  EXPECT_DOUBLE_EQ(dice(a, a), 1.0);
  const BinaryMask c = mask_from_rows({{0, 0, 0, 1}});
  const BinaryMask d = mask_from_rows({{1, 0, 0, 0}});
  EXPECT_DOUBLE_EQ(iou(c, d), 0.0);
  EXPECT_DOUBLE_EQ(dice(c, d), 0.0);
}

TEST(IouDice, BothEmptyIsAnError)
{
  EXPECT_THROW(iou(empty_mask(2, 2), empty_mask(2, 2)), InvalidArgument);
  EXPECT_THROW(dice(empty_mask(2, 2), empty_mask(2, 2)), InvalidArgument);
  EXPECT_DOUBLE_EQ(iou(empty_mask(2, 2), BinaryMask::Constant(2, 2, true)), 0.0);
}

TEST(IouDice, OrderingProperty)
{
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const Index w = oracle::draw(rng, 1, 9);
    const Index h = oracle::draw(rng, 1, 9);
    const BinaryMask a = oracle::random_mask(rng, w, h);
    const BinaryMask b = oracle::random_mask(rng, w, h);
    if (!a.any() && !b.any()) {
      continue;
    }
    const double i = iou(a, b);
    const double d = dice(a, b);
    EXPECT_LE(i, d);
    EXPECT_LE(d, 1.0);
    EXPECT_EQ(i == d, i == 0.0 || i == 1.0);
    EXPECT_EQ(i == 1.0, identical(a, b));
    EXPECT_LE(intersection_area(a, b), std::min(area(a), area(b)));
    EXPECT_EQ(intersection_area(a, b), oracle::count_both(a, b));
  }
}

TEST(LabelMapToInstances, EmptyAndDense)
{
  EXPECT_TRUE(label_map_to_instances(LabelMap::Zero(3, 3)).empty());
  const auto ps = label_map_to_instances(labels_from_rows({{1, 1, 0}, {0, 2, 2}}));
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_EQ(ps.width, 3);
  EXPECT_EQ(ps.height, 2);
  EXPECT_EQ(ps.instances[0].score, 1.0);
  EXPECT_EQ(ps.instances[1].score, 1.0);
}

TEST(LabelMapToInstances, SparseIdsAreCanonicalized)
{
  const LabelMap lm = labels_from_rows({{7, 7, 0}, {3, 0, 7}});
  const auto ps = label_map_to_instances(lm);
  ASSERT_EQ(ps.size(), 2u);
  // id 3 -> instance 0, id 7 -> instance 1, pixel sets preserved.
  EXPECT_TRUE(identical(ps.instances[0].mask, oracle::select_id(lm, 3)));
  EXPECT_TRUE(identical(ps.instances[1].mask, oracle::select_id(lm, 7)));
  EXPECT_TRUE(identical(canonicalize(lm), labels_from_rows({{2, 2, 0}, {1, 0, 2}})));
}

TEST(InstancesToLabelMap, DisjointAndEmpty)
{
  PredictionSet empty{3, 2, {}};
  EXPECT_TRUE(identical(instances_to_label_map(empty), LabelMap::Zero(2, 3)));

  const LabelMap lm = labels_from_rows({{1, 1, 0}, {0, 2, 2}});
  EXPECT_TRUE(identical(instances_to_label_map(label_map_to_instances(lm)), lm));
}

TEST(InstancesToLabelMap, ScoreRuleResolvesContestedPixels)
{
  // Instance 0 (score 0.4) covers the left two columns, instance 1 (score 0.9) the right two.
  PredictionSet ps{3, 3, {}};
  ps.instances.push_back({mask_from_rows({{1, 1, 0}, {1, 1, 0}, {1, 1, 0}}), 0.4, 0});
  ps.instances.push_back({mask_from_rows({{0, 1, 1}, {0, 1, 1}, {0, 1, 1}}), 0.9, 0});
  const LabelMap flat = instances_to_label_map(ps, OverlapRule::score);
  // Canonical ids follow instance index: instance 0 -> 1, instance 1 -> 2.
  const LabelMap expected = labels_from_rows({{1, 2, 2}, {1, 2, 2}, {1, 2, 2}});
  EXPECT_TRUE(identical(flat, expected)) << flat;
}

TEST(InstancesToLabelMap, VotesRuleThenScoreThenIndex)
{
  PredictionSet ps{2, 1, {}};
  ps.instances.push_back({mask_from_rows({{1, 1}}), 0.5, 5});
  ps.instances.push_back({mask_from_rows({{0, 1}}), 0.9, 3});
  EXPECT_TRUE(identical(instances_to_label_map(ps, OverlapRule::votes), labels_from_rows({{1, 1}})));
  EXPECT_TRUE(identical(instances_to_label_map(ps, OverlapRule::score), labels_from_rows({{1, 2}})));

  // Full tie: lowest index wins.
  PredictionSet tie{2, 1, {}};
  tie.instances.push_back({mask_from_rows({{0, 1}}), 0.5, 0});
  tie.instances.push_back({mask_from_rows({{1, 1}}), 0.5, 0});
  EXPECT_TRUE(identical(instances_to_label_map(tie), labels_from_rows({{2, 1}})));
}

TEST(InstancesToLabelMap, RoundTripProperty)
{
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const LabelMap lm = oracle::random_label_map(rng, oracle::draw(rng, 1, 12), oracle::draw(rng, 1, 12), 5);
    for (auto rule : {OverlapRule::score, OverlapRule::votes}) {
      EXPECT_TRUE(identical(instances_to_label_map(label_map_to_instances(lm), rule), canonicalize(lm)));
    }
  }
}

TEST(ConnectedComponents, Basics)
{
  EXPECT_EQ(connected_components(BinaryMask::Constant(3, 4, true)).size(), 1u);
  EXPECT_TRUE(connected_components(empty_mask(3, 3)).empty());

  const BinaryMask diag = mask_from_rows({{1, 0}, {0, 1}});
  EXPECT_EQ(connected_components(diag, 4).size(), 2u);
  EXPECT_EQ(connected_components(diag, 8).size(), 1u);
  EXPECT_THROW(connected_components(diag, 6), InvalidArgument);
}

TEST(ConnectedComponents, LShapeAndDot)
{
  const BinaryMask m = mask_from_rows({
    {1, 0, 0, 0, 0},
    {1, 0, 0, 0, 0},
    {1, 1, 1, 0, 0},
    {0, 0, 0, 0, 0},
    {0, 0, 0, 0, 1},
  });
  const auto comps = connected_components(m, 4);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(area(comps[0]), 5);  // L, found first in scanline order
  EXPECT_EQ(area(comps[1]), 1);
  EXPECT_TRUE(comps[1](4, 4));
}

TEST(ConnectedComponents, PartitionProperty)
{
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const BinaryMask m = oracle::random_mask(rng, oracle::draw(rng, 1, 15), oracle::draw(rng, 1, 15));
    for (int conn : {4, 8}) {
      const auto comps = connected_components(m, conn);
      BinaryMask uni = empty_mask(m.cols(), m.rows());
      Index total = 0;
      for (const auto & c : comps) {
        EXPECT_EQ(intersection_area(uni, c), 0);
        uni = uni || c;
        total += area(c);
      }
      EXPECT_TRUE(identical(uni, m));
      EXPECT_EQ(total, area(m));
      EXPECT_EQ(connected_components(m, conn).size(), comps.size());
    }
  }
}

TEST(Morphology, DilateErode)
{
  BinaryMask dot = empty_mask(3, 3);
  dot(1, 1) = true;
  EXPECT_EQ(area(dilate(dot, 4)), 5);
  EXPECT_EQ(area(dilate(dot, 8)), 9);
  EXPECT_EQ(area(erode(dilate(dot, 4), 4)), 1);
  // Border pixels erode because the outside counts as background.
  EXPECT_EQ(area(erode(BinaryMask::Constant(3, 3, true), 4)), 1);
}

TEST(Validate, RejectsBrokenSets)
{
  PredictionSet ps{2, 2, {}};
  EXPECT_NO_THROW(validate(ps));
  ps.instances.push_back({empty_mask(2, 2), 0.5, 0});
  EXPECT_THROW(validate(ps), InvalidArgument);
  ps.instances[0].mask(0, 0) = true;
  ps.instances[0].score = 1.5;
  EXPECT_THROW(validate(ps), InvalidArgument);
  ps.instances[0].score = 0.5;
  ps.instances[0].mask = BinaryMask::Constant(3, 2, true);
  EXPECT_THROW(validate(ps), InvalidArgument);
}

}  // namespace
}  // namespace maskfuse
