// Copyright 2026 The uposi Authors.
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

#include "uposi/types.h"

#include <gtest/gtest.h>

#include "uposi/error.h"
#include "uposi/history.h"
#include "uposi/random.h"

namespace uposi {
namespace {

ModelParams Friction(double v) {
  return ModelParams(Vector::Constant(1, v), {{0.3, 1.0}});
}

TEST(NormalizeMuTest, MidpointMapsToZero) {
  EXPECT_NEAR(NormalizeMu(Friction(0.65))[0], 0.0, 1e-15);
}

TEST(NormalizeMuTest, BoundsMapToUnitInterval) {
  EXPECT_DOUBLE_EQ(NormalizeMu(Friction(0.3))[0], -1.0);
  EXPECT_DOUBLE_EQ(NormalizeMu(Friction(1.0))[0], 1.0);
}

TEST(NormalizeMuTest, OutOfRangeIsLinear) {
  const ModelParams mu(Vector::Constant(1, 1.4), {{0.2, 0.8}});
  EXPECT_FALSE(mu.InRange());
  EXPECT_NEAR(NormalizeMu(mu)[0], 3.0, 1e-12);
}

TEST(NormalizeMuTest, DegenerateBoundsThrow) {
  const ModelParams mu(Vector::Constant(1, 0.5), {{0.5, 0.5}});
  EXPECT_THROW(NormalizeMu(mu), ConfigError);
}

TEST(ModelParamsTest, DimensionMismatchThrows) {
  EXPECT_THROW(ModelParams(Vector::Zero(2), {{0.0, 1.0}}), DimensionError);
}

TEST(DenormalizeMuTest, Examples) {
  const std::vector<Bounds> friction = {{0.3, 1.0}};
  const std::vector<Bounds> mass = {{0.1, 1.0}};
  EXPECT_DOUBLE_EQ(DenormalizeMu(Vector::Constant(1, 0.0), friction)[0], 0.65);
  EXPECT_DOUBLE_EQ(DenormalizeMu(Vector::Constant(1, -1.0), mass)[0], 0.1);
}

TEST(DenormalizeMuTest, DimensionMismatchThrows) {
  const std::vector<Bounds> b = {{0.0, 1.0}};
  EXPECT_THROW(DenormalizeMu(Vector::Zero(2), b), DimensionError);
}

TEST(DenormalizeMuTest, RoundTripProperty) {
  RandomSource rng(3);
  const std::vector<Bounds> bounds = {{-0.6, 0.6}, {0.1, 1.0}, {-5.0, 5.0}};
  for (int i = 0; i < 1000; ++i) {
    Vector z(3);
    for (int k = 0; k < 3; ++k) z[k] = rng.Uniform(-3.0, 3.0);
    const Vector back = NormalizeMu(DenormalizeMu(z, bounds));
    EXPECT_LE((back - z).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(MidpointMuTest, IsNormalizedZero) {
  const std::vector<Bounds> b = {{0.2, 2.0}};
  EXPECT_NEAR(NormalizeMu(MidpointMu(b))[0], 0.0, 1e-15);
}

TEST(HistorySegmentTest, FlatDimension) {
  EXPECT_EQ(HistorySegment::FlatDim(4, 1, 3), 19);
  HistorySegment h(4, 1);
  EXPECT_EQ(h.Flatten().size(), 19);
}

TEST(HistorySegmentTest, AllZeroHistoryFlattensToZero) {
  HistorySegment h(4, 1);
  EXPECT_TRUE(h.Flatten().isZero(0.0));
}

TEST(HistorySegmentTest, LayoutIsOldestFirst) {
  HistorySegment h(2, 1);
  h.Clear(Vector::Constant(2, 0.0));
  for (int t = 1; t <= 3; ++t) {
    h.Push(Vector::Constant(2, t), Vector::Constant(1, 10 * t),
           Vector::Constant(2, t + 1));
  }
  Vector expected(11);
  expected << 1, 1, 10, 2, 2, 20, 3, 3, 30, 4, 4;
  EXPECT_EQ(h.Flatten(), expected);
}

TEST(HistorySegmentTest, PushingHTimesReplacesAllPairs) {
  HistorySegment h(1, 1);
  h.Clear(Vector::Constant(1, 7.0));
  for (int t = 0; t < 3; ++t) {
    h.Push(Vector::Constant(1, 5.0), Vector::Constant(1, 6.0),
           Vector::Constant(1, 5.0));
  }
  for (int i = 0; i < h.length(); ++i) {
    EXPECT_EQ(h.observation(i)[0], 5.0);
    EXPECT_EQ(h.action(i)[0], 6.0);
  }
}

TEST(HistorySegmentTest, LengthIsConstantUnderPushes) {
  HistorySegment h(3, 2);
  RandomSource rng(1);
  for (int t = 0; t < 50; ++t) {
    h.Push(Vector::Random(3), Vector::Random(2), Vector::Random(3));
    EXPECT_EQ(h.length(), kHistoryLength);
    EXPECT_EQ(h.Flatten().size(), HistorySegment::FlatDim(3, 2));
  }
}

TEST(HistorySegmentTest, PushDimensionMismatchThrows) {
  HistorySegment h(3, 1);
  EXPECT_THROW(h.Push(Vector::Zero(2), Vector::Zero(1), Vector::Zero(3)),
               DimensionError);
  EXPECT_THROW(h.Push(Vector::Zero(3), Vector::Zero(2), Vector::Zero(3)),
               DimensionError);
}

TEST(RandomSourceTest, SameSeedSameStream) {
  RandomSource a(42), b(42);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.Normal(), b.Normal());
}

TEST(RandomSourceTest, ForksAreIndependentOfParentUse) {
  RandomSource a(42);
  const RandomSource fork_before = a.Fork(3);
  a.Normal();
  RandomSource fork_after = a.Fork(3);
  RandomSource f = fork_before;
  EXPECT_EQ(f.Normal(), fork_after.Normal());
  RandomSource other = a.Fork(4);
  RandomSource same = a.Fork(3);
  EXPECT_NE(other.Normal(), same.Normal());
}

}  // namespace
}  // namespace uposi
