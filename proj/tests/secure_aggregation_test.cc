// Copyright 2026 The PriRec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "prirec/secure_aggregation.h"

#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "prirec/errors.h"

namespace prirec {
namespace {

InteractionModel RandomGradient(std::mt19937_64& rng, std::size_t dim,
                                std::size_t k) {
  std::normal_distribution<double> normal(0.0, 2.0);
  InteractionModel g(dim, k);
  for (double& x : g.values()) x = normal(rng);
  return g;
}

std::vector<PartyId> Contributors(std::size_t n) {
  std::vector<PartyId> ids(n);
  std::iota(ids.begin(), ids.end(), 10);
  return ids;
}

TEST(SecureAggregationTest, FormValidatesContributors) {
  EXPECT_THROW(AggregationBatch::Form(0, {}, 1), ArgumentError);
  EXPECT_THROW(AggregationBatch::Form(0, {3, 4, 3}, 1), ArgumentError);
  const AggregationBatch b = AggregationBatch::Form(0, {9, 2, 5}, 1);
  EXPECT_EQ(b.contributors(), (std::vector<PartyId>{2, 5, 9}));
  EXPECT_EQ(b.PairSeed(2, 9), b.PairSeed(9, 2));
  EXPECT_NE(b.PairSeed(2, 9), b.PairSeed(2, 5));
  EXPECT_THROW(b.PairSeed(2, 2), ArgumentError);
  EXPECT_THROW(b.PairSeed(2, 7), ArgumentError);
}

TEST(SecureAggregationTest, BatchOfOneIsUnmasked) {
  std::mt19937_64 rng(1);
  const FixedPointCodec codec;
  const InteractionModel g = RandomGradient(rng, 4, 2);
  const AggregationBatch b = AggregationBatch::Form(3, {7}, 1);
  const MaskedGradient m = MaskGradient(g, 7, b, codec);
  EXPECT_EQ(m.masked, codec.EncodeVector(g.values()));
  const InteractionModel agg = Aggregate(std::span(&m, 1), b, codec);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(agg.values()[i], g.values()[i], codec.resolution());
  }
}

TEST(SecureAggregationTest, TwoZeroGradientsAreNegations) {
  const FixedPointCodec codec;
  const AggregationBatch b = AggregationBatch::Form(0, {1, 2}, 5);
  const InteractionModel zero(3, 2);
  const MaskedGradient m1 = MaskGradient(zero, 1, b, codec);
  const MaskedGradient m2 = MaskGradient(zero, 2, b, codec);
  for (std::size_t i = 0; i < m1.masked.size(); ++i) {
    EXPECT_EQ(m1.masked[i], codec.ring().Neg(m2.masked[i]));
    EXPECT_NE(m1.masked[i].value, 0u);
  }
}

TEST(SecureAggregationTest, FiveContributorsMatchPlaintextSum) {
  std::mt19937_64 rng(2);
  const FixedPointCodec codec;
  const AggregationBatch b = AggregationBatch::Form(1, Contributors(5), 9);
  std::vector<MaskedGradient> masked;
  InteractionModel expected(6, 3);
  for (PartyId p : b.contributors()) {
    const InteractionModel g = RandomGradient(rng, 6, 3);
    for (std::size_t i = 0; i < g.size(); ++i) {
      expected.values()[i] += g.values()[i];
    }
    masked.push_back(MaskGradient(g, p, b, codec));
  }
  const InteractionModel agg = Aggregate(masked, b, codec);
  for (std::size_t i = 0; i < agg.size(); ++i) {
    EXPECT_LE(std::fabs(agg.values()[i] - expected.values()[i]),
              5 * codec.resolution());
  }
}

TEST(SecureAggregationTest, OracleEquivalenceOnRandomBatches) {
  std::mt19937_64 rng(3);
  const FixedPointCodec codec;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 16;
    const std::size_t dim = 1 + rng() % 16;
    const std::size_t k = 1 + rng() % 4;
    const AggregationBatch b =
        AggregationBatch::Form(static_cast<std::uint64_t>(t), Contributors(n),
                               rng());
    std::vector<MaskedGradient> masked;
    std::vector<double> expected(dim * k, 0.0);
    for (PartyId p : b.contributors()) {
      const InteractionModel g = RandomGradient(rng, dim, k);
      for (std::size_t i = 0; i < g.size(); ++i) expected[i] += g.values()[i];
      masked.push_back(MaskGradient(g, p, b, codec));
    }
    // Arrival order does not matter.
    std::shuffle(masked.begin(), masked.end(), rng);
    const InteractionModel agg = Aggregate(masked, b, codec);
    const double tol = static_cast<double>(n) * std::ldexp(1.0, -15);
    for (std::size_t i = 0; i < expected.size(); ++i) {
      ASSERT_LE(std::fabs(agg.values()[i] - expected[i]), tol);
    }
  }
}

TEST(SecureAggregationTest, IncompleteOrForeignContributionsRejected) {
  std::mt19937_64 rng(4);
  const FixedPointCodec codec;
  const AggregationBatch b = AggregationBatch::Form(0, {1, 2}, 3);
  const MaskedGradient m1 = MaskGradient(RandomGradient(rng, 2, 2), 1, b, codec);
  const MaskedGradient m2 = MaskGradient(RandomGradient(rng, 2, 2), 2, b, codec);
  EXPECT_THROW(Aggregate(std::span(&m1, 1), b, codec),
               AggregationIncompleteError);
  EXPECT_THROW(Aggregate(std::span<const MaskedGradient>{}, b, codec),
               AggregationIncompleteError);
  const std::vector<MaskedGradient> dup = {m1, m1};
  EXPECT_THROW(Aggregate(dup, b, codec), ArgumentError);
  MaskedGradient stranger = m2;
  stranger.contributor = 8;
  const std::vector<MaskedGradient> foreign = {m1, stranger};
  EXPECT_THROW(Aggregate(foreign, b, codec), ArgumentError);
  MaskedGradient wrong_shape = m2;
  wrong_shape.k = 1;
  const std::vector<MaskedGradient> shapes = {m1, wrong_shape};
  EXPECT_THROW(Aggregate(shapes, b, codec), ArgumentError);
  EXPECT_THROW(MaskGradient(InteractionModel(2, 2), 5, b, codec),
               ArgumentError);
}

TEST(SecureAggregationTest, UnrepresentableGradientIsProtocolError) {
  const FixedPointCodec codec(32, 16);
  const AggregationBatch b = AggregationBatch::Form(0, {1}, 3);
  const InteractionModel g(1, 1, {1e6});
  EXPECT_THROW(MaskGradient(g, 1, b, codec), ProtocolError);
}

TEST(SecureAggregationTest, MaskedGradientLooksUniform) {
  const FixedPointCodec codec;
  const InteractionModel g(1, 1, {0.75});
  constexpr int kBinBits = 6;
  std::array<std::uint64_t, 1 << kBinBits> counts{};
  for (std::uint64_t batch = 0; batch < 100000; ++batch) {
    const AggregationBatch b = AggregationBatch::Form(batch, {1, 2}, 17);
    const MaskedGradient m = MaskGradient(g, 1, b, codec);
    ++counts[oracle::TopBitsBin(m.masked[0].value, 64, kBinBits)];
  }
  EXPECT_GT(oracle::ChiSquaredUniformP(counts), 0.01);
}

TEST(SecureAggregationTest, ServerUpdateExamples) {
  std::mt19937_64 rng(5);
  const InteractionModel v = RandomGradient(rng, 3, 2);
  const InteractionModel g = RandomGradient(rng, 3, 2);
  EXPECT_EQ(ServerUpdate(v, InteractionModel(3, 2), 0.1, 4,
                         AggregationMode::kMean),
            v);
  EXPECT_EQ(ServerUpdate(v, g, 0.0, 4, AggregationMode::kSum), v);

  // Mean of four identical gradients is one plain step.
  InteractionModel four = g;
  for (double& x : four.values()) x *= 4.0;
  const InteractionModel mean =
      ServerUpdate(v, four, 0.1, 4, AggregationMode::kMean);
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_NEAR(mean.values()[i], v.values()[i] - 0.1 * g.values()[i], 1e-15);
  }
  // Batch of one in mean mode: bitwise the plain step.
  const InteractionModel one = ServerUpdate(v, g, 0.1, 1, AggregationMode::kMean);
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_EQ(one.values()[i], v.values()[i] - 0.1 * g.values()[i]);
  }
  EXPECT_THROW(ServerUpdate(v, InteractionModel(3, 3), 0.1, 1,
                            AggregationMode::kSum),
               ArgumentError);
}

}  // namespace
}  // namespace prirec
