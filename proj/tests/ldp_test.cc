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

#include "prirec/ldp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "prirec/errors.h"
#include "prirec/random.h"

namespace prirec {
namespace {

const double kE = std::exp(1.0);

TEST(LdpTest, ProbabilitiesFollowTheMechanism) {
  const RandomizedResponse rr(1.0);
  EXPECT_NEAR(rr.ProbabilityOfOne(1), kE / (kE + 1.0), 1e-15);
  EXPECT_NEAR(rr.ProbabilityOfOne(0), 1.0 / (kE + 1.0), 1e-15);
  EXPECT_NEAR(rr.Probability(0, 1), 1.0 / (kE + 1.0), 1e-15);
  EXPECT_NEAR(rr.ProbabilityOfOne(1), 0.7311, 1e-4);
}

TEST(LdpTest, LargeEpsilonIsNearlyIdentity) {
  const RandomizedResponse rr(50.0);
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    ASSERT_EQ(rr.Perturb(1, rng), 1);
    ASSERT_EQ(rr.Perturb(0, rng), 0);
  }
}

TEST(LdpTest, TinyEpsilonIsACoinFlip) {
  const RandomizedResponse rr(1e-9);
  EXPECT_NEAR(rr.ProbabilityOfOne(0), 0.5, 1e-9);
  EXPECT_NEAR(rr.ProbabilityOfOne(1), 0.5, 1e-9);
}

TEST(LdpTest, EmpiricalFrequencyAtEpsilonOne) {
  const RandomizedResponse rr(1.0);
  Rng rng(2);
  int ones = 0;
  constexpr int kTrials = 1000000;
  for (int i = 0; i < kTrials; ++i) ones += rr.Perturb(1, rng);
  EXPECT_NEAR(static_cast<double>(ones) / kTrials, kE / (kE + 1.0), 0.002);
}

TEST(LdpTest, RatioBoundHoldsAnalytically) {
  for (double eps : {0.1, 0.5, 1.0, 2.0, 8.0}) {
    const RandomizedResponse rr(eps);
    for (int z : {0, 1}) {
      const double ratio = rr.Probability(z, 1) / rr.Probability(z, 0);
      EXPECT_LE(std::max(ratio, 1.0 / ratio), std::exp(eps) * (1.0 + 1e-12));
    }
  }
}

TEST(LdpTest, RejectsBadInputs) {
  EXPECT_THROW((void)RandomizedResponse(0.0), ArgumentError);
  EXPECT_THROW((void)RandomizedResponse(-1.0), ArgumentError);
  EXPECT_THROW(
      (void)RandomizedResponse(std::numeric_limits<double>::infinity()),
      ArgumentError);
  const RandomizedResponse rr;
  Rng rng(3);
  EXPECT_THROW(rr.Perturb(2, rng), ArgumentError);
}

TEST(LdpTest, EstimateCountClosedForms) {
  const RandomizedResponse rr(1.0);
  const std::vector<std::uint8_t> ones(1000, 1);
  const std::vector<std::uint8_t> zeros(1000, 0);
  EXPECT_NEAR(EstimateCount(ones, rr).count, 1000 * kE / (kE - 1.0), 1e-9);
  EXPECT_NEAR(EstimateCount(ones, rr).count / 1000, 1.5820, 1e-4);
  EXPECT_NEAR(EstimateCount(zeros, rr).count, -1000 / (kE - 1.0), 1e-9);
  EXPECT_NEAR(EstimateCount(zeros, rr).count / 1000, -0.5820, 1e-4);
}

TEST(LdpTest, EstimateCountEmptyInputFlagged) {
  const RandomizedResponse rr;
  const CountEstimate e = EstimateCount(std::span<const std::uint8_t>{}, rr);
  EXPECT_TRUE(e.empty_input);
  EXPECT_EQ(e.count, 0.0);
}

TEST(LdpTest, EstimateCountIsLinear) {
  const RandomizedResponse rr(0.7);
  Rng rng(4);
  std::vector<PerturbedBit> a;
  std::vector<PerturbedBit> b;
  for (int i = 0; i < 300; ++i) a.push_back({i, 1, static_cast<std::uint8_t>(rng() & 1)});
  for (int i = 0; i < 200; ++i) b.push_back({i, 1, static_cast<std::uint8_t>(rng() & 1)});
  std::vector<PerturbedBit> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  EXPECT_NEAR(EstimateCount(ab, rr).count,
              EstimateCount(a, rr).count + EstimateCount(b, rr).count, 1e-9);
}

TEST(LdpTest, TermVarianceMatchesFormula) {
  const RandomizedResponse rr(1.0);
  EXPECT_NEAR(rr.TermVariance(), kE / ((kE - 1) * (kE - 1)), 1e-12);
}

std::vector<UserId> Ids(int n) {
  std::vector<UserId> ids(n);
  std::iota(ids.begin(), ids.end(), 1);
  return ids;
}

TEST(LdpTest, DynamicFeaturesWithoutPerturbationAreExactCounts) {
  const auto users = Ids(4);
  const std::vector<ItemId> items = {10, 20, 30};
  const std::vector<InteractionEvent> events = {
      {1, 10, 0}, {2, 10, 1}, {2, 10, 2}, {3, 20, 3}, {4, 10, 4}};
  DynamicFeatureOptions options;
  options.perturb = false;
  options.normalize = false;
  const DynamicFeatures f =
      BuildDynamicFeatures(users, items, events, RandomizedResponse(), options);
  ASSERT_EQ(f.column_names, std::vector<std::string>{"ldp_count_w0"});
  // User 2's repeated visits collapse to one bit.
  EXPECT_EQ(f.values[0], (std::vector<double>{3.0, 1.0, 0.0}));
}

TEST(LdpTest, DynamicFeaturesPerWindow) {
  const auto users = Ids(3);
  const std::vector<ItemId> items = {1, 2};
  const std::vector<InteractionEvent> events = {
      {1, 1, 0}, {2, 1, 5}, {3, 2, 5}, {1, 2, 9}};
  DynamicFeatureOptions options;
  options.perturb = false;
  options.normalize = false;
  options.windows = {{0, 5}, {5, 10}};
  const DynamicFeatures f =
      BuildDynamicFeatures(users, items, events, RandomizedResponse(), options);
  ASSERT_EQ(f.column_names.size(), 2u);
  EXPECT_EQ(f.column_names[1], "ldp_count_w1");
  EXPECT_EQ(f.values[0], (std::vector<double>{1.0, 0.0}));
  EXPECT_EQ(f.values[1], (std::vector<double>{1.0, 2.0}));
}

TEST(LdpTest, NormalizedFeaturesLieInUnitInterval) {
  const auto users = Ids(200);
  std::vector<ItemId> items(20);
  std::iota(items.begin(), items.end(), 1);
  std::vector<InteractionEvent> events;
  for (UserId u : users) {
    for (ItemId j = 1; j <= 20; ++j) {
      if ((u * 7 + j * 3) % (j + 1) == 0) events.push_back({u, j, 0});
    }
  }
  DynamicFeatureOptions options;
  options.seed = 5;
  const DynamicFeatures f =
      BuildDynamicFeatures(users, items, events, RandomizedResponse(), options);
  const auto [lo, hi] = std::minmax_element(f.values[0].begin(), f.values[0].end());
  EXPECT_EQ(*lo, 0.0);
  EXPECT_EQ(*hi, 1.0);
}

TEST(LdpTest, ZeroInteractionsEstimateZeroOnAverage) {
  const auto users = Ids(1000);
  const std::vector<ItemId> items = {1};
  const RandomizedResponse rr(1.0);
  DynamicFeatureOptions options;
  options.normalize = false;
  double sum = 0.0;
  constexpr int kTrials = 200;
  for (int t = 0; t < kTrials; ++t) {
    options.seed = static_cast<std::uint64_t>(t);
    sum += BuildDynamicFeatures(users, items, {}, rr, options).raw_counts[0][0];
  }
  const double se = std::sqrt(1000 * rr.TermVariance() / kTrials);
  EXPECT_LT(std::fabs(sum / kTrials), 3.0 * se);
}

TEST(LdpTest, EstimatedRankingMatchesWellSeparatedTruth) {
  const auto users = Ids(2000);
  const RandomizedResponse rr(1.0);
  std::vector<ItemId> items;
  std::vector<InteractionEvent> events;
  std::vector<int> truth;
  for (ItemId j = 1; j <= 8; ++j) {
    items.push_back(j);
    const int count = static_cast<int>(j) * 150;
    truth.push_back(count);
    for (int u = 1; u <= count; ++u) events.push_back({u, j, 0});
  }
  DynamicFeatureOptions options;
  options.normalize = false;
  options.seed = 9;
  const DynamicFeatures f = BuildDynamicFeatures(users, items, events, rr, options);
  const double se = std::sqrt(users.size() * rr.TermVariance());
  for (std::size_t a = 0; a < items.size(); ++a) {
    for (std::size_t b = 0; b < items.size(); ++b) {
      if (truth[a] - truth[b] > 5 * se) {
        EXPECT_GT(f.raw_counts[0][a], f.raw_counts[0][b]);
      }
    }
  }
}

TEST(LdpTest, DynamicFeaturesDeterministicPerSeed) {
  const auto users = Ids(50);
  const std::vector<ItemId> items = {1, 2, 3};
  const std::vector<InteractionEvent> events = {{1, 1, 0}, {2, 3, 0}};
  DynamicFeatureOptions options;
  options.seed = 77;
  const RandomizedResponse rr;
  EXPECT_EQ(BuildDynamicFeatures(users, items, events, rr, options).raw_counts,
            BuildDynamicFeatures(users, items, events, rr, options).raw_counts);
}

}  // namespace
}  // namespace prirec
