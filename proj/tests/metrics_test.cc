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

#include "prirec/metrics.h"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "prirec/errors.h"
#include "prirec/fm.h"

namespace prirec {
namespace {

TEST(MetricsTest, AucExamples) {
  EXPECT_EQ(Auc(std::vector<double>{0.1, 0.2, 0.8, 0.9},
                std::vector<int>{0, 0, 1, 1}),
            1.0);
  EXPECT_EQ(Auc(std::vector<double>{0.9, 0.8, 0.2, 0.1},
                std::vector<int>{0, 0, 1, 1}),
            0.0);
  EXPECT_EQ(Auc(std::vector<double>{0.1, 0.4, 0.35, 0.8},
                std::vector<int>{0, 0, 1, 1}),
            0.75);
}

TEST(MetricsTest, TiesCountHalf) {
  EXPECT_EQ(Auc(std::vector<double>{0.5, 0.5}, std::vector<int>{0, 1}), 0.5);
}

TEST(MetricsTest, SingleClassIsUndefined) {
  EXPECT_THROW(Auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}),
               UndefinedMetricError);
  EXPECT_THROW(Auc(std::vector<double>{0.1}, std::vector<int>{0}),
               UndefinedMetricError);
  EXPECT_THROW(Auc(std::vector<double>{0.1, 0.2}, std::vector<int>{-1, 1}),
               ArgumentError);
}

TEST(MetricsTest, RankSumMatchesBruteForce) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 499;
    std::vector<double> scores(n);
    std::vector<int> labels(n);
    // Coarse scores force plenty of ties.
    for (std::size_t i = 0; i < n; ++i) {
      scores[i] = static_cast<double>(rng() % 20);
      labels[i] = static_cast<int>(rng() & 1);
    }
    labels[0] = 0;
    labels[1] = 1;
    ASSERT_NEAR(Auc(scores, labels), oracle::BruteForceAuc(scores, labels),
                1e-12);
  }
}

TEST(MetricsTest, InvariantUnderMonotoneTransform) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> scores(300);
  std::vector<int> labels(300);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = n(rng);
    labels[i] = static_cast<int>(i % 3 == 0);
  }
  std::vector<double> transformed;
  for (double s : scores) transformed.push_back(std::exp(3.0 * s) + 7.0);
  EXPECT_EQ(Auc(scores, labels), Auc(transformed, labels));
}

TEST(MetricsTest, ComplementSymmetry) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> scores(100);
  std::vector<int> labels(100);
  std::vector<int> flipped(100);
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = n(rng);
    labels[i] = static_cast<int>(rng() & 1);
    flipped[i] = 1 - labels[i];
  }
  EXPECT_NEAR(Auc(scores, labels) + Auc(scores, flipped), 1.0, 1e-12);
}

TEST(MetricsTest, AverageLossExamples) {
  EXPECT_NEAR(AverageLoss(std::vector<double>{0, 0, 0},
                          std::vector<int>{1, -1, 1}),
              std::log(2.0), 1e-15);
  EXPECT_LT(AverageLoss(std::vector<double>{50, -50},
                        std::vector<int>{1, -1}),
            1e-20);
  const std::vector<double> p = {0.3, -1.2, 2.5};
  const std::vector<int> y = {1, 1, -1};
  double expected = 0.0;
  for (int i = 0; i < 3; ++i) expected += oracle::LogisticLoss(y[i], p[i]);
  EXPECT_NEAR(AverageLoss(p, y), expected / 3.0, 1e-15);
  EXPECT_THROW(AverageLoss(std::vector<double>{}, std::vector<int>{}),
               ArgumentError);
}

}  // namespace
}  // namespace prirec
