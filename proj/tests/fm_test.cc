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

#include "prirec/fm.h"

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "prirec/errors.h"

namespace prirec {
namespace {

struct Instance {
  Sample sample;
  LinearModel w;
  InteractionModel v;
};

Instance RandomInstance(std::mt19937_64& rng, std::size_t dim, std::size_t k) {
  std::normal_distribution<double> normal(0.0, 0.5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Instance in{{}, LinearModel(dim), InteractionModel(dim, k)};
  in.sample.x.resize(dim);
  for (double& x : in.sample.x) x = unit(rng);
  in.sample.label = (rng() & 1) ? 1 : -1;
  for (double& a : in.w.weights) a = normal(rng);
  for (double& a : in.v.values()) a = normal(rng);
  return in;
}

TEST(FmTest, PredictZeroModel) {
  const std::vector<double> x = {0.3, 0.7, 1.0};
  EXPECT_EQ(Predict(x, LinearModel(3), InteractionModel(3, 2)), 0.0);
}

TEST(FmTest, PredictHandExample) {
  const std::vector<double> x = {1.0, 1.0};
  const InteractionModel v(2, 1, {1.0, 1.0});
  EXPECT_DOUBLE_EQ(Predict(x, LinearModel(2), v), 1.0);
}

TEST(FmTest, PredictMatchesNaiveDoubleLoop) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const Instance in = RandomInstance(rng, 8, 3);
    const double fast = Predict(in.sample.x, in.w, in.v);
    const double naive = oracle::NaiveFm(in.sample.x, in.w, in.v);
    ASSERT_LE(std::fabs(fast - naive), 1e-9 * std::max(1.0, std::fabs(naive)));
  }
}

TEST(FmTest, PredictRejectsShapeMismatch) {
  const std::vector<double> x = {1.0, 2.0};
  EXPECT_THROW(Predict(x, LinearModel(3), InteractionModel(2, 2)),
               ArgumentError);
  EXPECT_THROW(Predict(x, LinearModel(2), InteractionModel(3, 2)),
               ArgumentError);
  EXPECT_THROW(InteractionModel(2, 0), ArgumentError);
}

TEST(FmTest, LinearInWeights) {
  std::mt19937_64 rng(2);
  Instance a = RandomInstance(rng, 6, 2);
  Instance b = RandomInstance(rng, 6, 2);
  LinearModel sum(6);
  for (std::size_t d = 0; d <= 6; ++d) {
    sum.weights[d] = a.w.weights[d] + b.w.weights[d];
  }
  const InteractionModel zero(6, 2);
  const auto& x = a.sample.x;
  EXPECT_NEAR(Predict(x, sum, a.v),
              Predict(x, a.w, a.v) + Predict(x, b.w, zero), 1e-12);
}

TEST(FmTest, LossExamples) {
  EXPECT_NEAR(Loss(1, 0.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(Loss(-1, 0.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(Loss(1, 2.0), 0.1269, 1e-4);
  EXPECT_NEAR(Loss(1, 2.0), -std::log(1.0 / (1.0 + std::exp(-2.0))), 1e-15);
  EXPECT_LT(Loss(1, 800.0), 1e-300);
  EXPECT_NEAR(Loss(1, -800.0), 800.0, 1e-9);
}

TEST(FmTest, LossIsNonNegativeAndSignSymmetric) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 20.0);
  for (int i = 0; i < 1000; ++i) {
    const double yhat = n(rng);
    ASSERT_GE(Loss(1, yhat), 0.0);
    ASSERT_EQ(Loss(1, yhat), Loss(-1, -yhat));
  }
}

TEST(FmTest, GradLinearHandExample) {
  Sample s{1, 1, {1.0, 0.0}, 1};
  const auto g = GradLinear(s, LinearModel(2), InteractionModel(2, 1), 0.0);
  EXPECT_EQ(g, (std::vector<double>{-0.5, -0.5, 0.0}));
}

TEST(FmTest, GradInteractionZeroInput) {
  std::mt19937_64 rng(4);
  Instance in = RandomInstance(rng, 5, 3);
  in.sample.x.assign(5, 0.0);
  const InteractionModel g0 = GradInteraction(in.sample, in.w, in.v, 0.0);
  for (double a : g0.values()) EXPECT_EQ(a, 0.0);
  const InteractionModel g1 = GradInteraction(in.sample, in.w, in.v, 0.25);
  for (std::size_t i = 0; i < g1.size(); ++i) {
    EXPECT_DOUBLE_EQ(g1.values()[i], 0.5 * in.v.values()[i]);
  }
}

TEST(FmTest, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(5);
  constexpr double kH = 1e-6;
  const double lw = 0.01;
  const double lv = 0.02;
  for (int i = 0; i < 30; ++i) {
    const Instance in = RandomInstance(rng, 8, 3);
    const auto& x = in.sample.x;
    const int y = in.sample.label;
    const auto rows = oracle::Rows(in.v);
    Hyperparams hp;
    hp.lambda_w = lw;
    hp.lambda_v = lv;
    const SampleGradients g = ComputeGradients(in.sample, in.w, in.v, hp);
    for (std::size_t d = 0; d < in.w.weights.size(); ++d) {
      auto f = [&](double t) {
        auto w = in.w.weights;
        w[d] = t;
        return oracle::Objective(x, y, w, rows, lw, lv);
      };
      const double fd = oracle::CentralDifference(f, in.w.weights[d], kH);
      ASSERT_NEAR(g.linear[d], fd, 1e-5 * std::max(1.0, std::fabs(fd)));
    }
    for (std::size_t d = 0; d < 8; ++d) {
      for (std::size_t k = 0; k < 3; ++k) {
        auto f = [&](double t) {
          auto v = rows;
          v[d][k] = t;
          return oracle::Objective(x, y, in.w.weights, v, lw, lv);
        };
        const double fd = oracle::CentralDifference(f, rows[d][k], kH);
        ASSERT_NEAR(g.interaction(d, k), fd, 1e-5 * std::max(1.0, std::fabs(fd)));
      }
    }
  }
}

TEST(FmTest, ComputeGradientsRejectsBadLabel) {
  Sample s{1, 1, {1.0}, 0};
  EXPECT_THROW(ComputeGradients(s, LinearModel(1), InteractionModel(1, 1), {}),
               ArgumentError);
}

TEST(FmTest, HyperparamsValidate) {
  Hyperparams hp;
  EXPECT_NO_THROW(hp.Validate());
  hp.alpha = 0.0;
  EXPECT_THROW(hp.Validate(), ConfigError);
  hp = {};
  hp.lambda_v = -1.0;
  EXPECT_THROW(hp.Validate(), ConfigError);
  hp = {};
  hp.k = 0;
  EXPECT_THROW(hp.Validate(), ConfigError);
  hp = {};
  hp.epsilon = 0.0;
  EXPECT_THROW(hp.Validate(), ConfigError);
}

TEST(FmTest, SigmoidIsStable) {
  EXPECT_EQ(Sigmoid(0.0), 0.5);
  EXPECT_EQ(Sigmoid(-1000.0), 0.0);
  EXPECT_EQ(Sigmoid(1000.0), 1.0);
  EXPECT_NEAR(Sigmoid(-30.0), std::exp(-30.0), 1e-25);
}

}  // namespace
}  // namespace prirec
