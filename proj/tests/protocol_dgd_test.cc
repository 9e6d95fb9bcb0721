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

#include "prirec/protocol_dgd.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "prirec/errors.h"

namespace prirec {
namespace {

struct RoundData {
  std::vector<std::vector<double>> models;
  DgdRound round;
};

// Participants 1..n; the center is participant 1 when `center_joins`.
RoundData RandomRound(std::mt19937_64& rng, std::size_t n, std::size_t dim,
                      bool center_joins) {
  std::normal_distribution<double> normal(0.0, 3.0);
  RoundData data;
  data.models.resize(n);
  std::vector<double> weights(n);
  double total = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    data.models[p].resize(dim);
    for (double& x : data.models[p]) x = normal(rng);
    weights[p] = 0.1 + std::uniform_real_distribution<double>(0, 1)(rng);
    total += weights[p];
  }
  data.round.center = center_joins ? 1 : 1000;
  data.round.nonce = rng();
  for (std::size_t p = 0; p < n; ++p) {
    data.round.participants.push_back(
        {static_cast<PartyId>(p + 1), weights[p] / total, data.models[p]});
  }
  return data;
}

std::vector<double> OracleSum(const RoundData& data) {
  std::vector<double> sum(data.models.front().size(), 0.0);
  for (std::size_t p = 0; p < data.models.size(); ++p) {
    for (std::size_t d = 0; d < sum.size(); ++d) {
      sum[d] += data.round.participants[p].weight * data.models[p][d];
    }
  }
  return sum;
}

TEST(ProtocolDgdTest, SingleParticipantReturnsItsModel) {
  const FixedPointCodec codec;
  const std::vector<double> w = {0.5, -1.25, 3.0001};
  DgdRound round{7, {{7, 1.0, w}}, 1};
  const auto got = SecureWeightedSum(round, codec, 1);
  for (std::size_t d = 0; d < w.size(); ++d) {
    EXPECT_NEAR(got[d], w[d], codec.resolution());
  }
}

TEST(ProtocolDgdTest, ZeroModelsGiveZero) {
  const FixedPointCodec codec;
  const std::vector<double> zero(6, 0.0);
  DgdRound round{1, {{1, 0.25, zero}, {2, 0.25, zero}, {3, 0.5, zero}}, 3};
  for (double x : SecureWeightedSum(round, codec, 2)) EXPECT_EQ(x, 0.0);
}

TEST(ProtocolDgdTest, FiveParticipantsMatchPlaintext) {
  std::mt19937_64 rng(3);
  const FixedPointCodec codec;
  const RoundData data = RandomRound(rng, 5, 11, true);
  const auto secure = SecureWeightedSum(data.round, codec, 4);
  const auto expected = OracleSum(data);
  for (std::size_t d = 0; d < expected.size(); ++d) {
    EXPECT_NEAR(secure[d], expected[d], 1e-3);
  }
}

TEST(ProtocolDgdTest, OracleEquivalenceOnRandomRounds) {
  std::mt19937_64 rng(5);
  const FixedPointCodec codec;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng() % 8;
    const std::size_t dim = 1 + rng() % 33;
    const RoundData data = RandomRound(rng, n, dim, i % 2 == 0);
    const auto secure = SecureWeightedSum(data.round, codec, rng());
    const auto plain = PlaintextWeightedSum(data.round);
    const auto expected = OracleSum(data);
    const double tol = static_cast<double>(dim) * std::ldexp(1.0, -15);
    for (std::size_t d = 0; d < dim; ++d) {
      ASSERT_LE(std::fabs(secure[d] - expected[d]), tol);
      ASSERT_NEAR(plain[d], expected[d], 1e-12);
    }
  }
}

TEST(ProtocolDgdTest, TranscriptHoldsOnlySharesAndCounts) {
  std::mt19937_64 rng(6);
  const FixedPointCodec codec;
  for (bool center_joins : {true, false}) {
    const RoundData data = RandomRound(rng, 4, 5, center_joins);
    std::vector<MessageKind> kinds;
    TrafficStats traffic;
    DgdOptions options;
    options.traffic = &traffic;
    options.on_delivery = [&](const Envelope& e) {
      kinds.push_back(KindOf(e.payload));
      EXPECT_NE(e.from, e.to);
    };
    SecureWeightedSum(data.round, codec, 7, options);
    const std::size_t p = 4;
    const std::size_t sums = center_joins ? p - 1 : p;
    EXPECT_EQ(std::count(kinds.begin(), kinds.end(), MessageKind::kShare),
              static_cast<long>(p * (p - 1)));
    EXPECT_EQ(std::count(kinds.begin(), kinds.end(), MessageKind::kShareSum),
              static_cast<long>(sums));
    EXPECT_EQ(traffic.TotalMessages(), p * (p - 1) + sums);
    EXPECT_EQ(traffic.TotalBytes(), (p * (p - 1) + sums) * 5 * 8);
  }
}

TEST(ProtocolDgdTest, ReceivedSharesAreRerandomizedAcrossRuns) {
  // Fixed inputs, varying round nonce: one share received by participant 2
  // from participant 1 should look uniform.
  const FixedPointCodec codec;
  const std::vector<double> a = {1.0};
  const std::vector<double> b = {2.0};
  const std::vector<double> c = {-3.0};
  constexpr int kBinBits = 6;
  std::array<std::uint64_t, 1 << kBinBits> counts{};
  for (std::uint64_t nonce = 0; nonce < 20000; ++nonce) {
    DgdRound round{1, {{1, 1.0, a}, {2, 1.0, b}, {3, 1.0, c}}, nonce};
    DgdOptions options;
    options.on_delivery = [&](const Envelope& e) {
      if (e.from == 1 && e.to == 2) {
        const auto& msg = std::get<ShareMessage>(e.payload);
        ++counts[oracle::TopBitsBin(msg.shares[0].value, 64, kBinBits)];
      }
    };
    SecureWeightedSum(round, codec, 11, options);
  }
  EXPECT_GT(oracle::ChiSquaredUniformP(counts), 0.01);
}

TEST(ProtocolDgdTest, DeterministicForFixedSeed) {
  std::mt19937_64 rng(8);
  const FixedPointCodec codec;
  const RoundData data = RandomRound(rng, 6, 9, true);
  std::vector<std::uint64_t> first;
  std::vector<std::uint64_t> second;
  auto record = [](std::vector<std::uint64_t>& out) {
    DgdOptions o;
    o.on_delivery = [&out](const Envelope& e) {
      if (const auto* m = std::get_if<ShareMessage>(&e.payload)) {
        out.push_back(m->shares[0].value);
      }
    };
    return o;
  };
  SecureWeightedSum(data.round, codec, 99, record(first));
  SecureWeightedSum(data.round, codec, 99, record(second));
  EXPECT_EQ(first, second);
}

TEST(ProtocolDgdTest, AbortsOnMalformedRounds) {
  const FixedPointCodec codec;
  const std::vector<double> three(3, 1.0);
  const std::vector<double> two(2, 1.0);
  EXPECT_THROW(SecureWeightedSum({1, {}, 0}, codec, 0), ProtocolError);
  EXPECT_THROW(SecureWeightedSum({1, {{1, 1.0, three}, {2, 1.0, two}}, 0},
                                 codec, 0),
               ProtocolError);
  EXPECT_THROW(SecureWeightedSum({1, {{1, 1.0, three}, {1, 1.0, three}}, 0},
                                 codec, 0),
               ProtocolError);
  const std::vector<double> huge = {1e300};
  EXPECT_THROW(SecureWeightedSum({1, {{1, 1.0, huge}}, 0}, codec, 0),
               ProtocolError);
}

TEST(ProtocolDgdTest, UpdateExamples) {
  const LinearModel w{std::vector<double>{1.0, 1.0}};
  const std::vector<double> sum = {0.5, 0.5};
  const std::vector<double> grad = {1.0, -1.0};
  const LinearModel next = DgdUpdate(w, grad, sum, 0.1);
  EXPECT_DOUBLE_EQ(next.weights[0], 0.4);
  EXPECT_DOUBLE_EQ(next.weights[1], 0.6);
  // Self-only weighted sum reduces to the centralized step.
  const LinearModel central = DgdUpdate(w, grad, w.weights, 0.1);
  EXPECT_EQ(central.weights, (std::vector<double>{1.0 - 0.1, 1.0 + 0.1}));
  const std::vector<double> zero(2, 0.0);
  EXPECT_EQ(DgdUpdate(w, zero, sum, 0.1).weights, sum);
  EXPECT_THROW(DgdUpdate(w, std::vector<double>{1.0}, sum, 0.1),
               ArgumentError);
}

TEST(ProtocolDgdTest, ConsensusSpreadContracts) {
  // Zero gradients, row-stochastic mixing over a directed ring with a
  // chord; the per-coordinate range max_i w_i - min_i w_i never grows.
  const FixedPointCodec codec;
  std::mt19937_64 rng(12);
  std::normal_distribution<double> normal(0.0, 5.0);
  const std::size_t users = 5;
  const std::size_t dim = 4;
  std::vector<std::vector<double>> w(users, std::vector<double>(dim));
  for (auto& row : w) {
    for (double& x : row) x = normal(rng);
  }
  const std::vector<std::vector<std::size_t>> neighbors = {
      {1, 2}, {2}, {3, 0}, {4}, {0, 1}};
  auto spread = [&] {
    double worst = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      double lo = w[0][d];
      double hi = w[0][d];
      for (const auto& row : w) {
        lo = std::min(lo, row[d]);
        hi = std::max(hi, row[d]);
      }
      worst = std::max(worst, hi - lo);
    }
    return worst;
  };
  const double initial = spread();
  double previous = initial;
  for (int round = 0; round < 50; ++round) {
    std::vector<std::vector<double>> next(users);
    for (std::size_t i = 0; i < users; ++i) {
      const double s = 1.0 / static_cast<double>(neighbors[i].size() + 1);
      DgdRound r{static_cast<PartyId>(i), {{static_cast<PartyId>(i), s, w[i]}},
                 static_cast<std::uint64_t>(round)};
      for (std::size_t f : neighbors[i]) {
        r.participants.push_back({static_cast<PartyId>(f), s, w[f]});
      }
      next[i] = SecureWeightedSum(r, codec, 5);
    }
    w = next;
    const double now = spread();
    // Fixed-point rounding may add a few units of the resolution.
    ASSERT_LE(now, previous + 8 * codec.resolution()) << "round " << round;
    previous = now;
  }
  EXPECT_LT(previous, 0.01 * initial);
}

}  // namespace
}  // namespace prirec
