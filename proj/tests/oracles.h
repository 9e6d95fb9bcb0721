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

// Reference implementations used by the tests. Each one is written
// directly from the defining formula, sharing no code with the library
// beyond plain data types.

#ifndef PRIREC_TESTS_ORACLES_H_
#define PRIREC_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "prirec/fm.h"

namespace oracle {

// Eq. (1) as a double loop over feature pairs.
inline double NaiveFm(std::span<const double> x, std::span<const double> w,
                      const std::vector<std::vector<double>>& v) {
  double y = w[0];
  for (std::size_t d = 0; d < x.size(); ++d) y += w[d + 1] * x[d];
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = a + 1; b < x.size(); ++b) {
      double dot = 0.0;
      for (std::size_t f = 0; f < v[a].size(); ++f) dot += v[a][f] * v[b][f];
      y += dot * x[a] * x[b];
    }
  }
  return y;
}

inline std::vector<std::vector<double>> Rows(const prirec::InteractionModel& v) {
  std::vector<std::vector<double>> rows(v.feature_dim());
  for (std::size_t d = 0; d < v.feature_dim(); ++d) {
    rows[d].assign(v.Row(d).begin(), v.Row(d).end());
  }
  return rows;
}

inline double NaiveFm(std::span<const double> x, const prirec::LinearModel& w,
                      const prirec::InteractionModel& v) {
  return NaiveFm(x, w.weights, Rows(v));
}

// log(1 + exp(-y yhat)) evaluated without cancellation tricks beyond log1p.
inline double LogisticLoss(int y, double yhat) {
  const double z = -y * yhat;
  return z > 30.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

// Per-sample objective: loss plus both regularizers.
inline double Objective(std::span<const double> x, int y,
                        std::span<const double> w,
                        const std::vector<std::vector<double>>& v,
                        double lambda_w, double lambda_v) {
  double reg_w = 0.0;
  for (double a : w) reg_w += a * a;
  double reg_v = 0.0;
  for (const auto& row : v) {
    for (double a : row) reg_v += a * a;
  }
  return LogisticLoss(y, NaiveFm(x, w, v)) + lambda_w * reg_w +
         lambda_v * reg_v;
}

inline double CentralDifference(const std::function<double(double)>& f,
                                double at, double h) {
  return (f(at + h) - f(at - h)) / (2.0 * h);
}

// Mann-Whitney statistic by counting every positive/negative pair.
inline double BruteForceAuc(std::span<const double> scores,
                            std::span<const int> labels) {
  double credit = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) credit += 1.0;
      if (scores[i] == scores[j]) credit += 0.5;
    }
  }
  return credit / pairs;
}

// Upper-tail p-value of Pearson's statistic for equiprobable bins.
inline double ChiSquaredUniformP(std::span<const std::uint64_t> counts) {
  double total = 0.0;
  for (std::uint64_t c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (std::uint64_t c : counts) {
    const double diff = static_cast<double>(c) - expected;
    stat += diff * diff / expected;
  }
  boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// Bins a ring value by its top `bin_bits` bits.
inline std::size_t TopBitsBin(std::uint64_t value, int ell, int bin_bits) {
  return static_cast<std::size_t>(value >> (ell - bin_bits));
}

// One plain SGD step on (w, V) with the textbook gradients, both taken at
// the pre-step point.
inline void FmSgdStep(std::span<const double> x, int y, double alpha,
                      double lambda_w, double lambda_v, std::vector<double>& w,
                      std::vector<std::vector<double>>& v) {
  const double yhat = NaiveFm(x, w, v);
  const double outer = -y / (1.0 + std::exp(y * yhat));
  std::vector<double> gw(w.size());
  gw[0] = outer + 2.0 * lambda_w * w[0];
  for (std::size_t d = 0; d < x.size(); ++d) {
    gw[d + 1] = outer * x[d] + 2.0 * lambda_w * w[d + 1];
  }
  auto gv = v;
  for (std::size_t d = 0; d < x.size(); ++d) {
    for (std::size_t f = 0; f < v[d].size(); ++f) {
      double others = 0.0;
      for (std::size_t e = 0; e < x.size(); ++e) {
        if (e != d) others += v[e][f] * x[e];
      }
      gv[d][f] = outer * x[d] * others + 2.0 * lambda_v * v[d][f];
    }
  }
  for (std::size_t d = 0; d < w.size(); ++d) w[d] -= alpha * gw[d];
  for (std::size_t d = 0; d < v.size(); ++d) {
    for (std::size_t f = 0; f < v[d].size(); ++f) v[d][f] -= alpha * gv[d][f];
  }
}

// Centralized FM trained by plain per-sample SGD: one model (global w, V)
// for everybody.
struct CentralFm {
  std::vector<double> w;
  std::vector<std::vector<double>> v;

  double Predict(std::span<const double> x) const { return NaiveFm(x, w, v); }

  void Step(std::span<const double> x, int y, double alpha, double lambda_w,
            double lambda_v) {
    FmSgdStep(x, y, alpha, lambda_w, lambda_v, w, v);
  }
};

}  // namespace oracle

#endif  // PRIREC_TESTS_ORACLES_H_
