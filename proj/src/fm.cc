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

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "prirec/errors.h"

namespace prirec {

namespace {

void CheckShapes(std::size_t x_dim, const LinearModel& w,
                 const InteractionModel& v) {
  if (w.weights.size() != x_dim + 1) {
    throw ArgumentError("linear model has " + std::to_string(w.weights.size()) +
                        " weights, expected " + std::to_string(x_dim + 1));
  }
  if (v.feature_dim() != x_dim) {
    throw ArgumentError("interaction model has " +
                        std::to_string(v.feature_dim()) + " rows, expected " +
                        std::to_string(x_dim));
  }
}

// Per-factor sums sum_d v_dk x_d, plus the full prediction.
double Forward(std::span<const double> x, const LinearModel& w,
               const InteractionModel& v, std::vector<double>& factor_sums) {
  const std::size_t dim = x.size();
  const std::size_t k = v.k();
  double linear = w.weights[0];
  for (std::size_t d = 0; d < dim; ++d) linear += w.weights[d + 1] * x[d];

  factor_sums.assign(k, 0.0);
  std::vector<double> square_sums(k, 0.0);
  for (std::size_t d = 0; d < dim; ++d) {
    const double xd = x[d];
    if (xd == 0.0) continue;
    for (std::size_t f = 0; f < k; ++f) {
      const double t = v(d, f) * xd;
      factor_sums[f] += t;
      square_sums[f] += t * t;
    }
  }
  double pairwise = 0.0;
  for (std::size_t f = 0; f < k; ++f) {
    pairwise += factor_sums[f] * factor_sums[f] - square_sums[f];
  }
  return linear + 0.5 * pairwise;
}

void CheckLabel(int y) {
  if (y != 1 && y != -1) {
    throw ArgumentError("training label must be -1 or +1, got " +
                        std::to_string(y));
  }
}

// y (sigma(y yhat) - 1), the loss derivative with respect to yhat.
double OuterFactor(int y, double yhat) {
  return y * (Sigmoid(y * yhat) - 1.0);
}

}  // namespace

InteractionModel::InteractionModel(std::size_t feature_dim, std::size_t k)
    : InteractionModel(feature_dim, k,
                       std::vector<double>(feature_dim * k, 0.0)) {}

InteractionModel::InteractionModel(std::size_t feature_dim, std::size_t k,
                                   std::vector<double> values)
    : feature_dim_(feature_dim), k_(k), values_(std::move(values)) {
  if (k == 0) throw ArgumentError("interaction rank K must be >= 1");
  if (values_.size() != feature_dim * k) {
    throw ArgumentError("interaction model value count mismatch");
  }
}

void Hyperparams::Validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("alpha must be > 0");
  }
  if (!(lambda_w >= 0.0) || !(lambda_v >= 0.0)) {
    throw ConfigError("regularization strengths must be >= 0");
  }
  if (k == 0) throw ConfigError("K must be >= 1");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("epsilon must be finite and > 0");
  }
}

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double Predict(std::span<const double> x, const LinearModel& w,
               const InteractionModel& v) {
  CheckShapes(x.size(), w, v);
  std::vector<double> factor_sums;
  return Forward(x, w, v, factor_sums);
}

double Loss(int y, double yhat) {
  const double z = -y * yhat;
  // softplus(z) = log(1 + e^z) = max(z, 0) + log1p(e^-|z|)
  return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z)));
}

std::vector<double> GradLinear(const Sample& sample, const LinearModel& w,
                               const InteractionModel& v, double lambda_w) {
  Hyperparams hp;
  hp.lambda_w = lambda_w;
  hp.lambda_v = 0.0;
  hp.k = v.k();
  return ComputeGradients(sample, w, v, hp).linear;
}

InteractionModel GradInteraction(const Sample& sample, const LinearModel& w,
                                 const InteractionModel& v, double lambda_v) {
  Hyperparams hp;
  hp.lambda_w = 0.0;
  hp.lambda_v = lambda_v;
  hp.k = v.k();
  return ComputeGradients(sample, w, v, hp).interaction;
}

SampleGradients ComputeGradients(const Sample& sample, const LinearModel& w,
                                 const InteractionModel& v,
                                 const Hyperparams& hp) {
  const std::span<const double> x = sample.x;
  CheckShapes(x.size(), w, v);
  CheckLabel(sample.label);

  SampleGradients g;
  std::vector<double> factor_sums;
  g.prediction = Forward(x, w, v, factor_sums);
  g.loss = Loss(sample.label, g.prediction);
  const double outer = OuterFactor(sample.label, g.prediction);

  const std::size_t dim = x.size();
  g.linear.resize(dim + 1);
  g.linear[0] = outer + 2.0 * hp.lambda_w * w.weights[0];
  for (std::size_t d = 0; d < dim; ++d) {
    g.linear[d + 1] = outer * x[d] + 2.0 * hp.lambda_w * w.weights[d + 1];
  }

  const std::size_t k = v.k();
  g.interaction = InteractionModel(dim, k);
  for (std::size_t d = 0; d < dim; ++d) {
    const double xd = x[d];
    for (std::size_t f = 0; f < k; ++f) {
      // sum over d' != d of v_d'k x_d' = full sum minus own term.
      const double others = factor_sums[f] - v(d, f) * xd;
      g.interaction(d, f) = outer * xd * others + 2.0 * hp.lambda_v * v(d, f);
    }
  }
  return g;
}

}  // namespace prirec
