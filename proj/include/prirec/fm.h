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

// Second-order factorization machine split into a per-user linear model
// (bias + one weight per feature) and a shared D x K interaction model.
//
//   yhat = w0 + sum_d w_d x_d
//        + 1/2 sum_k [ (sum_d v_dk x_d)^2 - sum_d v_dk^2 x_d^2 ]
//
// The second line is the O(K D) form of the pairwise interaction sum.

#ifndef PRIREC_FM_H_
#define PRIREC_FM_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "prirec/ldp.h"

namespace prirec {

// Weights w_0..w_D; index 0 is the bias.
struct LinearModel {
  std::vector<double> weights;

  LinearModel() = default;
  explicit LinearModel(std::size_t feature_dim)
      : weights(feature_dim + 1, 0.0) {}
  explicit LinearModel(std::vector<double> w) : weights(std::move(w)) {}

  std::size_t feature_dim() const {
    return weights.empty() ? 0 : weights.size() - 1;
  }
  friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

// Row-major D x K matrix. Also used for interaction-model gradients.
class InteractionModel {
 public:
  InteractionModel() = default;
  // Throws ArgumentError if k == 0.
  InteractionModel(std::size_t feature_dim, std::size_t k);
  InteractionModel(std::size_t feature_dim, std::size_t k,
                   std::vector<double> values);

  std::size_t feature_dim() const { return feature_dim_; }
  std::size_t k() const { return k_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(std::size_t d, std::size_t f) {
    return values_[d * k_ + f];
  }
  double operator()(std::size_t d, std::size_t f) const {
    return values_[d * k_ + f];
  }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> Row(std::size_t d) const {
    return {values_.data() + d * k_, k_};
  }

  bool SameShape(const InteractionModel& other) const {
    return feature_dim_ == other.feature_dim_ && k_ == other.k_;
  }

  friend bool operator==(const InteractionModel&,
                         const InteractionModel&) = default;

 private:
  std::size_t feature_dim_ = 0;
  std::size_t k_ = 0;
  std::vector<double> values_;
};

// One training example X^{ij} = X^i (+) X^j with label y in {-1, +1}.
struct Sample {
  UserId user = 0;
  ItemId item = 0;
  std::vector<double> x;
  int label = 1;
};

struct Hyperparams {
  double alpha = 0.05;
  double lambda_w = 1e-4;
  double lambda_v = 1e-4;
  std::size_t k = 5;
  std::size_t max_neighbors = 5;
  std::size_t epochs = 20;
  double epsilon = 1.0;

  // Throws ConfigError on a violated invariant.
  void Validate() const;
};

double Sigmoid(double z);

// Throws ArgumentError on a dimension mismatch.
double Predict(std::span<const double> x, const LinearModel& w,
               const InteractionModel& v);

// -ln sigma(y * yhat), evaluated as softplus(-y * yhat).
double Loss(int y, double yhat);

std::vector<double> GradLinear(const Sample& sample, const LinearModel& w,
                               const InteractionModel& v, double lambda_w);
InteractionModel GradInteraction(const Sample& sample, const LinearModel& w,
                                 const InteractionModel& v, double lambda_v);

// Both gradients from one forward pass over the same model snapshot.
struct SampleGradients {
  double prediction = 0.0;
  double loss = 0.0;
  std::vector<double> linear;
  InteractionModel interaction;
};
SampleGradients ComputeGradients(const Sample& sample, const LinearModel& w,
                                 const InteractionModel& v,
                                 const Hyperparams& hp);

}  // namespace prirec

#endif  // PRIREC_FM_H_
