// Copyright 2026 The metacnp Authors.
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

#ifndef METACNP_RL_H_
#define METACNP_RL_H_

#include <vector>

#include "metacnp/autodiff.h"
#include "metacnp/envs.h"

namespace metacnp {

// Linear regression of discounted returns-to-go onto the features
// [s, s*s, t, t^2, t^3, 1], t = timestep / time_scale.
struct ValueBaseline {
  Vector coef;
  double ridge = 1e-5;
  int state_dim = 0;
  double time_scale = 1.0;

  static Vector Features(const Vector& s, int t, double time_scale);
  double Predict(const Vector& s, int t) const;
};

std::vector<double> DiscountedReturns(const Rollout& rollout, double gamma);

// Ridge least squares. Every rollout must carry rewards.
ValueBaseline FitValueBaseline(const std::vector<Rollout>& rollouts,
                               double gamma, double time_scale,
                               double ridge = 1e-5);

struct AdvantageEstimate {
  std::vector<double> raw;           // return-to-go minus baseline
  std::vector<double> standardized;  // zero mean, unit variance over batch
  double gamma = 0.99;
};

AdvantageEstimate ComputeAdvantages(const std::vector<Rollout>& rollouts,
                                    const ValueBaseline& baseline,
                                    double gamma);

// (x - mean) / (std + 1e-8) over the whole vector.
std::vector<double> Standardize(const std::vector<double>& values);

// -mean(min(ratio * A, clip(ratio, 1 - clip, 1 + clip) * A)) with
// ratio = exp(logp_new - logp_old). `logp_new` is n x 1 on the graph;
// `logp_old` and `advantages` are n x 1 data.
ad::Var PpoSurrogate(ad::Var logp_new, const Matrix& logp_old,
                     const Matrix& advantages, double clip);

// -mean(A * logp).
ad::Var VpgLoss(ad::Var logp, const Matrix& advantages);

Matrix ColumnOf(const std::vector<double>& values);

}  // namespace metacnp

#endif  // METACNP_RL_H_
