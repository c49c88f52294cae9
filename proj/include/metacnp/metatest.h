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

// Reward-free test-time adaptation with generated rollouts.
//
// A test task is adapted from a small amount of real, reward-free data:
// the CNP encodes the real transitions into a task latent, synthetic
// rollouts are grown from the real rollout's first observation by
// alternating policy samples with predicted next states, and one
// pseudo-advantage update is taken on the union of real and generated
// transitions. Rewards are only read by EvaluatePostUpdate.

#ifndef METACNP_METATEST_H_
#define METACNP_METATEST_H_

#include <optional>
#include <string>
#include <vector>

#include "metacnp/cnp.h"
#include "metacnp/norml.h"
#include "metacnp/parallel.h"

namespace metacnp {

// Anything that maps (state, action) rows to a predictive distribution
// over next-state rows.
class NextStateModel {
 public:
  virtual ~NextStateModel() = default;
  virtual PredictiveDist Predict(const Matrix& s, const Matrix& a) const = 0;
};

class CnpPredictor : public NextStateModel {
 public:
  CnpPredictor(const CnpModel& model, Vector latent)
      : model_(model), latent_(std::move(latent)) {}
  PredictiveDist Predict(const Matrix& s, const Matrix& a) const override {
    return DecodeQuery(model_, latent_, s, a);
  }

 private:
  const CnpModel& model_;
  Vector latent_;
};

// Throws std::invalid_argument on empty input. Never reads rewards.
Vector InferLatent(const CnpModel& model,
                   const std::vector<Transition>& real_data);

enum class NextStateMode { kMean, kSample };

struct GenerationOptions {
  EnvKind env = EnvKind::kPoint;
  int horizon = 10;
  NextStateMode next_state = NextStateMode::kMean;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Grows `count` rollouts in lockstep from `initial_state`, one generator
// per rollout seeded from `rng`. Actions are sampled from `policy`; the
// next state is the predictive mean (or a draw from it). Cartpole rollouts
// stop when the termination predicate holds on a predicted state. When the
// model predicts advantages they are stored on the transitions. Throws
// GenerationError on a non-finite prediction.
std::vector<Rollout> GenerateRollouts(const NextStateModel& model,
                                      const GaussianPolicy& policy,
                                      const Vector& initial_state, int count,
                                      const GenerationOptions& options,
                                      Rng& rng);

struct AdaptationBudget {
  int real_rollouts = 1;
  // When set, only this many leading transitions of the first real rollout
  // are used.
  std::optional<int> real_transitions;
  int generated_rollouts = 24;
};

struct AdaptationReport {
  int real_rollouts = 0;
  int real_transition_count = 0;
  int generated_rollouts = 0;
  int generated_transition_count = 0;
  double latent_norm = 0.0;
  double mean_abs_adv_real = 0.0;
  double mean_abs_adv_generated = 0.0;
  double mean_generated_sigma = 0.0;
};

struct AdaptationResult {
  GaussianPolicy phi;
  AdaptationReport report;
  std::vector<Rollout> generated;
};

// Adapts from already-collected real rollouts. `model` may be null only
// when no rollouts are generated. With an advantage-variant model, the
// update uses the predicted advantage on generated rows and A_psi on real
// rows.
AdaptationResult AdaptFromRealData(const MetaParams& meta,
                                   const CnpModel* model,
                                   const std::vector<Rollout>& real,
                                   int generated_rollouts, double alpha,
                                   const GenerationOptions& options, Rng& rng);

// Collects the budgeted real rollouts on `task` with pi_theta, without
// recording rewards, then calls AdaptFromRealData.
AdaptationResult AdaptUnsupervised(const MetaParams& meta,
                                   const CnpModel* model,
                                   const AdaptationBudget& budget,
                                   const TaskSpec& task, double alpha,
                                   NextStateMode next_state, Rng& rng);

// Keeps the first `count` transitions of the first rollout.
std::vector<Rollout> TruncateToTransitions(const std::vector<Rollout>& real,
                                           int count);

struct EvaluationResult {
  std::vector<double> returns;
  double mean_return = 0.0;
  // Observations of the first episode, initial state included.
  std::vector<Vector> first_trajectory;
};

// Runs `episodes` true-environment episodes with the mean action of `phi`.
EvaluationResult EvaluatePostUpdate(const GaussianPolicy& phi,
                                    const TaskSpec& task, int episodes,
                                    Rng& rng);

enum class Arm { kUmcnp, kUmcnpAdv, kNorml, kOracle };

std::string ArmName(Arm arm);
Arm ParseArm(const std::string& name);

struct MetaTestConfig {
  std::vector<Arm> arms = {Arm::kUmcnp, Arm::kNorml, Arm::kOracle};
  int generated_rollouts = 24;
  int oracle_rollouts = 25;
  std::optional<int> real_transitions;
  int eval_episodes = 1;
  double alpha = 0.01;
  NextStateMode next_state = NextStateMode::kMean;
};

struct ArmRecord {
  int task_index = 0;
  double task_parameter = 0.0;
  int seed = 0;
  Arm arm = Arm::kUmcnp;
  EvaluationResult evaluation;
  AdaptationReport report;
};

// Evaluates every configured arm on one (task, seed) cell. All arms share
// the same real rollouts: NORML and UMCNP adapt from the first one (or its
// transition prefix), ORACLE from all `oracle_rollouts`. Throws
// std::invalid_argument when an arm's model is missing.
std::vector<ArmRecord> RunMetaTestCell(const MetaParams& meta,
                                       const CnpModel* plain,
                                       const CnpModel* adv,
                                       const TaskSpec& task, int task_index,
                                       int seed, const MetaTestConfig& config);

}  // namespace metacnp

#endif  // METACNP_METATEST_H_
