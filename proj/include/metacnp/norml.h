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

// Reward-free meta-learning of a policy initialization.
//
// The learned quantities are the meta-policy theta, a task-independent
// offset theta_offset, and a pseudo-advantage network A_psi(s, a, s'). A
// task is adapted without rewards by one policy-gradient step
//
//   phi = theta + theta_offset + alpha * sum_D A_psi(s, a, s') grad log pi_theta(a|s)
//
// and the outer loop maximizes a PPO surrogate of phi on fresh rollouts
// with true advantages, differentiating through that step into theta,
// theta_offset and psi jointly.

#ifndef METACNP_NORML_H_
#define METACNP_NORML_H_

#include <optional>
#include <stdexcept>
#include <vector>

#include "metacnp/dataset.h"
#include "metacnp/envs.h"
#include "metacnp/io.h"
#include "metacnp/nets.h"
#include "metacnp/optim.h"
#include "metacnp/parallel.h"

namespace metacnp {

struct MetaParams {
  GaussianPolicy theta;
  GaussianPolicy theta_offset;
  MlpParams psi;

  // theta tensors, then offset tensors, then psi (W0, b0, ...).
  std::vector<Matrix> Flatten() const;
  MetaParams Unflatten(std::span<const Matrix> tensors) const;

  NamedArrays ToArrays() const;
  static MetaParams FromArrays(const NamedArrays& arrays);
};

// psi output layer starts at zero so A_psi == 0 before training.
MetaParams InitMetaParams(const EnvSpec& env, std::span<const int> policy_hidden,
                          std::span<const int> psi_hidden, Rng& rng);

struct MetaVars {
  PolicyVars theta;
  PolicyVars theta_offset;
  MlpVars psi;

  std::vector<ad::Var> All() const;
};

MetaVars BindMeta(ad::Graph& graph, const MetaParams& params);

// Rows [s, a, s'].
Matrix PseudoAdvantageInput(const TransitionArrays& data);
ad::Var PseudoAdvantage(const MlpVars& psi, ad::Var input);
Matrix PseudoAdvantage(const MlpParams& psi, const TransitionArrays& data);

// Records the adapted parameters phi on the graph. When `fixed_advantages`
// is given, rows holding a value use it as a constant advantage in place of
// A_psi (the rest keep A_psi). Returns phi in FlattenPolicy order.
std::vector<ad::Var> InnerAdapt(
    const MetaVars& meta, const TransitionArrays& data, double alpha,
    const std::vector<std::optional<double>>* fixed_advantages = nullptr);

// Value-level convenience wrapper.
GaussianPolicy InnerAdapt(
    const MetaParams& meta, const std::vector<Transition>& d_train,
    double alpha,
    const std::vector<std::optional<double>>* fixed_advantages = nullptr);

struct NormlConfig {
  double alpha = 0.01;
  double outer_lr = 3e-4;
  int inner_rollouts = 25;
  int outer_rollouts = 25;
  int tasks_per_iteration = 10;
  int ppo_epochs = 5;
  double ppo_clip = 0.2;
  double gamma = 0.99;
  double max_grad_norm = 0.0;  // 0 disables clipping
  // Batches from iterations before this one are not staged.
  int stage_from_iteration = 0;
  bool stage_outer_rollouts = true;
};

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IterationMetrics {
  int iteration = 0;
  double pre_adaptation_return = 0.0;   // mean over D_train rollouts
  double post_adaptation_return = 0.0;  // mean over D_test rollouts
  double outer_loss = 0.0;              // first-epoch surrogate
  double grad_norm = 0.0;
  double mean_abs_pseudo_advantage = 0.0;
};

// Transitions logged during meta-training, before finalization.
struct StagedTransitions {
  std::vector<PackedBatch> batches;
  int first_iteration = 0;
  int iterations_seen = 0;
};

class MetaTrainer {
 public:
  MetaTrainer(EnvSpec env, NormlConfig config, MetaParams init);

  // One outer iteration over `tasks`. Throws DivergenceError when any
  // loss, gradient or adapted parameter turns non-finite, leaving the
  // parameters untouched.
  IterationMetrics Step(const std::vector<TaskSpec>& tasks, Rng& rng,
                        ExecutionMode mode);

  const MetaParams& params() const { return params_; }
  const StagedTransitions& staged() const { return staged_; }
  const NormlConfig& config() const { return config_; }
  int iteration() const { return iteration_; }

  // Joint outer gradient of the mean surrogate over tasks, w.r.t.
  // MetaParams::Flatten() order. Exposed for testing.
  struct TaskData {
    std::vector<Rollout> train;
    std::vector<Rollout> test;
    Matrix test_logp_old;
    Matrix test_advantages;
  };
  static std::vector<Matrix> OuterGradient(const MetaParams& params,
                                           const TaskData& task,
                                           const NormlConfig& config,
                                           double* loss);

 private:
  IterationMetrics StepImpl(const std::vector<TaskSpec>& tasks, Rng& rng,
                            ExecutionMode mode);

  EnvSpec env_;
  NormlConfig config_;
  MetaParams params_;
  Adam adam_;
  StagedTransitions staged_;
  int iteration_ = 0;
  std::uint64_t next_batch_id_ = 0;
};

// Keeps batches from the final `retain_fraction` of the iterations seen,
// strips rewards, drops advantages unless `with_advantage`, and computes
// normalization statistics over exactly the retained batches.
OfflineDataset FinalizeOfflineDataset(const StagedTransitions& staged,
                                      EnvKind env, double retain_fraction,
                                      bool with_advantage);

}  // namespace metacnp

#endif  // METACNP_NORML_H_
