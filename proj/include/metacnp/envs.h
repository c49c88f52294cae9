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

// Benchmark environments with a hidden per-task dynamics parameter.
//
//  * Point: a 2-D agent in [-2, 2]^2 whose actions are rotated by a hidden
//    angle omega before being applied. Goal (1, 0), horizon 10.
//  * CartPole: the classic cart-pole whose pole-angle sensor reads
//    angle + bias for a hidden bias in [-8, 8] degrees. Horizon 500.

#ifndef METACNP_ENVS_H_
#define METACNP_ENVS_H_

#include <atomic>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "metacnp/nets.h"

namespace metacnp {

enum class EnvKind { kPoint = 0, kCartPole = 1 };

std::string EnvKindName(EnvKind kind);
EnvKind ParseEnvKind(const std::string& name);

struct EnvSpec {
  EnvKind kind;
  int state_dim;
  int action_dim;
  int horizon;
  double action_bound = 1.0;  // the env clips each action component to this
  double state_bound = 0.0;   // observation box half-width; 0 if unbounded
};

EnvSpec GetEnvSpec(EnvKind kind);

inline constexpr int kPointTaskCount = 5000;
inline constexpr double kPointBox = 2.0;
inline constexpr double kCartPoleMaxBias = 8.0 * 3.14159265358979323846 / 180.0;
inline constexpr double kCartPoleForceMag = 10.0;

struct TaskSpec {
  EnvKind kind = EnvKind::kPoint;
  double omega = 0.0;  // point: action rotation, radians
  double bias = 0.0;   // cartpole: angle sensor drift, radians

  static TaskSpec Point(double omega);
  static TaskSpec CartPole(double bias);
  // The hidden parameter of whichever kind this is.
  double parameter() const { return kind == EnvKind::kPoint ? omega : bias; }
};

// omega = -pi + 2 pi i / 5000 for i in [0, 5000).
TaskSpec PointTaskFromIndex(int index);
TaskSpec SampleTask(EnvKind kind, Rng& rng);

// s' = clip(s + R(omega) clip(a, -1, 1), -2, 2).
Vector PointStep(const TaskSpec& task, const Vector& s, const Vector& a);
// Negative distance of s_next from the goal (1, 0).
double PointReward(const Vector& s_next);

// State (x, x_dot, theta, theta_dot). Force in newtons, clipped to
// [-10, 10]; semi-implicit Euler with dt = 0.02 s.
Vector CartPoleStep(const Vector& s, double force);
Vector CartPoleObserve(const TaskSpec& task, const Vector& s);
// |theta| > 12 degrees or |x| > 2.4, on the true (or assumed-true) state.
bool CartPoleTerminal(const Vector& s);
// Mechanical energy of the cart-pole (uniform rod pole).
double CartPoleEnergy(const Vector& s);

class RewardAccessError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// While an instance is alive, every Transition::reward() call counts as a
// trap and throws RewardAccessError. Used to audit the adaptation path.
class RewardReadSentinel {
 public:
  RewardReadSentinel();
  ~RewardReadSentinel();
  RewardReadSentinel(const RewardReadSentinel&) = delete;
  RewardReadSentinel& operator=(const RewardReadSentinel&) = delete;

  long trapped_reads() const;
};

class Transition {
 public:
  Vector s;
  Vector a;  // unclipped policy output
  Vector s_next;
  std::optional<double> advantage;

  bool has_reward() const { return reward_.has_value(); }
  double reward() const;
  void set_reward(double r) { reward_ = r; }
  void clear_reward() { reward_.reset(); }

 private:
  std::optional<double> reward_;
};

enum class Origin { kReal, kGenerated };

struct Rollout {
  std::vector<Transition> transitions;
  Origin origin = Origin::kReal;
  std::optional<int> task_id;
  // Generated rollouts only: predictive sigma for each transition.
  std::vector<Vector> sigmas;

  std::size_t size() const { return transitions.size(); }
  bool empty() const { return transitions.empty(); }
};

// Sum of rewards; the rollout must carry rewards.
double RolloutReturn(const Rollout& rollout);

// Single-episode environment instance; tracks the true state.
class Environment {
 public:
  explicit Environment(TaskSpec task);

  const TaskSpec& task() const { return task_; }
  const EnvSpec& spec() const { return spec_; }
  // Samples the initial state and returns the first observation.
  Vector Reset(Rng& rng);
  // Restarts from a given true state.
  Vector ResetTo(const Vector& true_state);

  struct StepResult {
    Vector observation;
    double reward;
    bool done;
  };
  StepResult Step(const Vector& action);

  Vector Observation() const;
  const Vector& true_state() const { return state_; }

 private:
  TaskSpec task_;
  EnvSpec spec_;
  Vector state_;
};

enum class ActionMode { kSample, kMean };

// Runs `count` episodes of `policy` on `task`, stepping them in lockstep so
// the policy is evaluated once per step for the whole batch. Each episode
// draws from its own generator seeded from `rng`, so the result does not
// depend on `count` for the episodes it shares.
std::vector<Rollout> CollectRollouts(const TaskSpec& task,
                                     const GaussianPolicy& policy, int count,
                                     int horizon, Rng& rng,
                                     bool record_rewards,
                                     ActionMode mode = ActionMode::kSample);

Rollout CollectRollout(const TaskSpec& task, const GaussianPolicy& policy,
                       int horizon, Rng& rng, bool record_rewards);

// Concatenated transitions of a set of rollouts, in order.
std::vector<Transition> Flatten(const std::vector<Rollout>& rollouts);

// Packs transitions into row matrices (n x dim).
struct TransitionArrays {
  Matrix s;
  Matrix a;
  Matrix s_next;
};
TransitionArrays Pack(const std::vector<Transition>& transitions);

}  // namespace metacnp

#endif  // METACNP_ENVS_H_
