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

// Offline transition dataset logged during meta-training.
//
// Each batch holds the transitions of one task in one meta-training
// iteration, packed as row matrices. Batches carry neither the task
// parameter nor rewards once finalized.
//
// Binary layout (little-endian, version 1):
//
//   char[8]  magic "MCNPDSET"
//   u32      version
//   u32      env kind (0 point, 1 cartpole)
//   u32      state_dim, u32 action_dim
//   u32      has_advantage (0/1)
//   u32      iteration_begin, u32 iteration_end (exclusive)
//   u64      batch count, u64 transition count
//   u32      stat_dim = 2 * state_dim + action_dim (+1 with advantage)
//   f64[stat_dim] mean, f64[stat_dim] std   over columns [s, a, s', adv]
//   per batch:
//     u64 batch id, u32 iteration, u32 rollout count,
//     u32[rollout count] rollout lengths,
//     f64[n * state_dim] s, f64[n * action_dim] a, f64[n * state_dim] s',
//     f64[n] advantage (only when has_advantage)
//
// The line-delimited export writes one JSON object per transition:
//   {"batch": id, "iteration": it, "rollout": r, "t": t,
//    "s": [...], "a": [...], "s_next": [...], "advantage": x?}

#ifndef METACNP_DATASET_H_
#define METACNP_DATASET_H_

#include <cstdint>
#include <string>
#include <vector>

#include "metacnp/envs.h"

namespace metacnp {

struct PackedBatch {
  std::uint64_t batch_id = 0;
  int iteration = 0;
  std::vector<int> rollout_lengths;
  Matrix s;
  Matrix a;
  Matrix s_next;
  Matrix advantage;  // n x 1, or empty
  Matrix reward;     // n x 1 while staged; always empty once finalized

  Eigen::Index size() const { return s.rows(); }
  // Rebuilds rollouts; rewards are never copied out.
  std::vector<Rollout> Rollouts() const;
};

PackedBatch PackRollouts(const std::vector<Rollout>& rollouts,
                         std::uint64_t batch_id, int iteration,
                         bool keep_rewards);

struct NormStats {
  Vector mean;
  Vector std;
};

struct OfflineDataset {
  static constexpr std::uint32_t kVersion = 1;

  EnvKind env = EnvKind::kPoint;
  int state_dim = 0;
  int action_dim = 0;
  bool has_advantage = false;
  int iteration_begin = 0;
  int iteration_end = 0;
  std::vector<PackedBatch> batches;
  NormStats stats;

  std::size_t transition_count() const;
  int stat_dim() const {
    return 2 * state_dim + action_dim + (has_advantage ? 1 : 0);
  }

  void Write(const std::string& path) const;
  static OfflineDataset Read(const std::string& path);
  void ExportJsonLines(const std::string& path) const;
};

// Column statistics over [s, a, s', adv] of every batch. std is floored at
// 1e-6.
NormStats ComputeStats(const std::vector<PackedBatch>& batches,
                       bool with_advantage);

}  // namespace metacnp

#endif  // METACNP_DATASET_H_
