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

// Experiment orchestration: configuration, the three pipeline phases,
// result aggregation and CSV export.
//
// Configuration files are INI text with a version key:
//
//   [experiment]
//   version = 1
//   env = point            ; point | cartpole
//   preset = desk          ; smoke | desk | paper
//   seed = 0
//
//   [norml]   alpha, outer_lr, inner_rollouts, outer_rollouts,
//             tasks_per_iteration, ppo_epochs, ppo_clip, gamma,
//             max_grad_norm, iterations, policy_hidden, psi_hidden,
//             retain_fraction, stage_outer_rollouts
//   [cnp]     latent_dim, encoder_hidden, decoder_hidden, lr, iterations,
//             tasks_per_batch, context_size, target_size, sigma_floor,
//             smoothing_window
//   [metatest] arms, generated_rollouts, oracle_rollouts,
//             real_transitions, eval_episodes, seeds, point_tasks,
//             cartpole_biases_deg, next_state
//
// Keys missing from the file keep the preset value. Lists are comma
// separated. Unknown sections or keys are rejected.
//
// Output files (all under the run directory):
//
//   manifest.json              config hash, code version, per-phase files
//                              and wall-clock seconds
//   config.ini                 resolved configuration
//   meta.ckpt                  MetaParams named arrays
//   dataset.bin, dataset_adv.bin   offline datasets (plain / with A^pi)
//   meta_train.jsonl           one record per iteration
//   cnp_<variant>.ckpt         CNP named arrays
//   cnp_<variant>_curve.jsonl  one record per CNP iteration
//   metatest.jsonl             one record per (task, budget, arm, seed)
//   metatest_table.csv         arm, budget, mean, ci95, median, n_seeds
//
// Every JSONL record carries "config_hash".

#ifndef METACNP_HARNESS_H_
#define METACNP_HARNESS_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "metacnp/cnp.h"
#include "metacnp/metatest.h"
#include "metacnp/norml.h"

namespace metacnp {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  static constexpr int kVersion = 1;

  EnvKind env = EnvKind::kPoint;
  std::string preset = "desk";
  std::uint64_t seed = 0;

  NormlConfig norml;
  int meta_iterations = 500;
  std::vector<int> policy_hidden = {32, 32};
  std::vector<int> psi_hidden = {64, 64};
  double retain_fraction = 0.1;

  CnpConfig cnp;

  MetaTestConfig metatest;
  // Each entry is one real-data budget; 0 means whole rollouts.
  std::vector<int> real_transitions = {0};
  std::vector<int> seeds = {0, 1, 2};
  std::vector<int> point_tasks = {2000, 2500, 3000, 3500, 4000, 4500};
  std::vector<double> cartpole_biases_deg = {-8, -6, -4, -2, 0, 2, 4, 6, 8};

  std::vector<TaskSpec> TestTasks() const;
  // Task index recorded for each entry of TestTasks().
  std::vector<int> TestTaskIndices() const;
};

// Preset defaults for an environment. Throws ConfigError on an unknown
// preset name.
ExperimentConfig PresetConfig(EnvKind env, const std::string& preset);

// Reads an INI file over the defaults of the preset it names (or
// `fallback_preset`). Throws ConfigError on parse or validation errors.
ExperimentConfig LoadConfig(const std::string& path,
                            const std::string& fallback_preset = "desk");
ExperimentConfig ParseConfig(const std::string& ini_text,
                             const std::string& fallback_preset = "desk");

std::string ConfigToIni(const ExperimentConfig& config);
void ValidateConfig(const ExperimentConfig& config);

// FNV-1a over the canonical INI text, as 16 hex digits.
std::string ConfigHash(const ExperimentConfig& config);

// Phase outputs, relative to the run directory.
struct PhaseFiles {
  std::vector<std::string> files;
  double seconds = 0.0;
};

// Maintains <dir>/manifest.json. Each Record() call re-reads the file,
// replaces the phase entry and rewrites it; throws std::runtime_error when
// a listed file does not exist.
class RunManifest {
 public:
  RunManifest(std::string dir, const ExperimentConfig& config);
  void Record(const std::string& phase, const PhaseFiles& files) const;

 private:
  std::string dir_;
  std::string hash_;
  std::string preset_;
  std::vector<int> seeds_;
};

std::string CodeVersion();

struct MetaTrainSummary {
  PhaseFiles files;
  std::vector<IterationMetrics> metrics;
};

// Runs meta-training and writes meta.ckpt, dataset.bin, dataset_adv.bin and
// meta_train.jsonl. On divergence the last good parameters are written to
// meta.ckpt and the DivergenceError is rethrown.
// Progress lines go to `log` when it is non-null.
MetaTrainSummary RunMetaTrain(const ExperimentConfig& config,
                              const std::string& dir, ExecutionMode mode,
                              std::ostream* log = nullptr);

struct CnpTrainSummary {
  PhaseFiles files;
  CnpTrainResult result;
};

// Trains the CNP on a dataset file. Throws ConfigError when the dataset
// does not match the configured environment or lacks the advantage column
// an adv run needs.
CnpTrainSummary RunCnpTrain(const ExperimentConfig& config,
                            const std::string& dataset_path,
                            CnpVariant variant, const std::string& dir,
                            std::ostream* log = nullptr);

struct MetaTestRecord {
  ArmRecord arm;
  int real_transitions = 0;  // 0 for whole rollouts
};

struct AggregateRow {
  Arm arm = Arm::kUmcnp;
  int real_transitions = 0;
  double mean = 0.0;
  double ci95 = 0.0;  // Student-t half-width over per-seed means
  double median = 0.0;  // over every evaluation episode
  int seeds = 0;
};

std::vector<AggregateRow> Aggregate(const std::vector<MetaTestRecord>& records);

// Half-width of the two-sided 95% Student-t interval for the mean.
double TInterval95(const std::vector<double>& samples);

struct MetaTestSummary {
  PhaseFiles files;
  std::vector<MetaTestRecord> records;
  std::vector<AggregateRow> table;
};

// `plain_path` / `adv_path` may be empty when no arm needs them.
MetaTestSummary RunMetaTest(const ExperimentConfig& config,
                            const std::string& meta_path,
                            const std::string& plain_path,
                            const std::string& adv_path,
                            const std::string& dir, ExecutionMode mode,
                            std::ostream* log = nullptr);

std::string RecordToJson(const MetaTestRecord& record,
                         const std::string& config_hash);
MetaTestRecord RecordFromJson(const std::string& line);

// Reads <results_dir>/metatest.jsonl (absent file means no records) and
// writes fig3_trajectories.csv, fig4_rewards.csv and fig7_violin.csv into
// `out_dir`. Returns the written paths.
std::vector<std::string> ExportPlots(const std::string& results_dir,
                                     const std::string& out_dir);

}  // namespace metacnp

#endif  // METACNP_HARNESS_H_
