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

// Conditional neural process over environment transitions.
//
// The encoder maps each normalized context tuple (s, a, s'[, adv]) to a
// latent vector; the task latent r is their mean. The decoder maps a
// normalized query (s, a) concatenated with r to a Gaussian over the next
// state (and, for the advantage variant, over the advantage too).
//
// Next-state means are parameterized as residuals:
//
//   mu_s'   = s + delta_mean + delta_std * out_mu
//   sigma_s' = delta_std * softplus(out_sigma) + sigma_floor
//
// where delta_mean/delta_std are the column statistics of s' - s over the
// training data. The advantage head uses the dataset advantage statistics
// in the same way with no residual term. All losses and predictions are in
// environment units.

#ifndef METACNP_CNP_H_
#define METACNP_CNP_H_

#include <functional>
#include <string>
#include <vector>

#include "metacnp/dataset.h"
#include "metacnp/io.h"
#include "metacnp/nets.h"

namespace metacnp {

enum class CnpVariant { kPlain, kAdvantage };

std::string CnpVariantName(CnpVariant variant);
CnpVariant ParseCnpVariant(const std::string& name);

struct CnpConfig {
  CnpVariant variant = CnpVariant::kPlain;
  int latent_dim = 128;
  std::vector<int> encoder_hidden = {128, 128};
  std::vector<int> decoder_hidden = {128, 128};
  double lr = 1e-4;
  int iterations = 50000;
  int tasks_per_batch = 32;
  int context_size = 10;
  int target_size = 10;
  double sigma_floor = 1e-4;
  int smoothing_window = 100;
};

struct CnpModel {
  CnpVariant variant = CnpVariant::kPlain;
  int state_dim = 0;
  int action_dim = 0;
  MlpParams encoder;
  MlpParams decoder;
  NormStats stats;  // over [s, a, s'(, adv)], copied from the dataset
  Vector delta_mean;
  Vector delta_std;
  double sigma_floor = 1e-4;
  // Known limits of the environment: actions are clipped to +-action_bound
  // before encoding and predicted states to +-state_bound. Zero disables.
  double action_bound = 0.0;
  double state_bound = 0.0;

  bool with_advantage() const { return variant == CnpVariant::kAdvantage; }
  int tuple_dim() const {
    return 2 * state_dim + action_dim + (with_advantage() ? 1 : 0);
  }
  int target_dim() const { return state_dim + (with_advantage() ? 1 : 0); }
  int latent_dim() const { return encoder.output_size(); }

  NamedArrays ToArrays() const;
  static CnpModel FromArrays(const NamedArrays& arrays);
};

CnpModel InitCnp(const OfflineDataset& dataset, const CnpConfig& config,
                 Rng& rng);

// Context or query tuples, one per row. `advantage` is n x 1 and only
// read by the advantage variant.
struct CnpTuples {
  Matrix s;
  Matrix a;
  Matrix s_next;
  Matrix advantage;

  Eigen::Index size() const { return s.rows(); }
  CnpTuples Rows(const std::vector<Eigen::Index>& rows) const;
};

CnpTuples TuplesFromBatch(const PackedBatch& batch);
CnpTuples TuplesFromTransitions(const std::vector<Transition>& transitions);

// Throws std::invalid_argument on an empty context.
Vector EncodeContext(const CnpModel& model, const CnpTuples& context);

struct PredictiveDist {
  Matrix mu;     // n x state_dim
  Matrix sigma;  // n x state_dim
  Matrix adv_mu;     // n x 1, advantage variant only
  Matrix adv_sigma;  // n x 1, advantage variant only
};

PredictiveDist DecodeQuery(const CnpModel& model, const Vector& latent,
                           const Matrix& s, const Matrix& a);

// Mean negative log density of the query targets, per query.
double CnpLoss(const CnpModel& model, const CnpTuples& context,
               const CnpTuples& queries);

// Graph form of the loss over a batch of tasks. contexts[k] and queries[k]
// belong to task k. Exposed for gradient testing.
struct CnpVars {
  MlpVars encoder;
  MlpVars decoder;
  std::vector<ad::Var> All() const;
};
CnpVars BindCnp(ad::Graph& graph, const CnpModel& model);
ad::Var CnpBatchLoss(const CnpModel& model, const CnpVars& vars,
                     const std::vector<CnpTuples>& contexts,
                     const std::vector<CnpTuples>& queries);

struct CnpLossRecord {
  int iteration = 0;
  double loss = 0.0;
  double smoothed = 0.0;  // trailing mean over the smoothing window
};

struct CnpTrainResult {
  CnpModel model;
  std::vector<CnpLossRecord> curve;
};

// Called after every iteration; returning false stops training early.
using CnpProgress = std::function<bool(const CnpLossRecord&)>;

CnpTrainResult TrainCnp(const OfflineDataset& dataset, const CnpConfig& config,
                        Rng& rng, const CnpProgress& progress = {});

}  // namespace metacnp

#endif  // METACNP_CNP_H_
