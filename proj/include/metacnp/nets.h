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

// Multilayer perceptrons and the diagonal-Gaussian policy.
//
// Every network has two evaluation paths: a plain Eigen path used for
// rollouts and inference, and a graph path (autodiff.h) used wherever a
// gradient is needed. Both compute the same affine + activation chain.

#ifndef METACNP_NETS_H_
#define METACNP_NETS_H_

#include <random>
#include <span>
#include <string>
#include <vector>

#include "metacnp/autodiff.h"
#include "metacnp/io.h"

namespace metacnp {

using Rng = std::mt19937_64;
using Vector = Eigen::VectorXd;

enum class Activation { kTanh, kRelu };

struct MlpParams {
  std::vector<Matrix> weights;  // in x out
  std::vector<Matrix> biases;   // 1 x out
  // One per hidden layer; the output layer is linear.
  std::vector<Activation> activations;

  int input_size() const { return static_cast<int>(weights.front().rows()); }
  int output_size() const { return static_cast<int>(weights.back().cols()); }
  std::vector<int> LayerSizes() const;
};

// `sizes` = {input, hidden..., output}. Weights use an orthogonal
// initialization with `hidden_gain` on hidden layers and `output_gain` on
// the final layer (0 gives an all-zero output layer). Biases start at 0.
MlpParams InitMlp(std::span<const int> sizes, Activation activation,
                  double hidden_gain, double output_gain, Rng& rng);

// Rows of `input` are samples.
Matrix MlpForward(const MlpParams& params, const Matrix& input);

struct MlpVars {
  std::vector<ad::Var> weights;
  std::vector<ad::Var> biases;
  std::vector<Activation> activations;
};

// Registers every tensor of `params` as a graph input.
MlpVars BindMlp(ad::Graph& graph, const MlpParams& params,
                const std::string& prefix);
ad::Var MlpForward(const MlpVars& net, ad::Var input);

struct GaussianPolicy {
  MlpParams mean_net;
  Matrix log_std;  // 1 x action_dim, state independent

  int state_dim() const { return mean_net.input_size(); }
  int action_dim() const { return static_cast<int>(log_std.cols()); }
};

GaussianPolicy InitPolicy(int state_dim, int action_dim,
                          std::span<const int> hidden, Rng& rng);

// Tensor order: W0, b0, W1, b1, ..., log_std.
std::vector<Matrix> FlattenPolicy(const GaussianPolicy& policy);
GaussianPolicy UnflattenPolicy(const GaussianPolicy& like,
                               std::span<const Matrix> tensors);

struct PolicyVars {
  MlpVars mean_net;
  ad::Var log_std;
};

PolicyVars BindPolicy(ad::Graph& graph, const GaussianPolicy& policy,
                      const std::string& prefix);
// Same tensor order as FlattenPolicy.
std::vector<ad::Var> PolicyTensors(const PolicyVars& policy);
PolicyVars PolicyFromTensors(std::span<const ad::Var> tensors,
                             const std::vector<Activation>& activations);

// Rows of `states` are samples; returns the mean actions.
Matrix PolicyMean(const GaussianPolicy& policy, const Matrix& states);

// Unclipped action mean + exp(log_std) * z with z ~ N(0, I).
Vector PolicySample(const GaussianPolicy& policy, const Vector& state,
                    Rng& rng);

// Log density of unclipped actions, one row per sample (n x 1).
ad::Var PolicyLogProb(const PolicyVars& policy, ad::Var states,
                      ad::Var actions);
double PolicyLogProb(const GaussianPolicy& policy, const Vector& state,
                     const Vector& action);

// Stores layers as <prefix>W<l> and <prefix>b<l>.
void AddMlpArrays(const std::string& prefix, const MlpParams& params,
                  NamedArrays& out);
// Every hidden layer gets `activation`. Throws FormatError when no layer
// exists under `prefix`.
MlpParams MlpFromArrays(const std::string& prefix, const NamedArrays& in,
                        Activation activation);

}  // namespace metacnp

#endif  // METACNP_NETS_H_
