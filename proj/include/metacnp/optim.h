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

#ifndef METACNP_OPTIM_H_
#define METACNP_OPTIM_H_

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "metacnp/autodiff.h"

namespace metacnp {

// Adam with bias correction. Minimizes: params -= lr * m_hat / (sqrt(v_hat)
// + eps).
class Adam {
 public:
  explicit Adam(double lr, double beta1 = 0.9, double beta2 = 0.999,
                double eps = 1e-8)
      : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void Step(std::span<Matrix> params, std::span<const Matrix> grads) {
    if (params.size() != grads.size()) {
      throw std::invalid_argument("Adam: params/grads count mismatch");
    }
    if (m_.empty()) {
      for (const Matrix& p : params) {
        m_.push_back(Matrix::Zero(p.rows(), p.cols()));
        v_.push_back(Matrix::Zero(p.rows(), p.cols()));
      }
    }
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, t_);
    const double c2 = 1.0 - std::pow(beta2_, t_);
    for (std::size_t k = 0; k < params.size(); ++k) {
      m_[k] = beta1_ * m_[k] + (1.0 - beta1_) * grads[k];
      v_[k] = beta2_ * v_[k] +
              (1.0 - beta2_) * grads[k].cwiseProduct(grads[k]);
      params[k].array() -= lr_ * (m_[k].array() / c1) /
                           ((v_[k].array() / c2).sqrt() + eps_);
    }
  }

  double lr() const { return lr_; }
  void set_lr(double lr) { lr_ = lr; }
  int steps() const { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  int t_ = 0;
  std::vector<Matrix> m_, v_;
};

// Rescales grads in place so their global L2 norm is at most max_norm.
// Returns the norm before clipping.
inline double ClipGlobalNorm(std::span<Matrix> grads, double max_norm) {
  double sq = 0.0;
  for (const Matrix& g : grads) sq += g.squaredNorm();
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    for (Matrix& g : grads) g *= max_norm / norm;
  }
  return norm;
}

}  // namespace metacnp

#endif  // METACNP_OPTIM_H_
