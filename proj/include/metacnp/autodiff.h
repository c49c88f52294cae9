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

// Reverse-mode automatic differentiation over dense 2-D double arrays.
//
// A Graph records operations in construction order, which is also a
// topological order. Values are computed eagerly while the graph is built,
// so every node carries a cached forward value before any backward pass.
// Grad() emits the backward pass as ordinary graph nodes, which means the
// result of Grad() can itself be differentiated (gradient of a gradient).
//
// Evaluate() replays the recorded operations on new leaf values and returns
// an independent value cache; it does not mutate the graph and may be called
// concurrently on a shared graph.

#ifndef METACNP_AUTODIFF_H_
#define METACNP_AUTODIFF_H_

#include <cstdint>
#include <deque>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace metacnp {

// Row-major dense array. Vectors are 1xN (row) or Nx1 (column).
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class AutodiffError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace ad {

enum class Op : std::uint8_t {
  kInput,
  kConstant,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kAddRow,
  kMulRow,
  kMatMul,
  kTranspose,
  kScale,
  kAddScalar,
  kTanh,
  kRelu,
  kStep,
  kSoftplus,
  kSigmoid,
  kExp,
  kLog,
  kSquare,
  kClip,
  kClipMask,
  kMinimum,
  kLessEqualMask,
  kSum,
  kMean,
  kSumRows,
  kSumCols,
  kBroadcast,
  kRepeatRows,
  kRepeatCols,
  kConcatCols,
  kSliceCols,
  kPadCols,
};

const char* OpName(Op op);

class Graph;

// Lightweight handle to a node. Copyable; valid as long as its Graph lives.
class Var {
 public:
  Var() = default;
  Var(Graph* graph, int id) : graph_(graph), id_(id) {}

  int id() const { return id_; }
  Graph& graph() const { return *graph_; }
  bool valid() const { return graph_ != nullptr; }
  const Matrix& value() const;
  Eigen::Index rows() const { return value().rows(); }
  Eigen::Index cols() const { return value().cols(); }
  // Value of a 1x1 node.
  double scalar() const;

 private:
  Graph* graph_ = nullptr;
  int id_ = -1;
};

struct Node {
  Op op = Op::kConstant;
  std::vector<int> inputs;
  // Op attributes: scale factor, scalar addend, clip bounds, slice range,
  // broadcast target shape.
  double a = 0.0;
  double b = 0.0;
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  Matrix value;
  std::string name;
};

// Bindings for Evaluate(): node id -> replacement value for an input node.
using Bindings = std::unordered_map<int, Matrix>;

class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;
  Graph(Graph&&) = default;
  Graph& operator=(Graph&&) = default;

  // Bindable leaf (parameter or data that Evaluate() may replace).
  Var Input(Matrix value, std::string name = {});
  // Fixed leaf; never receives a gradient.
  Var Constant(Matrix value);
  Var Constant(double value);

  // Returns d(output)/d(wrt[k]) for each k as new graph nodes, so the
  // results are themselves differentiable. `output` must be 1x1. A wrt node
  // that does not influence `output` gets a zero constant of its shape.
  std::vector<Var> Grad(Var output, std::span<const Var> wrt);

  // Replays nodes [0, last] on the given input bindings (all nodes when
  // last < 0). Unbound inputs keep the value they were created with.
  std::vector<Matrix> Evaluate(const Bindings& bindings, int last = -1) const;

  const Node& node(int id) const { return nodes_[id]; }
  const Matrix& value(int id) const { return nodes_[id].value; }
  std::size_t size() const { return nodes_.size(); }

  // Appends a node and computes its value. Used by the free-function ops.
  Var Emit(Op op, std::vector<int> inputs, double a = 0.0, double b = 0.0,
           Eigen::Index i = 0, Eigen::Index j = 0);

 private:
  // deque keeps node references stable while the graph grows.
  std::deque<Node> nodes_;
};

// Elementwise binary ops; operands must have identical shapes.
Var Add(Var x, Var y);
Var Sub(Var x, Var y);
Var Mul(Var x, Var y);
Var Div(Var x, Var y);
// x (n x m) combined with row vector r (1 x m) on every row.
Var AddRow(Var x, Var r);
Var MulRow(Var x, Var r);
Var MatMul(Var x, Var y);
Var Transpose(Var x);
Var Scale(Var x, double c);
Var AddScalar(Var x, double c);
Var Neg(Var x);
Var Tanh(Var x);
Var Relu(Var x);
// 1 where x > 0, else 0. Has no gradient.
Var Step(Var x);
// Overflow-safe softplus: max(x, 0) + log1p(exp(-|x|)).
Var Softplus(Var x);
Var Sigmoid(Var x);
Var Exp(Var x);
Var Log(Var x);
Var Square(Var x);
Var Clip(Var x, double lo, double hi);
// 1 where lo <= x <= hi, else 0. Has no gradient.
Var ClipMask(Var x, double lo, double hi);
// Elementwise minimum; ties route the gradient to x.
Var Minimum(Var x, Var y);
// 1 where x <= y, else 0. Has no gradient.
Var LessEqualMask(Var x, Var y);
// Reductions. Sum and Mean produce 1x1; SumRows gives 1 x m; SumCols n x 1.
Var Sum(Var x);
Var Mean(Var x);
Var SumRows(Var x);
Var SumCols(Var x);
// Broadcasts a 1x1 node to rows x cols.
Var Broadcast(Var s, Eigen::Index rows, Eigen::Index cols);
Var RepeatRows(Var r, Eigen::Index rows);
Var RepeatCols(Var c, Eigen::Index cols);
Var ConcatCols(std::span<const Var> parts);
// Columns [begin, end).
Var SliceCols(Var x, Eigen::Index begin, Eigen::Index end);
// Places x in columns [begin, begin + x.cols()) of a zero array with `total`
// columns.
Var PadCols(Var x, Eigen::Index begin, Eigen::Index total);

// Diagonal-Gaussian log density, one value per row (n x 1).
// `sigma` has the shape of `x`.
Var GaussianLogDensity(Var x, Var mean, Var sigma);
// Same, with a state-independent 1 x d row of log standard deviations.
Var GaussianLogDensityLogStd(Var x, Var mean, Var log_std);

inline Var operator+(Var x, Var y) { return Add(x, y); }
inline Var operator-(Var x, Var y) { return Sub(x, y); }
inline Var operator*(Var x, Var y) { return Mul(x, y); }
inline Var operator/(Var x, Var y) { return Div(x, y); }
inline Var operator-(Var x) { return Neg(x); }

// Compares Grad() against central finite differences over every entry of
// every wrt node. Returns the maximum relative error, where the denominator
// is max(|analytic|, |numeric|, 1e-8).
double CheckGradient(Graph& graph, Var output, std::span<const Var> wrt,
                     double epsilon);

}  // namespace ad
}  // namespace metacnp

#endif  // METACNP_AUTODIFF_H_
