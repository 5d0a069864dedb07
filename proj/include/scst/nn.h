// Copyright 2026 The SCST Authors.
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

#ifndef SCST_NN_H_
#define SCST_NN_H_

// Dense row-major tensors with tape-based reverse-mode differentiation.
//
// Operations record a backward closure on the thread's active Tape (see
// TapeScope) whenever one of their inputs requires a gradient. Without an
// active tape nothing is recorded, which is how evaluation runs.

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace scst::nn {

using Shape = std::vector<int>;

std::string ShapeString(const Shape& shape);
size_t NumElements(const Shape& shape);

struct Node {
  Shape shape;
  std::vector<double> value;
  std::vector<double> grad;  // empty until first touched
  bool requires_grad = false;

  void EnsureGrad() {
    if (grad.size() != value.size()) grad.assign(value.size(), 0.0);
  }
};

class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::shared_ptr<Node> node) : node_(std::move(node)) {}

  static Tensor Zeros(Shape shape, bool requires_grad = false);
  static Tensor Full(Shape shape, double value, bool requires_grad = false);
  static Tensor FromVector(Shape shape, std::vector<double> values,
                           bool requires_grad = false);
  static Tensor Scalar(double value);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  int rank() const { return static_cast<int>(node_->shape.size()); }
  int dim(int axis) const;
  size_t size() const { return node_->value.size(); }
  bool requires_grad() const { return node_->requires_grad; }

  std::span<const double> values() const { return node_->value; }
  std::span<double> mutable_values() { return node_->value; }
  double at(size_t i) const { return node_->value.at(i); }
  double item() const;

  // Gradient buffer; all zeros when the tensor was not reached by Backward.
  std::span<const double> grad() const;
  std::span<double> mutable_grad();
  void ZeroGrad();

  // Copy of the values without gradient tracking.
  Tensor Detach() const;

  Node* node() const { return node_.get(); }
  const std::shared_ptr<Node>& shared() const { return node_; }

 private:
  std::shared_ptr<Node> node_;
};

// Ordered record of differentiable operations. Entries are appended in
// construction order, so replaying them in reverse is a valid topological
// order for the backward pass.
class Tape {
 public:
  using Closure = std::function<void()>;

  void Record(std::shared_ptr<Node> output, Closure backward);
  // Seeds d loss / d loss = 1 and runs every recorded closure in reverse.
  // Throws ShapeError for non-scalar losses.
  void Backward(const Tensor& loss);
  void Clear() { entries_.clear(); }
  size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    std::shared_ptr<Node> output;
    Closure backward;
  };
  std::vector<Entry> entries_;
};

// Makes `tape` the active tape of the calling thread for the scope lifetime.
class TapeScope {
 public:
  explicit TapeScope(Tape& tape);
  ~TapeScope();
  TapeScope(const TapeScope&) = delete;
  TapeScope& operator=(const TapeScope&) = delete;

 private:
  Tape* previous_;
};

Tape* ActiveTape();

// Floating-point operation tally for the calling thread. Dense products
// count 2mkn, elementwise maps count one per output element.
class FlopCounter {
 public:
  FlopCounter();
  uint64_t count() const;

 private:
  uint64_t start_;
};
void AddFlops(uint64_t n);

// Escape hatch for operations defined outside this file. `backward` receives
// the input nodes (gradient buffers allocated for those requiring one) and
// the output node with its gradient populated.
using BackwardFn =
    std::function<void(const std::vector<Node*>& inputs, const Node& output)>;
Tensor CustomOp(Shape shape, std::vector<double> values,
                const std::vector<Tensor>& inputs, BackwardFn backward);

// Elementwise. `b` may match `a` exactly or a trailing suffix of its shape,
// in which case it is broadcast over the leading axes.
Tensor Add(const Tensor& a, const Tensor& b);
Tensor Sub(const Tensor& a, const Tensor& b);
Tensor Mul(const Tensor& a, const Tensor& b);
Tensor Scale(const Tensor& a, double factor);
Tensor Sigmoid(const Tensor& a);
Tensor Tanh(const Tensor& a);
Tensor Relu(const Tensor& a);

Tensor MatMul(const Tensor& a, const Tensor& b);
Tensor Transpose(const Tensor& a);
Tensor Outer(const Tensor& u, const Tensor& v);
// Numerically stable softmax along `axis` (negative counts from the end).
Tensor Softmax(const Tensor& x, int axis = -1);

// Structural.
Tensor Reshape(const Tensor& x, Shape shape);
Tensor Sum(const Tensor& x);
Tensor Mean(const Tensor& x);
// Mean over axis 0 of a rank-2 tensor.
Tensor MeanRows(const Tensor& x);
Tensor GatherRows(const Tensor& table, const std::vector<int>& ids);
// Rows [begin, begin + count) along axis 0, for any rank >= 1.
Tensor SliceRows(const Tensor& x, int begin, int count);
Tensor SliceCols(const Tensor& x, int begin, int count);
Tensor ConcatCols(const std::vector<Tensor>& parts);
// Stacks equally shaped tensors along a new leading axis.
Tensor Stack(const std::vector<Tensor>& parts);

// Row-wise normalization over the last axis with gain and bias.
Tensor LayerNorm(const Tensor& x, const Tensor& gain, const Tensor& bias,
                 double eps = 1e-5);

// Rescales interleaved (re, im) pairs to mean |s|^2 = 1 over all symbols.
// Throws ValidationError for an all-zero input.
Tensor PowerNormalize(const Tensor& x);

inline constexpr double kLogEpsilon = 1e-7;

// Binary cross-entropy summed over elements; predictions are clipped to
// [eps, 1 - eps] before the logarithm.
Tensor CrossEntropyBinary(const Tensor& pred, const Tensor& label);
// -sum(label * log(clip(pred))).
Tensor CrossEntropyCategorical(const Tensor& pred, const Tensor& label);

// Inverted dropout; identity when !training or rate == 0.
Tensor Dropout(const Tensor& x, double rate, bool training, std::mt19937_64& rng);

using NamedTensor = std::pair<std::string, Tensor>;
using ParamList = std::vector<NamedTensor>;

// Leaf parameter filled from uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)).
Tensor UniformParam(Shape shape, int fan_in, std::mt19937_64& rng);

// Affine map x W + b on the last axis of a rank-1 or rank-2 input.
class Linear {
 public:
  Linear() = default;
  Linear(int in, int out, std::mt19937_64& rng, bool bias = true);

  Tensor operator()(const Tensor& x) const;
  void AppendParams(const std::string& prefix, ParamList* out) const;
  int in() const { return in_; }
  int out() const { return out_; }

  Tensor weight;  // [in x out]
  Tensor bias;    // [out], undefined when built without bias

 private:
  int in_ = 0;
  int out_ = 0;
};

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction; clears gradients after every step.
class Adam {
 public:
  Adam(ParamList params, AdamOptions options);

  void Step();
  void ZeroGrad();
  int64_t steps() const { return steps_; }
  const AdamOptions& options() const { return options_; }
  void set_lr(double lr) { options_.lr = lr; }

 private:
  ParamList params_;
  AdamOptions options_;
  std::vector<std::vector<double>> first_;
  std::vector<std::vector<double>> second_;
  int64_t steps_ = 0;
};

}  // namespace scst::nn

#endif  // SCST_NN_H_
