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

#include "scst/nn.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "scst/error.h"

namespace scst::nn {
namespace {

thread_local Tape* g_active_tape = nullptr;
thread_local uint64_t g_flops = 0;

std::shared_ptr<Node> NewNode(Shape shape, std::vector<double> values) {
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->value = std::move(values);
  return node;
}

bool IsSuffix(const Shape& small, const Shape& big) {
  if (small.size() > big.size()) return false;
  return std::equal(small.rbegin(), small.rend(), big.rbegin());
}

void CheckBroadcast(const char* op, const Tensor& a, const Tensor& b) {
  if (!IsSuffix(b.shape(), a.shape())) {
    throw ShapeError(std::string(op) + ": cannot combine " +
                     ShapeString(a.shape()) + " with " +
                     ShapeString(b.shape()));
  }
}

int NormalizeAxis(int axis, int rank) {
  if (axis < 0) axis += rank;
  if (axis < 0 || axis >= rank) {
    throw ShapeError("axis " + std::to_string(axis) + " out of range for rank " +
                     std::to_string(rank));
  }
  return axis;
}

template <class Forward, class Derivative>
Tensor UnaryMap(const Tensor& a, Forward f, Derivative df) {
  std::vector<double> out(a.size());
  auto in = a.values();
  for (size_t i = 0; i < out.size(); ++i) out[i] = f(in[i]);
  AddFlops(out.size());
  return CustomOp(a.shape(), std::move(out), {a},
                  [df](const std::vector<Node*>& ins, const Node& o) {
                    Node* x = ins[0];
                    for (size_t i = 0; i < o.grad.size(); ++i) {
                      x->grad[i] += o.grad[i] * df(x->value[i], o.value[i]);
                    }
                  });
}

}  // namespace

std::string ShapeString(const Shape& shape) {
  std::ostringstream out;
  out << '(';
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) out << 'x';
    out << shape[i];
  }
  out << ')';
  return out.str();
}

size_t NumElements(const Shape& shape) {
  size_t n = 1;
  for (int d : shape) n *= static_cast<size_t>(d);
  return n;
}

Tensor Tensor::Zeros(Shape shape, bool requires_grad) {
  return Full(std::move(shape), 0.0, requires_grad);
}

Tensor Tensor::Full(Shape shape, double value, bool requires_grad) {
  size_t n = NumElements(shape);
  return FromVector(std::move(shape), std::vector<double>(n, value),
                    requires_grad);
}

Tensor Tensor::FromVector(Shape shape, std::vector<double> values,
                          bool requires_grad) {
  for (int d : shape) {
    if (d < 0) throw ShapeError("negative dimension in " + ShapeString(shape));
  }
  if (NumElements(shape) != values.size()) {
    throw ShapeError("shape " + ShapeString(shape) + " does not hold " +
                     std::to_string(values.size()) + " values");
  }
  auto node = NewNode(std::move(shape), std::move(values));
  node->requires_grad = requires_grad;
  if (requires_grad) node->EnsureGrad();
  return Tensor(std::move(node));
}

Tensor Tensor::Scalar(double value) { return FromVector({}, {value}); }

int Tensor::dim(int axis) const {
  return shape().at(NormalizeAxis(axis, rank()));
}

double Tensor::item() const {
  if (size() != 1) {
    throw ShapeError("item() on tensor of shape " + ShapeString(shape()));
  }
  return node_->value[0];
}

std::span<const double> Tensor::grad() const {
  node_->EnsureGrad();
  return node_->grad;
}

std::span<double> Tensor::mutable_grad() {
  node_->EnsureGrad();
  return node_->grad;
}

void Tensor::ZeroGrad() {
  if (!node_->grad.empty()) {
    std::fill(node_->grad.begin(), node_->grad.end(), 0.0);
  }
}

Tensor Tensor::Detach() const {
  return FromVector(shape(), node_->value, false);
}

void Tape::Record(std::shared_ptr<Node> output, Closure backward) {
  entries_.push_back({std::move(output), std::move(backward)});
}

void Tape::Backward(const Tensor& loss) {
  if (loss.size() != 1) {
    throw ShapeError("backward needs a scalar loss, got " +
                     ShapeString(loss.shape()));
  }
  loss.node()->EnsureGrad();
  loss.node()->grad[0] = 1.0;
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->output->grad.empty()) continue;  // not on the path to the loss
    it->backward();
  }
}

TapeScope::TapeScope(Tape& tape) : previous_(g_active_tape) {
  g_active_tape = &tape;
}

TapeScope::~TapeScope() { g_active_tape = previous_; }

Tape* ActiveTape() { return g_active_tape; }

FlopCounter::FlopCounter() : start_(g_flops) {}
uint64_t FlopCounter::count() const { return g_flops - start_; }
void AddFlops(uint64_t n) { g_flops += n; }

Tensor CustomOp(Shape shape, std::vector<double> values,
                const std::vector<Tensor>& inputs, BackwardFn backward) {
  auto out = NewNode(std::move(shape), std::move(values));
  Tape* tape = g_active_tape;
  bool needs_grad = false;
  for (const Tensor& t : inputs) needs_grad = needs_grad || t.requires_grad();
  if (tape != nullptr && needs_grad) {
    out->requires_grad = true;
    std::vector<std::shared_ptr<Node>> held;
    held.reserve(inputs.size());
    for (const Tensor& t : inputs) held.push_back(t.shared());
    Node* raw_out = out.get();
    tape->Record(out, [held = std::move(held), raw_out,
                       backward = std::move(backward)]() {
      std::vector<Node*> raw;
      raw.reserve(held.size());
      // Every input gets a buffer so backward functions can accumulate
      // unconditionally; constants simply collect an unused gradient.
      for (const auto& n : held) {
        n->EnsureGrad();
        raw.push_back(n.get());
      }
      backward(raw, *raw_out);
    });
  }
  return Tensor(std::move(out));
}

Tensor Add(const Tensor& a, const Tensor& b) {
  CheckBroadcast("add", a, b);
  std::vector<double> out(a.values().begin(), a.values().end());
  auto bv = b.values();
  const size_t n = bv.size();
  for (size_t i = 0; i < out.size(); ++i) out[i] += bv[i % n];
  AddFlops(out.size());
  return CustomOp(a.shape(), std::move(out), {a, b},
                  [](const std::vector<Node*>& in, const Node& o) {
                    const size_t n = in[1]->value.size();
                    for (size_t i = 0; i < o.grad.size(); ++i) {
                      if (in[0]->requires_grad) in[0]->grad[i] += o.grad[i];
                      if (in[1]->requires_grad) in[1]->grad[i % n] += o.grad[i];
                    }
                  });
}

Tensor Sub(const Tensor& a, const Tensor& b) {
  CheckBroadcast("sub", a, b);
  std::vector<double> out(a.values().begin(), a.values().end());
  auto bv = b.values();
  const size_t n = bv.size();
  for (size_t i = 0; i < out.size(); ++i) out[i] -= bv[i % n];
  AddFlops(out.size());
  return CustomOp(a.shape(), std::move(out), {a, b},
                  [](const std::vector<Node*>& in, const Node& o) {
                    const size_t n = in[1]->value.size();
                    for (size_t i = 0; i < o.grad.size(); ++i) {
                      if (in[0]->requires_grad) in[0]->grad[i] += o.grad[i];
                      if (in[1]->requires_grad) in[1]->grad[i % n] -= o.grad[i];
                    }
                  });
}

Tensor Mul(const Tensor& a, const Tensor& b) {
  CheckBroadcast("mul", a, b);
  std::vector<double> out(a.values().begin(), a.values().end());
  auto bv = b.values();
  const size_t n = bv.size();
  for (size_t i = 0; i < out.size(); ++i) out[i] *= bv[i % n];
  AddFlops(out.size());
  return CustomOp(a.shape(), std::move(out), {a, b},
                  [](const std::vector<Node*>& in, const Node& o) {
                    const size_t n = in[1]->value.size();
                    for (size_t i = 0; i < o.grad.size(); ++i) {
                      if (in[0]->requires_grad) {
                        in[0]->grad[i] += o.grad[i] * in[1]->value[i % n];
                      }
                      if (in[1]->requires_grad) {
                        in[1]->grad[i % n] += o.grad[i] * in[0]->value[i];
                      }
                    }
                  });
}

Tensor Scale(const Tensor& a, double factor) {
  return UnaryMap(
      a, [factor](double x) { return x * factor; },
      [factor](double, double) { return factor; });
}

Tensor Sigmoid(const Tensor& a) {
  return UnaryMap(
      a,
      [](double x) {
        if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
        double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor Tanh(const Tensor& a) {
  return UnaryMap(
      a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Tensor Relu(const Tensor& a) {
  return UnaryMap(
      a, [](double x) { return x > 0 ? x : 0.0; },
      [](double x, double) { return x > 0 ? 1.0 : 0.0; });
}

Tensor MatMul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) {
    throw ShapeError("matmul: incompatible shapes " + ShapeString(a.shape()) +
                     " and " + ShapeString(b.shape()));
  }
  const int m = a.dim(0), k = a.dim(1), n = b.dim(1);
  std::vector<double> out(static_cast<size_t>(m) * n, 0.0);
  auto av = a.values();
  auto bv = b.values();
  for (int i = 0; i < m; ++i) {
    double* row = out.data() + static_cast<size_t>(i) * n;
    for (int p = 0; p < k; ++p) {
      const double s = av[static_cast<size_t>(i) * k + p];
      if (s == 0.0) continue;
      const double* brow = bv.data() + static_cast<size_t>(p) * n;
      for (int j = 0; j < n; ++j) row[j] += s * brow[j];
    }
  }
  AddFlops(2ull * m * k * n);
  return CustomOp(
      {m, n}, std::move(out), {a, b},
      [m, k, n](const std::vector<Node*>& in, const Node& o) {
        Node* A = in[0];
        Node* B = in[1];
        const double* g = o.grad.data();
        if (A->requires_grad) {
          // dA = G B^T
          for (int i = 0; i < m; ++i) {
            for (int p = 0; p < k; ++p) {
              double acc = 0.0;
              const double* grow = g + static_cast<size_t>(i) * n;
              const double* brow = B->value.data() + static_cast<size_t>(p) * n;
              for (int j = 0; j < n; ++j) acc += grow[j] * brow[j];
              A->grad[static_cast<size_t>(i) * k + p] += acc;
            }
          }
        }
        if (B->requires_grad) {
          // dB = A^T G
          for (int i = 0; i < m; ++i) {
            const double* grow = g + static_cast<size_t>(i) * n;
            for (int p = 0; p < k; ++p) {
              const double s = A->value[static_cast<size_t>(i) * k + p];
              if (s == 0.0) continue;
              double* bg = B->grad.data() + static_cast<size_t>(p) * n;
              for (int j = 0; j < n; ++j) bg[j] += s * grow[j];
            }
          }
        }
      });
}

Tensor Transpose(const Tensor& a) {
  if (a.rank() != 2) {
    throw ShapeError("transpose needs a matrix, got " + ShapeString(a.shape()));
  }
  const int m = a.dim(0), n = a.dim(1);
  std::vector<double> out(a.size());
  auto v = a.values();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) out[static_cast<size_t>(j) * m + i] = v[static_cast<size_t>(i) * n + j];
  }
  return CustomOp({n, m}, std::move(out), {a},
                  [m, n](const std::vector<Node*>& in, const Node& o) {
                    for (int i = 0; i < m; ++i) {
                      for (int j = 0; j < n; ++j) {
                        in[0]->grad[static_cast<size_t>(i) * n + j] +=
                            o.grad[static_cast<size_t>(j) * m + i];
                      }
                    }
                  });
}

Tensor Outer(const Tensor& u, const Tensor& v) {
  if (u.rank() != 1 || v.rank() != 1) {
    throw ShapeError("outer: expected vectors, got " + ShapeString(u.shape()) +
                     " and " + ShapeString(v.shape()));
  }
  const int p = u.dim(0), q = v.dim(0);
  std::vector<double> out(static_cast<size_t>(p) * q);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < q; ++j) out[static_cast<size_t>(i) * q + j] = u.at(i) * v.at(j);
  }
  AddFlops(out.size());
  return CustomOp({p, q}, std::move(out), {u, v},
                  [p, q](const std::vector<Node*>& in, const Node& o) {
                    for (int i = 0; i < p; ++i) {
                      for (int j = 0; j < q; ++j) {
                        const double g = o.grad[static_cast<size_t>(i) * q + j];
                        if (in[0]->requires_grad) in[0]->grad[i] += g * in[1]->value[j];
                        if (in[1]->requires_grad) in[1]->grad[j] += g * in[0]->value[i];
                      }
                    }
                  });
}

Tensor Softmax(const Tensor& x, int axis) {
  if (x.rank() == 0) throw ShapeError("softmax of a scalar");
  axis = NormalizeAxis(axis, x.rank());
  const Shape& s = x.shape();
  const int n = s[axis];
  if (n < 1) throw ShapeError("softmax over an empty axis");
  size_t inner = 1;
  for (size_t i = axis + 1; i < s.size(); ++i) inner *= s[i];
  const size_t outer = x.size() / (inner * n);
  std::vector<double> out(x.size());
  auto v = x.values();
  for (size_t o = 0; o < outer; ++o) {
    for (size_t in = 0; in < inner; ++in) {
      const size_t base = o * n * inner + in;
      double mx = v[base];
      for (int k = 1; k < n; ++k) mx = std::max(mx, v[base + k * inner]);
      double total = 0.0;
      for (int k = 0; k < n; ++k) {
        double e = std::exp(v[base + k * inner] - mx);
        out[base + k * inner] = e;
        total += e;
      }
      for (int k = 0; k < n; ++k) out[base + k * inner] /= total;
    }
  }
  AddFlops(3 * out.size());
  return CustomOp(s, std::move(out), {x},
                  [outer, inner, n](const std::vector<Node*>& ins, const Node& o) {
                    for (size_t b = 0; b < outer; ++b) {
                      for (size_t in = 0; in < inner; ++in) {
                        const size_t base = b * n * inner + in;
                        double dot = 0.0;
                        for (int k = 0; k < n; ++k) {
                          dot += o.grad[base + k * inner] * o.value[base + k * inner];
                        }
                        for (int k = 0; k < n; ++k) {
                          const size_t i = base + k * inner;
                          ins[0]->grad[i] += o.value[i] * (o.grad[i] - dot);
                        }
                      }
                    }
                  });
}

Tensor Reshape(const Tensor& x, Shape shape) {
  if (NumElements(shape) != x.size()) {
    throw ShapeError("reshape: " + ShapeString(x.shape()) + " to " +
                     ShapeString(shape));
  }
  std::vector<double> out(x.values().begin(), x.values().end());
  return CustomOp(std::move(shape), std::move(out), {x},
                  [](const std::vector<Node*>& in, const Node& o) {
                    for (size_t i = 0; i < o.grad.size(); ++i) in[0]->grad[i] += o.grad[i];
                  });
}

Tensor Sum(const Tensor& x) {
  auto v = x.values();
  double total = std::accumulate(v.begin(), v.end(), 0.0);
  AddFlops(x.size());
  return CustomOp({}, {total}, {x},
                  [](const std::vector<Node*>& in, const Node& o) {
                    for (double& g : in[0]->grad) g += o.grad[0];
                  });
}

Tensor Mean(const Tensor& x) {
  if (x.size() == 0) throw ShapeError("mean of an empty tensor");
  return Scale(Sum(x), 1.0 / static_cast<double>(x.size()));
}

Tensor MeanRows(const Tensor& x) {
  if (x.rank() != 2 || x.dim(0) == 0) {
    throw ShapeError("mean_rows needs a non-empty matrix, got " +
                     ShapeString(x.shape()));
  }
  const int m = x.dim(0), n = x.dim(1);
  std::vector<double> out(n, 0.0);
  auto v = x.values();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) out[j] += v[static_cast<size_t>(i) * n + j];
  }
  for (double& o : out) o /= m;
  AddFlops(x.size());
  return CustomOp({n}, std::move(out), {x},
                  [m, n](const std::vector<Node*>& in, const Node& o) {
                    for (int i = 0; i < m; ++i) {
                      for (int j = 0; j < n; ++j) {
                        in[0]->grad[static_cast<size_t>(i) * n + j] += o.grad[j] / m;
                      }
                    }
                  });
}

Tensor GatherRows(const Tensor& table, const std::vector<int>& ids) {
  if (table.rank() != 2) {
    throw ShapeError("gather_rows needs a matrix, got " +
                     ShapeString(table.shape()));
  }
  const int rows = table.dim(0), d = table.dim(1);
  std::vector<double> out;
  out.reserve(ids.size() * d);
  auto v = table.values();
  for (int id : ids) {
    if (id < 0 || id >= rows) {
      throw ShapeError("gather_rows: row " + std::to_string(id) +
                       " outside table of " + std::to_string(rows) + " rows");
    }
    out.insert(out.end(), v.begin() + static_cast<long>(id) * d,
               v.begin() + static_cast<long>(id + 1) * d);
  }
  return CustomOp({static_cast<int>(ids.size()), d}, std::move(out), {table},
                  [ids, d](const std::vector<Node*>& in, const Node& o) {
                    for (size_t r = 0; r < ids.size(); ++r) {
                      for (int j = 0; j < d; ++j) {
                        in[0]->grad[static_cast<size_t>(ids[r]) * d + j] +=
                            o.grad[r * d + j];
                      }
                    }
                  });
}

Tensor SliceRows(const Tensor& x, int begin, int count) {
  if (x.rank() < 1 || begin < 0 || count < 0 || begin + count > x.dim(0)) {
    throw ShapeError("slice_rows [" + std::to_string(begin) + ", " +
                     std::to_string(begin + count) + ") of " +
                     ShapeString(x.shape()));
  }
  const size_t stride = x.size() / std::max(1, x.dim(0));
  Shape shape = x.shape();
  shape[0] = count;
  std::vector<double> out(x.values().begin() + static_cast<long>(begin * stride),
                          x.values().begin() +
                              static_cast<long>((begin + count) * stride));
  const size_t offset = begin * stride;
  return CustomOp(std::move(shape), std::move(out), {x},
                  [offset](const std::vector<Node*>& in, const Node& o) {
                    for (size_t i = 0; i < o.grad.size(); ++i) {
                      in[0]->grad[offset + i] += o.grad[i];
                    }
                  });
}

Tensor SliceCols(const Tensor& x, int begin, int count) {
  if (x.rank() != 2 || begin < 0 || count < 0 || begin + count > x.dim(1)) {
    throw ShapeError("slice_cols [" + std::to_string(begin) + ", " +
                     std::to_string(begin + count) + ") of " +
                     ShapeString(x.shape()));
  }
  const int m = x.dim(0), n = x.dim(1);
  std::vector<double> out(static_cast<size_t>(m) * count);
  auto v = x.values();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < count; ++j) {
      out[static_cast<size_t>(i) * count + j] = v[static_cast<size_t>(i) * n + begin + j];
    }
  }
  return CustomOp({m, count}, std::move(out), {x},
                  [m, n, begin, count](const std::vector<Node*>& in, const Node& o) {
                    for (int i = 0; i < m; ++i) {
                      for (int j = 0; j < count; ++j) {
                        in[0]->grad[static_cast<size_t>(i) * n + begin + j] +=
                            o.grad[static_cast<size_t>(i) * count + j];
                      }
                    }
                  });
}

Tensor ConcatCols(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw ShapeError("concat_cols of nothing");
  const int m = parts[0].dim(0);
  std::vector<int> widths;
  int total = 0;
  for (const Tensor& p : parts) {
    if (p.rank() != 2 || p.dim(0) != m) {
      throw ShapeError("concat_cols: mismatched part " + ShapeString(p.shape()));
    }
    widths.push_back(p.dim(1));
    total += p.dim(1);
  }
  std::vector<double> out(static_cast<size_t>(m) * total);
  int col = 0;
  for (size_t k = 0; k < parts.size(); ++k) {
    auto v = parts[k].values();
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < widths[k]; ++j) {
        out[static_cast<size_t>(i) * total + col + j] = v[static_cast<size_t>(i) * widths[k] + j];
      }
    }
    col += widths[k];
  }
  return CustomOp({m, total}, std::move(out), parts,
                  [m, total, widths](const std::vector<Node*>& in, const Node& o) {
                    int col = 0;
                    for (size_t k = 0; k < in.size(); ++k) {
                      if (in[k]->requires_grad) {
                        for (int i = 0; i < m; ++i) {
                          for (int j = 0; j < widths[k]; ++j) {
                            in[k]->grad[static_cast<size_t>(i) * widths[k] + j] +=
                                o.grad[static_cast<size_t>(i) * total + col + j];
                          }
                        }
                      }
                      col += widths[k];
                    }
                  });
}

Tensor Stack(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw ShapeError("stack of nothing");
  const Shape& inner = parts[0].shape();
  std::vector<double> out;
  out.reserve(parts.size() * parts[0].size());
  for (const Tensor& p : parts) {
    if (p.shape() != inner) {
      throw ShapeError("stack: " + ShapeString(p.shape()) + " differs from " +
                       ShapeString(inner));
    }
    out.insert(out.end(), p.values().begin(), p.values().end());
  }
  Shape shape;
  shape.push_back(static_cast<int>(parts.size()));
  shape.insert(shape.end(), inner.begin(), inner.end());
  const size_t block = parts[0].size();
  return CustomOp(std::move(shape), std::move(out), parts,
                  [block](const std::vector<Node*>& in, const Node& o) {
                    for (size_t k = 0; k < in.size(); ++k) {
                      if (!in[k]->requires_grad) continue;
                      for (size_t i = 0; i < block; ++i) {
                        in[k]->grad[i] += o.grad[k * block + i];
                      }
                    }
                  });
}

Tensor LayerNorm(const Tensor& x, const Tensor& gain, const Tensor& bias,
                 double eps) {
  if (x.rank() < 1) throw ShapeError("layer_norm of a scalar");
  const int n = x.dim(-1);
  if (gain.shape() != Shape{n} || bias.shape() != Shape{n}) {
    throw ShapeError("layer_norm: gain/bias must be (" + std::to_string(n) + ")");
  }
  const size_t rows = x.size() / n;
  std::vector<double> out(x.size());
  std::vector<double> xhat(x.size());
  std::vector<double> inv_std(rows);
  auto v = x.values();
  for (size_t r = 0; r < rows; ++r) {
    const double* row = v.data() + r * n;
    double mean = 0.0;
    for (int j = 0; j < n; ++j) mean += row[j];
    mean /= n;
    double var = 0.0;
    for (int j = 0; j < n; ++j) var += (row[j] - mean) * (row[j] - mean);
    var /= n;
    inv_std[r] = 1.0 / std::sqrt(var + eps);
    for (int j = 0; j < n; ++j) {
      xhat[r * n + j] = (row[j] - mean) * inv_std[r];
      out[r * n + j] = xhat[r * n + j] * gain.at(j) + bias.at(j);
    }
  }
  AddFlops(8 * x.size());
  return CustomOp(
      x.shape(), std::move(out), {x, gain, bias},
      [rows, n, xhat = std::move(xhat), inv_std = std::move(inv_std)](
          const std::vector<Node*>& in, const Node& o) {
        Node* X = in[0];
        Node* G = in[1];
        Node* B = in[2];
        for (size_t r = 0; r < rows; ++r) {
          const double* g = o.grad.data() + r * n;
          const double* xh = xhat.data() + r * n;
          double sum_dy = 0.0, sum_dy_xh = 0.0;
          for (int j = 0; j < n; ++j) {
            const double dy = g[j] * G->value[j];
            sum_dy += dy;
            sum_dy_xh += dy * xh[j];
            if (G->requires_grad) G->grad[j] += g[j] * xh[j];
            if (B->requires_grad) B->grad[j] += g[j];
          }
          if (X->requires_grad) {
            for (int j = 0; j < n; ++j) {
              const double dy = g[j] * G->value[j];
              X->grad[r * n + j] +=
                  inv_std[r] * (dy - sum_dy / n - xh[j] * sum_dy_xh / n);
            }
          }
        }
      });
}

Tensor PowerNormalize(const Tensor& x) {
  if (x.size() == 0 || x.size() % 2 != 0) {
    throw ShapeError("power_normalize needs interleaved complex pairs, got " +
                     ShapeString(x.shape()));
  }
  const double symbols = static_cast<double>(x.size() / 2);
  double energy = 0.0;
  for (double v : x.values()) energy += v * v;
  if (energy == 0.0) {
    throw ValidationError("power_normalize: all-zero symbol block");
  }
  const double r = 1.0 / std::sqrt(energy / symbols);
  std::vector<double> out(x.values().begin(), x.values().end());
  for (double& v : out) v *= r;
  AddFlops(3 * out.size());
  return CustomOp(x.shape(), std::move(out), {x},
                  [r, symbols](const std::vector<Node*>& in, const Node& o) {
                    Node* X = in[0];
                    double dot = 0.0;
                    for (size_t i = 0; i < o.grad.size(); ++i) dot += o.grad[i] * X->value[i];
                    const double c = r * r * r / symbols;
                    for (size_t i = 0; i < o.grad.size(); ++i) {
                      X->grad[i] += r * o.grad[i] - c * X->value[i] * dot;
                    }
                  });
}

Tensor CrossEntropyBinary(const Tensor& pred, const Tensor& label) {
  if (pred.shape() != label.shape()) {
    throw ShapeError("cross_entropy: prediction " + ShapeString(pred.shape()) +
                     " vs label " + ShapeString(label.shape()));
  }
  double loss = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) {
    const double p = std::clamp(pred.at(i), kLogEpsilon, 1.0 - kLogEpsilon);
    const double y = label.at(i);
    loss -= y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
  }
  AddFlops(4 * pred.size());
  return CustomOp({}, {loss}, {pred, label},
                  [](const std::vector<Node*>& in, const Node& o) {
                    Node* P = in[0];
                    if (!P->requires_grad) return;
                    for (size_t i = 0; i < P->value.size(); ++i) {
                      const double p = P->value[i];
                      if (p <= kLogEpsilon || p >= 1.0 - kLogEpsilon) continue;
                      const double y = in[1]->value[i];
                      P->grad[i] += o.grad[0] * (-y / p + (1.0 - y) / (1.0 - p));
                    }
                  });
}

Tensor CrossEntropyCategorical(const Tensor& pred, const Tensor& label) {
  if (pred.shape() != label.shape()) {
    throw ShapeError("cross_entropy: prediction " + ShapeString(pred.shape()) +
                     " vs label " + ShapeString(label.shape()));
  }
  double loss = 0.0;
  for (size_t i = 0; i < pred.size(); ++i) {
    const double y = label.at(i);
    if (y == 0.0) continue;
    loss -= y * std::log(std::clamp(pred.at(i), kLogEpsilon, 1.0));
  }
  AddFlops(2 * pred.size());
  return CustomOp({}, {loss}, {pred, label},
                  [](const std::vector<Node*>& in, const Node& o) {
                    Node* P = in[0];
                    if (!P->requires_grad) return;
                    for (size_t i = 0; i < P->value.size(); ++i) {
                      const double y = in[1]->value[i];
                      const double p = P->value[i];
                      if (y == 0.0 || p <= kLogEpsilon) continue;
                      P->grad[i] += -o.grad[0] * y / p;
                    }
                  });
}

Tensor Dropout(const Tensor& x, double rate, bool training,
               std::mt19937_64& rng) {
  if (!training || rate <= 0.0) return x;
  std::bernoulli_distribution keep(1.0 - rate);
  std::vector<double> mask(x.size());
  const double scale = 1.0 / (1.0 - rate);
  for (double& m : mask) m = keep(rng) ? scale : 0.0;
  return Mul(x, Tensor::FromVector(x.shape(), std::move(mask)));
}

Tensor UniformParam(Shape shape, int fan_in, std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(std::max(1, fan_in)));
  std::uniform_real_distribution<double> dist(-bound, bound);
  std::vector<double> values(NumElements(shape));
  for (double& v : values) v = dist(rng);
  return Tensor::FromVector(std::move(shape), std::move(values), true);
}

Linear::Linear(int in, int out, std::mt19937_64& rng, bool bias)
    : in_(in), out_(out) {
  weight = UniformParam({in, out}, in, rng);
  if (bias) this->bias = UniformParam({out}, in, rng);
}

Tensor Linear::operator()(const Tensor& x) const {
  if (x.rank() == 1) {
    Tensor y = Reshape(MatMul(Reshape(x, {1, x.dim(0)}), weight), {out_});
    return bias.defined() ? Add(y, bias) : y;
  }
  Tensor y = MatMul(x, weight);
  return bias.defined() ? Add(y, bias) : y;
}

void Linear::AppendParams(const std::string& prefix, ParamList* out) const {
  out->emplace_back(prefix + ".weight", weight);
  if (bias.defined()) out->emplace_back(prefix + ".bias", bias);
}

Adam::Adam(ParamList params, AdamOptions options)
    : params_(std::move(params)), options_(options) {
  for (const auto& [name, t] : params_) {
    first_.emplace_back(t.size(), 0.0);
    second_.emplace_back(t.size(), 0.0);
  }
}

void Adam::Step() {
  ++steps_;
  const double b1 = options_.beta1, b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  for (size_t p = 0; p < params_.size(); ++p) {
    Tensor& t = params_[p].second;
    auto grad = t.grad();
    auto value = t.mutable_values();
    std::vector<double>& m = first_[p];
    std::vector<double>& v = second_[p];
    for (size_t i = 0; i < value.size(); ++i) {
      const double g = grad[i];
      m[i] = b1 * m[i] + (1.0 - b1) * g;
      v[i] = b2 * v[i] + (1.0 - b2) * g * g;
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      value[i] -= options_.lr * mhat / (std::sqrt(vhat) + options_.eps);
    }
  }
  ZeroGrad();
}

void Adam::ZeroGrad() {
  for (auto& [name, t] : params_) t.ZeroGrad();
}

}  // namespace scst::nn
