// Copyright 2026 The stgfn Authors
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

#include "stgfn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stgfn/error.hpp"
#include "stgfn/kernels.hpp"

namespace stgfn {
namespace {

Tape& same_tape(Var a, Var b) {
  if (!a.valid() || !b.valid() || &a.tape() != &b.tape()) {
    throw ContractError("operands belong to different tapes");
  }
  return a.tape();
}

Shape matrix_shape(std::size_t rows, std::size_t cols) { return Shape{rows, cols}; }

struct Broadcast {
  std::size_t rows, cols;
  std::size_t ar, ac, br, bc;
  bool same;
};

Broadcast broadcast_shapes(std::string_view op, const Tensor& a, const Tensor& b) {
  Broadcast s{};
  s.ar = a.rows();
  s.ac = a.cols();
  s.br = b.rows();
  s.bc = b.cols();
  auto dim = [&](std::size_t x, std::size_t y, const char* axis) {
    if (x == y || y == 1) return x;
    if (x == 1) return y;
    throw ShapeError(std::string(op) + ": cannot broadcast " + shape_string(a.shape()) + " with " +
                     shape_string(b.shape()) + " along " + axis);
  };
  s.rows = dim(s.ar, s.br, "rows");
  s.cols = dim(s.ac, s.bc, "columns");
  s.same = s.ar == s.br && s.ac == s.bc;
  return s;
}

// Sums a rows x cols gradient down to the (tr x tc) operand it was broadcast from.
void reduce_into(const std::vector<double>& g, std::size_t rows, std::size_t cols, std::size_t tr,
                 std::size_t tc, double* target) {
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t rr = tr == 1 ? 0 : r;
    for (std::size_t c = 0; c < cols; ++c) {
      target[rr * tc + (tc == 1 ? 0 : c)] += g[r * cols + c];
    }
  }
}

template <class F>
Tensor broadcast_apply(const Broadcast& s, const Tensor& a, const Tensor& b, Shape out_shape, F f) {
  Tensor out(std::move(out_shape));
  double* o = out.data();
  for (std::size_t r = 0; r < s.rows; ++r) {
    const double* a_row = a.data() + (s.ar == 1 ? 0 : r) * s.ac;
    const double* b_row = b.data() + (s.br == 1 ? 0 : r) * s.bc;
    for (std::size_t c = 0; c < s.cols; ++c) {
      o[r * s.cols + c] = f(a_row[s.ac == 1 ? 0 : c], b_row[s.bc == 1 ? 0 : c]);
    }
  }
  return out;
}

// Elementwise unary op whose derivative is a function of input and output.
template <class Fwd, class Deriv>
Var unary(std::string_view op, Var a, Fwd fwd, Deriv deriv) {
  const Tensor& x = a.value();
  Tensor out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = fwd(x[i]);
  return a.tape().record(op, std::move(out), {a}, [a, deriv](Tape& t, const std::vector<double>& g) {
    double* ga = t.grad_target(a);
    if (!ga) return;
    const Tensor& x = a.value();
    // The output node is the one currently being processed; recompute from
    // input to avoid holding a second copy.
    for (std::size_t i = 0; i < x.size(); ++i) ga[i] += g[i] * deriv(x[i]);
  });
}

}  // namespace

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Var matmul(Var a, Var b) {
  Tape& t = same_tape(a, b);
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  const std::size_t m = x.rows(), k = x.cols(), n = y.cols();
  if (y.rows() != k) {
    throw ShapeError("matmul: inner dimensions differ: " + shape_string(x.shape()) + " * " +
                     shape_string(y.shape()));
  }
  Tensor out(matrix_shape(m, n));
  kernels::active().gemm(m, n, k, x.data(), y.data(), out.data(), false);
  return t.record("matmul", std::move(out), {a, b}, [a, b, m, k, n](Tape& t, const std::vector<double>& g) {
    const auto& kern = kernels::active();
    if (double* ga = t.grad_target(a)) {
      std::vector<double> bt(n * k);
      kernels::transpose(k, n, b.value().data(), bt.data());
      kern.gemm(m, k, n, g.data(), bt.data(), ga, true);
    }
    if (double* gb = t.grad_target(b)) {
      std::vector<double> at(k * m);
      kernels::transpose(m, k, a.value().data(), at.data());
      kern.gemm(k, n, m, at.data(), g.data(), gb, true);
    }
  });
}

Var add(Var a, Var b) {
  Tape& t = same_tape(a, b);
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  const Broadcast s = broadcast_shapes("add", x, y);
  Tensor out;
  if (s.same) {
    out = Tensor(x.shape());
    kernels::active().add(x.size(), x.data(), y.data(), out.data());
  } else {
    out = broadcast_apply(s, x, y, matrix_shape(s.rows, s.cols), [](double p, double q) { return p + q; });
  }
  return t.record("add", std::move(out), {a, b}, [a, b, s](Tape& t, const std::vector<double>& g) {
    if (double* ga = t.grad_target(a)) reduce_into(g, s.rows, s.cols, s.ar, s.ac, ga);
    if (double* gb = t.grad_target(b)) reduce_into(g, s.rows, s.cols, s.br, s.bc, gb);
  });
}

Var sub(Var a, Var b) {
  Tape& t = same_tape(a, b);
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  const Broadcast s = broadcast_shapes("sub", x, y);
  Tensor out = broadcast_apply(s, x, y, s.same ? x.shape() : matrix_shape(s.rows, s.cols),
                               [](double p, double q) { return p - q; });
  return t.record("sub", std::move(out), {a, b}, [a, b, s](Tape& t, const std::vector<double>& g) {
    if (double* ga = t.grad_target(a)) reduce_into(g, s.rows, s.cols, s.ar, s.ac, ga);
    if (double* gb = t.grad_target(b)) {
      std::vector<double> neg(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) neg[i] = -g[i];
      reduce_into(neg, s.rows, s.cols, s.br, s.bc, gb);
    }
  });
}

Var mul(Var a, Var b) {
  Tape& t = same_tape(a, b);
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  const Broadcast s = broadcast_shapes("elementwise_mul", x, y);
  Tensor out;
  if (s.same) {
    out = Tensor(x.shape());
    kernels::active().mul(x.size(), x.data(), y.data(), out.data());
  } else {
    out = broadcast_apply(s, x, y, matrix_shape(s.rows, s.cols), [](double p, double q) { return p * q; });
  }
  return t.record("elementwise_mul", std::move(out), {a, b}, [a, b, s](Tape& t, const std::vector<double>& g) {
    const Tensor& x = a.value();
    const Tensor& y = b.value();
    if (double* ga = t.grad_target(a)) {
      if (s.same) {
        std::vector<double> prod(g.size());
        kernels::active().mul(g.size(), g.data(), y.data(), prod.data());
        kernels::active().add(g.size(), ga, prod.data(), ga);
      } else {
        const Broadcast gs{s.rows, s.cols, s.rows, s.cols, s.br, s.bc, false};
        Tensor gy = broadcast_apply(gs, Tensor(Shape{s.rows, s.cols}, g), y, Shape{s.rows, s.cols},
                                    [](double p, double q) { return p * q; });
        reduce_into(gy.storage(), s.rows, s.cols, s.ar, s.ac, ga);
      }
    }
    if (double* gb = t.grad_target(b)) {
      if (s.same) {
        std::vector<double> prod(g.size());
        kernels::active().mul(g.size(), g.data(), x.data(), prod.data());
        kernels::active().add(g.size(), gb, prod.data(), gb);
      } else {
        const Broadcast gs{s.rows, s.cols, s.rows, s.cols, s.ar, s.ac, false};
        Tensor gx = broadcast_apply(gs, Tensor(Shape{s.rows, s.cols}, g), x, Shape{s.rows, s.cols},
                                    [](double p, double q) { return p * q; });
        reduce_into(gx.storage(), s.rows, s.cols, s.br, s.bc, gb);
      }
    }
  });
}

Var affine(Var a, double scale, double shift) {
  const Tensor& x = a.value();
  Tensor out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = scale * x[i] + shift;
  return a.tape().record("affine", std::move(out), {a}, [a, scale](Tape& t, const std::vector<double>& g) {
    if (double* ga = t.grad_target(a)) kernels::active().axpy(g.size(), scale, g.data(), ga);
  });
}

Var concat(std::initializer_list<Var> parts) { return concat(std::span<const Var>(parts.begin(), parts.size())); }

Var concat(std::span<const Var> parts) {
  if (parts.empty()) throw ContractError("concat: no inputs");
  Tape& t = parts.front().tape();
  const std::size_t rows = parts.front().rows();
  std::size_t cols = 0;
  std::vector<std::size_t> widths;
  for (Var p : parts) {
    same_tape(parts.front(), p);
    if (p.rows() != rows) {
      throw ShapeError("concat: row counts differ (" + std::to_string(rows) + " vs " +
                       std::to_string(p.rows()) + ")");
    }
    widths.push_back(p.cols());
    cols += p.cols();
  }
  Tensor out(matrix_shape(rows, cols));
  std::size_t offset = 0;
  for (std::size_t idx = 0; idx < parts.size(); ++idx) {
    const Tensor& v = parts[idx].value();
    for (std::size_t r = 0; r < rows; ++r) {
      std::copy_n(v.data() + r * widths[idx], widths[idx], out.data() + r * cols + offset);
    }
    offset += widths[idx];
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return t.record("concat", std::move(out), inputs,
                  [inputs, widths, rows, cols](Tape& t, const std::vector<double>& g) {
                    std::size_t off = 0;
                    for (std::size_t idx = 0; idx < inputs.size(); ++idx) {
                      if (double* gi = t.grad_target(inputs[idx])) {
                        for (std::size_t r = 0; r < rows; ++r)
                          for (std::size_t c = 0; c < widths[idx]; ++c)
                            gi[r * widths[idx] + c] += g[r * cols + off + c];
                      }
                      off += widths[idx];
                    }
                  });
}

Var slice_cols(Var a, std::size_t begin, std::size_t count) {
  const Tensor& x = a.value();
  const std::size_t rows = x.rows(), cols = x.cols();
  if (begin + count > cols || count == 0) {
    throw ShapeError("slice_cols: columns [" + std::to_string(begin) + ", " + std::to_string(begin + count) +
                     ") out of range for " + shape_string(x.shape()));
  }
  Tensor out(matrix_shape(rows, count));
  for (std::size_t r = 0; r < rows; ++r) std::copy_n(x.data() + r * cols + begin, count, out.data() + r * count);
  return a.tape().record("slice", std::move(out), {a}, [a, begin, count, rows, cols](Tape& t, const std::vector<double>& g) {
    if (double* ga = t.grad_target(a)) {
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < count; ++c) ga[r * cols + begin + c] += g[r * count + c];
    }
  });
}

Var slice_rows(Var a, std::size_t begin, std::size_t count) {
  const Tensor& x = a.value();
  const std::size_t rows = x.rows(), cols = x.cols();
  if (begin + count > rows || count == 0) {
    throw ShapeError("slice_rows: rows [" + std::to_string(begin) + ", " + std::to_string(begin + count) +
                     ") out of range for " + shape_string(x.shape()));
  }
  Tensor out(matrix_shape(count, cols));
  std::copy_n(x.data() + begin * cols, count * cols, out.data());
  return a.tape().record("slice_rows", std::move(out), {a}, [a, begin, count, cols](Tape& t, const std::vector<double>& g) {
    if (double* ga = t.grad_target(a)) {
      for (std::size_t i = 0; i < count * cols; ++i) ga[begin * cols + i] += g[i];
    }
  });
}

namespace {

// Keeps sigmoid outputs strictly inside (0, 1) in double precision.
constexpr double kSigmoidLo = std::numeric_limits<double>::min();
constexpr double kSigmoidHi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;

double stable_sigmoid(double x) {
  double s;
  if (x >= 0.0) {
    s = 1.0 / (1.0 + std::exp(-x));
  } else {
    const double e = std::exp(x);
    s = e / (1.0 + e);
  }
  return std::clamp(s, kSigmoidLo, kSigmoidHi);
}

}  // namespace

Var sigmoid(Var a) {
  return unary("sigmoid", a, stable_sigmoid, [](double x) {
    const double s = stable_sigmoid(x);
    return s * (1.0 - s);
  });
}

Var tanh(Var a) {
  return unary("tanh", a, [](double x) { return std::tanh(x); }, [](double x) {
    const double th = std::tanh(x);
    return 1.0 - th * th;
  });
}

Var relu(Var a) {
  return unary("relu", a, [](double x) { return x > 0.0 ? x : 0.0; },
               [](double x) { return x > 0.0 ? 1.0 : 0.0; });
}

Var leaky_relu(Var a, double slope) {
  return unary("leaky_relu", a, [slope](double x) { return x > 0.0 ? x : slope * x; },
               [slope](double x) { return x > 0.0 ? 1.0 : slope; });
}

Var abs(Var a) {
  return unary("abs", a, [](double x) { return std::fabs(x); },
               [](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

Var square(Var a) {
  return unary("square", a, [](double x) { return x * x; }, [](double x) { return 2.0 * x; });
}

Var softmax(Var a) {
  const Tensor& x = a.value();
  const std::size_t rows = x.rows(), cols = x.cols();
  Tensor out(x.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    const double* in = x.data() + r * cols;
    double* o = out.data() + r * cols;
    const double mx = *std::max_element(in, in + cols);
    double z = 0.0;
    for (std::size_t c = 0; c < cols; ++c) z += (o[c] = std::exp(in[c] - mx));
    for (std::size_t c = 0; c < cols; ++c) o[c] /= z;
  }
  Tensor saved = out;
  return a.tape().record("softmax", std::move(out), {a},
                         [a, y = std::move(saved), rows, cols](Tape& t, const std::vector<double>& g) {
                           double* ga = t.grad_target(a);
                           if (!ga) return;
                           for (std::size_t r = 0; r < rows; ++r) {
                             const double* yr = y.data() + r * cols;
                             const double* gr = g.data() + r * cols;
                             double dot = 0.0;
                             for (std::size_t c = 0; c < cols; ++c) dot += gr[c] * yr[c];
                             for (std::size_t c = 0; c < cols; ++c) ga[r * cols + c] += yr[c] * (gr[c] - dot);
                           }
                         });
}

Var dropout(Var a, double keep_prob, std::mt19937_64& rng, bool training) {
  if (!(keep_prob > 0.0 && keep_prob <= 1.0)) throw ContractError("dropout: keep probability must be in (0, 1]");
  if (!training || keep_prob == 1.0) return a;
  const Tensor& x = a.value();
  std::vector<double> mask(x.size());
  const double scale = 1.0 / keep_prob;
  for (double& m : mask) m = uniform01(rng) < keep_prob ? scale : 0.0;
  Tensor out(x.shape());
  kernels::active().mul(x.size(), x.data(), mask.data(), out.data());
  return a.tape().record("dropout", std::move(out), {a}, [a, mask = std::move(mask)](Tape& t, const std::vector<double>& g) {
    if (double* ga = t.grad_target(a)) {
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * mask[i];
    }
  });
}

Var sum(Var a) {
  const Tensor& x = a.value();
  const double s = kernels::active().sum(x.size(), x.data());
  return a.tape().record("sum", Tensor::scalar(s), {a}, [a](Tape& t, const std::vector<double>& g) {
    if (double* ga = t.grad_target(a)) {
      const std::size_t n = a.value().size();
      for (std::size_t i = 0; i < n; ++i) ga[i] += g[0];
    }
  });
}

Var mean(Var a) {
  const Tensor& x = a.value();
  if (x.size() == 0) throw ShapeError("mean of an empty tensor");
  const double n = static_cast<double>(x.size());
  const double s = kernels::active().sum(x.size(), x.data()) / n;
  return a.tape().record("mean", Tensor::scalar(s), {a}, [a, n](Tape& t, const std::vector<double>& g) {
    if (double* ga = t.grad_target(a)) {
      const double d = g[0] / n;
      const std::size_t count = a.value().size();
      for (std::size_t i = 0; i < count; ++i) ga[i] += d;
    }
  });
}

Var binary_cross_entropy(Var probs, std::span<const int> labels, double eps) {
  const Tensor& p = probs.value();
  if (p.size() != labels.size()) {
    throw ShapeError("binary_cross_entropy: " + std::to_string(p.size()) + " probabilities vs " +
                     std::to_string(labels.size()) + " labels");
  }
  if (p.size() == 0) throw ShapeError("binary_cross_entropy: empty batch");
  std::vector<int> y(labels.begin(), labels.end());
  for (int v : y) {
    if (v != 0 && v != 1) throw ContractError("binary_cross_entropy: label " + std::to_string(v) + " is not 0/1");
  }
  const double n = static_cast<double>(y.size());
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double q = std::clamp(p[i], eps, 1.0 - eps);
    total += y[i] ? -std::log(q) : -std::log(1.0 - q);
  }
  return probs.tape().record("bce", Tensor::scalar(total / n), {probs},
                             [probs, y = std::move(y), eps, n](Tape& t, const std::vector<double>& g) {
                               double* gp = t.grad_target(probs);
                               if (!gp) return;
                               const Tensor& p = probs.value();
                               for (std::size_t i = 0; i < y.size(); ++i) {
                                 if (p[i] < eps || p[i] > 1.0 - eps) continue;
                                 const double d = y[i] ? -1.0 / p[i] : 1.0 / (1.0 - p[i]);
                                 gp[i] += g[0] * d / n;
                               }
                             });
}

Var embedding_bag(Var table, const std::vector<std::vector<std::int32_t>>& bags) {
  const Tensor& w = table.value();
  const std::size_t vocab = w.rows(), dim = w.cols();
  for (const auto& bag : bags) {
    for (std::int32_t id : bag) {
      if (id < 0 || static_cast<std::size_t>(id) >= vocab) {
        throw ShapeError("embedding_bag: token index " + std::to_string(id) + " outside table of " +
                         std::to_string(vocab) + " rows");
      }
    }
  }
  Tensor out(matrix_shape(bags.size(), dim));
  for (std::size_t r = 0; r < bags.size(); ++r) {
    if (bags[r].empty()) continue;
    double* o = out.data() + r * dim;
    for (std::int32_t id : bags[r]) kernels::active().add(dim, o, w.data() + id * dim, o);
    const double inv = 1.0 / static_cast<double>(bags[r].size());
    for (std::size_t c = 0; c < dim; ++c) o[c] *= inv;
  }
  return table.tape().record("embedding_bag", std::move(out), {table},
                             [table, bags, dim](Tape& t, const std::vector<double>& g) {
                               double* gw = t.grad_target(table);
                               if (!gw) return;
                               for (std::size_t r = 0; r < bags.size(); ++r) {
                                 if (bags[r].empty()) continue;
                                 const double inv = 1.0 / static_cast<double>(bags[r].size());
                                 for (std::int32_t id : bags[r])
                                   kernels::active().axpy(dim, inv, g.data() + r * dim, gw + id * dim);
                               }
                             });
}

}  // namespace stgfn
