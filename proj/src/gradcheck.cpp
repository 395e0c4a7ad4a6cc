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

#include "stgfn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "stgfn/data/features.hpp"
#include "stgfn/data/synthetic.hpp"
#include "stgfn/error.hpp"
#include "stgfn/loss.hpp"
#include "stgfn/model/baseline.hpp"
#include "stgfn/model/stgfn.hpp"
#include "stgfn/ops.hpp"
#include "stgfn/random.hpp"

namespace stgfn::gradcheck {

namespace {

/// Values away from the kinks of relu/abs/leaky_relu.
Tensor random_tensor(Shape shape, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape));
  for (double& v : t.values()) {
    double x = 0.0;
    do {
      x = lo + (hi - lo) * uniform01(rng);
    } while (std::fabs(x) < 0.1);
    v = x;
  }
  return t;
}

/// Owned leaves plus a fixed projection that turns an op output into a scalar.
struct Leaves {
  std::vector<Tensor> tensors;
  Tensor projection;
};

Problem unary_case(std::uint64_t seed, Shape shape, std::function<Var(Var)> op, double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  auto leaves = std::make_shared<Leaves>();
  leaves->tensors.push_back(random_tensor(shape, rng, lo, hi));
  leaves->tensors[0].set_requires_grad(true);
  Problem p;
  p.params = {&leaves->tensors[0]};
  p.storage = leaves;
  p.loss = [leaves, op, seed](Tape& t) {
    const Var out = op(t.parameter(leaves->tensors[0]));
    if (leaves->projection.size() != out.value().size()) {
      std::mt19937_64 prng(derive_seed(seed, 1));
      leaves->projection = random_tensor(out.value().shape(), prng);
    }
    return sum(out * t.constant(leaves->projection));
  };
  return p;
}

Problem binary_case(std::uint64_t seed, Shape a, Shape b, std::function<Var(Var, Var)> op) {
  std::mt19937_64 rng(seed);
  auto leaves = std::make_shared<Leaves>();
  leaves->tensors.push_back(random_tensor(a, rng));
  leaves->tensors.push_back(random_tensor(b, rng));
  for (auto& t : leaves->tensors) t.set_requires_grad(true);
  Problem p;
  p.params = {&leaves->tensors[0], &leaves->tensors[1]};
  p.storage = leaves;
  p.loss = [leaves, op, seed](Tape& t) {
    const Var out = op(t.parameter(leaves->tensors[0]), t.parameter(leaves->tensors[1]));
    if (leaves->projection.size() != out.value().size()) {
      std::mt19937_64 prng(derive_seed(seed, 1));
      leaves->projection = random_tensor(out.value().shape(), prng);
    }
    return sum(out * t.constant(leaves->projection));
  };
  return p;
}

struct ModelFixture {
  std::unique_ptr<model::Model> net;
  std::vector<model::EncodedInstance> batch;
};

Problem model_case(std::uint64_t seed, model::ModelKind kind, model::GateMode mode) {
  data::SyntheticSpec spec;
  spec.instances = 3;
  spec.vocabulary = 10;
  spec.min_turns = 2;
  spec.max_turns = 6;
  spec.text_strength = 0.6;
  spec.graph_strength = 0.6;
  spec.seed = seed;
  const auto corpus = data::generate_synthetic(spec);
  model::ModelConfig cfg;
  cfg.embedder.d_txt = 16;
  cfg.embedder.max_turns = 5;
  cfg.hidden = 8;
  cfg.heads = 2;
  cfg.gate_mode = mode;
  const auto vocab = model::Vocabulary::build(corpus.instances);
  const auto stats = data::compute_corpus_stats(corpus.instances);
  auto fx = std::make_shared<ModelFixture>();
  fx->net = model::make_model(kind, cfg, vocab, seed);
  fx->batch = model::encode_corpus(corpus.instances, vocab, cfg.embedder, stats);
  Problem p;
  p.params = fx->net->parameters().pointers();
  p.storage = fx;
  p.loss = [fx, seed](Tape& t) {
    std::vector<const model::EncodedInstance*> rows;
    std::vector<int> labels;
    Tensor target({fx->batch.size(), 2});
    for (std::size_t r = 0; r < fx->batch.size(); ++r) {
      rows.push_back(&fx->batch[r]);
      labels.push_back(fx->batch[r].outcome);
      target.at(r, 0) = fx->batch[r].utilities.a / 10.0;
      target.at(r, 1) = fx->batch[r].utilities.b / 10.0;
    }
    std::mt19937_64 dropout_rng(derive_seed(seed, 2));
    const auto out = fx->net->forward(t, rows, &dropout_rng);
    return loss::composite_loss(out.probability, labels, out.utilities, t.constant(std::move(target)), 0.7).total;
  };
  return p;
}

Problem loss_case(std::uint64_t seed, int which) {
  std::mt19937_64 rng(seed);
  auto leaves = std::make_shared<Leaves>();
  leaves->tensors.push_back(random_tensor({5, 1}, rng));
  leaves->tensors.push_back(random_tensor({5, 2}, rng, -3.0, 3.0));
  for (auto& t : leaves->tensors) t.set_requires_grad(true);
  auto labels = std::make_shared<std::vector<int>>();
  for (int i = 0; i < 5; ++i) labels->push_back(i % 2);
  Tensor target = random_tensor({5, 2}, rng, -3.0, 3.0);
  Problem p;
  p.params = {&leaves->tensors[0], &leaves->tensors[1]};
  p.storage = leaves;
  p.loss = [leaves, labels, target, which](Tape& t) {
    const Var probs = sigmoid(t.parameter(leaves->tensors[0]));
    const Var util = t.parameter(leaves->tensors[1]);
    const Var truth = t.constant(target);
    switch (which) {
      case 0:
        return loss::outcome_loss(probs, *labels);
      case 1:
        return loss::utility_loss(util, truth);
      case 2:
        return loss::fairness_loss(util, truth);
      default:
        return loss::composite_loss(probs, *labels, util, truth, 0.7).total;
    }
  };
  return p;
}

}  // namespace

CheckResult check(const std::string& name, Problem& problem, const Options& options) {
  for (Tensor* p : problem.params) {
    if (!p->requires_grad()) p->set_requires_grad(true);
    p->zero_grad();
  }
  {
    Tape tape;
    tape.backward(problem.loss(tape));
  }
  std::vector<std::vector<double>> analytic;
  for (Tensor* p : problem.params) analytic.push_back(*p->grad());

  auto value = [&] {
    Tape tape;
    return problem.loss(tape).value().item();
  };
  CheckResult r;
  r.name = name;
  for (std::size_t i = 0; i < problem.params.size(); ++i) {
    Tensor& p = *problem.params[i];
    for (std::size_t e = 0; e < p.size(); ++e) {
      const double saved = p[e];
      p[e] = saved + options.step;
      const double up = value();
      p[e] = saved - options.step;
      const double down = value();
      p[e] = saved;
      const double numeric = (up - down) / (2.0 * options.step);
      const double a = analytic[i][e];
      const double abs_err = std::fabs(a - numeric);
      ++r.elements;
      r.max_abs_error = std::max(r.max_abs_error, abs_err);
      if (abs_err <= options.abs_tol) continue;
      const double rel = abs_err / std::max(std::fabs(a), std::fabs(numeric));
      r.max_rel_error = std::max(r.max_rel_error, rel);
      if (rel > options.rel_tol) ++r.failures;
    }
  }
  for (Tensor* p : problem.params) p->zero_grad();
  return r;
}

std::vector<OpCase> default_cases() {
  using model::GateMode;
  using model::ModelKind;
  std::vector<OpCase> c;
  c.push_back({"matmul", [](std::uint64_t s) { return binary_case(s, {3, 4}, {4, 2}, [](Var a, Var b) { return matmul(a, b); }); }});
  c.push_back({"add", [](std::uint64_t s) { return binary_case(s, {3, 4}, {1, 4}, [](Var a, Var b) { return a + b; }); }});
  c.push_back({"sub", [](std::uint64_t s) { return binary_case(s, {3, 4}, {3, 1}, [](Var a, Var b) { return a - b; }); }});
  c.push_back({"mul", [](std::uint64_t s) { return binary_case(s, {3, 4}, {3, 1}, [](Var a, Var b) { return a * b; }); }});
  c.push_back({"affine", [](std::uint64_t s) { return unary_case(s, {3, 4}, [](Var a) { return affine(a, -1.5, 0.5); }); }});
  c.push_back({"concat", [](std::uint64_t s) { return binary_case(s, {3, 2}, {3, 3}, [](Var a, Var b) { return concat({a, b}); }); }});
  c.push_back({"slice_cols", [](std::uint64_t s) { return unary_case(s, {3, 5}, [](Var a) { return slice_cols(a, 1, 3); }); }});
  c.push_back({"slice_rows", [](std::uint64_t s) { return unary_case(s, {5, 3}, [](Var a) { return slice_rows(a, 1, 3); }); }});
  c.push_back({"sigmoid", [](std::uint64_t s) { return unary_case(s, {3, 4}, [](Var a) { return sigmoid(a); }, -3.0, 3.0); }});
  c.push_back({"tanh", [](std::uint64_t s) { return unary_case(s, {3, 4}, [](Var a) { return tanh(a); }, -2.0, 2.0); }});
  c.push_back({"relu", [](std::uint64_t s) { return unary_case(s, {3, 4}, [](Var a) { return relu(a); }); }});
  c.push_back({"leaky_relu", [](std::uint64_t s) { return unary_case(s, {3, 4}, [](Var a) { return leaky_relu(a, 0.2); }); }});
  c.push_back({"softmax", [](std::uint64_t s) { return unary_case(s, {3, 4}, [](Var a) { return softmax(a); }, -2.0, 2.0); }});
  c.push_back({"abs", [](std::uint64_t s) { return unary_case(s, {3, 4}, [](Var a) { return abs(a); }); }});
  c.push_back({"square", [](std::uint64_t s) { return unary_case(s, {3, 4}, [](Var a) { return square(a); }); }});
  c.push_back({"dropout", [](std::uint64_t s) {
                 return unary_case(s, {3, 4}, [s](Var a) {
                   std::mt19937_64 rng(derive_seed(s, 3));
                   return dropout(a, 0.7, rng, true);
                 });
               }});
  c.push_back({"mean", [](std::uint64_t s) { return unary_case(s, {3, 4}, [](Var a) { return mean(a); }); }});
  c.push_back({"sum", [](std::uint64_t s) { return unary_case(s, {3, 4}, [](Var a) { return sum(a); }); }});
  c.push_back({"binary_cross_entropy", [](std::uint64_t s) {
                 return unary_case(s, {4, 1}, [](Var a) {
                   static const int labels[] = {1, 0, 1, 0};
                   return binary_cross_entropy(sigmoid(a), labels, loss::kBceEpsilon);
                 }, -2.0, 2.0);
               }});
  c.push_back({"embedding_bag", [](std::uint64_t s) {
                 return unary_case(s, {5, 3}, [](Var table) {
                   return embedding_bag(table, {{0, 1, 1}, {}, {4}, {2, 3, 0, 4}});
                 });
               }});
  c.push_back({"loss.outcome", [](std::uint64_t s) { return loss_case(s, 0); }});
  c.push_back({"loss.utility", [](std::uint64_t s) { return loss_case(s, 1); }});
  c.push_back({"loss.fairness", [](std::uint64_t s) { return loss_case(s, 2); }});
  c.push_back({"loss.composite", [](std::uint64_t s) { return loss_case(s, 3); }});
  c.push_back({"model.stgfn.literal", [](std::uint64_t s) { return model_case(s, ModelKind::kStGfn, GateMode::kLiteral); }});
  c.push_back({"model.stgfn.convex", [](std::uint64_t s) { return model_case(s, ModelKind::kStGfn, GateMode::kConvex); }});
  c.push_back({"model.logistic", [](std::uint64_t s) { return model_case(s, ModelKind::kLogistic, GateMode::kLiteral); }});
  return c;
}

std::vector<CheckResult> run_cases(std::span<const OpCase> cases, std::span<const std::uint64_t> seeds,
                                   const Options& options) {
  if (seeds.empty()) throw ContractError("gradcheck needs at least one seed");
  std::vector<CheckResult> out;
  for (const auto& c : cases) {
    CheckResult worst;
    worst.name = c.name;
    for (std::uint64_t seed : seeds) {
      Problem p = c.make(seed);
      const CheckResult r = check(c.name, p, options);
      worst.elements += r.elements;
      worst.failures += r.failures;
      worst.max_abs_error = std::max(worst.max_abs_error, r.max_abs_error);
      worst.max_rel_error = std::max(worst.max_rel_error, r.max_rel_error);
    }
    out.push_back(worst);
  }
  return out;
}

std::string format_results(std::span<const CheckResult> results, const Options& options) {
  std::size_t width = 2;
  for (const auto& r : results) width = std::max(width, r.name.size());
  std::ostringstream out;
  char buf[160];
  for (const auto& r : results) {
    std::snprintf(buf, sizeof buf, "%-4s  %-*s  max_rel=%.3e  max_abs=%.3e  elements=%zu  tol=%.0e\n",
                  r.passed() ? "PASS" : "FAIL", static_cast<int>(width), r.name.c_str(), r.max_rel_error,
                  r.max_abs_error, r.elements, options.rel_tol);
    out << buf;
  }
  return out.str();
}

}  // namespace stgfn::gradcheck
