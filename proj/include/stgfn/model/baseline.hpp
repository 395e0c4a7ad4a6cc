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

#pragma once

#include <span>
#include <vector>

#include "stgfn/model/stgfn.hpp"

namespace stgfn::model {

/// Logistic regression for the outcome and a linear map for the two
/// utilities, on [mean turn token-frequency vector ; node A ; node B].
class LogisticBaseline final : public Model {
 public:
  LogisticBaseline(ModelConfig config, Vocabulary vocab, std::uint64_t seed);

  ModelKind kind() const override { return ModelKind::kLogistic; }
  std::unique_ptr<Model> clone() const override { return std::make_unique<LogisticBaseline>(*this); }

  std::size_t feature_dim() const;
  /// Independent of turn order.
  std::vector<double> features(const EncodedInstance& instance) const;

 protected:
  std::string utility_bias_name() const override { return "baseline.utility.bias"; }
  ForwardOutput run(Tape& tape, const Binder& bind, std::span<const EncodedInstance* const> batch,
                    std::mt19937_64* dropout_rng) const override;
};

}  // namespace stgfn::model
