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

#include <filesystem>
#include <memory>
#include <string>

#include "stgfn/data/features.hpp"
#include "stgfn/model/stgfn.hpp"
#include "stgfn/training/config.hpp"
#include "stgfn/training/trainer.hpp"

namespace stgfn::training {

inline constexpr int kCheckpointVersion = 1;
inline constexpr const char* kCheckpointFormat = "stgfn-checkpoint";

struct Checkpoint {
  TrainConfig config;
  std::string config_hash;
  model::ModelKind kind = model::ModelKind::kStGfn;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  model::Vocabulary vocab;
  data::CorpusStats stats;
  model::ParameterSet params;
  model::ParameterSet best_params;
  TrainerState state;
};

Checkpoint make_checkpoint(const Trainer& trainer, const PreparedData& data);

/// Writes JSON through a temporary file and a rename.
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);

/// Throws IoError if unreadable, ParseError if malformed, IncompatibleError
/// on a format or version mismatch or a stored hash that does not match the
/// stored config.
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Throws IncompatibleError quoting both hashes when they differ.
void require_compatible(const Checkpoint& checkpoint, const TrainConfig& config);

/// Model carrying the selected (best = true) or the latest parameters.
std::unique_ptr<model::Model> restore_model(const Checkpoint& checkpoint, bool best = true);

/// Continues a run. Throws IncompatibleError when data was prepared with a
/// different vocabulary or normalisation.
Trainer resume(const Checkpoint& checkpoint, const PreparedData& data);

}  // namespace stgfn::training
