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

// JSON corpus ingestion. Both corpus shapes share one schema: an array of
//
//   {"id": str,
//    "turns": [{"speaker": "A"|"B", "text": str, "embedding"?: [num]}],
//    "agents": {"A": {"batna": num, "budget": num|null, "role": str|num|null,
//                     "svo": str|null,
//                     "priorities": {issue: "High"|"Medium"|"Low"} | {item: num}},
//               "B": {...}},
//    "outcome": 0|1,
//    "utilities": {"A": num, "B": num} | null}
//
// The DealOrNoDeal flavour additionally understands "counts" ({item: num}),
// "allocation" ({"A": {item: num}, "B": {...}}), and may omit "outcome",
// "batna", "budget" and "svo".

#include <filesystem>
#include <string>
#include <vector>

#include "stgfn/data/types.hpp"

namespace stgfn::data {

enum class CorpusFormat { kCasino, kDealOrNoDeal };

CorpusFormat parse_corpus_format(std::string_view name);

struct LoadOptions {
  /// Strict mode turns any malformed record into a ParseError.
  bool strict = false;
};

struct LoadResult {
  std::vector<NegotiationInstance> instances;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

LoadResult load_casino_like(const std::filesystem::path& path, LoadOptions options = {});
LoadResult load_dealornodeal_like(const std::filesystem::path& path, LoadOptions options = {});
LoadResult load_corpus(const std::filesystem::path& path, CorpusFormat format, LoadOptions options = {});

/// Same as the loaders but from an in-memory JSON document.
LoadResult parse_corpus(const std::string& json_text, CorpusFormat format, LoadOptions options = {});

/// Role string to flag: camp manager / buyer -> 1, unit ranger / seller -> 0,
/// numeric strings by value, anything else 0.
int role_flag(std::string_view role);

/// Writes instances in the input schema. Loading the result with
/// load_casino_like yields value-equal instances.
std::string corpus_to_json(const std::vector<NegotiationInstance>& instances);
void save_corpus(const std::filesystem::path& path, const std::vector<NegotiationInstance>& instances);

}  // namespace stgfn::data
