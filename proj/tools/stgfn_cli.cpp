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

// stgfn command-line entry point.
//
// Exit codes: 0 success, 1 invalid input or usage, 2 numeric divergence,
// 3 incompatible checkpoint.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "stgfn/data/features.hpp"
#include "stgfn/data/loaders.hpp"
#include "stgfn/data/synthetic.hpp"
#include "stgfn/error.hpp"
#include "stgfn/evaluation/gates.hpp"
#include "stgfn/evaluation/metrics.hpp"
#include "stgfn/evaluation/plot_data.hpp"
#include "stgfn/evaluation/report.hpp"
#include "stgfn/gradcheck.hpp"
#include "stgfn/kernels.hpp"
#include "stgfn/loss.hpp"
#include "stgfn/training/checkpoint.hpp"
#include "stgfn/training/config.hpp"
#include "stgfn/training/experiment.hpp"

namespace fs = std::filesystem;
using namespace stgfn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitDivergence = 2;
constexpr int kExitIncompatible = 3;

fs::path output_root() {
  const char* env = std::getenv("STGFN_OUTPUT_ROOT");
  return env && *env ? fs::path(env) : fs::path("runs");
}

/// Creates dir; refuses a non-empty existing one unless force.
void prepare_dir(const fs::path& dir, bool force) {
  if (fs::exists(dir) && !fs::is_directory(dir)) throw IoError(dir.string() + " exists and is not a directory");
  if (fs::exists(dir) && !fs::is_empty(dir) && !force)
    throw IoError("output directory " + dir.string() + " is not empty (use --force to overwrite)");
  fs::create_directories(dir);
}

/// Refuses an existing file unless force.
void prepare_file(const fs::path& file, bool force) {
  if (fs::exists(file) && !force) throw IoError("output file " + file.string() + " exists (use --force to overwrite)");
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<data::NegotiationInstance> load_data(const fs::path& path, const std::string& format, bool strict) {
  auto result = data::load_corpus(path, data::parse_corpus_format(format), {strict});
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  if (result.skipped) std::cerr << "skipped " << result.skipped << " malformed records\n";
  data::require_valid(result.instances);
  return std::move(result.instances);
}

std::vector<model::GateTrace> load_traces(const std::vector<std::string>& files) {
  std::vector<model::GateTrace> out;
  for (const auto& f : files) {
    auto part = evaluation::traces_from_json(read_json(f));
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
  std::string config;
  std::string data;
  std::string format = "casino";
  std::string arms = "baseline,nofair,fair";
  std::string seeds;
  std::optional<double> lambda;
  std::optional<std::size_t> epochs;
  std::optional<std::string> gate_mode;
  std::vector<std::string> overrides;
  std::string out;
  bool force = false;
  bool strict = false;
  bool quiet = false;
};

int cmd_train(const TrainArgs& a) {
  training::TrainConfig config = a.config.empty() ? training::TrainConfig{} : training::load_config(a.config);
  for (const auto& kv : a.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError("--set expects key=value, got '" + kv + "'");
    training::apply_override(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!a.seeds.empty()) training::apply_override(config, "seeds", a.seeds);
  if (a.lambda) config.lambda = *a.lambda;
  if (a.epochs) config.max_epochs = *a.epochs;
  if (a.gate_mode) config.gate_mode = model::parse_gate_mode(*a.gate_mode);
  training::validate(config);

  std::vector<training::ArmSpec> arms;
  for (const auto& name : split_list(a.arms)) arms.push_back(training::arm_by_name(name, config));
  if (arms.empty()) throw ContractError("--arms selects no arm");

  const auto instances = load_data(a.data, a.format, a.strict);
  const auto split = data::split_corpus(instances, {}, config.split_seed);

  const fs::path out = a.out.empty() ? output_root() / "train" : fs::path(a.out);
  prepare_dir(out, a.force);
  write_text(out / "config.json", training::to_json(config).dump(2) + "\n");
  nlohmann::ordered_json run = {{"command", "train"}, {"data", a.data}, {"format", a.format}, {"arms", a.arms},
                                {"strict", a.strict}, {"config", training::to_json(config)}};
  write_text(out / "run.json", run.dump(2) + "\n");

  std::vector<std::vector<training::RunResult>> runs(arms.size());
  for (std::uint64_t seed : config.seeds) {
    const auto data = training::prepare_data(split, config, seed);
    for (std::size_t i = 0; i < arms.size(); ++i) {
      const auto& arm = arms[i];
      const fs::path dir = out / arm.name / ("seed-" + std::to_string(seed));
      fs::create_directories(dir);
      std::ofstream log(dir / "epochs.jsonl", std::ios::trunc);
      training::Trainer trainer(arm.kind, config, arm.lambda, data, seed);
      trainer.run([&](const training::EpochLog& e) {
        log << training::to_json(e).dump() << '\n';
        log.flush();
        if (!a.quiet)
          std::cerr << arm.name << " seed " << seed << " epoch " << e.epoch << " loss " << e.loss_total << " val "
                    << e.val_loss << '\n';
      });
      training::save_checkpoint(training::make_checkpoint(trainer, data), dir / "checkpoint.json");
      auto result = trainer.result();
      write_text(dir / "metrics.json", evaluation::to_json(result.test).dump(2) + "\n");
      if (!result.traces.empty())
        write_text(dir / "gates.json", evaluation::traces_to_json(result.traces).dump() + "\n");
      runs[i].push_back(std::move(result));
    }
  }
  const auto report = training::summarize_runs(arms, runs);
  write_text(out / "report.json", evaluation::to_json(report).dump(2) + "\n");
  const std::string table = evaluation::format_table(report);
  write_text(out / "report.txt", table);
  std::cout << table;
  return kExitOk;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string checkpoint;
  std::string data;
  std::string format = "casino";
  std::string config;
  std::string out;
  bool force = false;
  bool strict = false;
};

int cmd_eval(const EvalArgs& a) {
  const auto ckpt = training::load_checkpoint(a.checkpoint);
  if (!a.config.empty()) training::require_compatible(ckpt, training::load_config(a.config));
  const auto instances = load_data(a.data, a.format, a.strict);
  const auto net = training::restore_model(ckpt);
  std::vector<model::EncodedInstance> encoded;
  try {
    encoded = model::encode_corpus(instances, ckpt.vocab, net->config().embedder, ckpt.stats);
  } catch (const ShapeError& e) {
    throw IncompatibleError(std::string("data does not fit the checkpoint: ") + e.what());
  }
  const auto preds = model::predict_all(*net, encoded, ckpt.config.batch_size);
  const auto report = evaluation::evaluate(preds.predictions, encoded);
  const std::string text = evaluation::to_json(report).dump(2) + "\n";
  std::cout << text;
  const fs::path out = a.out.empty() ? output_root() / "eval" : fs::path(a.out);
  prepare_dir(out, a.force);
  write_text(out / "metrics.json", text);
  nlohmann::ordered_json run = {{"command", "eval"},          {"checkpoint", a.checkpoint},
                                {"data", a.data},             {"format", a.format},
                                {"strict", a.strict},         {"config_hash", ckpt.config_hash},
                                {"config", training::to_json(ckpt.config)}};
  write_text(out / "run.json", run.dump(2) + "\n");
  if (net->kind() == model::ModelKind::kStGfn)
    write_text(out / "gates.json", evaluation::traces_to_json(preds.traces).dump() + "\n");
  return kExitOk;
}

// ---- gates ----------------------------------------------------------------

struct GatesArgs {
  std::vector<std::string> traces;
  std::string out;
  bool force = false;
};

int cmd_gates(const GatesArgs& a) {
  const auto traces = load_traces(a.traces);
  const auto analysis = evaluation::gate_analysis(traces);
  const std::string text = evaluation::to_json(analysis).dump(2) + "\n";
  if (!a.out.empty()) {
    prepare_file(a.out, a.force);
    write_text(a.out, text);
  }
  std::printf("points %zu  mean %.4f  std %.4f  slope %+.5f\n", analysis.points, analysis.mean, analysis.std,
              analysis.slope);
  std::printf("linguistic %.3f  mixed %.3f  strategic %.3f\n", analysis.dominance.linguistic,
              analysis.dominance.mixed, analysis.dominance.strategic);
  auto opt = [](const std::optional<double>& v) { return v ? std::to_string(*v) : std::string("n/a"); };
  std::printf("gate volatility  deal %s (%zu sessions)  no-deal %s (%zu sessions)\n",
              opt(analysis.volatility.deal).c_str(), analysis.volatility.deal_sessions,
              opt(analysis.volatility.no_deal).c_str(), analysis.volatility.no_deal_sessions);
  return kExitOk;
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
  data::SyntheticSpec spec;
  std::string out;
  bool force = false;
};

int cmd_synth(const SynthArgs& a) {
  const auto corpus = data::generate_synthetic(a.spec);
  const fs::path out = a.out.empty() ? output_root() / "synthetic.json" : fs::path(a.out);
  prepare_file(out, a.force);
  data::save_corpus(out, corpus.instances);
  const nlohmann::ordered_json snapshot = {
      {"command", "synth"},          {"instances", a.spec.instances},         {"vocabulary", a.spec.vocabulary},
      {"delta_star", a.spec.delta_star}, {"text_strength", a.spec.text_strength},
      {"graph_strength", a.spec.graph_strength}, {"cue_reliability", a.spec.cue_reliability},
      {"seed", a.spec.seed}};
  write_text(fs::path(out.string() + ".spec.json"), snapshot.dump(2) + "\n");
  const auto stats = data::synthetic_stats(corpus);
  std::printf("%zu instances  deal rate %.3f  mean deal gap %.3f  -> %s\n", corpus.instances.size(),
              stats.deal_rate, stats.mean_deal_gap, out.string().c_str());
  return kExitOk;
}

// ---- plot-data ------------------------------------------------------------

struct PlotArgs {
  std::string kind;
  double true_gap = 6.0;
  double grid_min = 0.0;
  double grid_max = 12.0;
  double grid_step = 1.0;
  std::optional<double> mean_gap;
  std::vector<std::string> traces;
  std::string out;
  bool force = false;
};

int cmd_plot_data(const PlotArgs& a) {
  std::string csv;
  if (a.kind == "fairness-curve") {
    if (!(a.grid_step > 0.0) || a.grid_max < a.grid_min) throw ContractError("invalid grid bounds");
    const auto points = static_cast<std::size_t>(std::floor((a.grid_max - a.grid_min) / a.grid_step + 1e-9)) + 1;
    std::vector<double> grid;
    for (std::size_t i = 0; i < points; ++i) grid.push_back(a.grid_min + a.grid_step * static_cast<double>(i));
    csv = evaluation::fairness_curve_csv(loss::fairness_curve(a.true_gap, grid, a.mean_gap.value_or(a.true_gap)));
  } else {
    if (a.traces.empty()) throw ContractError(a.kind + " needs --traces");
    const auto traces = load_traces(a.traces);
    if (a.kind == "gate-evolution")
      csv = evaluation::gate_evolution_csv(traces);
    else if (a.kind == "gate-heatmap")
      csv = evaluation::gate_heatmap_csv(traces);
    else
      csv = evaluation::dominance_hist_csv(traces);
  }
  if (a.out.empty()) {
    std::cout << csv;
  } else {
    prepare_file(a.out, a.force);
    write_text(a.out, csv);
  }
  return kExitOk;
}

// ---- gradcheck ------------------------------------------------------------

int cmd_gradcheck(std::size_t seeds) {
  std::vector<std::uint64_t> list;
  for (std::size_t s = 0; s < seeds; ++s) list.push_back(s + 1);
  const auto cases = gradcheck::default_cases();
  const auto results = gradcheck::run_cases(cases, list);
  std::cout << gradcheck::format_results(results);
  for (const auto& r : results)
    if (!r.passed()) return kExitInvalid;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ST-GFN negotiation outcome and utility prediction"};
  app.require_subcommand(1);
  std::string isa;
  app.add_option("--kernels", isa, "Force kernel set: scalar or avx2");

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Train the experiment arms over seeds");
  t->add_option("--config", train.config, "Flat JSON config file");
  t->add_option("--data", train.data, "Corpus JSON")->required();
  t->add_option("--format", train.format, "casino or dond");
  t->add_option("--arms", train.arms, "Comma list of baseline,nofair,fair");
  t->add_option("--seeds", train.seeds, "Comma list of seeds");
  t->add_option("--lambda", train.lambda, "Fairness weight of the fair arm");
  t->add_option("--epochs", train.epochs, "Maximum epochs");
  t->add_option("--gate-mode", train.gate_mode, "literal or convex");
  t->add_option("--set", train.overrides, "Config override key=value (repeatable)");
  t->add_option("--out", train.out, "Output directory");
  t->add_flag("--force", train.force, "Allow a non-empty output directory");
  t->add_flag("--strict", train.strict, "Fail on malformed records");
  t->add_flag("--quiet", train.quiet, "No per-epoch progress");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Evaluate a checkpoint on a corpus");
  e->add_option("--checkpoint", eval.checkpoint, "Checkpoint JSON")->required();
  e->add_option("--data", eval.data, "Corpus JSON")->required();
  e->add_option("--format", eval.format, "casino or dond");
  e->add_option("--config", eval.config, "Config that must match the checkpoint");
  e->add_option("--out", eval.out, "Output directory");
  e->add_flag("--force", eval.force, "Allow a non-empty output directory");
  e->add_flag("--strict", eval.strict, "Fail on malformed records");

  GatesArgs gates;
  auto* g = app.add_subcommand("gates", "Analyse gate traces");
  g->add_option("--traces", gates.traces, "Gate trace JSON files")->required();
  g->add_option("--out", gates.out, "Write the analysis JSON here");
  g->add_flag("--force", gates.force, "Overwrite an existing file");

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic corpus");
  s->add_option("--instances", synth.spec.instances, "Number of dialogues");
  s->add_option("--vocabulary", synth.spec.vocabulary, "Filler vocabulary size");
  s->add_option("--delta-star", synth.spec.delta_star, "Target mean utility gap over deals");
  s->add_option("--text-strength", synth.spec.text_strength, "Probability the text signal is active");
  s->add_option("--graph-strength", synth.spec.graph_strength, "Probability the graph signal is active");
  s->add_option("--cue-reliability", synth.spec.cue_reliability, "Probability the favoured-agent cue holds");
  s->add_option("--seed", synth.spec.seed, "Generator seed");
  s->add_option("--out", synth.out, "Output corpus JSON");
  s->add_flag("--force", synth.force, "Overwrite an existing file");

  PlotArgs plot;
  auto* p = app.add_subcommand("plot-data", "Emit CSV plot data");
  p->add_option("kind", plot.kind, "fairness-curve, gate-evolution, gate-heatmap or dominance-hist")
      ->required()
      ->check(CLI::IsMember({"fairness-curve", "gate-evolution", "gate-heatmap", "dominance-hist"}));
  p->add_option("--true-gap", plot.true_gap, "True utility gap");
  p->add_option("--min", plot.grid_min, "Grid start");
  p->add_option("--max", plot.grid_max, "Grid end");
  p->add_option("--step", plot.grid_step, "Grid step");
  p->add_option("--mean-gap", plot.mean_gap, "Dataset mean gap for the comparison curve");
  p->add_option("--traces", plot.traces, "Gate trace JSON files");
  p->add_option("--out", plot.out, "Output CSV (stdout if omitted)");
  p->add_flag("--force", plot.force, "Overwrite an existing file");

  std::size_t gc_seeds = 20;
  auto* c = app.add_subcommand("gradcheck", "Finite-difference gradient checks");
  c->add_option("--seeds", gc_seeds, "Number of random seeds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (!isa.empty()) kernels::select(kernels::parse_isa(isa));
    if (*t) return cmd_train(train);
    if (*e) return cmd_eval(eval);
    if (*g) return cmd_gates(gates);
    if (*s) return cmd_synth(synth);
    if (*p) return cmd_plot_data(plot);
    if (*c) return cmd_gradcheck(gc_seeds);
  } catch (const DivergenceError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitDivergence;
  } catch (const IncompatibleError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitIncompatible;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitInvalid;
  } catch (const fs::filesystem_error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
