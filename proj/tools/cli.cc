// Copyright 2026 The SAERS Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "saers/baselines.h"
#include "saers/checkpoint.h"
#include "saers/error.h"
#include "saers/evaluation.h"
#include "saers/explanation.h"
#include "saers/feature_catalog.h"
#include "saers/interactions.h"
#include "saers/optimizer.h"
#include "saers/parallel.h"
#include "saers/synthetic.h"
#include "saers/training.h"

namespace saers::cli {
namespace {

namespace fs = std::filesystem;

constexpr char kInteractionsFile[] = "interactions.tsv";
constexpr char kSplitFile[] = "split.json";
constexpr char kFeaturesDir[] = "features";

// Data-root flags shared by the subcommands that read a prepared dataset.
struct DataFlags {
  std::string data;
  std::string features;

  void Add(CLI::App* app) {
    app->add_option("--data", data, "Prepared data directory (default: $SAERS_DATA_DIR)");
    app->add_option("--features", features, "Feature manifest directory (default: <data>/features)");
  }

  fs::path DataDir() const {
    if (!data.empty()) return data;
    if (const char* env = std::getenv("SAERS_DATA_DIR"); env != nullptr && *env != '\0') return env;
    throw ConfigError("no data directory: pass --data or set SAERS_DATA_DIR");
  }

  fs::path FeatureDir() const { return features.empty() ? DataDir() / kFeaturesDir : fs::path(features); }
};

struct Prepared {
  InteractionDataset interactions;
  SplitDataset split;
};

Prepared LoadPrepared(const fs::path& dir) {
  Prepared p;
  p.interactions = LoadInteractions(dir / kInteractionsFile, 1);
  p.split = ReadSplit(p.interactions, dir / kSplitFile);
  return p;
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error("cannot write " + path.string());
}

// Training flags; unset flags leave the config file (or defaults) alone.
struct TrainFlags {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> variant;
  std::optional<int> d, epochs, batch_size, eval_every, patience;
  std::optional<double> lr, lambda;
  int threads = DefaultThreads();

  void Add(CLI::App* app, bool seed_required) {
    app->add_option("--config", config_file, "JSON training config; flags override its values");
    auto* s = app->add_option("--seed", seed, "Master seed");
    if (seed_required) s->required();
    app->add_option("--variant", variant, "Model variant: saers, safo or saers-saf");
    app->add_option("--d", d, "Embedding dimension");
    app->add_option("--epochs", epochs, "Maximum number of epochs");
    app->add_option("--lr", lr, "Adam learning rate");
    app->add_option("--lambda", lambda, "L2 regularization weight");
    app->add_option("--batch-size", batch_size, "Triples per mini-batch");
    app->add_option("--eval-every", eval_every, "Epochs between validation probes");
    app->add_option("--patience", patience, "Probes without improvement before stopping");
    app->add_option("--threads", threads, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  }

  TrainConfig Resolve() const {
    TrainConfig c;
    if (!config_file.empty()) c = ParseTrainConfig(ReadFile(config_file));
    if (seed) c.seed = *seed;
    if (variant) c.variant = ParseVariant(*variant);
    if (d) c.d = *d;
    if (epochs) c.epochs = *epochs;
    if (lr) c.hyper.lr = *lr;
    if (lambda) c.hyper.lambda = *lambda;
    if (batch_size) c.hyper.batch_size = *batch_size;
    if (eval_every) c.eval_every = *eval_every;
    if (patience) c.early_stop_patience = *patience;
    c.threads = threads;
    c.Validate();
    return c;
  }
};

int Preprocess(const std::string& input, const std::string& out_dir, std::uint64_t seed, int min_items,
               std::ostream& out) {
  if (out_dir.empty()) throw ConfigError("preprocess: --out is required when SAERS_DATA_DIR is unset");
  const InteractionDataset ds = LoadInteractions(input, min_items);
  const SplitDataset split = SplitLeaveOneOut(ds, seed);
  fs::create_directories(out_dir);
  WriteInteractions(ds, fs::path(out_dir) / kInteractionsFile);
  WriteSplit(split, fs::path(out_dir) / kSplitFile);
  out << "users " << ds.num_users() << "\nitems " << ds.num_items() << "\ninteractions " << ds.num_interactions()
      << "\ncold_items " << split.cold_items().size() << '\n';
  return kOk;
}

int TrainCommand(const DataFlags& data, const TrainFlags& flags, const std::string& out_dir, std::ostream& out) {
  const TrainConfig config = flags.Resolve();
  const Prepared prep = LoadPrepared(data.DataDir());
  const FeatureCatalog catalog = LoadFeatureManifest(data.FeatureDir());
  TrainResult result = Train(config, prep.split, catalog);
  Checkpoint ckpt{std::move(result.params), config, result.stats, prep.split.full.user_ids()};
  SaveCheckpoint(ckpt, out_dir);
  out << std::setprecision(6) << std::fixed;
  for (const auto& [epoch, auc] : result.stats.val_auc) out << "epoch " << epoch << " val_auc " << auc << '\n';
  out << "best_epoch " << result.stats.best_epoch << " best_val_auc " << result.stats.best_val_auc << '\n';
  return kOk;
}

std::unique_ptr<Scorer> LoadModelScorer(const fs::path& dir, const SplitDataset& split, const FeatureCatalog& catalog,
                                        Checkpoint* ckpt_out = nullptr) {
  Checkpoint ckpt = LoadCheckpoint(dir);
  if (ckpt.user_ids != split.full.user_ids()) throw DataError("checkpoint users do not match the dataset");
  auto scorer = std::make_unique<SaersScorer>(ckpt.params, AlignItems(split, catalog));
  if (ckpt_out != nullptr) *ckpt_out = std::move(ckpt);
  return scorer;
}

struct EvalFlags {
  std::string checkpoint;
  std::string baseline;
  std::string scenario = "all";
  std::string metric = "auc";
  std::vector<int> cutoffs{10};
  int rounds = 10000;
  int negatives = 500;
  std::string out;
};

int EvaluateCommand(const DataFlags& data, const TrainFlags& train, const EvalFlags& flags, std::ostream& out) {
  const TrainConfig config = train.Resolve();
  if (flags.checkpoint.empty() == flags.baseline.empty()) {
    throw ConfigError("evaluate: pass exactly one of --checkpoint and --baseline");
  }
  const Scenario scenario = ParseScenario(flags.scenario);
  if (flags.metric != "auc" && flags.metric != "ndcg") throw ConfigError("evaluate: --metric must be auc or ndcg");
  const Prepared prep = LoadPrepared(data.DataDir());

  std::optional<FeatureCatalog> catalog;
  std::unique_ptr<Scorer> scorer;
  if (!flags.checkpoint.empty()) {
    catalog = LoadFeatureManifest(data.FeatureDir());
    scorer = LoadModelScorer(flags.checkpoint, prep.split, *catalog);
  } else {
    const BaselineKind kind = ParseBaseline(flags.baseline);
    if (kind == BaselineKind::kVbpr) catalog = LoadFeatureManifest(data.FeatureDir());
    scorer = MakeBaseline(kind, prep.split, catalog ? &*catalog : nullptr, config);
  }

  EvalReport report;
  report.scorer = scorer->name();
  report.n_cold_items = static_cast<int>(prep.split.cold_items().size());
  if (flags.metric == "auc") {
    const AucResult r = Auc(*scorer, prep.split, scenario, HeldOut::kTest, config.threads);
    (scenario == Scenario::kAll ? report.auc_all : report.auc_cold) = r.value;
    report.n_users = r.users;
  } else {
    NdcgOptions opt;
    opt.cutoffs = flags.cutoffs;
    opt.rounds = flags.rounds;
    opt.negatives = flags.negatives;
    opt.seed = config.seed;
    opt.scenario = scenario;
    opt.threads = config.threads;
    report.ndcg = NdcgAtN(*scorer, prep.split, opt);
    report.ndcg_scenario = scenario;
    report.n_users = prep.split.num_users();
  }

  out << "scorer       " << report.scorer << '\n' << std::setprecision(6) << std::fixed;
  if (report.auc_all) out << "auc_all      " << *report.auc_all << '\n';
  if (report.auc_cold) out << "auc_cold     " << *report.auc_cold << '\n';
  for (const auto& [n, v] : report.ndcg) out << "ndcg@" << std::left << std::setw(7) << n << ' ' << v << '\n';
  out << "n_users      " << report.n_users << "\nn_cold_items " << report.n_cold_items << '\n';
  if (!flags.out.empty()) WriteFile(flags.out, EvalReportToJson(report) + "\n");
  return kOk;
}

int ExplainCommand(const DataFlags& data, const std::string& checkpoint, const std::string& user_id,
                   const std::string& item_id, int top, const std::string& out_path, std::ostream& out) {
  if (item_id.empty() == (top <= 0)) throw ConfigError("explain: pass exactly one of --item and --top");
  const Prepared prep = LoadPrepared(data.DataDir());
  const FeatureCatalog catalog = LoadFeatureManifest(data.FeatureDir());
  Checkpoint ckpt;
  const auto scorer = LoadModelScorer(checkpoint, prep.split, catalog, &ckpt);
  const int u = prep.split.full.FindUser(user_id);
  if (u < 0) throw DataError("unknown user '" + user_id + "'");

  std::string text;
  if (!item_id.empty()) {
    text = ExplanationToJson(Explain(ckpt.params, u, user_id, item_id, catalog));
  } else {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& [item, score] : TopK(*scorer, prep.split, u, top)) {
      arr.push_back(nlohmann::ordered_json::parse(
          ExplanationToJson(Explain(ckpt.params, u, user_id, prep.split.full.item_id(item), catalog))));
    }
    text = arr.dump(2);
  }
  if (out_path.empty()) {
    out << text << '\n';
  } else {
    WriteFile(out_path, text + "\n");
  }
  return kOk;
}

int GradcheckCommand(std::uint64_t seed, int d, const std::string& variant, int attributes, int cases, double eps,
                     int stencil, double tolerance, std::ostream& out) {
  std::vector<Variant> variants;
  if (variant == "all") {
    variants = {Variant::kSafo, Variant::kSaersMinusSaf, Variant::kSaers};
  } else {
    variants = {ParseVariant(variant)};
  }
  if (cases < 1) throw ConfigError("gradcheck: --cases must be >= 1");
  double worst = 0.0;
  out << std::scientific << std::setprecision(3);
  for (Variant v : variants) {
    double vworst = 0.0;
    GradCheckReport worst_report;
    for (int c = 0; c < cases; ++c) {
      const GradCheckCase gc = MakeGradCheckCase(d, v, DeriveSeed(seed, static_cast<std::uint64_t>(c)), 6, 5, attributes);
      const GradCheckReport r = FiniteDiffCheck(gc.params, gc.user, gc.pos, gc.neg, gc.lambda, eps, stencil);
      if (c == 0 || r.max_rel_error > vworst) {
        vworst = r.max_rel_error;
        worst_report = r;
      }
    }
    out << VariantName(v) << " max_rel_err " << vworst << " worst " << worst_report.worst_block << '['
        << worst_report.worst_index << "]\n";
    worst = std::max(worst, vworst);
  }
  out << "max_rel_err " << worst << '\n';
  if (!(worst <= tolerance)) throw NumericError("gradient check above tolerance");
  return kOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explainable visual recommender with semantic attributes", "saers"};
  app.require_subcommand(1);
  app.fallthrough(false);

  auto* pre = app.add_subcommand("preprocess", "Filter interactions and write a leave-one-out split");
  std::string pre_in, pre_out;
  std::uint64_t pre_seed = 0;
  int min_items = 5;
  pre->add_option("--interactions", pre_in, "Raw user<TAB>item file")->required();
  pre->add_option("--out", pre_out, "Output directory (default: $SAERS_DATA_DIR)");
  pre->add_option("--seed", pre_seed, "Split seed")->required();
  pre->add_option("--min-items", min_items, "Drop users with fewer distinct items")->check(CLI::PositiveNumber);

  auto* train = app.add_subcommand("train", "Train a model and write a checkpoint");
  DataFlags train_data;
  TrainFlags train_flags;
  std::string ckpt_out;
  train_data.Add(train);
  train_flags.Add(train, true);
  train->add_option("--out", ckpt_out, "Checkpoint directory")->required();

  auto* eval = app.add_subcommand("evaluate", "Score a checkpoint or a baseline on the test split");
  DataFlags eval_data;
  TrainFlags eval_train;
  EvalFlags eval_flags;
  eval_data.Add(eval);
  eval_train.Add(eval, true);
  eval->add_option("--checkpoint", eval_flags.checkpoint, "Checkpoint directory");
  eval->add_option("--baseline", eval_flags.baseline, "Baseline: random, poprank, bpr-mf or vbpr");
  eval->add_option("--scenario", eval_flags.scenario, "all or cold")->check(CLI::IsMember({"all", "cold"}));
  eval->add_option("--metric", eval_flags.metric, "auc or ndcg")->check(CLI::IsMember({"auc", "ndcg"}));
  eval->add_option("--n", eval_flags.cutoffs, "NDCG cutoff(s)")->check(CLI::PositiveNumber);
  eval->add_option("--rounds", eval_flags.rounds, "NDCG rounds")->check(CLI::PositiveNumber);
  eval->add_option("--negatives", eval_flags.negatives, "Sampled negatives per NDCG round")->check(CLI::PositiveNumber);
  eval->add_option("--out", eval_flags.out, "Write the report as JSON");

  auto* expl = app.add_subcommand("explain", "Explain a recommendation from a checkpoint");
  DataFlags expl_data;
  std::string expl_ckpt, expl_user, expl_item, expl_out;
  int expl_top = 0;
  expl_data.Add(expl);
  expl->add_option("--checkpoint", expl_ckpt, "Checkpoint directory")->required();
  expl->add_option("--user", expl_user, "User id")->required();
  expl->add_option("--item", expl_item, "Item id");
  expl->add_option("--top", expl_top, "Explain the user's top-K unseen items")->check(CLI::PositiveNumber);
  expl->add_option("--out", expl_out, "Write JSON here instead of standard output");

  auto* gc = app.add_subcommand("gradcheck", "Compare analytic gradients with finite differences");
  std::uint64_t gc_seed = 0;
  int gc_d = 4, gc_attrs = kNumAttributes, gc_cases = 1, gc_stencil = kGradCheckStencil;
  double gc_eps = kGradCheckEps, gc_tol = 1e-4;
  std::string gc_variant = "all";
  gc->add_option("--seed", gc_seed, "Fixture seed")->required();
  gc->add_option("--d", gc_d, "Embedding dimension")->check(CLI::PositiveNumber);
  gc->add_option("--variant", gc_variant, "all, saers, safo or saers-saf");
  gc->add_option("--attributes", gc_attrs, "Attribute count")->check(CLI::PositiveNumber);
  gc->add_option("--cases", gc_cases, "Random fixtures per variant")->check(CLI::PositiveNumber);
  gc->add_option("--eps", gc_eps, "Finite-difference step")->check(CLI::PositiveNumber);
  gc->add_option("--stencil", gc_stencil, "3 or 5 point central differences")->check(CLI::IsMember({3, 5}));
  gc->add_option("--tolerance", gc_tol, "Maximum accepted relative error");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    // help() follows the selected subcommand.
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kUsage;
  }

  try {
    if (pre->parsed()) {
      const std::string dir = pre_out.empty() ? (std::getenv("SAERS_DATA_DIR") ? std::getenv("SAERS_DATA_DIR") : "")
                                              : pre_out;
      return Preprocess(pre_in, dir, pre_seed, min_items, out);
    }
    if (train->parsed()) return TrainCommand(train_data, train_flags, ckpt_out, out);
    if (eval->parsed()) return EvaluateCommand(eval_data, eval_train, eval_flags, out);
    if (expl->parsed()) return ExplainCommand(expl_data, expl_ckpt, expl_user, expl_item, expl_top, expl_out, out);
    if (gc->parsed()) {
      return GradcheckCommand(gc_seed, gc_d, gc_variant, gc_attrs, gc_cases, gc_eps, gc_stencil, gc_tol, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
  err << "error: no subcommand\n";
  return kUsage;
}

}  // namespace saers::cli
