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


// Acceptance runner: prints one PASS/FAIL line per criterion and exits
// nonzero when any of them fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "saers/baselines.h"
#include "saers/evaluation.h"
#include "saers/explanation.h"
#include "saers/interactions.h"
#include "saers/localizer.h"
#include "saers/optimizer.h"
#include "saers/parallel.h"
#include "saers/synthetic.h"
#include "saers/training.h"
#include "test_util.h"
#include "cli.h"

namespace saers {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) { return std::chrono::duration<double>(Clock::now() - since).count(); }

int g_failures = 0;

void Report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string Fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

int Threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// ---- 1: gradients ----

void GradientSuite() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  std::string where;
  int cases = 0;
  for (Variant v : {Variant::kSaers, Variant::kSafo, Variant::kSaersMinusSaf}) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const GradCheckCase c = MakeGradCheckCase(4, v, seed);
      const GradCheckReport r = FiniteDiffCheck(c.params, c.user, c.pos, c.neg, c.lambda);
      ++cases;
      if (r.max_rel_error > worst) {
        worst = r.max_rel_error;
        where = std::string(VariantName(v)) + "/" + r.worst_block;
      }
    }
  }
  const double secs = Seconds(t0);
  Report(1, worst <= 1e-4 && secs < 60.0,
         Fmt("max rel err %.2e at %s over %d cases, %.2f s", worst, where.c_str(), cases, secs));
}

// ---- 2: metrics ----

struct Fixture {
  SplitDataset split;
  std::vector<std::vector<bool>> rated;  // from the raw text only
  std::vector<std::vector<double>> table;
};

// Every user rates exactly `per_user` distinct items, so all candidate pools
// have the same size.
Fixture MakeFixture(int users, int items, int per_user, int levels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::string text;
  std::vector<int> all(static_cast<std::size_t>(items));
  std::iota(all.begin(), all.end(), 0);
  for (int u = 0; u < users; ++u) {
    std::shuffle(all.begin(), all.end(), rng);
    for (int k = 0; k < per_user; ++k) text += Fmt("u%03d\ti%03d\n", u, all[static_cast<std::size_t>(k)]);
  }
  Fixture f;
  f.split = SplitLeaveOneOut(ParseInteractions(text, 3), seed);
  const int n = f.split.num_items();
  f.rated.assign(static_cast<std::size_t>(users), std::vector<bool>(static_cast<std::size_t>(n), false));
  std::istringstream in(text);
  std::string u, i;
  while (in >> u >> i) {
    f.rated[static_cast<std::size_t>(f.split.full.FindUser(u))][static_cast<std::size_t>(f.split.full.FindItem(i))] = true;
  }
  std::uniform_int_distribution<int> level(0, levels - 1);
  f.table.assign(static_cast<std::size_t>(users), std::vector<double>(static_cast<std::size_t>(n)));
  for (auto& row : f.table) {
    for (double& s : row) s = level(rng) / static_cast<double>(levels);
  }
  return f;
}

// Returns NaN when no user qualifies.
double BruteAuc(const Fixture& f, bool cold_only) {
  const int n = f.split.num_items();
  std::vector<bool> cold(static_cast<std::size_t>(n), true);
  for (std::size_t u = 0; u < f.rated.size(); ++u) {
    for (int i = 0; i < n; ++i) {
      const bool held = i == f.split.val_item[u] || i == f.split.test_item[u];
      if (f.rated[u][static_cast<std::size_t>(i)] && !held) cold[static_cast<std::size_t>(i)] = false;
    }
  }
  double total = 0.0;
  int counted = 0;
  for (std::size_t u = 0; u < f.rated.size(); ++u) {
    const int pos = f.split.test_item[u];
    if (cold_only && !cold[static_cast<std::size_t>(pos)]) continue;
    double wins = 0.0;
    int negs = 0;
    for (int j = 0; j < n; ++j) {
      if (f.rated[u][static_cast<std::size_t>(j)] || (cold_only && !cold[static_cast<std::size_t>(j)])) continue;
      const double sp = f.table[u][static_cast<std::size_t>(pos)], sj = f.table[u][static_cast<std::size_t>(j)];
      wins += sp > sj ? 1.0 : sp == sj ? 0.5 : 0.0;
      ++negs;
    }
    if (negs == 0) continue;
    total += wins / negs;
    ++counted;
  }
  return counted == 0 ? std::nan("") : total / counted;
}

int BruteRank(const Fixture& f, std::size_t u) {
  const int pos = f.split.test_item[u];
  const double sp = f.table[u][static_cast<std::size_t>(pos)];
  int rank = 1;
  for (int j = 0; j < f.split.num_items(); ++j) {
    if (f.rated[u][static_cast<std::size_t>(j)]) continue;
    const double sj = f.table[u][static_cast<std::size_t>(j)];
    if (sj > sp || (sj == sp && j < pos)) ++rank;
  }
  return rank;
}

void MetricOracles() {
  int auc_cases = 0, auc_mismatch = 0, ndcg_cases = 0, ndcg_mismatch = 0;
  std::mt19937_64 rng(424242);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int users = std::uniform_int_distribution<int>(5, 50)(rng);
    const int items = std::uniform_int_distribution<int>(30, 90)(rng);
    const Fixture f = MakeFixture(users, items, std::uniform_int_distribution<int>(3, 8)(rng), seed % 2 ? 4 : 1000, seed);
    const TableScorer scorer(f.table);
    for (bool cold : {false, true}) {
      const double want = BruteAuc(f, cold);
      if (std::isnan(want)) continue;
      ++auc_cases;
      if (Auc(scorer, f.split, cold ? Scenario::kCold : Scenario::kAll).value != want) ++auc_mismatch;
    }
    // With negatives equal to the pool size each round ranks against every
    // unrated item; only the drawn user varies.
    std::size_t pool = 0;
    for (bool r : f.rated[0]) pool += r ? 0 : 1;
    NdcgOptions o;
    o.cutoffs = {1, 5, 10, 20};
    o.rounds = 400;
    o.negatives = static_cast<int>(pool);
    o.seed = seed + 7;
    const std::map<int, double> got = NdcgAtN(scorer, f.split, o);
    std::vector<int> ranks;
    for (int r = 0; r < o.rounds; ++r) {
      std::mt19937_64 draw(DeriveSeed(o.seed, static_cast<std::uint64_t>(r)));
      const std::size_t u = std::uniform_int_distribution<std::size_t>(0, f.rated.size() - 1)(draw);
      ranks.push_back(BruteRank(f, u));
    }
    for (int n : o.cutoffs) {
      double total = 0.0;
      for (int rank : ranks) total += rank <= n ? 1.0 / std::log2(rank + 1.0) : 0.0;
      ++ndcg_cases;
      if (got.at(n) != total / o.rounds) ++ndcg_mismatch;
    }
  }

  // Random baseline.
  std::mt19937_64 big(99);
  std::string text;
  for (int u = 0; u < 300; ++u) {
    for (int k = 0; k < 8; ++k) text += Fmt("u%03d\ti%03d\n", u, std::uniform_int_distribution<int>(0, 199)(big));
  }
  const SplitDataset split = SplitLeaveOneOut(ParseInteractions(text, 3), 99);
  long comparisons = 0;
  for (int u = 0; u < split.num_users(); ++u) comparisons += split.num_items() - static_cast<long>(split.full.items_of(u).size());
  const double random_auc = Auc(RandomScorer(2024), split, Scenario::kAll).value;

  const bool ok = auc_mismatch == 0 && ndcg_mismatch == 0 && comparisons >= 45000 && std::abs(random_auc - 0.5) <= 0.02;
  Report(2, ok,
         Fmt("AUC %d/%d exact, NDCG %d/%d exact, random AUC %.4f over %ld comparisons", auc_cases - auc_mismatch,
             auc_cases, ndcg_cases - ndcg_mismatch, ndcg_cases, random_auc, comparisons));
}

// ---- 3 and 4: synthetic replication ----

struct SeedRun {
  double saers = 0, saf = 0, safo = 0, saers_cold = 0, mf_cold = 0;
};

struct Replication {
  std::vector<SeedRun> runs;
  double seconds = 0;
  // Seed-1 SAERS model, kept for criterion 7.
  SyntheticCorpus corpus;
  SplitDataset split;
  ModelParams saers;
};

Replication Replicate() {
  Replication rep;
  const auto t0 = Clock::now();
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    SyntheticConfig sc;  // 1000 users, 10000 items
    sc.seed = seed;
    SyntheticCorpus corpus = MakeSyntheticCorpus(sc);
    SplitDataset split = SplitLeaveOneOut(corpus.interactions, seed);
    TrainConfig tc;
    tc.seed = seed;
    tc.epochs = 40;
    tc.eval_every = 5;
    tc.d = 10;
    tc.hyper.lr = 1e-2;
    tc.hyper.lambda = 1e-4;
    tc.threads = Threads();
    const auto items = AlignItems(split, corpus.catalog);
    SeedRun run;
    for (Variant v : {Variant::kSaers, Variant::kSaersMinusSaf, Variant::kSafo}) {
      tc.variant = v;
      TrainResult r = Train(tc, split, corpus.catalog);
      const SaersScorer scorer(r.params, items);
      const double all = Auc(scorer, split, Scenario::kAll, HeldOut::kTest, tc.threads).value;
      if (v == Variant::kSaers) {
        run.saers = all;
        run.saers_cold = Auc(scorer, split, Scenario::kCold, HeldOut::kTest, tc.threads).value;
        if (seed == 1) rep.saers = r.params;
      } else if (v == Variant::kSafo) {
        run.safo = all;
      } else {
        run.saf = all;
      }
    }
    const auto mf = MakeBaseline(BaselineKind::kBprMf, split, &corpus.catalog, tc);
    run.mf_cold = Auc(*mf, split, Scenario::kCold, HeldOut::kTest, tc.threads).value;
    std::printf("  seed %llu: SAERS %.4f  SAERS-SAF %.4f  SAFo %.4f  cold: SAERS %.4f  BPR-MF %.4f  (%.0f s)\n",
                static_cast<unsigned long long>(seed), run.saers, run.saf, run.safo, run.saers_cold, run.mf_cold,
                Seconds(t0));
    std::fflush(stdout);
    rep.runs.push_back(run);
    if (seed == 1) {
      rep.corpus = std::move(corpus);
      rep.split = std::move(split);
    }
  }
  rep.seconds = Seconds(t0);
  return rep;
}

void CheckReplication(const Replication& rep) {
  bool ok3 = rep.seconds < 600.0, ok4 = true;
  double min_gap_saf = 1, min_gap_safo = 1, min_saers = 1, min_cold = 1, mf_lo = 1, mf_hi = 0;
  for (const SeedRun& r : rep.runs) {
    min_gap_saf = std::min(min_gap_saf, r.saers - r.saf);
    min_gap_safo = std::min(min_gap_safo, r.saers - r.safo);
    min_saers = std::min(min_saers, r.saers);
    min_cold = std::min(min_cold, r.saers_cold);
    mf_lo = std::min(mf_lo, r.mf_cold);
    mf_hi = std::max(mf_hi, r.mf_cold);
  }
  ok3 = ok3 && min_gap_saf >= 0.01 && min_gap_safo >= 0.01 && min_saers >= 0.85;
  ok4 = min_cold >= 0.75 && mf_lo >= 0.45 && mf_hi <= 0.55;
  Report(3, ok3,
         Fmt("min gap vs SAERS-SAF %.4f, vs SAFo %.4f, min SAERS AUC %.4f over 3 seeds, %.0f s", min_gap_saf,
             min_gap_safo, min_saers, rep.seconds));
  Report(4, ok4, Fmt("min SAERS cold AUC %.4f, BPR-MF cold AUC in [%.4f, %.4f]", min_cold, mf_lo, mf_hi));
}

// ---- 5: localizer ----

Tensor Maps(int t, int h, int w, std::vector<double> v) { return Tensor({t, h, w}, std::move(v)); }

SaliencyMap Map(int h, int w, std::vector<double> v) {
  SaliencyMap m;
  m.height = h;
  m.width = w;
  m.values = std::move(v);
  return m;
}

int HandExamples(int* total) {
  int bad = 0;
  auto expect = [&](bool ok) {
    ++*total;
    bad += ok ? 0 : 1;
  };
  using V = std::vector<double>;
  using M = std::vector<std::uint8_t>;
  const Tensor f = Maps(1, 2, 2, {1, 2, 3, 4});
  expect(GradAam(f, Maps(1, 2, 2, {1, 1, 1, 1})).values == V{1, 2, 3, 4});
  expect(GradAam(f, Maps(1, 2, 2, {-1, -1, -1, -1})).values == V{0, 0, 0, 0});
  expect(GradAam(Maps(2, 2, 2, {1, 0, 0, 0, 0, 0, 0, 2}), Maps(2, 2, 2, {2, 2, 2, 2, -1, -1, -1, -1})).values ==
         V{2, 0, 0, 0});

  expect(SegmentThreshold(Map(2, 2, {10, 1, 3, 0})).values == M{1, 0, 1, 0});
  expect(SegmentThreshold(Map(2, 2, {0, 0, 0, 0})).values == M{1, 1, 1, 1});
  expect(SegmentThreshold(Map(1, 3, {5, 5, 5})).values == M{1, 1, 1});
  expect(SegmentThreshold(Map(1, 2, {10, 2})).values == M{1, 0});

  M l(16, 0);
  l[0] = l[4] = l[5] = l[15] = 1;
  expect(LargestConnectedRegion(BinaryMask{4, 4, l}) == RegionBBox{0, 0, 1, 1, {4, 4}});
  expect(LargestConnectedRegion(BinaryMask{3, 5, M(15, 1)}) == RegionBBox{0, 0, 4, 2, {3, 5}});
  M two(9, 0);
  two[0] = two[8] = 1;
  expect(LargestConnectedRegion(BinaryMask{3, 3, two}) == RegionBBox{0, 0, 0, 0, {3, 3}});
  const BinaryMask diag{3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 0}};
  expect(LargestConnectedRegion(diag, 8) == RegionBBox{0, 0, 1, 1, {3, 3}});
  expect(LargestConnectedRegion(diag, 4) == RegionBBox{0, 0, 0, 0, {3, 3}});

  expect(RoiPool(f, RegionBBox{1, 0, 1, 1, {2, 2}}) == V{4});
  expect(RoiPool(Maps(2, 2, 2, {1, 7, 3, 4, -1, -5, -2, -3}), RegionBBox::FullFrame({2, 2})) == V{7, -1});
  expect(RoiPool(f, RegionBBox{4, 0, 7, 3, {8, 8}}) == V{2});
  expect(RoiPool(f, RegionBBox{3, 0, 4, 3, {8, 8}}) == V{2});

  std::vector<double> pf(3 * 64, 0.0), pg(3 * 64, 0.0);
  for (int y = 2; y < 6; ++y) {
    for (int x = 3; x < 7; ++x) pf[static_cast<std::size_t>(64 + y * 8 + x)] = 1.0;
  }
  for (std::size_t p = 0; p < 64; ++p) pg[64 + p] = 0.5;
  const LocalizedAttribute loc = LocalizeAttribute(Maps(3, 8, 8, pf), Maps(3, 8, 8, pg), {8, 8});
  expect(loc.bbox == RegionBBox{3, 2, 6, 5, {8, 8}} && loc.feature == V{0, 1, 0});
  return bad;
}

void LocalizerFixtures() {
  int hand_total = 0;
  const int hand_bad = HandExamples(&hand_total);

  std::mt19937_64 rng(777);
  auto dim = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  int prop_bad = 0;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    // Scale invariance: positive rescaling of G or of the map keeps the mask.
    const int t = dim(1, 4), h = dim(1, 7), w = dim(1, 7);
    std::uniform_real_distribution<double> fd(-1.0, 2.0), gd(-1.0, 1.0), cd(0.05, 20.0);
    std::vector<double> fv(static_cast<std::size_t>(t * h * w)), gv(fv.size());
    for (double& x : fv) x = fd(rng);
    for (double& x : gv) x = gd(rng);
    const double c = cd(rng);
    std::vector<double> gc = gv;
    for (double& x : gc) x *= c;
    const SaliencyMap a = GradAam(Maps(t, h, w, fv), Maps(t, h, w, gv));
    const SaliencyMap b = GradAam(Maps(t, h, w, fv), Maps(t, h, w, gc));
    SaliencyMap scaled = a;
    for (double& v : scaled.values) v *= c;
    bool ok = SegmentThreshold(a).values == SegmentThreshold(b).values &&
              SegmentThreshold(a).values == SegmentThreshold(scaled).values;

    // Tie-break: two equal bars, the raster-first one wins.
    const int bw = dim(3, 10), len = dim(1, bw), bh = dim(3, 9);
    const int ya = dim(0, bh - 3), yb = dim(ya + 2, bh - 1);
    const int xa = dim(0, bw - len), xb = dim(0, bw - len);
    BinaryMask m{bh, bw, std::vector<std::uint8_t>(static_cast<std::size_t>(bh * bw), 0)};
    for (int k = 0; k < len; ++k) {
      m.values[static_cast<std::size_t>(ya * bw + xa + k)] = 1;
      m.values[static_cast<std::size_t>(yb * bw + xb + k)] = 1;
    }
    ok = ok && LargestConnectedRegion(m) == RegionBBox{xa, ya, xa + len - 1, ya, {bh, bw}};
    prop_bad += ok ? 0 : 1;
  }
  Report(5, hand_bad == 0 && prop_bad == 0,
         Fmt("hand examples %d/%d, property cases %d/%d", hand_total - hand_bad, hand_total, trials - prop_bad, trials));
}

// ---- 6: determinism ----

struct CliResult {
  int code;
  std::string out;
};

CliResult Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "saers");
  std::ostringstream out, err;
  const int code = cli::Run(args, out, err);
  return {code, out.str() + err.str()};
}

void Determinism() {
  testing::TempDir dir;
  int compared = 0;
  std::vector<std::string> differing;
  for (const char* fixture : {"tiny", "small"}) {
    const std::string data = testing::FixturePath(fixture);
    std::vector<std::string> reports;
    int run = 0;
    for (const char* threads : {"1", "1", "8"}) {
      const std::string tag = std::string(fixture) + std::to_string(run++);
      const std::string ck = (dir / ("ck-" + tag)).string();
      const CliResult t = Cli({"train", "--data", data, "--seed", "17", "--d", "6", "--epochs", "6", "--eval-every", "2",
                               "--threads", threads, "--out", ck});
      if (t.code != 0) {
        differing.push_back(tag + " train exit " + std::to_string(t.code));
        continue;
      }
      std::string report = t.out;
      for (const char* metric : {"auc", "ndcg"}) {
        const auto path = dir / (tag + "-" + metric + ".json");
        std::vector<std::string> args = {"evaluate", "--data", data,    "--checkpoint", ck,
                                         "--seed",   "3",    "--metric", metric,       "--threads",
                                         threads,    "--out", path.string()};
        if (std::string(metric) == "ndcg") {
          for (const char* a : {"--negatives", fixture == std::string("tiny") ? "1" : "5", "--rounds", "2000", "--n", "1", "--n", "5"}) args.push_back(a);
        }
        const CliResult e = Cli(args);
        if (e.code != 0) differing.push_back(tag + " evaluate exit " + std::to_string(e.code));
        report += e.out + testing::ReadText(path);
      }
      for (const char* f : {"manifest.json", "user_embeddings.sat", "attention_w1.sat", "global_projection.sat"}) {
        const auto bytes = testing::ReadBytes(std::filesystem::path(ck) / f);
        report.append(bytes.begin(), bytes.end());
      }
      reports.push_back(report);
    }
    for (std::size_t k = 1; k < reports.size(); ++k) {
      ++compared;
      if (reports[k] != reports[0]) differing.push_back(std::string(fixture) + " run " + std::to_string(k));
    }
  }
  std::string detail = Fmt("%d report comparisons (two runs, threads 1 vs 8, two fixtures)", compared);
  for (const auto& d : differing) detail += "; differs: " + d;
  Report(6, differing.empty() && compared == 4, detail);
}

// ---- 7: explanations ----

void ExplanationIntegrity(const SyntheticCorpus& corpus, const SplitDataset& split, const ModelParams& p) {
  std::mt19937_64 rng(31337);
  const int a_count = p.config.num_attributes, d = p.config.d, hidden = p.config.hidden_width();
  int sum_bad = 0, cache_bad = 0, argmax_bad = 0;
  double worst_sum = 0.0;
  const int pairs = 100;
  for (int k = 0; k < pairs; ++k) {
    const int u = std::uniform_int_distribution<int>(0, split.num_users() - 1)(rng);
    const int i = std::uniform_int_distribution<int>(0, split.num_items() - 1)(rng);
    const std::string& item_id = split.full.item_id(i);
    const ItemFeatures& item = corpus.catalog.item(item_id);
    const Explanation e = Explain(p, u, split.full.user_id(u), item_id, corpus.catalog);

    double sum = 0.0;
    for (const auto& a : e.attributes) sum += a.weight;
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    sum_bad += std::abs(sum - 1.0) <= 1e-6 ? 0 : 1;

    const ForwardCache cache = Combine(p, ProjectUser(p, p.user_embeddings.row(u)), ProjectItem(p, item));
    bool same = e.attributes.size() == static_cast<std::size_t>(a_count) && e.score == cache.score;
    for (const auto& a : e.attributes) {
      same = same && a.weight == cache.weights[static_cast<std::size_t>(corpus.catalog.AttributeIndex(a.name))];
    }
    cache_bad += same ? 0 : 1;

    // Scalar recomputation of the attention logits.
    int best = -1;
    double best_logit = 0.0;
    for (int a = 0; a < a_count; ++a) {
      const auto& fa = item.attr_feats[static_cast<std::size_t>(a)];
      std::vector<double> t(static_cast<std::size_t>(d), 0.0);
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < p.config.m; ++c) t[static_cast<std::size_t>(r)] += p.transfer[static_cast<std::size_t>(a)](r, c) * fa[static_cast<std::size_t>(c)];
      }
      double s = p.attention_b2;
      for (int h = 0; h < hidden; ++h) {
        double z = p.attention_b1[static_cast<std::size_t>(h)];
        for (int c = 0; c < d; ++c) z += p.attention_w1(h, c) * p.user_embeddings(u, c);
        for (int c = 0; c < d; ++c) z += p.attention_w1(h, d + c) * t[static_cast<std::size_t>(c)];
        s += p.attention_w2[static_cast<std::size_t>(h)] * std::max(z, 0.0);
      }
      const std::string& name = corpus.catalog.attribute_names[static_cast<std::size_t>(a)];
      if (best < 0 || s > best_logit + 1e-9 ||
          (std::abs(s - best_logit) <= 1e-9 && name < corpus.catalog.attribute_names[static_cast<std::size_t>(best)])) {
        best = a;
        best_logit = s;
      }
    }
    argmax_bad += e.top_attribute == corpus.catalog.attribute_names[static_cast<std::size_t>(best)] ? 0 : 1;
  }
  Report(7, sum_bad == 0 && cache_bad == 0 && argmax_bad == 0,
         Fmt("%d pairs: max |sum - 1| %.1e, cache mismatches %d, argmax mismatches %d", pairs, worst_sum, cache_bad,
             argmax_bad));
}

int Main(const std::vector<int>& only) {
  auto want = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };
  if (want(1)) GradientSuite();
  if (want(2)) MetricOracles();
  std::optional<Replication> rep;
  if (want(3) || want(4) || want(7)) rep = Replicate();
  if (want(3) || want(4)) CheckReplication(*rep);
  if (want(5)) LocalizerFixtures();
  if (want(6)) Determinism();
  if (want(7)) ExplanationIntegrity(rep->corpus, rep->split, rep->saers);
  std::printf("%s: %d criteria failed\n", g_failures == 0 ? "PASS" : "FAIL", g_failures);
  return g_failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace saers

// Optional arguments select criteria by number; the default runs all.
int main(int argc, char** argv) {
  std::vector<int> only;
  for (int k = 1; k < argc; ++k) only.push_back(std::atoi(argv[k]));
  try {
    return saers::Main(only);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance aborted: %s\n", e.what());
    return 2;
  }
}
