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

// Writes a planted-preference corpus: raw interactions plus a feature
// manifest that `saers preprocess` and `saers train` consume.

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "saers/error.h"
#include "saers/feature_catalog.h"
#include "saers/interactions.h"
#include "saers/synthetic.h"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic corpus", "saers-synth"};
  saers::SyntheticConfig c;
  std::string out;
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--seed", c.seed, "Generator seed")->required();
  app.add_option("--users", c.users, "Number of users")->check(CLI::PositiveNumber);
  app.add_option("--items", c.items, "Number of items")->check(CLI::PositiveNumber);
  app.add_option("--min-interactions", c.min_interactions, "Fewest items per user");
  app.add_option("--max-interactions", c.max_interactions, "Most items per user");
  app.add_option("--temperature", c.temperature, "Inverse temperature of the choice softmax");
  app.add_option("--category-weight", c.category_weight, "Utility of the liked category");
  app.add_option("--noise", c.feature_noise, "Feature noise standard deviation");
  app.add_option("--items-with-maps", c.items_with_maps, "Leading items that also carry F/G maps");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  try {
    const saers::SyntheticCorpus corpus = saers::MakeSyntheticCorpus(c);
    std::filesystem::create_directories(out);
    saers::WriteInteractions(corpus.interactions, std::filesystem::path(out) / "raw_interactions.tsv");
    saers::WriteFeatureManifest(corpus.catalog, std::filesystem::path(out) / "features");
  } catch (const saers::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
