// Copyright 2026 The evcorner Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "evcorner/error.hpp"
#include "evcorner/forest.hpp"
#include "evcorner/random.hpp"
#include "split_oracle.hpp"

namespace fs = std::filesystem;
using namespace evcorner;
using evcorner::testing::brute_force_root_split;

namespace {

Forest single_leaf_forest(double p, int n = 2) {
  ForestMetadata meta;
  meta.patch_size = n;
  Tree t;
  t.nodes.push_back({{}, -1, -1, p});
  return Forest(meta, {t});
}

Dataset random_dataset(Rng& rng, int n, int k, int levels) {
  Dataset d(k);
  std::vector<float> row(k);
  for (int i = 0; i < n; ++i) {
    for (auto& v : row) v = static_cast<float>(uniform_index(rng, levels));
    d.add(row, static_cast<int>(uniform_index(rng, 2)));
  }
  return d;
}

Dataset separable_dataset(Rng& rng, int n, int k) {
  Dataset d(k);
  std::vector<float> row(k);
  for (int i = 0; i < n; ++i) {
    for (auto& v : row) v = static_cast<float>(uniform(rng, 0, 169));
    const int label = static_cast<int>(uniform_index(rng, 2));
    // Class decided by a margin on feature 27 (the patch center for n = 8).
    row[27] = label ? static_cast<float>(uniform(rng, 120, 169))
                    : static_cast<float>(uniform(rng, 0, 100));
    d.add(row, label);
  }
  return d;
}

}  // namespace

TEST_CASE("prediction examples") {
  CHECK(single_leaf_forest(0.7).predict(std::vector<float>(4, 1.0f)) == 0.7);

  ForestMetadata meta;
  meta.patch_size = 2;
  Tree a, b;
  a.nodes.push_back({{}, -1, -1, 0.2});
  b.nodes.push_back({{}, -1, -1, 0.8});
  CHECK(Forest(meta, {a, b}).predict(std::vector<float>(4, 0.f)) ==
        doctest::Approx(0.5));

  Tree stump;
  stump.nodes = {{{0, 5.0}, 1, 2, 0.5}, {{}, -1, -1, 0.1}, {{}, -1, -1, 0.9}};
  const Forest f(meta, {stump});
  CHECK(f.predict(std::vector<float>{3, 0, 0, 0}) == 0.1);
  CHECK(f.predict(std::vector<float>{5, 0, 0, 0}) == 0.9);
  CHECK(f.predict(std::vector<std::uint8_t>{4, 0, 0, 0}) == 0.1);
  CHECK_THROWS_AS(f.predict(std::vector<float>(3, 0.f)), ConfigError);
}

TEST_CASE("pure dataset gives a single leaf") {
  Dataset d(3);
  for (int i = 0; i < 100; ++i) d.add(std::vector<float>{float(i), 1, 2}, 1);
  const Tree t = train_tree(d, TreeConfig{});
  REQUIRE(t.nodes.size() == 1);
  CHECK(t.nodes[0].probability == 1.0);
}

TEST_CASE("two-point dataset splits at the midpoint") {
  Dataset d(1);
  d.add(std::vector<float>{1}, 0);
  d.add(std::vector<float>{3}, 1);
  TreeConfig cfg;
  cfg.min_samples = 1;
  const Tree t = train_tree(d, cfg);
  REQUIRE(t.nodes.size() == 3);
  CHECK(t.nodes[0].stump == Stump{0, 2.0});
  CHECK(t.nodes[t.nodes[0].left].probability == 0.0);
  CHECK(t.nodes[t.nodes[0].right].probability == 1.0);
}

TEST_CASE("empty dataset is a training error") {
  Dataset d(4);
  CHECK_THROWS_AS(train_tree(d, TreeConfig{}), TrainingError);
  ForestMetadata meta;
  meta.patch_size = 2;
  CHECK_THROWS_AS(train_forest(d, ForestConfig{}, meta), TrainingError);
}

TEST_CASE("root split matches the brute-force scan on random datasets") {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(uniform_index(rng, 199));
    const int k = 1 + static_cast<int>(uniform_index(rng, 8));
    const Dataset d = random_dataset(rng, n, k, 1 + static_cast<int>(uniform_index(rng, 12)));
    std::vector<std::uint32_t> idx(d.size());
    std::iota(idx.begin(), idx.end(), 0u);
    std::vector<int> features(k);
    std::iota(features.begin(), features.end(), 0);
    const BestSplit got = find_best_split(d, idx, features);
    const auto want = brute_force_root_split(d);
    REQUIRE(got.found == want.found);
    if (!want.found) continue;
    CHECK(got.stump == want.stump);
    CHECK(got.score.gini(d.size()) == doctest::Approx(want.gini).epsilon(1e-12));
  }
}

TEST_CASE("every trained node with a split has two non-empty children") {
  Rng rng(4);
  const Dataset d = random_dataset(rng, 500, 6, 5);
  TreeConfig cfg;
  cfg.min_samples = 2;
  cfg.features_per_node = 6;
  const Tree t = train_tree(d, cfg);
  // Route every sample and count visits per node.
  std::vector<int> visits(t.nodes.size(), 0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    int node = 0;
    ++visits[0];
    while (!t.nodes[node].is_leaf()) {
      const auto& s = t.nodes[node].stump;
      node = d.feature(i, s.feature) < s.threshold ? t.nodes[node].left
                                                   : t.nodes[node].right;
      ++visits[node];
    }
  }
  for (int v : visits) CHECK(v > 0);
  CHECK(t.depth() <= cfg.max_depth);
}

TEST_CASE("one tree without resampling and with all features equals train_tree") {
  Rng rng(8);
  const Dataset d = random_dataset(rng, 300, 4, 6);
  ForestConfig cfg;
  cfg.num_trees = 1;
  cfg.bootstrap = false;
  cfg.tree.min_samples = 5;
  cfg.tree.features_per_node = 4;
  ForestMetadata meta;
  meta.patch_size = 2;
  const Forest f = train_forest(d, cfg, meta);
  CHECK(f.trees()[0] == train_tree(d, cfg.tree));
}

TEST_CASE("training is deterministic for a seed and independent of threads") {
  Rng rng(12);
  const Dataset d = separable_dataset(rng, 800, 64);
  ForestConfig cfg;
  cfg.seed = 42;
  cfg.tree.min_samples = 10;
  ForestMetadata meta;
  const Forest a = train_forest(d, cfg, meta);
  const Forest b = train_forest(d, cfg, meta);
  cfg.threads = 4;
  const Forest c = train_forest(d, cfg, meta);
  std::ostringstream sa, sb, sc;
  write_model(sa, a);
  write_model(sb, b);
  write_model(sc, c);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str() == sc.str());
  cfg.seed = 43;
  std::ostringstream sd;
  write_model(sd, train_forest(d, cfg, meta));
  CHECK(sd.str() != sa.str());
}

TEST_CASE("separable patches reach high training accuracy with ten trees") {
  Rng rng(21);
  const Dataset d = separable_dataset(rng, 2000, 64);
  ForestConfig cfg;
  cfg.seed = 3;
  const Forest f = train_forest(d, cfg, ForestMetadata{});
  std::size_t correct = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    correct += (f.predict(d.row(i)) >= 0.5) == (d.label(i) == 1);
  }
  CHECK(static_cast<double>(correct) / d.size() >= 0.99);
}

TEST_CASE("swapping the classes complements the prediction") {
  Rng rng(5);
  const Dataset d = random_dataset(rng, 400, 4, 8);
  Dataset swapped(4);
  for (std::size_t i = 0; i < d.size(); ++i) swapped.add(d.row(i), 1 - d.label(i));
  ForestConfig cfg;
  cfg.seed = 9;
  cfg.tree.min_samples = 5;
  ForestMetadata meta;
  meta.patch_size = 2;
  const Forest a = train_forest(d, cfg, meta);
  const Forest b = train_forest(swapped, cfg, meta);
  for (int i = 0; i < 200; ++i) {
    std::vector<float> x(4);
    for (auto& v : x) v = static_cast<float>(uniform(rng, -1, 9));
    const double pa = a.predict(x);
    CHECK(pa >= 0.0);
    CHECK(pa <= 1.0);
    CHECK(b.predict(x) == doctest::Approx(1.0 - pa).epsilon(1e-12));
  }
}

TEST_CASE("model save and load preserve predictions exactly") {
  Rng rng(31);
  const Dataset d = separable_dataset(rng, 600, 64);
  ForestConfig cfg;
  cfg.tree.min_samples = 5;
  const Forest f = train_forest(d, cfg, ForestMetadata{});
  const fs::path p = fs::temp_directory_path() / "evcorner_test_model.txt";
  save_model(f, p);
  const Forest g = load_model(p);
  CHECK(g == f);
  for (int i = 0; i < 1000; ++i) {
    std::vector<float> x(64);
    for (auto& v : x) v = static_cast<float>(uniform(rng, 0, 169));
    CHECK(g.predict(x) == f.predict(x));
  }

  SUBCASE("truncated file is a corrupt model") {
    const auto size = fs::file_size(p);
    fs::resize_file(p, size / 2);
    CHECK_THROWS_AS(load_model(p), CorruptModelError);
  }
  SUBCASE("unknown version is rejected") {
    std::ostringstream text;
    write_model(text, f);
    std::string s = text.str();
    s.replace(s.find("evcorner-forest 1"), 17, "evcorner-forest 9");
    std::istringstream in(s);
    CHECK_THROWS_AS(read_model(in), CorruptModelError);
  }
  SUBCASE("dangling child index is rejected") {
    std::istringstream in(
        "evcorner-forest 1\npatch_size 1\nradius 6\nsurface sits\nage_cap_us 100000\n"
        "config_hash -\ntrees 1\ntree 0 2\nsplit 0 1 1 5\nleaf 0.5\nend\n");
    CHECK_THROWS_AS(read_model(in), CorruptModelError);
  }
  SUBCASE("missing file is an I/O error") {
    CHECK_THROWS_AS(load_model("/nonexistent/model.txt"), IoError);
  }
}

TEST_CASE("model compatibility is checked against the detector configuration") {
  const Forest f = single_leaf_forest(0.5, 8);
  CHECK_NOTHROW(check_compatible(f, 8, 6, SurfaceKind::kSpeedInvariant));
  CHECK_THROWS_AS(check_compatible(f, 7, 6, SurfaceKind::kSpeedInvariant), ConfigError);
  CHECK_THROWS_AS(check_compatible(f, 8, 5, SurfaceKind::kSpeedInvariant), ConfigError);
  CHECK_THROWS_AS(check_compatible(f, 8, 6, SurfaceKind::kTimeSurface), ConfigError);
}

TEST_CASE("surface kind names") {
  CHECK(parse_surface_kind("sits") == SurfaceKind::kSpeedInvariant);
  CHECK(parse_surface_kind("ts") == SurfaceKind::kTimeSurface);
  CHECK(to_string(SurfaceKind::kTimeSurface) == "ts");
  CHECK_THROWS_AS(parse_surface_kind("x"), ConfigError);
}
