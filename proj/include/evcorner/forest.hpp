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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evcorner/events.hpp"
#include "evcorner/time_surface.hpp"

namespace evcorner {

// Which surface a classifier's patches come from.
enum class SurfaceKind { kSpeedInvariant, kTimeSurface };

std::string_view to_string(SurfaceKind kind);
// "sits" or "ts".
SurfaceKind parse_surface_kind(std::string_view name);

// Single-feature threshold split: a sample goes left iff x[feature] < threshold.
struct Stump {
  int feature = 0;
  double threshold = 0.0;

  friend bool operator==(const Stump&, const Stump&) = default;
};

struct TreeNode {
  Stump stump;
  int left = -1;  // -1 marks a leaf
  int right = -1;
  double probability = 0.0;  // positive-class fraction, leaves only

  bool is_leaf() const { return left < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// nodes[0] is the root; children always have larger indices than parents.
struct Tree {
  std::vector<TreeNode> nodes;

  template <typename T>
  double predict(std::span<const T> x) const {
    const TreeNode* node = nodes.data();
    while (!node->is_leaf()) {
      node = nodes.data() + (static_cast<double>(x[node->stump.feature]) <
                                     node->stump.threshold
                                 ? node->left
                                 : node->right);
    }
    return node->probability;
  }

  // Number of split levels on the longest root-to-leaf path.
  int depth() const;
  friend bool operator==(const Tree&, const Tree&) = default;
};

struct ForestMetadata {
  int patch_size = 8;
  int radius = 6;
  SurfaceKind surface = SurfaceKind::kSpeedInvariant;
  // Age cap of time-surface features, microseconds.
  Timestamp age_cap = 100000;
  std::string config_hash;

  int num_features() const { return patch_size * patch_size; }
  friend bool operator==(const ForestMetadata&, const ForestMetadata&) =
      default;
};

class Forest {
 public:
  Forest() = default;
  Forest(ForestMetadata metadata, std::vector<Tree> trees);

  // Mean of the per-tree leaf probabilities. Throws ConfigError when the
  // input length differs from the metadata's n*n.
  double predict(std::span<const float> patch) const;
  double predict(std::span<const std::uint8_t> patch) const;
  double predict(const Patch& patch) const { return predict(patch.values); }

  // Unchecked variant for the detection hot path.
  template <typename T>
  double predict_unchecked(std::span<const T> patch) const {
    double sum = 0.0;
    for (const Tree& tree : trees_) sum += tree.predict(patch);
    return sum / static_cast<double>(trees_.size());
  }

  const ForestMetadata& metadata() const { return metadata_; }
  const std::vector<Tree>& trees() const { return trees_; }
  friend bool operator==(const Forest&, const Forest&) = default;

 private:
  ForestMetadata metadata_;
  std::vector<Tree> trees_;
};

// Throws ConfigError when the model was trained for a different surface,
// patch size, or (for speed-invariant surfaces) radius.
void check_compatible(const Forest& forest, int patch_size, int radius,
                      SurfaceKind surface);

struct LabeledSample {
  Patch patch;
  int label = 0;
};

// Row-major feature matrix with binary labels.
class Dataset {
 public:
  explicit Dataset(int num_features);

  void add(std::span<const float> features, int label);
  void add(const LabeledSample& sample) {
    add(sample.patch.values, sample.label);
  }

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  int num_features() const { return num_features_; }
  float feature(std::size_t i, int k) const {
    return features_[i * num_features_ + k];
  }
  std::span<const float> row(std::size_t i) const {
    return {features_.data() + i * num_features_,
            static_cast<std::size_t>(num_features_)};
  }
  int label(std::size_t i) const { return labels_[i]; }
  std::size_t positives() const;

 private:
  int num_features_;
  std::vector<float> features_;
  std::vector<std::uint8_t> labels_;
};

struct TreeConfig {
  int max_depth = 10;
  // Nodes with fewer samples become leaves.
  int min_samples = 50;
  double min_impurity = 1e-6;
  // Features examined per node; 0 picks ceil(sqrt(K)), >= K uses all.
  int features_per_node = 0;
  std::uint64_t seed = 0;
};

struct ForestConfig {
  int num_trees = 10;
  // Each tree sees round(fraction * N) samples drawn with replacement;
  // with bootstrap off every tree sees the dataset as is.
  bool bootstrap = true;
  double bootstrap_fraction = 1.0;
  std::uint64_t seed = 0;
  TreeConfig tree;
  // Trees are independent and may be grown concurrently.
  int threads = 1;
};

// Weighted child impurity of a split as an exact fraction of integers. The
// weighted Gini impurity is 2 * numerator / (denominator * n).
struct SplitScore {
  std::int64_t numerator = 0;
  std::int64_t denominator = 1;

  double gini(std::size_t n) const {
    return 2.0 * static_cast<double>(numerator) /
           (static_cast<double>(denominator) * static_cast<double>(n));
  }
  friend bool operator<(const SplitScore& a, const SplitScore& b) {
    return static_cast<__int128>(a.numerator) * b.denominator <
           static_cast<__int128>(b.numerator) * a.denominator;
  }
  friend bool operator==(const SplitScore& a, const SplitScore& b) {
    return static_cast<__int128>(a.numerator) * b.denominator ==
           static_cast<__int128>(b.numerator) * a.denominator;
  }
};

// Score of sending (pos_left, neg_left) left and the rest right.
SplitScore score_split(std::int64_t pos_left, std::int64_t neg_left,
                       std::int64_t pos_right, std::int64_t neg_right);

struct BestSplit {
  bool found = false;
  Stump stump;
  SplitScore score;
};

// Exhaustive search over `features` (ascending) and every midpoint between
// consecutive distinct values of the samples in `indices`. Ties go to the
// lowest feature, then the lowest threshold.
BestSplit find_best_split(const Dataset& data,
                          std::span<const std::uint32_t> indices,
                          std::span<const int> features);

// Grows one tree on `indices` (duplicates allowed) of `data`. Throws
// TrainingError when `indices` is empty.
Tree train_tree(const Dataset& data, std::span<const std::uint32_t> indices,
                const TreeConfig& config);
Tree train_tree(const Dataset& data, const TreeConfig& config);

Forest train_forest(const Dataset& data, const ForestConfig& config,
                    ForestMetadata metadata);

// Stable FNV-1a digest of the training configuration, hex encoded.
std::string config_hash(const ForestConfig& config,
                        const ForestMetadata& metadata);

// Versioned text format, one node record per line. Floats are written in
// shortest round-trip form so predictions survive a save/load exactly.
void write_model(std::ostream& out, const Forest& forest);
Forest read_model(std::istream& in);
void save_model(const Forest& forest, const std::filesystem::path& path);
Forest load_model(const std::filesystem::path& path);

}  // namespace evcorner
