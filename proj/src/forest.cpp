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

#include "evcorner/forest.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "evcorner/error.hpp"
#include "evcorner/random.hpp"

namespace evcorner {
namespace {

constexpr std::string_view kModelMagic = "evcorner-forest";
constexpr int kModelVersion = 1;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Writes `count` distinct feature indices drawn from [0, k) into `out`,
// ascending.
void sample_features(Rng& rng, int k, int count, std::vector<int>& out) {
  out.resize(k);
  for (int i = 0; i < k; ++i) out[i] = i;
  if (count < k) {
    for (int i = 0; i < count; ++i) {
      const int j = i + static_cast<int>(uniform_index(rng, k - i));
      std::swap(out[i], out[j]);
    }
    out.resize(count);
  }
  std::sort(out.begin(), out.end());
}

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, const TreeConfig& config)
      : data_(data), config_(config), rng_(config.seed) {
    const int k = data.num_features();
    if (config.features_per_node <= 0) {
      features_per_node_ =
          static_cast<int>(std::ceil(std::sqrt(static_cast<double>(k))));
    } else {
      features_per_node_ = std::min(config.features_per_node, k);
    }
  }

  Tree build(std::vector<std::uint32_t> indices) {
    Tree tree;
    grow(tree, indices, 0);
    return tree;
  }

 private:
  int grow(Tree& tree, std::span<std::uint32_t> indices, int depth) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    std::size_t pos = 0;
    for (std::uint32_t i : indices) pos += static_cast<std::size_t>(data_.label(i));
    const double n = static_cast<double>(indices.size());
    const double p = static_cast<double>(pos) / n;
    const double impurity = 2.0 * p * (1.0 - p);
    tree.nodes[id].probability = p;

    if (depth >= config_.max_depth ||
        indices.size() < static_cast<std::size_t>(config_.min_samples) ||
        impurity <= config_.min_impurity) {
      return id;
    }

    sample_features(rng_, data_.num_features(), features_per_node_, features_);
    const BestSplit best = find_best_split(data_, indices, features_);
    if (!best.found) return id;

    const auto mid = std::stable_partition(
        indices.begin(), indices.end(), [&](std::uint32_t i) {
          return static_cast<double>(data_.feature(i, best.stump.feature)) <
                 best.stump.threshold;
        });
    const auto split_at = static_cast<std::size_t>(mid - indices.begin());

    tree.nodes[id].stump = best.stump;
    tree.nodes[id].probability = 0.0;
    const int left = grow(tree, indices.subspan(0, split_at), depth + 1);
    const int right = grow(tree, indices.subspan(split_at), depth + 1);
    tree.nodes[id].left = left;
    tree.nodes[id].right = right;
    return id;
  }

  const Dataset& data_;
  const TreeConfig& config_;
  Rng rng_;
  int features_per_node_;
  std::vector<int> features_;
};

int subtree_depth(const Tree& tree, int id) {
  const TreeNode& node = tree.nodes[id];
  if (node.is_leaf()) return 0;
  return 1 + std::max(subtree_depth(tree, node.left),
                      subtree_depth(tree, node.right));
}

[[noreturn]] void corrupt(const std::string& why) {
  throw CorruptModelError("corrupt model: " + why);
}

template <typename T>
T parse_number(const std::string& token, const char* what) {
  T value{};
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    corrupt(std::string("bad ") + what + " '" + token + "'");
  }
  return value;
}

// Reads "<key> <value>" and returns the value token.
std::string expect_field(std::istream& in, std::string_view key) {
  std::string k, v;
  if (!(in >> k >> v)) corrupt("unexpected end of file before " + std::string(key));
  if (k != key) corrupt("expected '" + std::string(key) + "', found '" + k + "'");
  return v;
}

void validate_tree(const Tree& tree, int num_features) {
  const int n = static_cast<int>(tree.nodes.size());
  if (n == 0) corrupt("empty tree");
  std::vector<int> refs(n, 0);
  for (int i = 0; i < n; ++i) {
    const TreeNode& node = tree.nodes[i];
    if (node.is_leaf()) {
      if (node.right != -1) corrupt("leaf with a right child");
      if (!(node.probability >= 0.0 && node.probability <= 1.0)) {
        corrupt("leaf probability outside [0,1]");
      }
      continue;
    }
    if (node.stump.feature < 0 || node.stump.feature >= num_features) {
      corrupt("feature index out of range");
    }
    for (int child : {node.left, node.right}) {
      if (child <= i || child >= n) corrupt("bad child index");
      ++refs[child];
    }
  }
  for (int i = 1; i < n; ++i) {
    if (refs[i] != 1) corrupt("node " + std::to_string(i) + " not in tree");
  }
}

}  // namespace

std::string_view to_string(SurfaceKind kind) {
  return kind == SurfaceKind::kSpeedInvariant ? "sits" : "ts";
}

SurfaceKind parse_surface_kind(std::string_view name) {
  if (name == "sits") return SurfaceKind::kSpeedInvariant;
  if (name == "ts") return SurfaceKind::kTimeSurface;
  throw ConfigError("unknown surface '" + std::string(name) +
                    "' (expected sits or ts)");
}

int Tree::depth() const { return nodes.empty() ? 0 : subtree_depth(*this, 0); }

Forest::Forest(ForestMetadata metadata, std::vector<Tree> trees)
    : metadata_(std::move(metadata)), trees_(std::move(trees)) {
  if (trees_.empty()) throw ConfigError("forest needs at least one tree");
}

double Forest::predict(std::span<const float> patch) const {
  if (static_cast<int>(patch.size()) != metadata_.num_features()) {
    throw ConfigError("patch has " + std::to_string(patch.size()) +
                      " values, model expects " +
                      std::to_string(metadata_.num_features()));
  }
  return predict_unchecked(patch);
}

double Forest::predict(std::span<const std::uint8_t> patch) const {
  if (static_cast<int>(patch.size()) != metadata_.num_features()) {
    throw ConfigError("patch has " + std::to_string(patch.size()) +
                      " values, model expects " +
                      std::to_string(metadata_.num_features()));
  }
  return predict_unchecked(patch);
}

void check_compatible(const Forest& forest, int patch_size, int radius,
                      SurfaceKind surface) {
  const ForestMetadata& m = forest.metadata();
  if (m.surface != surface) {
    throw ConfigError("model was trained on '" +
                      std::string(to_string(m.surface)) +
                      "' patches, detector uses '" +
                      std::string(to_string(surface)) + "'");
  }
  if (m.patch_size != patch_size) {
    throw ConfigError("model patch size " + std::to_string(m.patch_size) +
                      " does not match --patch-size " +
                      std::to_string(patch_size));
  }
  if (surface == SurfaceKind::kSpeedInvariant && m.radius != radius) {
    throw ConfigError("model radius " + std::to_string(m.radius) +
                      " does not match --radius " + std::to_string(radius));
  }
}

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(int num_features) : num_features_(num_features) {
  if (num_features < 1) throw ConfigError("dataset needs >= 1 feature");
}

void Dataset::add(std::span<const float> features, int label) {
  if (static_cast<int>(features.size()) != num_features_) {
    throw ConfigError("sample has " + std::to_string(features.size()) +
                      " features, dataset expects " +
                      std::to_string(num_features_));
  }
  if (label != 0 && label != 1) throw ConfigError("label must be 0 or 1");
  features_.insert(features_.end(), features.begin(), features.end());
  labels_.push_back(static_cast<std::uint8_t>(label));
}

std::size_t Dataset::positives() const {
  return static_cast<std::size_t>(
      std::count(labels_.begin(), labels_.end(), std::uint8_t{1}));
}

// ---------------------------------------------------------------------------
// Training

SplitScore score_split(std::int64_t pos_left, std::int64_t neg_left,
                       std::int64_t pos_right, std::int64_t neg_right) {
  const std::int64_t n_left = pos_left + neg_left;
  const std::int64_t n_right = pos_right + neg_right;
  return {pos_left * neg_left * n_right + pos_right * neg_right * n_left,
          n_left * n_right};
}

BestSplit find_best_split(const Dataset& data,
                          std::span<const std::uint32_t> indices,
                          std::span<const int> features) {
  BestSplit best;
  std::int64_t total_pos = 0;
  for (std::uint32_t i : indices) total_pos += data.label(i);
  const auto total = static_cast<std::int64_t>(indices.size());
  const std::int64_t total_neg = total - total_pos;

  std::vector<std::pair<float, std::uint8_t>> column(indices.size());
  for (int k : features) {
    for (std::size_t j = 0; j < indices.size(); ++j) {
      column[j] = {data.feature(indices[j], k),
                   static_cast<std::uint8_t>(data.label(indices[j]))};
    }
    std::sort(column.begin(), column.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::int64_t pos_left = 0;
    for (std::size_t j = 0; j + 1 < column.size(); ++j) {
      pos_left += column[j].second;
      if (!(column[j].first < column[j + 1].first)) continue;
      const auto n_left = static_cast<std::int64_t>(j + 1);
      const SplitScore score =
          score_split(pos_left, n_left - pos_left, total_pos - pos_left,
                      total_neg - (n_left - pos_left));
      // Strict improvement keeps the lowest (feature, threshold) on ties.
      if (!best.found || score < best.score) {
        best.found = true;
        best.score = score;
        best.stump.feature = k;
        best.stump.threshold = (static_cast<double>(column[j].first) +
                                static_cast<double>(column[j + 1].first)) /
                               2.0;
      }
    }
  }
  return best;
}

Tree train_tree(const Dataset& data, std::span<const std::uint32_t> indices,
                const TreeConfig& config) {
  if (indices.empty()) throw TrainingError("cannot train on an empty dataset");
  if (config.max_depth < 0) throw ConfigError("max depth must be >= 0");
  TreeBuilder builder(data, config);
  return builder.build(std::vector<std::uint32_t>(indices.begin(), indices.end()));
}

Tree train_tree(const Dataset& data, const TreeConfig& config) {
  std::vector<std::uint32_t> all(data.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);
  return train_tree(data, all, config);
}

Forest train_forest(const Dataset& data, const ForestConfig& config,
                    ForestMetadata metadata) {
  if (data.empty()) throw TrainingError("cannot train on an empty dataset");
  if (config.num_trees < 1) throw ConfigError("forest needs >= 1 tree");
  if (config.bootstrap &&
      !(config.bootstrap_fraction > 0.0 && config.bootstrap_fraction <= 1.0)) {
    throw ConfigError("bootstrap fraction must be in (0, 1]");
  }
  if (data.num_features() != metadata.num_features()) {
    throw ConfigError("dataset has " + std::to_string(data.num_features()) +
                      " features, metadata expects " +
                      std::to_string(metadata.num_features()));
  }
  metadata.config_hash = config_hash(config, metadata);

  std::vector<Tree> trees(config.num_trees);
  auto grow = [&](int t) {
    TreeConfig tree_config = config.tree;
    tree_config.seed = derive_seed(config.seed, 2 * static_cast<std::uint64_t>(t));
    std::vector<std::uint32_t> sample;
    if (config.bootstrap) {
      Rng rng(derive_seed(config.seed, 2 * static_cast<std::uint64_t>(t) + 1));
      const auto m = std::max<std::size_t>(
          1, static_cast<std::size_t>(
                 std::llround(config.bootstrap_fraction *
                              static_cast<double>(data.size()))));
      sample.resize(m);
      for (auto& i : sample) {
        i = static_cast<std::uint32_t>(uniform_index(rng, data.size()));
      }
    } else {
      sample.resize(data.size());
      for (std::size_t i = 0; i < sample.size(); ++i) {
        sample[i] = static_cast<std::uint32_t>(i);
      }
    }
    trees[t] = train_tree(data, sample, tree_config);
  };

  const int threads = std::clamp(config.threads, 1, config.num_trees);
  if (threads == 1) {
    for (int t = 0; t < config.num_trees; ++t) grow(t);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (int t = w; t < config.num_trees; t += threads) grow(t);
      });
    }
    for (auto& th : pool) th.join();
  }
  return Forest(std::move(metadata), std::move(trees));
}

std::string config_hash(const ForestConfig& config,
                        const ForestMetadata& metadata) {
  std::ostringstream canon;
  canon << "trees=" << config.num_trees << ";bootstrap=" << config.bootstrap
        << ";fraction=" << format_double(config.bootstrap_fraction)
        << ";seed=" << config.seed << ";depth=" << config.tree.max_depth
        << ";min_samples=" << config.tree.min_samples
        << ";min_impurity=" << format_double(config.tree.min_impurity)
        << ";features=" << config.tree.features_per_node
        << ";n=" << metadata.patch_size << ";r=" << metadata.radius
        << ";surface=" << to_string(metadata.surface)
        << ";cap=" << metadata.age_cap;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon.str()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// Serialization

void write_model(std::ostream& out, const Forest& forest) {
  const ForestMetadata& m = forest.metadata();
  out << kModelMagic << ' ' << kModelVersion << '\n'
      << "patch_size " << m.patch_size << '\n'
      << "radius " << m.radius << '\n'
      << "surface " << to_string(m.surface) << '\n'
      << "age_cap_us " << m.age_cap << '\n'
      << "config_hash " << (m.config_hash.empty() ? "-" : m.config_hash) << '\n'
      << "trees " << forest.trees().size() << '\n';
  for (std::size_t t = 0; t < forest.trees().size(); ++t) {
    const Tree& tree = forest.trees()[t];
    out << "tree " << t << ' ' << tree.nodes.size() << '\n';
    for (const TreeNode& node : tree.nodes) {
      if (node.is_leaf()) {
        out << "leaf " << format_double(node.probability) << '\n';
      } else {
        out << "split " << node.stump.feature << ' '
            << format_double(node.stump.threshold) << ' ' << node.left << ' '
            << node.right << '\n';
      }
    }
  }
  out << "end\n";
}

Forest read_model(std::istream& in) {
  std::string magic, version;
  if (!(in >> magic >> version) || magic != kModelMagic) {
    corrupt("missing header");
  }
  if (parse_number<int>(version, "version") != kModelVersion) {
    throw CorruptModelError("unsupported model version " + version +
                            " (expected " + std::to_string(kModelVersion) + ")");
  }
  ForestMetadata m;
  m.patch_size = parse_number<int>(expect_field(in, "patch_size"), "patch size");
  m.radius = parse_number<int>(expect_field(in, "radius"), "radius");
  try {
    m.surface = parse_surface_kind(expect_field(in, "surface"));
  } catch (const ConfigError& e) {
    corrupt(e.what());
  }
  m.age_cap = parse_number<Timestamp>(expect_field(in, "age_cap_us"), "age cap");
  m.config_hash = expect_field(in, "config_hash");
  if (m.config_hash == "-") m.config_hash.clear();
  if (m.patch_size < 1 || m.patch_size > SpeedInvariantSurface::kMaxPatchSize) {
    corrupt("patch size out of range");
  }
  const auto num_trees = parse_number<int>(expect_field(in, "trees"), "tree count");
  if (num_trees < 1) corrupt("no trees");

  std::vector<Tree> trees(num_trees);
  for (int t = 0; t < num_trees; ++t) {
    std::string tag, index, count;
    if (!(in >> tag >> index >> count) || tag != "tree" ||
        parse_number<int>(index, "tree index") != t) {
      corrupt("expected record for tree " + std::to_string(t));
    }
    const auto nodes = parse_number<int>(count, "node count");
    if (nodes < 1) corrupt("tree without nodes");
    trees[t].nodes.resize(nodes);
    for (TreeNode& node : trees[t].nodes) {
      std::string kind;
      if (!(in >> kind)) corrupt("truncated tree " + std::to_string(t));
      if (kind == "leaf") {
        std::string p;
        if (!(in >> p)) corrupt("truncated leaf");
        node.probability = parse_number<double>(p, "probability");
      } else if (kind == "split") {
        std::string k, th, l, r;
        if (!(in >> k >> th >> l >> r)) corrupt("truncated split");
        node.stump.feature = parse_number<int>(k, "feature");
        node.stump.threshold = parse_number<double>(th, "threshold");
        node.left = parse_number<int>(l, "child");
        node.right = parse_number<int>(r, "child");
      } else {
        corrupt("unknown node kind '" + kind + "'");
      }
    }
    validate_tree(trees[t], m.num_features());
  }
  std::string end;
  if (!(in >> end) || end != "end") corrupt("missing end marker");
  return Forest(std::move(m), std::move(trees));
}

void save_model(const Forest& forest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_model(out, forest);
  out.close();
  if (!out) throw IoError("write failure on " + path.string());
}

Forest load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_model(in);
}

}  // namespace evcorner
