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

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "evcorner/detector.hpp"
#include "evcorner/error.hpp"
#include "evcorner/eval.hpp"
#include "evcorner/events.hpp"
#include "evcorner/forest.hpp"
#include "evcorner/random.hpp"
#include "evcorner/simulator.hpp"
#include "evcorner/time_surface.hpp"
#include "evcorner/tracker.hpp"
#include "evcorner/trajectory.hpp"

namespace fs = std::filesystem;
using namespace evcorner;

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kParse = 3,
  kOrdering = 4,
  kIo = 5,
  kBounds = 6,
  kConfig = 7,
  kTraining = 8,
  kCorruptModel = 9,
  kTrajectory = 10,
  kLabeling = 11,
  kEstimation = 12,
};

int default_threads() {
  if (const char* env = std::getenv("EVCORNER_THREADS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring non-integer EVCORNER_THREADS=" << env << '\n';
    }
  }
  return 1;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

// Writes `text` to `path`, or to stdout when the path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  auto out = open_output(path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

struct StreamArgs {
  std::string format;  // empty: infer from extension
  bool sort = false;
  int width = 0;
  int height = 0;

  void add_to(CLI::App* app) {
    app->add_option("--format", format, "Event file format: csv|bin (default: by extension)");
    app->add_flag("--sort", sort, "Stable-sort out-of-order input instead of rejecting it");
    app->add_option("--width", width, "Sensor width (0: bounding box of the events)");
    app->add_option("--height", height, "Sensor height (0: bounding box of the events)");
  }

  std::vector<Event> read(const fs::path& path) const {
    ReadOptions opts;
    opts.format = format.empty() ? format_for_path(path) : parse_format(format);
    opts.sort = sort;
    return read_stream(path, opts);
  }

  SensorGeometry geometry(std::span<const Event> events) const {
    const SensorGeometry box = bounding_geometry(events);
    SensorGeometry g{width > 0 ? width : box.width, height > 0 ? height : box.height};
    validate(g);
    return g;
  }
};

struct DetectorArgs {
  DetectorConfig config;

  void add_to(CLI::App* app, bool with_threshold = true) {
    app->add_option("--radius", config.radius, "Speed-invariant surface radius r")
        ->check(CLI::Range(1, SpeedInvariantSurface::kMaxRadius));
    app->add_option("--patch-size", config.patch_size, "Patch side n")
        ->check(CLI::Range(1, SpeedInvariantSurface::kMaxPatchSize));
    app->add_option("--trail-us", config.trail_us, "Trail filter timeout, microseconds")
        ->check(CLI::NonNegativeNumber);
    if (with_threshold) {
      app->add_option("--threshold", config.threshold, "Corner probability threshold");
    }
  }

  // Adopts the model's surface kind and age cap; radius and patch size must
  // agree with the model.
  DetectorConfig for_model(const Forest& forest) const {
    DetectorConfig c = config;
    c.surface = forest.metadata().surface;
    c.age_cap = forest.metadata().age_cap;
    check_compatible(forest, c.patch_size, c.radius, c.surface);
    validate(c);
    return c;
  }
};

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string preset;
  std::string scene;
  std::string out_dir = ".";
  std::string prefix;
  std::string format = "csv";
  std::uint64_t seed = 1;
  double noise_rate = -1.0;
  double label_radius = 2.0;
  Timestamp label_cadence = 5000;
  Timestamp trajectory_cadence = 1000;
};

int run_simulate(const SimulateArgs& a) {
  if (a.preset.empty() == a.scene.empty()) {
    throw ConfigError("simulate needs exactly one of --preset or --scene");
  }
  Scene scene = a.preset.empty() ? load_scene(a.scene) : make_preset(a.preset);
  scene.contrast.seed = a.seed;
  if (a.noise_rate >= 0.0) scene.contrast.noise_rate = a.noise_rate;
  const std::string prefix = a.prefix.empty() ? scene.name : a.prefix;
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);

  const StreamFormat format = parse_format(a.format);
  const fs::path events_path =
      dir / (prefix + (format == StreamFormat::kCsv ? ".events.csv" : ".events.bin"));
  const fs::path labels_path = dir / (prefix + ".labels.csv");
  const fs::path traj_path = dir / (prefix + ".trajectory.csv");
  const fs::path scene_path = dir / (prefix + ".scene.json");

  const std::vector<Event> events = generate_events(scene);
  write_stream(events, events_path, format);
  const auto labels = label_events(events, scene, a.label_radius, a.label_cadence);
  write_labels(labels, labels_path);
  write_trajectory(SampledTrajectory::from(scene.trajectory, scene.duration,
                                           a.trajectory_cadence, scene.pattern.bounds()),
                   traj_path);
  save_scene(scene, scene_path);

  std::size_t positives = 0;
  for (const auto& l : labels) positives += l.label;
  std::cout << "events=" << events.size() << " positives=" << positives
            << " sensor=" << scene.geometry.width << 'x' << scene.geometry.height
            << " duration_us=" << scene.duration << '\n'
            << "wrote " << events_path.string() << ' ' << labels_path.string() << ' '
            << traj_path.string() << ' ' << scene_path.string() << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::vector<std::string> events;
  std::vector<std::string> labels;
  std::string model;
  std::string surface = "sits";
  StreamArgs stream;
  DetectorArgs detector;
  ForestConfig forest;
  double negative_ratio = 3.0;
  Timestamp age_cap = 100000;
};

int run_train(TrainArgs& a) {
  if (a.events.size() != a.labels.size()) {
    throw ConfigError("--events and --labels must be given the same number of times");
  }
  DetectorConfig cfg = a.detector.config;
  cfg.surface = parse_surface_kind(a.surface);
  cfg.age_cap = a.age_cap;
  validate(cfg);

  Dataset data(cfg.patch_size * cfg.patch_size);
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    const auto events = a.stream.read(a.events[i]);
    const auto labels = read_labels(a.labels[i]);
    const auto part = collect_samples(events, labels, a.stream.geometry(events), cfg,
                                      a.negative_ratio, derive_seed(a.forest.seed, i));
    for (std::size_t j = 0; j < part.size(); ++j) data.add(part.row(j), part.label(j));
  }
  if (data.empty()) throw TrainingError("no training samples collected");

  a.forest.tree.seed = a.forest.seed;
  ForestMetadata meta;
  meta.patch_size = cfg.patch_size;
  meta.radius = cfg.radius;
  meta.surface = cfg.surface;
  meta.age_cap = cfg.age_cap;
  const Forest forest = train_forest(data, a.forest, meta);
  save_model(forest, a.model);
  std::cout << "samples=" << data.size() << " positives=" << data.positives()
            << " trees=" << forest.trees().size() << " surface=" << a.surface
            << " model=" << a.model << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// detect

struct DetectArgs {
  std::string events;
  std::string model;
  std::string out = "-";
  std::string dump_surface;
  StreamArgs stream;
  DetectorArgs detector;
};

int run_detect(const DetectArgs& a) {
  const Forest forest = load_model(a.model);
  const DetectorConfig cfg = a.detector.for_model(forest);
  const auto events = a.stream.read(a.events);
  const SensorGeometry geometry = a.stream.geometry(events);

  CornerDetector detector(geometry, cfg, forest);
  std::vector<CornerEvent> corners;
  for (const Event& e : events) {
    if (const auto s = detector.score(e); s && *s >= cfg.threshold) {
      corners.push_back({e, *s});
    }
  }
  if (a.out == "-") {
    std::ostringstream text;
    for (const auto& c : corners) {
      text << c.event.x << ',' << c.event.y << ',' << c.event.t << ','
           << (c.event.p > 0 ? 1 : 0) << ',' << c.score << '\n';
    }
    std::cout << text.str();
  } else {
    write_corners(corners, a.out);
    std::cout << "events=" << events.size() << " corners=" << corners.size() << '\n';
  }
  if (!a.dump_surface.empty()) {
    auto out = open_output(a.dump_surface);
    if (const auto* s = detector.speed_invariant_surface()) {
      write_dump(out, *s);
    } else {
      write_dump(out, *detector.time_surface());
    }
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// track

struct TrackArgs {
  std::string corners;
  std::string out;
  TrackerConfig config;
  std::size_t first_k = 100;
};

int run_track(const TrackArgs& a) {
  const auto corners = read_corners(a.corners);
  const auto tracks = track(corners, a.config);
  write_tracks(tracks, a.out);
  const LifetimeSummary life = lifetimes(tracks, a.first_k);
  std::cout << "tracks=" << tracks.size() << " mean_lifetime_us=" << life.mean_us
            << " lifetime_tracks=" << life.tracks_used
            << " mean_gap_us=" << mean_inter_detection_gap(tracks) << '\n';
  if (life.insufficient) {
    std::cerr << "warning: only " << life.tracks_used << " tracks available, "
              << a.first_k << " requested\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string tracks;
  std::string trajectory;
  std::string out = "-";
  std::string dt_grid = "25,50,100";
  bool ground_truth_h = false;
  EvalConfig config;
};

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      grid.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad --dt-grid entry '" + item + "'");
    }
    if (grid.back() < 0.0) throw ConfigError("--dt-grid entries must be >= 0");
  }
  if (grid.empty()) throw ConfigError("--dt-grid is empty");
  return grid;
}

int run_eval(EvalArgs& a) {
  a.config.dt_grid_ms = parse_grid(a.dt_grid);
  a.config.source =
      a.ground_truth_h ? HomographySource::kGroundTruth : HomographySource::kEstimated;
  if (a.ground_truth_h && a.trajectory.empty()) {
    throw ConfigError("--gt-h needs --trajectory");
  }
  const auto tracks = read_tracks(a.tracks);
  std::optional<SampledTrajectory> gt;
  if (!a.trajectory.empty()) gt = read_trajectory(a.trajectory);
  const EvalReport report = reprojection_error(tracks, gt ? &*gt : nullptr, a.config);
  std::ostringstream text;
  report.write(text);
  emit(a.out, text.str());
  return kOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::string events;
  std::string preset = "checkerboard-translate";
  std::string model;
  int repeats = 3;
  StreamArgs stream;
  DetectorArgs detector;
};

int run_bench(const BenchArgs& a) {
  const Forest forest = load_model(a.model);
  const DetectorConfig cfg = a.detector.for_model(forest);
  std::vector<Event> events;
  SensorGeometry geometry;
  if (!a.events.empty()) {
    events = a.stream.read(a.events);
    geometry = a.stream.geometry(events);
  } else {
    const Scene scene = make_preset(a.preset);
    events = generate_events(scene);
    geometry = scene.geometry;
  }
  std::cout << bench_throughput(events, geometry, cfg, forest, a.repeats).to_json()
            << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------
// figure

struct FigureArgs {
  std::string kind;
  std::string out = "-";
  // fig3
  int radius = 5;
  std::vector<double> speeds{100.0, 200.0, 1000.0};
  int width = 64;
  bool no_clamp = false;
  // fig4
  std::string preset = "checkerboard-reversal";
  Timestamp time = 400000;
  int patch_size = 8;
  int patches = 4;
  // roc
  std::string events;
  std::string labels;
  std::string model;
  int steps = 21;
  StreamArgs stream;
  DetectorArgs detector;
};

// Profile of the ON channel along the middle row after a vertical edge swept
// the sensor at each speed. The trail filter runs first, as in detection.
std::string figure_slope_profiles(const FigureArgs& a) {
  const SensorGeometry g{a.width, 2 * a.radius + 3};
  const int row = g.height / 2;
  std::ostringstream out;
  out << "# slope profiles radius=" << a.radius
      << " clamp=" << (a.no_clamp ? "off" : "on") << '\n';
  for (double speed : a.speeds) {
    const Scene scene = make_edge_sweep(g, speed, 2.0, g.width - 2.0);
    const auto events = trail_filter(generate_events(scene), g);
    out << "# speed_px_s=" << speed << " events=" << events.size() << '\n'
        << "x,value\n";
    if (a.no_clamp) {
      UnclampedSpeedInvariantSurface s(g, a.radius);
      for (const Event& e : events) s.update(e);
      for (int x = 0; x < g.width; ++x) {
        out << x << ',' << s.at(x, row, 1) + s.at(x, row, -1) << '\n';
      }
    } else {
      SpeedInvariantSurface s(g, a.radius);
      for (const Event& e : events) s.update(e);
      for (int x = 0; x < g.width; ++x) {
        out << x << ',' << int(s.at(x, row, 1)) + int(s.at(x, row, -1)) << '\n';
      }
    }
  }
  return out.str();
}

void write_patch(std::ostream& out, const Patch& patch) {
  for (int r = 0; r < patch.size; ++r) {
    for (int c = 0; c < patch.size; ++c) {
      if (c) out << ' ';
      out << patch.at(r, c);
    }
    out << '\n';
  }
}

// Speed-invariant and sorted-normalized patches around the last events before
// `time`, plus both full surfaces for context.
std::string figure_surface_comparison(const FigureArgs& a) {
  if (a.patches < 1) throw ConfigError("--patches must be >= 1");
  const Scene scene = make_preset(a.preset);
  const auto events = trail_filter(generate_events(scene), scene.geometry);
  SpeedInvariantSurface sits(scene.geometry, a.radius);
  TimeSurface ts(scene.geometry);
  std::vector<Event> recent;
  for (const Event& e : events) {
    if (e.t > a.time) break;
    sits.update(e);
    ts.update(e);
    recent.push_back(e);
  }
  std::ostringstream out;
  out << "# surface comparison preset=" << a.preset << " t_us=" << a.time
      << " radius=" << a.radius << " n=" << a.patch_size << '\n';
  const std::size_t first =
      recent.size() > static_cast<std::size_t>(a.patches) ? recent.size() - a.patches : 0;
  for (std::size_t i = first; i < recent.size(); ++i) {
    const Event& e = recent[i];
    out << "# event x=" << e.x << " y=" << e.y << " t=" << e.t << " p=" << int(e.p)
        << "\n# patch sits\n";
    write_patch(out, sits.extract_patch(e, a.patch_size));
    out << "# patch sorted\n";
    write_patch(out, sorted_normalization(ts, e.x, e.y, e.p, a.patch_size, a.radius));
  }
  out << "# surface sits\n";
  write_dump(out, sits);
  out << "# surface ts\n";
  write_dump(out, ts);
  return out.str();
}

std::string figure_roc(const FigureArgs& a) {
  if (a.steps < 2) throw ConfigError("--steps must be >= 2");
  const Forest forest = load_model(a.model);
  const DetectorConfig cfg = a.detector.for_model(forest);
  const auto events = a.stream.read(a.events);
  const auto labels = read_labels(a.labels);
  std::vector<double> thresholds;
  for (int i = 0; i < a.steps; ++i) thresholds.push_back(double(i) / (a.steps - 1));
  const auto points = threshold_sweep(events, labels, a.stream.geometry(events), cfg,
                                      forest, thresholds);
  std::ostringstream out;
  out << "threshold,detections,true_positives,precision,recall,false_positive_rate\n";
  for (const RocPoint& p : points) {
    out << p.threshold << ',' << p.detections << ',' << p.true_positives << ','
        << p.precision << ',' << p.recall << ',' << p.false_positive_rate << '\n';
  }
  return out.str();
}

int run_figure(const FigureArgs& a) {
  if (a.kind == "fig3") {
    emit(a.out, figure_slope_profiles(a));
  } else if (a.kind == "fig4") {
    emit(a.out, figure_surface_comparison(a));
  } else if (a.kind == "roc") {
    emit(a.out, figure_roc(a));
  } else {
    throw ConfigError("unknown figure '" + a.kind + "' (fig3, fig4, roc)");
  }
  return kOk;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return kParse;
  if (dynamic_cast<const OrderingError*>(&e)) return kOrdering;
  if (dynamic_cast<const IoError*>(&e)) return kIo;
  if (dynamic_cast<const BoundsError*>(&e)) return kBounds;
  if (dynamic_cast<const ConfigError*>(&e)) return kConfig;
  if (dynamic_cast<const TrainingError*>(&e)) return kTraining;
  if (dynamic_cast<const CorruptModelError*>(&e)) return kCorruptModel;
  if (dynamic_cast<const TrajectoryError*>(&e)) return kTrajectory;
  if (dynamic_cast<const LabelingError*>(&e)) return kLabeling;
  if (dynamic_cast<const EstimationError*>(&e)) return kEstimation;
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return kIo;
  return kFailure;
}

int run(int argc, char** argv) {
  CLI::App app{"Event-camera corner detection toolkit"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 ok, 1 other failure, 2 usage, 3 parse, 4 ordering, 5 I/O, "
      "6 bounds, 7 config, 8 training, 9 corrupt model, 10 trajectory, "
      "11 labeling, 12 estimation.\nEVCORNER_THREADS sets the default training "
      "thread count; EVCORNER_SIMD=scalar|sse2|avx2|neon pins the surface kernel.");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate events, labels and ground truth");
  simulate->add_option("--preset", sim.preset, "Built-in scene")
      ->check(CLI::IsMember(preset_names()));
  simulate->add_option("--scene", sim.scene, "JSON scene file");
  simulate->add_option("--out-dir", sim.out_dir, "Output directory");
  simulate->add_option("--prefix", sim.prefix, "Output file prefix (default: scene name)");
  simulate->add_option("--format", sim.format, "Event file format: csv|bin");
  simulate->add_option("--seed", sim.seed, "Noise seed");
  simulate->add_option("--noise-rate", sim.noise_rate,
                       "Background events per pixel per second (negative: scene value)");
  simulate->add_option("--label-radius", sim.label_radius, "Positive label distance, pixels");
  simulate->add_option("--label-cadence-us", sim.label_cadence,
                       "Corner projection cadence for labels, microseconds");
  simulate->add_option("--trajectory-cadence-us", sim.trajectory_cadence,
                       "Ground-truth homography sampling step, microseconds")
      ->check(CLI::PositiveNumber);

  TrainArgs tr;
  tr.forest.threads = default_threads();
  auto* train = app.add_subcommand("train", "Train a corner classifier forest");
  train->add_option("--events", tr.events, "Event file (repeatable)")->required();
  train->add_option("--labels", tr.labels, "Label file, one per --events")->required();
  train->add_option("--model", tr.model, "Output model file")->required();
  train->add_option("--surface", tr.surface, "Patch source: sits|ts")
      ->check(CLI::IsMember({"sits", "ts"}));
  train->add_option("--trees", tr.forest.num_trees, "Number of trees")
      ->check(CLI::PositiveNumber);
  train->add_option("--max-depth", tr.forest.tree.max_depth, "Maximum tree depth")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--min-samples", tr.forest.tree.min_samples,
                    "Nodes with fewer samples become leaves");
  train->add_option("--min-impurity", tr.forest.tree.min_impurity,
                    "Nodes at or below this Gini impurity become leaves");
  train->add_option("--features-per-node", tr.forest.tree.features_per_node,
                    "Features examined per node (0: ceil(sqrt(n*n)))")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--bootstrap-fraction", tr.forest.bootstrap_fraction,
                    "Bootstrap sample size as a fraction of the dataset")
      ->check(CLI::PositiveNumber);
  train->add_option("--neg-ratio", tr.negative_ratio,
                    "Negatives kept per positive (0: keep all)")
      ->check(CLI::NonNegativeNumber);
  train->add_option("--age-cap-us", tr.age_cap, "Age cap of time-surface features")
      ->check(CLI::PositiveNumber);
  train->add_option("--seed", tr.forest.seed, "Training seed");
  train->add_option("--threads", tr.forest.threads, "Trees grown in parallel")
      ->check(CLI::PositiveNumber);
  tr.stream.add_to(train);
  tr.detector.add_to(train, false);

  DetectArgs det;
  auto* detect = app.add_subcommand("detect", "Classify events and write corner events");
  detect->add_option("--events", det.events, "Event file")->required();
  detect->add_option("--model", det.model, "Model file")->required();
  detect->add_option("--out", det.out, "Corner file (-: stdout)");
  detect->add_option("--dump-surface", det.dump_surface, "Write the final surface here");
  det.stream.add_to(detect);
  det.detector.add_to(detect);

  TrackArgs trk;
  auto* trackc = app.add_subcommand("track", "Link corner events into tracks");
  trackc->add_option("--corners", trk.corners, "Corner file")->required();
  trackc->add_option("--out", trk.out, "Track file")->required();
  trackc->add_option("--radius", trk.config.radius, "Association radius, pixels")
      ->check(CLI::PositiveNumber);
  trackc->add_option("--window-us", trk.config.window,
                     "Association window, microseconds")
      ->check(CLI::NonNegativeNumber);
  trackc->add_option("--first-k", trk.first_k, "Tracks averaged for the lifetime");

  EvalArgs ev;
  auto* evalc = app.add_subcommand("eval", "Homography reprojection error of tracks");
  evalc->add_option("--tracks", ev.tracks, "Track file")->required();
  evalc->add_option("--trajectory", ev.trajectory,
                    "Ground-truth trajectory (enables pattern masking and valid_pct)");
  evalc->add_option("--out", ev.out, "Report file (-: stdout)");
  evalc->add_option("--dt-grid", ev.dt_grid, "Comma-separated time offsets, ms");
  evalc->add_flag("--gt-h", ev.ground_truth_h,
                  "Use ground-truth homographies instead of RANSAC estimates");
  evalc->add_option("--inlier-tol", ev.config.ransac.inlier_tol,
                    "RANSAC inlier tolerance, pixels")
      ->check(CLI::PositiveNumber);
  evalc->add_option("--iterations", ev.config.ransac.iterations, "RANSAC iterations")
      ->check(CLI::PositiveNumber);
  evalc->add_option("--seed", ev.config.ransac.seed, "RANSAC seed");
  evalc->add_option("--cadence-us", ev.config.cadence,
                    "Spacing of reference snapshots, microseconds")
      ->check(CLI::PositiveNumber);
  evalc->add_option("--window-us", ev.config.window, "Snapshot window, microseconds")
      ->check(CLI::PositiveNumber);
  evalc->add_option("--valid-threshold", ev.config.valid_threshold,
                    "Valid-track error threshold, pixels");

  BenchArgs bn;
  auto* bench = app.add_subcommand("bench", "Measure detection throughput");
  bench->add_option("--model", bn.model, "Model file")->required();
  bench->add_option("--events", bn.events, "Event file (default: simulate --preset)");
  bench->add_option("--preset", bn.preset, "Scene simulated when --events is absent")
      ->check(CLI::IsMember(preset_names()));
  bench->add_option("--repeats", bn.repeats, "Timed runs; the fastest is reported")
      ->check(CLI::PositiveNumber);
  bn.stream.add_to(bench);
  bn.detector.add_to(bench);

  FigureArgs fg;
  auto* figure = app.add_subcommand("figure", "Export plot data");
  figure->add_option("kind", fg.kind, "fig3 (slope profiles), fig4 (surface comparison), roc")
      ->required()
      ->check(CLI::IsMember({"fig3", "fig4", "roc"}));
  figure->add_option("--out", fg.out, "Output file (-: stdout)");
  figure->add_option("--radius", fg.radius, "Surface radius")
      ->check(CLI::Range(1, SpeedInvariantSurface::kMaxRadius));
  figure->add_option("--speeds", fg.speeds, "fig3: edge speeds, pixels per second")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  figure->add_option("--width", fg.width, "fig3: sensor width")->check(CLI::Range(8, 4096));
  figure->add_flag("--no-clamp", fg.no_clamp, "fig3: let decrements go below zero");
  figure->add_option("--preset", fg.preset, "fig4: scene")
      ->check(CLI::IsMember(preset_names()));
  figure->add_option("--time-us", fg.time, "fig4: snapshot time");
  figure->add_option("--patch-size", fg.patch_size, "fig4: patch side")
      ->check(CLI::Range(1, SpeedInvariantSurface::kMaxPatchSize));
  figure->add_option("--patches", fg.patches, "fig4: number of patches");
  figure->add_option("--events", fg.events, "roc: event file");
  figure->add_option("--labels", fg.labels, "roc: label file");
  figure->add_option("--model", fg.model, "roc: model file");
  figure->add_option("--steps", fg.steps, "roc: thresholds in [0, 1]");
  figure->add_option("--trail-us", fg.detector.config.trail_us, "roc: trail filter timeout");
  figure->add_option("--roc-radius", fg.detector.config.radius, "roc: surface radius");
  figure->add_option("--roc-patch-size", fg.detector.config.patch_size, "roc: patch side");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*train) return run_train(tr);
    if (*detect) return run_detect(det);
    if (*trackc) return run_track(trk);
    if (*evalc) return run_eval(ev);
    if (*bench) return run_bench(bn);
    if (*figure) {
      if (fg.kind == "roc" && (fg.events.empty() || fg.labels.empty() || fg.model.empty())) {
        throw ConfigError("figure roc needs --events, --labels and --model");
      }
      return run_figure(fg);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
