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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evcorner/events.hpp"
#include "evcorner/forest.hpp"
#include "evcorner/time_surface.hpp"

namespace evcorner {

struct DetectorConfig {
  int radius = 6;
  int patch_size = 8;
  // Emit iff the forest's probability is >= threshold.
  double threshold = 0.5;
  Timestamp trail_us = TrailFilter::kDefaultTimeout;
  SurfaceKind surface = SurfaceKind::kSpeedInvariant;
  // Feature cap for time-surface patches.
  Timestamp age_cap = 100000;
};

// Throws ConfigError for out-of-range parameters.
void validate(const DetectorConfig& config);

struct CornerEvent {
  Event event;
  double score = 0.0;

  friend bool operator==(const CornerEvent&, const CornerEvent&) = default;
};

// Stateful per-event pipeline: trail filter, surface update, patch, forest.
// One instance per stream; events must arrive in timestamp order.
class CornerDetector {
 public:
  // The forest must outlive the detector.
  CornerDetector(SensorGeometry geometry, DetectorConfig config,
                 const Forest& forest);

  // Score of `e`, or nullopt when the trail filter drops it. Events outside
  // the sensor throw BoundsError.
  std::optional<double> score(const Event& e);

  const DetectorConfig& config() const { return config_; }
  // Surface of the configured kind; the other accessor returns nullptr.
  const SpeedInvariantSurface* speed_invariant_surface() const {
    return sits_ ? &*sits_ : nullptr;
  }
  const TimeSurface* time_surface() const { return ts_ ? &*ts_ : nullptr; }

 private:
  SensorGeometry geometry_;
  DetectorConfig config_;
  const Forest* forest_;
  TrailFilter filter_;
  std::optional<SpeedInvariantSurface> sits_;
  std::optional<TimeSurface> ts_;
  std::vector<std::uint8_t> byte_patch_;
  std::vector<float> float_patch_;
};

std::vector<CornerEvent> detect_stream(std::span<const Event> events,
                                       const SensorGeometry& geometry,
                                       const DetectorConfig& config,
                                       const Forest& forest);

// Replays the detector's front end (trail filter, surface, patch) over a
// labeled stream and returns one sample per kept event. Negatives are kept
// with probability min(1, negative_ratio * positives / negatives) when
// negative_ratio > 0.
Dataset collect_samples(std::span<const Event> events,
                        std::span<const std::uint8_t> labels,
                        const SensorGeometry& geometry,
                        const DetectorConfig& config, double negative_ratio,
                        std::uint64_t seed);

struct RocPoint {
  double threshold = 0.0;
  std::size_t detections = 0;
  std::size_t true_positives = 0;
  double precision = 0.0;
  double recall = 0.0;
  double false_positive_rate = 0.0;
};

// Scores every trail-filtered event once and evaluates each threshold.
std::vector<RocPoint> threshold_sweep(std::span<const Event> events,
                                      std::span<const std::uint8_t> labels,
                                      const SensorGeometry& geometry,
                                      const DetectorConfig& config,
                                      const Forest& forest,
                                      std::span<const double> thresholds);

struct ThroughputReport {
  std::size_t events = 0;
  std::size_t filtered_events = 0;
  std::size_t corners = 0;
  double seconds = 0.0;
  double events_per_second = 0.0;
  Timestamp sensor_span = 0;
  double realtime_factor = 0.0;
  std::string kernel;

  // Single-line key/value JSON.
  std::string to_json() const;
};

// Reference figures of the original single-core implementation.
inline constexpr double kReferenceRateMevPerSec = 1.61;
inline constexpr double kReferenceRealtimeFactor = 3.53;

// Runs the full pipeline (trail filter included) `repeats` times with fresh
// state and reports the fastest run.
ThroughputReport bench_throughput(std::span<const Event> events,
                                  const SensorGeometry& geometry,
                                  const DetectorConfig& config,
                                  const Forest& forest, int repeats = 3);

// Corner-event file: "x,y,t,p,score" rows, p in {0,1}.
void write_corners(std::span<const CornerEvent> corners,
                   const std::filesystem::path& path);
std::vector<CornerEvent> read_corners(const std::filesystem::path& path);

}  // namespace evcorner
