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

#include "evcorner/detector.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "evcorner/error.hpp"
#include "evcorner/random.hpp"

namespace evcorner {
namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void require_labels(std::span<const Event> events,
                    std::span<const std::uint8_t> labels) {
  if (labels.size() != events.size()) {
    throw ConfigError("label count " + std::to_string(labels.size()) +
                      " does not match event count " +
                      std::to_string(events.size()));
  }
}

// Front end shared by detection and sample collection.
class FeaturePipeline {
 public:
  FeaturePipeline(const SensorGeometry& geometry, const DetectorConfig& config)
      : geometry_(geometry), config_(config),
        filter_(geometry, config.trail_us) {
    const int n = config.patch_size;
    if (config.surface == SurfaceKind::kSpeedInvariant) {
      sits_.emplace(geometry, config.radius);
    } else {
      ts_.emplace(geometry);
    }
    features_.resize(static_cast<std::size_t>(n) * n);
    bytes_.resize(features_.size());
  }

  // Updates state; returns false when the event is filtered out.
  bool push(const Event& e) {
    if (!geometry_.contains(e.x, e.y)) {
      throw BoundsError("event (" + std::to_string(e.x) + "," +
                        std::to_string(e.y) + ") outside sensor");
    }
    if (!filter_.accept(e)) return false;
    const int n = config_.patch_size;
    if (sits_) {
      sits_->update_unchecked(e.x, e.y, e.p);
      sits_->extract(e.x, e.y, e.p, n, bytes_);
      std::copy(bytes_.begin(), bytes_.end(), features_.begin());
    } else {
      ts_->update_unchecked(e);
      ts_->extract_ages(e, n, config_.age_cap, features_);
    }
    return true;
  }

  std::span<const float> features() const { return features_; }

 private:
  SensorGeometry geometry_;
  DetectorConfig config_;
  TrailFilter filter_;
  std::optional<SpeedInvariantSurface> sits_;
  std::optional<TimeSurface> ts_;
  std::vector<float> features_;
  std::vector<std::uint8_t> bytes_;
};

}  // namespace

void validate(const DetectorConfig& config) {
  if (config.patch_size < 1 ||
      config.patch_size > SpeedInvariantSurface::kMaxPatchSize) {
    throw ConfigError("patch size must be in [1, " +
                      std::to_string(SpeedInvariantSurface::kMaxPatchSize) + "]");
  }
  if (config.radius < 0 || config.radius > SpeedInvariantSurface::kMaxRadius) {
    throw ConfigError("radius must be in [0, " +
                      std::to_string(SpeedInvariantSurface::kMaxRadius) + "]");
  }
  if (config.trail_us < 0) throw ConfigError("trail timeout must be >= 0");
  // Thresholds above 1 are allowed and simply reject everything.
  if (!(config.threshold >= 0.0)) throw ConfigError("threshold must be >= 0");
  if (config.age_cap <= 0) throw ConfigError("age cap must be > 0");
}

CornerDetector::CornerDetector(SensorGeometry geometry, DetectorConfig config,
                               const Forest& forest)
    : geometry_(geometry),
      config_(config),
      forest_(&forest),
      filter_(geometry, config.trail_us) {
  validate(config_);
  check_compatible(forest, config_.patch_size, config_.radius, config_.surface);
  if (config_.surface == SurfaceKind::kTimeSurface &&
      forest.metadata().age_cap != config_.age_cap) {
    throw ConfigError("model age cap differs from detector age cap");
  }
  const std::size_t n2 =
      static_cast<std::size_t>(config_.patch_size) * config_.patch_size;
  if (config_.surface == SurfaceKind::kSpeedInvariant) {
    sits_.emplace(geometry_, config_.radius);
    byte_patch_.resize(n2);
  } else {
    ts_.emplace(geometry_);
    float_patch_.resize(n2);
  }
}

std::optional<double> CornerDetector::score(const Event& e) {
  if (!geometry_.contains(e.x, e.y)) {
    throw BoundsError("event (" + std::to_string(e.x) + "," +
                      std::to_string(e.y) + ") outside sensor");
  }
  if (!filter_.accept(e)) return std::nullopt;
  if (sits_) {
    sits_->update_unchecked(e.x, e.y, e.p);
    sits_->extract(e.x, e.y, e.p, config_.patch_size, byte_patch_);
    return forest_->predict_unchecked(std::span<const std::uint8_t>(byte_patch_));
  }
  ts_->update_unchecked(e);
  ts_->extract_ages(e, config_.patch_size, config_.age_cap, float_patch_);
  return forest_->predict_unchecked(std::span<const float>(float_patch_));
}

std::vector<CornerEvent> detect_stream(std::span<const Event> events,
                                       const SensorGeometry& geometry,
                                       const DetectorConfig& config,
                                       const Forest& forest) {
  CornerDetector detector(geometry, config, forest);
  std::vector<CornerEvent> corners;
  for (const Event& e : events) {
    const std::optional<double> s = detector.score(e);
    if (s && *s >= config.threshold) corners.push_back({e, *s});
  }
  return corners;
}

Dataset collect_samples(std::span<const Event> events,
                        std::span<const std::uint8_t> labels,
                        const SensorGeometry& geometry,
                        const DetectorConfig& config, double negative_ratio,
                        std::uint64_t seed) {
  validate(config);
  require_labels(events, labels);

  std::size_t pos = 0, neg = 0;
  {
    TrailFilter filter(geometry, config.trail_us);
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (!geometry.contains(events[i].x, events[i].y)) {
        throw BoundsError("event outside sensor at index " + std::to_string(i));
      }
      if (filter.accept(events[i])) (labels[i] ? pos : neg)++;
    }
  }
  double keep_negative = 1.0;
  if (negative_ratio > 0.0 && neg > 0) {
    keep_negative = std::min(1.0, negative_ratio * static_cast<double>(pos) /
                                      static_cast<double>(neg));
  }

  Dataset data(config.patch_size * config.patch_size);
  FeaturePipeline pipeline(geometry, config);
  Rng rng(seed);
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (!pipeline.push(events[i])) continue;
    if (!labels[i] && keep_negative < 1.0 && uniform01(rng) >= keep_negative) {
      continue;
    }
    data.add(pipeline.features(), labels[i]);
  }
  return data;
}

std::vector<RocPoint> threshold_sweep(std::span<const Event> events,
                                      std::span<const std::uint8_t> labels,
                                      const SensorGeometry& geometry,
                                      const DetectorConfig& config,
                                      const Forest& forest,
                                      std::span<const double> thresholds) {
  require_labels(events, labels);
  CornerDetector detector(geometry, config, forest);
  std::vector<std::pair<double, std::uint8_t>> scored;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (const auto s = detector.score(events[i])) {
      scored.emplace_back(*s, labels[i]);
      positives += labels[i];
    }
  }
  const std::size_t negatives = scored.size() - positives;
  std::vector<RocPoint> points;
  for (double th : thresholds) {
    RocPoint pt;
    pt.threshold = th;
    for (const auto& [s, l] : scored) {
      if (s >= th) {
        ++pt.detections;
        pt.true_positives += l;
      }
    }
    const std::size_t fp = pt.detections - pt.true_positives;
    pt.precision = pt.detections ? static_cast<double>(pt.true_positives) /
                                       static_cast<double>(pt.detections)
                                 : 0.0;
    pt.recall = positives ? static_cast<double>(pt.true_positives) /
                                static_cast<double>(positives)
                          : 0.0;
    pt.false_positive_rate =
        negatives ? static_cast<double>(fp) / static_cast<double>(negatives) : 0.0;
    points.push_back(pt);
  }
  return points;
}

std::string ThroughputReport::to_json() const {
  std::ostringstream out;
  out << "{\"events\":" << events << ",\"filtered_events\":" << filtered_events
      << ",\"corners\":" << corners << ",\"seconds\":" << format_double(seconds)
      << ",\"rate_mev_s\":" << format_double(events_per_second * 1e-6)
      << ",\"sensor_span_us\":" << sensor_span
      << ",\"realtime_factor\":" << format_double(realtime_factor)
      << ",\"kernel\":\"" << kernel << "\""
      << ",\"reference_rate_mev_s\":" << format_double(kReferenceRateMevPerSec)
      << ",\"reference_realtime_factor\":"
      << format_double(kReferenceRealtimeFactor) << "}";
  return out.str();
}

ThroughputReport bench_throughput(std::span<const Event> events,
                                  const SensorGeometry& geometry,
                                  const DetectorConfig& config,
                                  const Forest& forest, int repeats) {
  ThroughputReport report;
  report.events = events.size();
  report.sensor_span = events.empty() ? 0 : events.back().t - events.front().t;
  report.seconds = -1.0;
  for (int rep = 0; rep < std::max(repeats, 1); ++rep) {
    CornerDetector detector(geometry, config, forest);
    std::size_t kept = 0, corners = 0;
    const auto start = std::chrono::steady_clock::now();
    for (const Event& e : events) {
      if (const auto s = detector.score(e)) {
        ++kept;
        corners += *s >= config.threshold;
      }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (report.seconds < 0.0 || secs < report.seconds) report.seconds = secs;
    report.filtered_events = kept;
    report.corners = corners;
    report.kernel = std::string(
        detector.speed_invariant_surface()
            ? detector.speed_invariant_surface()->kernel().name
            : "n/a");
  }
  if (report.seconds > 0.0) {
    report.events_per_second = static_cast<double>(report.events) / report.seconds;
    report.realtime_factor =
        static_cast<double>(report.sensor_span) * 1e-6 / report.seconds;
  }
  return report;
}

void write_corners(std::span<const CornerEvent> corners,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  std::string buf;
  for (const CornerEvent& c : corners) {
    buf += std::to_string(c.event.x) + ',' + std::to_string(c.event.y) + ',' +
           std::to_string(c.event.t) + ',' + (c.event.p > 0 ? '1' : '0') + ',' +
           format_double(c.score) + '\n';
  }
  out << buf;
  out.close();
  if (!out) throw IoError("write failure on " + path.string());
}

std::vector<CornerEvent> read_corners(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<CornerEvent> corners;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t last = line.rfind(',');
    if (last == std::string::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected x,y,t,p,score");
    }
    CornerEvent c;
    c.event = parse_csv_event(std::string_view(line).substr(0, last), line_no);
    const char* begin = line.data() + last + 1;
    const char* end = line.data() + line.size();
    const auto [ptr, ec] = std::from_chars(begin, end, c.score);
    if (ec != std::errc() || ptr != end) {
      throw ParseError("line " + std::to_string(line_no) + ": bad score");
    }
    corners.push_back(c);
  }
  for (std::size_t i = 1; i < corners.size(); ++i) {
    if (corners[i].event.t < corners[i - 1].event.t) {
      throw OrderingError("corner " + std::to_string(i) + " is out of order");
    }
  }
  return corners;
}

}  // namespace evcorner
