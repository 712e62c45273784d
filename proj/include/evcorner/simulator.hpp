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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evcorner/events.hpp"
#include "evcorner/homography.hpp"
#include "evcorner/trajectory.hpp"

namespace evcorner {

// Grayscale image, intensities in [0, 1], row-major.
struct Frame {
  int width = 0;
  int height = 0;
  std::vector<float> values;

  float at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  float& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

// Planar texture rasterized at one sample per pattern unit, with sample
// (i, j) centred at (i + 0.5, j + 0.5). Sampling outside the raster reads the
// background intensity.
struct Pattern {
  Frame raster;
  float background = 0.5f;
  // Analytic corner locations in pattern coordinates; empty for image
  // patterns, which fall back to Harris labeling.
  std::vector<Point2> corners;
  bool analytic_corners = false;

  float sample(double u, double v) const;
  PatternBounds bounds() const {
    return {0.0, 0.0, static_cast<double>(raster.width),
            static_cast<double>(raster.height)};
  }
};

// Alternating squares; corners are every lattice point of the grid,
// including the outline.
Pattern make_checkerboard(int rows, int cols, int square, float dark = 0.2f,
                          float light = 0.8f, float background = 0.5f);

struct Polygon {
  std::vector<Point2> vertices;
  float intensity = 0.2f;
};

// Polygons painted over a `fill` rectangle, 4x4 supersampled. Corners are the
// polygon vertices plus the rectangle's corners when `fill` differs from the
// background.
Pattern make_polygons(int width, int height, std::span<const Polygon> polygons,
                      float fill = 0.8f, float background = 0.5f);

// Image pattern without analytic corners.
Pattern make_image_pattern(Frame image, float background = 0.5f);

struct ContrastModel {
  // Log-intensity step per event.
  double threshold = 0.15;
  // Uniform background events per pixel per second.
  double noise_rate = 0.0;
  // Frame-differencing step.
  Timestamp dt = 100;
  std::uint64_t seed = 1;
};

// Parametric description a Pattern is built from; what scene files store.
struct PatternLayout {
  enum class Kind { kCheckerboard, kPolygons, kImage };
  Kind kind = Kind::kCheckerboard;
  // Checkerboard.
  int rows = 6;
  int cols = 8;
  int square = 18;
  float dark = 0.2f;
  float light = 0.8f;
  // Polygons.
  int width = 0;
  int height = 0;
  float fill = 0.8f;
  std::vector<Polygon> polygons;

  float background = 0.5f;
};

// Image layouts cannot be built from parameters; throws ConfigError.
Pattern build_pattern(const PatternLayout& layout);

struct Scene {
  std::string name;
  SensorGeometry geometry{200, 150};
  PatternLayout layout;
  Pattern pattern;
  Trajectory trajectory;
  Timestamp duration = 1000000;
  ContrastModel contrast;
};

// Pattern warped into the sensor at time t with bilinear sampling. Throws
// TrajectoryError if H(t) is singular.
Frame render(const Scene& scene, Timestamp t);

// Emits one event per threshold multiple crossed between two log-intensity
// samples of a pixel, updating its reference level. Crossing times are
// interpolated linearly within (t0, t1]. Returns the number of events.
int append_threshold_crossings(double& reference, double previous,
                               double current, double threshold, Timestamp t0,
                               Timestamp t1, std::uint16_t x, std::uint16_t y,
                               std::vector<Event>& out);

// Frame differencing at contrast.dt; output sorted by timestamp, ties in
// pixel scan order.
std::vector<Event> generate_events(const Scene& scene);

struct GroundTruthLabel {
  std::size_t event_index = 0;
  int label = 0;
  // Distance to the nearest projected corner, pixels.
  double distance = 0.0;
};

// An event is positive when it lies within `radius` pixels of a corner
// projected with the trajectory sampled every `cadence` microseconds (the
// sample nearest the event's timestamp; cadence 0 projects at the event's own
// time). Throws LabelingError for patterns without analytic corners.
std::vector<GroundTruthLabel> label_events(std::span<const Event> events,
                                           const Scene& scene,
                                           double radius = 2.0,
                                           Timestamp cadence = 5000);

struct HarrisParams {
  double sigma = 1.0;
  double k = 0.04;
  double threshold = 1e-5;
};

// Harris response of the Gaussian-weighted structure tensor at one pixel,
// central-difference gradients, clamped borders.
double harris_response(const Frame& frame, int x, int y,
                       const HarrisParams& params = {});
bool harris_label(const Frame& frame, int x, int y,
                  const HarrisParams& params = {});

// Labels file: one "event_index,class" line per event.
void write_labels(std::span<const GroundTruthLabel> labels,
                  const std::filesystem::path& path);
// Returns the class of every event index in order; throws ParseError on gaps.
std::vector<std::uint8_t> read_labels(const std::filesystem::path& path);

std::vector<std::string> preset_names();
// checkerboard-translate, checkerboard-reversal, checkerboard-rotate,
// checkerboard-tilt, polygons-translate. Throws ConfigError for others.
Scene make_preset(std::string_view name);

// A long vertical step edge crossing the sensor left to right at `speed`
// pixels per second (dark on the left, light on the right).
Scene make_edge_sweep(SensorGeometry geometry, double speed,
                      double start_x, double end_x);

// JSON scene description (pattern, trajectory keyframes, contrast).
Scene load_scene(const std::filesystem::path& path);
void save_scene(const Scene& scene, const std::filesystem::path& path);
std::string scene_to_json(const Scene& scene);
Scene scene_from_json(std::string_view text);

}  // namespace evcorner
