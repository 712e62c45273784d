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

#include "evcorner/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "evcorner/error.hpp"
#include "evcorner/random.hpp"

namespace evcorner {
namespace {

using nlohmann::json;

constexpr double kLogEpsilon = 1e-3;

double deg(double rad) { return rad * 180.0 / std::numbers::pi; }
double rad(double deg) { return deg * std::numbers::pi / 180.0; }

bool point_in_polygon(const std::vector<Point2>& poly, double x, double y) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point2& a = poly[i];
    const Point2& b = poly[j];
    if ((a.y > y) != (b.y > y) &&
        x < (b.x - a.x) * (y - a.y) / (b.y - a.y) + a.x) {
      inside = !inside;
    }
  }
  return inside;
}

void log_frame(const Frame& frame, std::vector<double>& out) {
  out.resize(frame.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::log(static_cast<double>(frame.values[i]) + kLogEpsilon);
  }
}

Scene finish_scene(std::string name, SensorGeometry geometry, PatternLayout layout,
                   Trajectory trajectory, Timestamp duration,
                   ContrastModel contrast = {}) {
  Scene s;
  s.name = std::move(name);
  s.geometry = geometry;
  s.pattern = build_pattern(layout);
  s.layout = std::move(layout);
  s.trajectory = std::move(trajectory);
  s.duration = duration;
  s.contrast = contrast;
  return s;
}

// Keyframes are given as offsets from the placement that centres the
// pattern on the sensor.
Trajectory centred(const SensorGeometry& g, const PatternLayout& layout,
                   std::vector<Keyframe> keys) {
  const Pattern p = build_pattern(layout);
  const Point2 pivot{p.raster.width / 2.0, p.raster.height / 2.0};
  for (Keyframe& k : keys) {
    k.tx += g.width / 2.0 - pivot.x;
    k.ty += g.height / 2.0 - pivot.y;
  }
  return Trajectory(std::move(keys), pivot);
}

Keyframe key(double t_s, double tx, double ty, double angle_deg = 0.0,
             double scale = 1.0, double gx = 0.0, double gy = 0.0) {
  return {static_cast<Timestamp>(std::llround(t_s * 1e6)), tx, ty,
          rad(angle_deg), scale, gx, gy};
}

}  // namespace

// ---------------------------------------------------------------------------
// Patterns

float Pattern::sample(double u, double v) const {
  const double a = u - 0.5;
  const double b = v - 0.5;
  const double fa = std::floor(a);
  const double fb = std::floor(b);
  // Far outside: skip the integer conversion.
  if (fa < -2.0 || fb < -2.0 || fa > raster.width + 1.0 ||
      fb > raster.height + 1.0) {
    return background;
  }
  const int i0 = static_cast<int>(fa);
  const int j0 = static_cast<int>(fb);
  const float wx = static_cast<float>(a - fa);
  const float wy = static_cast<float>(b - fb);
  auto fetch = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= raster.width || j >= raster.height) {
      return background;
    }
    return raster.at(i, j);
  };
  const float top = fetch(i0, j0) * (1.f - wx) + fetch(i0 + 1, j0) * wx;
  const float bottom =
      fetch(i0, j0 + 1) * (1.f - wx) + fetch(i0 + 1, j0 + 1) * wx;
  return top * (1.f - wy) + bottom * wy;
}

Pattern make_checkerboard(int rows, int cols, int square, float dark,
                          float light, float background) {
  if (rows < 1 || cols < 1 || square < 1) {
    throw ConfigError("checkerboard needs rows, cols, square >= 1");
  }
  Pattern p;
  p.background = background;
  p.raster.width = cols * square;
  p.raster.height = rows * square;
  p.raster.values.resize(static_cast<std::size_t>(p.raster.width) * p.raster.height);
  for (int j = 0; j < p.raster.height; ++j) {
    for (int i = 0; i < p.raster.width; ++i) {
      p.raster.at(i, j) = ((i / square + j / square) % 2 == 0) ? dark : light;
    }
  }
  for (int r = 0; r <= rows; ++r) {
    for (int c = 0; c <= cols; ++c) {
      p.corners.push_back({static_cast<double>(c * square),
                           static_cast<double>(r * square)});
    }
  }
  p.analytic_corners = true;
  return p;
}

Pattern make_polygons(int width, int height, std::span<const Polygon> polygons,
                      float fill, float background) {
  if (width < 1 || height < 1) throw ConfigError("polygon pattern needs a size");
  Pattern p;
  p.background = background;
  p.raster.width = width;
  p.raster.height = height;
  p.raster.values.assign(static_cast<std::size_t>(width) * height, fill);
  constexpr int kSuper = 4;
  for (int j = 0; j < height; ++j) {
    for (int i = 0; i < width; ++i) {
      float acc = 0.f;
      for (int sj = 0; sj < kSuper; ++sj) {
        for (int si = 0; si < kSuper; ++si) {
          const double x = i + (si + 0.5) / kSuper;
          const double y = j + (sj + 0.5) / kSuper;
          float v = fill;
          for (const Polygon& poly : polygons) {
            if (point_in_polygon(poly.vertices, x, y)) v = poly.intensity;
          }
          acc += v;
        }
      }
      p.raster.at(i, j) = acc / (kSuper * kSuper);
    }
  }
  for (const Polygon& poly : polygons) {
    if (poly.vertices.size() < 3) throw ConfigError("polygon needs 3 vertices");
    p.corners.insert(p.corners.end(), poly.vertices.begin(), poly.vertices.end());
  }
  if (fill != background) {
    const double w = width, h = height;
    p.corners.insert(p.corners.end(), {{0, 0}, {w, 0}, {w, h}, {0, h}});
  }
  p.analytic_corners = true;
  return p;
}

Pattern make_image_pattern(Frame image, float background) {
  if (image.width < 1 || image.height < 1 ||
      image.values.size() != static_cast<std::size_t>(image.width) * image.height) {
    throw ConfigError("image pattern has inconsistent dimensions");
  }
  Pattern p;
  p.raster = std::move(image);
  p.background = background;
  p.analytic_corners = false;
  return p;
}

Pattern build_pattern(const PatternLayout& layout) {
  switch (layout.kind) {
    case PatternLayout::Kind::kCheckerboard:
      return make_checkerboard(layout.rows, layout.cols, layout.square, layout.dark,
                               layout.light, layout.background);
    case PatternLayout::Kind::kPolygons:
      return make_polygons(layout.width, layout.height, layout.polygons, layout.fill,
                           layout.background);
    case PatternLayout::Kind::kImage:
      break;
  }
  throw ConfigError("image patterns cannot be rebuilt from a scene description");
}

// ---------------------------------------------------------------------------
// Rendering and event generation

Frame render(const Scene& scene, Timestamp t) {
  const Homography inv = scene.trajectory.at(t).inverse();
  const Eigen::Matrix3d& m = inv.matrix();
  Frame frame{scene.geometry.width, scene.geometry.height, {}};
  frame.values.resize(scene.geometry.pixels());
  for (int y = 0; y < frame.height; ++y) {
    double qx = m(0, 1) * y + m(0, 2);
    double qy = m(1, 1) * y + m(1, 2);
    double qw = m(2, 1) * y + m(2, 2);
    float* row = frame.values.data() + static_cast<std::size_t>(y) * frame.width;
    for (int x = 0; x < frame.width; ++x) {
      row[x] = scene.pattern.sample(qx / qw, qy / qw);
      qx += m(0, 0);
      qy += m(1, 0);
      qw += m(2, 0);
    }
  }
  return frame;
}

int append_threshold_crossings(double& reference, double previous,
                               double current, double threshold, Timestamp t0,
                               Timestamp t1, std::uint16_t x, std::uint16_t y,
                               std::vector<Event>& out) {
  int count = 0;
  const double delta = current - previous;
  auto stamp = [&](double level) {
    const double frac = (level - previous) / delta;
    const auto t = t0 + static_cast<Timestamp>(
                            std::llround(frac * static_cast<double>(t1 - t0)));
    return std::clamp(t, t0, t1);
  };
  while (current - reference >= threshold) {
    reference += threshold;
    out.push_back({x, y, stamp(reference), 1});
    ++count;
  }
  while (reference - current >= threshold) {
    reference -= threshold;
    out.push_back({x, y, stamp(reference), -1});
    ++count;
  }
  return count;
}

std::vector<Event> generate_events(const Scene& scene) {
  const ContrastModel& cm = scene.contrast;
  if (cm.dt <= 0) throw ConfigError("simulation step must be > 0");
  if (!(cm.threshold > 0.0)) throw ConfigError("contrast threshold must be > 0");
  validate(scene.geometry);

  const int w = scene.geometry.width;
  std::vector<double> reference, previous, current;
  log_frame(render(scene, 0), reference);
  previous = reference;

  Rng rng(cm.seed);
  const double noise_per_step = cm.noise_rate *
                                static_cast<double>(scene.geometry.pixels()) *
                                static_cast<double>(cm.dt) * 1e-6;
  std::vector<Event> events;
  std::vector<Event> batch;
  for (Timestamp t0 = 0; t0 < scene.duration; t0 += cm.dt) {
    const Timestamp t1 = std::min(t0 + cm.dt, scene.duration);
    log_frame(render(scene, t1), current);
    batch.clear();
    for (std::size_t i = 0; i < current.size(); ++i) {
      if (current[i] == previous[i]) continue;
      append_threshold_crossings(reference[i], previous[i], current[i],
                                 cm.threshold, t0, t1,
                                 static_cast<std::uint16_t>(i % w),
                                 static_cast<std::uint16_t>(i / w), batch);
    }
    const std::uint64_t noise = poisson(rng, noise_per_step);
    for (std::uint64_t k = 0; k < noise; ++k) {
      const auto pix = uniform_index(rng, scene.geometry.pixels());
      Event e;
      e.x = static_cast<std::uint16_t>(pix % w);
      e.y = static_cast<std::uint16_t>(pix / w);
      e.t = t0 + 1 + static_cast<Timestamp>(uniform_index(rng, t1 - t0));
      e.p = (rng() & 1) ? 1 : -1;
      batch.push_back(e);
    }
    std::stable_sort(batch.begin(), batch.end(),
                     [](const Event& a, const Event& b) { return a.t < b.t; });
    events.insert(events.end(), batch.begin(), batch.end());
    std::swap(previous, current);
  }
  return events;
}

// ---------------------------------------------------------------------------
// Labels

std::vector<GroundTruthLabel> label_events(std::span<const Event> events,
                                           const Scene& scene, double radius,
                                           Timestamp cadence) {
  if (!scene.pattern.analytic_corners) {
    throw LabelingError(
        "pattern has no analytic corners; label with harris_label on rendered "
        "frames instead");
  }
  if (cadence < 0) throw ConfigError("label cadence must be >= 0");

  // Projected corners per cadence sample, built on first use.
  std::vector<std::vector<Point2>> cache;
  std::vector<bool> cached;
  auto project = [&](Timestamp t, std::vector<Point2>& out) {
    const Homography h = scene.trajectory.at(t);
    out.clear();
    for (const Point2& c : scene.pattern.corners) out.push_back(h.apply(c));
  };
  std::vector<Point2> scratch;

  std::vector<GroundTruthLabel> labels(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Event& e = events[i];
    const std::vector<Point2>* corners = &scratch;
    if (cadence == 0) {
      project(e.t, scratch);
    } else {
      const Timestamp t = std::clamp<Timestamp>(e.t, 0, scene.duration);
      const auto k = static_cast<std::size_t>((t + cadence / 2) / cadence);
      if (k >= cache.size()) {
        cache.resize(k + 1);
        cached.resize(k + 1, false);
      }
      if (!cached[k]) {
        project(std::min<Timestamp>(static_cast<Timestamp>(k) * cadence,
                                    scene.duration),
                cache[k]);
        cached[k] = true;
      }
      corners = &cache[k];
    }
    double best = std::numeric_limits<double>::infinity();
    const Point2 p{static_cast<double>(e.x), static_cast<double>(e.y)};
    for (const Point2& c : *corners) best = std::min(best, distance(p, c));
    labels[i] = {i, best <= radius ? 1 : 0, best};
  }
  return labels;
}

double harris_response(const Frame& frame, int x, int y,
                       const HarrisParams& params) {
  const int half = static_cast<int>(std::ceil(3.0 * params.sigma));
  auto pixel = [&](int px, int py) {
    px = std::clamp(px, 0, frame.width - 1);
    py = std::clamp(py, 0, frame.height - 1);
    return static_cast<double>(frame.at(px, py));
  };
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (int dy = -half; dy <= half; ++dy) {
    for (int dx = -half; dx <= half; ++dx) {
      const double w = std::exp(-(dx * dx + dy * dy) /
                                (2.0 * params.sigma * params.sigma));
      const int px = x + dx;
      const int py = y + dy;
      const double gx = 0.5 * (pixel(px + 1, py) - pixel(px - 1, py));
      const double gy = 0.5 * (pixel(px, py + 1) - pixel(px, py - 1));
      sxx += w * gx * gx;
      syy += w * gy * gy;
      sxy += w * gx * gy;
    }
  }
  const double trace = sxx + syy;
  return sxx * syy - sxy * sxy - params.k * trace * trace;
}

bool harris_label(const Frame& frame, int x, int y,
                  const HarrisParams& params) {
  if (x < 0 || y < 0 || x >= frame.width || y >= frame.height) {
    throw BoundsError("harris location outside frame");
  }
  return harris_response(frame, x, y, params) > params.threshold;
}

void write_labels(std::span<const GroundTruthLabel> labels,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  std::string buf;
  buf.reserve(labels.size() * 10);
  for (const GroundTruthLabel& l : labels) {
    buf += std::to_string(l.event_index);
    buf += ',';
    buf += static_cast<char>('0' + l.label);
    buf += '\n';
  }
  out << buf;
  out.close();
  if (!out) throw IoError("write failure on " + path.string());
}

std::vector<std::uint8_t> read_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t comma = line.find(',');
    std::size_t index = 0;
    int cls = -1;
    bool ok = comma != std::string::npos;
    if (ok) {
      auto r1 = std::from_chars(line.data(), line.data() + comma, index);
      auto r2 = std::from_chars(line.data() + comma + 1,
                                line.data() + line.size(), cls);
      ok = r1.ec == std::errc() && r1.ptr == line.data() + comma &&
           r2.ec == std::errc() && r2.ptr == line.data() + line.size() &&
           (cls == 0 || cls == 1);
    }
    if (!ok) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected event_index,class");
    }
    if (index != labels.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected index " +
                       std::to_string(labels.size()));
    }
    labels.push_back(static_cast<std::uint8_t>(cls));
  }
  return labels;
}

// ---------------------------------------------------------------------------
// Presets

std::vector<std::string> preset_names() {
  return {"checkerboard-translate", "checkerboard-reversal",
          "checkerboard-rotate", "checkerboard-tilt", "polygons-translate"};
}

Scene make_preset(std::string_view name) {
  const SensorGeometry g{200, 150};
  PatternLayout board;  // 6x8 squares of 18 px
  if (name == "checkerboard-translate") {
    return finish_scene(std::string(name), g, board,
                        centred(g, board, {key(0.0, -25, -12), key(1.5, 25, 12)}),
                        1500000);
  }
  if (name == "checkerboard-reversal") {
    return finish_scene(
        std::string(name), g, board,
        centred(g, board,
                {key(0.0, 0, 0), key(0.4, 30, 0), key(0.7, -10, 10),
                 key(0.9, 15, -15), key(1.3, -20, 5), key(1.6, 0, 0)}),
        1600000);
  }
  if (name == "checkerboard-rotate") {
    return finish_scene(
        std::string(name), g, board,
        centred(g, board,
                {key(0.0, -5, 0, -20), key(1.0, 5, 0, 20), key(1.5, 0, 5, 0)}),
        1500000);
  }
  if (name == "checkerboard-tilt") {
    return finish_scene(
        std::string(name), g, board,
        centred(g, board,
                {key(0.0, -15, 10, 5, 0.9, 0.0, 0.0),
                 key(0.8, 10, -5, -5, 1.0, 0.0015, -0.001),
                 key(1.5, 0, 0, 0, 1.05, -0.001, 0.0015)}),
        1500000);
  }
  if (name == "polygons-translate") {
    PatternLayout poly;
    poly.kind = PatternLayout::Kind::kPolygons;
    poly.width = 150;
    poly.height = 110;
    poly.fill = 0.75f;
    poly.polygons = {
        {{{12, 12}, {62, 16}, {30, 50}}, 0.2f},
        {{{80, 10}, {135, 14}, {130, 48}, {86, 42}}, 0.25f},
        {{{14, 62}, {60, 62}, {60, 76}, {30, 76}, {30, 98}, {14, 98}}, 0.2f},
        {{{84, 60}, {136, 70}, {102, 100}}, 0.3f},
    };
    return finish_scene(
        std::string(name), g, poly,
        centred(g, poly,
                {key(0.0, 20, -10, 0), key(0.7, -20, 8, 8), key(1.5, 10, 12, -4)}),
        1500000);
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

Scene make_edge_sweep(SensorGeometry geometry, double speed, double start_x,
                      double end_x) {
  if (!(speed > 0.0)) throw ConfigError("edge speed must be > 0");
  validate(geometry);
  constexpr int kMargin = 8;
  const int half = static_cast<int>(std::ceil(
      geometry.width + std::abs(start_x) + std::abs(end_x) + kMargin));
  PatternLayout layout;
  layout.kind = PatternLayout::Kind::kPolygons;
  layout.width = 2 * half;
  layout.height = geometry.height + 2 * kMargin;
  layout.fill = 0.8f;
  layout.polygons = {{{{0, 0},
                     {static_cast<double>(half), 0},
                     {static_cast<double>(half), static_cast<double>(layout.height)},
                     {0, static_cast<double>(layout.height)}},
                    0.2f}};
  const auto duration = static_cast<Timestamp>(
      std::llround(std::abs(end_x - start_x) / speed * 1e6));
  const Point2 pivot{static_cast<double>(half), layout.height / 2.0};
  Trajectory traj({{0, start_x - half, -kMargin, 0, 1, 0, 0},
                   {duration, end_x - half, -kMargin, 0, 1, 0, 0}},
                  pivot);
  return finish_scene("edge-sweep", geometry, layout, std::move(traj), duration);
}

// ---------------------------------------------------------------------------
// Scene files

std::string scene_to_json(const Scene& scene) {
  const PatternLayout& s = scene.layout;
  json pattern;
  switch (s.kind) {
    case PatternLayout::Kind::kCheckerboard:
      pattern = {{"type", "checkerboard"}, {"rows", s.rows},   {"cols", s.cols},
                 {"square", s.square},     {"dark", s.dark},   {"light", s.light},
                 {"background", s.background}};
      break;
    case PatternLayout::Kind::kPolygons: {
      json polys = json::array();
      for (const Polygon& p : s.polygons) {
        json verts = json::array();
        for (const Point2& v : p.vertices) verts.push_back({v.x, v.y});
        polys.push_back({{"intensity", p.intensity}, {"vertices", verts}});
      }
      pattern = {{"type", "polygons"}, {"width", s.width},
                 {"height", s.height}, {"fill", s.fill},
                 {"background", s.background}, {"polygons", polys}};
      break;
    }
    case PatternLayout::Kind::kImage:
      throw ConfigError("image patterns cannot be written to a scene file");
  }
  json keys = json::array();
  for (const Keyframe& k : scene.trajectory.keyframes()) {
    keys.push_back({{"t_us", k.t},       {"tx", k.tx},       {"ty", k.ty},
                    {"angle_deg", deg(k.angle)}, {"scale", k.scale},
                    {"gx", k.gx},        {"gy", k.gy}});
  }
  const json doc = {
      {"name", scene.name},
      {"sensor", {{"width", scene.geometry.width}, {"height", scene.geometry.height}}},
      {"duration_us", scene.duration},
      {"pattern", pattern},
      {"trajectory",
       {{"pivot", {scene.trajectory.pivot().x, scene.trajectory.pivot().y}},
        {"keyframes", keys}}},
      {"contrast",
       {{"threshold", scene.contrast.threshold},
        {"noise_rate", scene.contrast.noise_rate},
        {"dt_us", scene.contrast.dt},
        {"seed", scene.contrast.seed}}}};
  return doc.dump(2) + "\n";
}

Scene scene_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    PatternLayout layout;
    const json& pat = doc.at("pattern");
    const std::string type = pat.at("type").get<std::string>();
    layout.background = pat.value("background", 0.5f);
    if (type == "checkerboard") {
      layout.kind = PatternLayout::Kind::kCheckerboard;
      layout.rows = pat.at("rows").get<int>();
      layout.cols = pat.at("cols").get<int>();
      layout.square = pat.at("square").get<int>();
      layout.dark = pat.value("dark", 0.2f);
      layout.light = pat.value("light", 0.8f);
    } else if (type == "polygons") {
      layout.kind = PatternLayout::Kind::kPolygons;
      layout.width = pat.at("width").get<int>();
      layout.height = pat.at("height").get<int>();
      layout.fill = pat.value("fill", 0.8f);
      for (const json& p : pat.at("polygons")) {
        Polygon poly;
        poly.intensity = p.value("intensity", 0.2f);
        for (const json& v : p.at("vertices")) {
          poly.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        }
        layout.polygons.push_back(std::move(poly));
      }
    } else {
      throw ConfigError("unknown pattern type '" + type + "'");
    }

    const json& traj = doc.at("trajectory");
    std::vector<Keyframe> keys;
    for (const json& k : traj.at("keyframes")) {
      keys.push_back({k.at("t_us").get<Timestamp>(), k.value("tx", 0.0),
                      k.value("ty", 0.0), rad(k.value("angle_deg", 0.0)),
                      k.value("scale", 1.0), k.value("gx", 0.0),
                      k.value("gy", 0.0)});
    }
    const Point2 pivot{traj.at("pivot").at(0).get<double>(),
                       traj.at("pivot").at(1).get<double>()};

    ContrastModel contrast;
    if (doc.contains("contrast")) {
      const json& c = doc.at("contrast");
      contrast.threshold = c.value("threshold", contrast.threshold);
      contrast.noise_rate = c.value("noise_rate", contrast.noise_rate);
      contrast.dt = c.value("dt_us", contrast.dt);
      contrast.seed = c.value("seed", contrast.seed);
    }
    const SensorGeometry g{doc.at("sensor").at("width").get<int>(),
                           doc.at("sensor").at("height").get<int>()};
    validate(g);
    return finish_scene(doc.value("name", std::string("scene")), g,
                        std::move(layout), Trajectory(std::move(keys), pivot),
                        doc.at("duration_us").get<Timestamp>(), contrast);
  } catch (const json::exception& e) {
    throw ParseError(std::string("scene file: ") + e.what());
  }
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return scene_from_json(buf.str());
}

void save_scene(const Scene& scene, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << scene_to_json(scene);
  out.close();
  if (!out) throw IoError("write failure on " + path.string());
}

}  // namespace evcorner
