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

#include "evcorner/trajectory.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "evcorner/error.hpp"

namespace evcorner {
namespace {

double lerp(double a, double b, double w) { return a + (b - a) * w; }

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

Homography pose_homography(const Keyframe& pose, const Point2& pivot) {
  const double c = std::cos(pose.angle) * pose.scale;
  const double s = std::sin(pose.angle) * pose.scale;
  Eigen::Matrix3d to_pivot, affine, tilt, from_pivot;
  to_pivot << 1, 0, -pivot.x, 0, 1, -pivot.y, 0, 0, 1;
  tilt << 1, 0, 0, 0, 1, 0, pose.gx, pose.gy, 1;
  affine << c, -s, 0, s, c, 0, 0, 0, 1;
  from_pivot << 1, 0, pivot.x + pose.tx, 0, 1, pivot.y + pose.ty, 0, 0, 1;
  return Homography(Eigen::Matrix3d(from_pivot * affine * tilt * to_pivot));
}

Trajectory::Trajectory(std::vector<Keyframe> keyframes, Point2 pivot)
    : keyframes_(std::move(keyframes)), pivot_(pivot) {
  if (keyframes_.empty()) throw TrajectoryError("trajectory has no keyframes");
  for (std::size_t i = 1; i < keyframes_.size(); ++i) {
    if (keyframes_[i].t <= keyframes_[i - 1].t) {
      throw TrajectoryError("keyframe times must increase");
    }
  }
}

Keyframe Trajectory::pose_at(Timestamp t) const {
  if (keyframes_.empty()) throw TrajectoryError("trajectory has no keyframes");
  if (t <= keyframes_.front().t) return keyframes_.front();
  if (t >= keyframes_.back().t) return keyframes_.back();
  const auto next = std::upper_bound(
      keyframes_.begin(), keyframes_.end(), t,
      [](Timestamp v, const Keyframe& k) { return v < k.t; });
  const Keyframe& b = *next;
  const Keyframe& a = *(next - 1);
  const double w =
      static_cast<double>(t - a.t) / static_cast<double>(b.t - a.t);
  Keyframe k;
  k.t = t;
  k.tx = lerp(a.tx, b.tx, w);
  k.ty = lerp(a.ty, b.ty, w);
  k.angle = lerp(a.angle, b.angle, w);
  k.scale = lerp(a.scale, b.scale, w);
  k.gx = lerp(a.gx, b.gx, w);
  k.gy = lerp(a.gy, b.gy, w);
  return k;
}

Homography Trajectory::at(Timestamp t) const {
  const Homography h = pose_homography(pose_at(t), pivot_);
  if (!h.invertible()) {
    throw TrajectoryError("trajectory is singular at t=" + std::to_string(t));
  }
  return h;
}

SampledTrajectory::SampledTrajectory(std::vector<Sample> samples,
                                     PatternBounds bounds)
    : samples_(std::move(samples)), bounds_(bounds) {
  if (samples_.empty()) throw TrajectoryError("trajectory has no samples");
  for (std::size_t i = 1; i < samples_.size(); ++i) {
    if (samples_[i].t <= samples_[i - 1].t) {
      throw TrajectoryError("trajectory sample times must increase");
    }
  }
}

SampledTrajectory SampledTrajectory::from(const Trajectory& trajectory,
                                          Timestamp duration,
                                          Timestamp cadence,
                                          PatternBounds bounds) {
  if (cadence <= 0) throw TrajectoryError("sampling cadence must be > 0");
  std::vector<Sample> samples;
  for (Timestamp t = 0;; t += cadence) {
    const Timestamp at = std::min(t, duration);
    samples.push_back({at, trajectory.at(at)});
    if (at >= duration) break;
  }
  return SampledTrajectory(std::move(samples), bounds);
}

Homography SampledTrajectory::at(Timestamp t) const {
  if (t <= samples_.front().t) return samples_.front().h;
  if (t >= samples_.back().t) return samples_.back().h;
  const auto next = std::upper_bound(
      samples_.begin(), samples_.end(), t,
      [](Timestamp v, const Sample& s) { return v < s.t; });
  const Sample& b = *next;
  const Sample& a = *(next - 1);
  const double w =
      static_cast<double>(t - a.t) / static_cast<double>(b.t - a.t);
  return Homography(Eigen::Matrix3d(a.h.matrix() + (b.h.matrix() - a.h.matrix()) * w));
}

Point2 SampledTrajectory::transfer(const Point2& p, Timestamp t,
                                   Timestamp ref) const {
  return at(ref).apply(at(t).inverse().apply(p));
}

bool SampledTrajectory::on_pattern(const Point2& p, Timestamp t) const {
  return bounds_.contains(at(t).inverse().apply(p));
}

void write_trajectory(const SampledTrajectory& trajectory,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  const PatternBounds& b = trajectory.bounds();
  out << "# evcorner trajectory v1\n"
      << "# pattern_bounds " << format_double(b.x0) << ' ' << format_double(b.y0)
      << ' ' << format_double(b.x1) << ' ' << format_double(b.y1) << '\n'
      << "t_us,h00,h01,h02,h10,h11,h12,h20,h21,h22\n";
  for (const auto& s : trajectory.samples()) {
    out << s.t;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) out << ',' << format_double(s.h.matrix()(r, c));
    }
    out << '\n';
  }
  out.close();
  if (!out) throw IoError("write failure on " + path.string());
}

SampledTrajectory read_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  PatternBounds bounds;
  bool have_bounds = false;
  std::vector<SampledTrajectory::Sample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hdr(line.substr(1));
      std::string key;
      hdr >> key;
      if (key == "pattern_bounds") {
        if (!(hdr >> bounds.x0 >> bounds.y0 >> bounds.x1 >> bounds.y1)) {
          throw ParseError("line " + std::to_string(line_no) +
                           ": bad pattern_bounds");
        }
        have_bounds = true;
      }
      continue;
    }
    if (line.rfind("t_us", 0) == 0) continue;
    std::vector<double> fields;
    std::size_t start = 0;
    while (start <= line.size()) {
      const std::size_t comma = line.find(',', start);
      const std::string tok =
          line.substr(start, comma == std::string::npos ? std::string::npos
                                                        : comma - start);
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ParseError("line " + std::to_string(line_no) + ": bad number '" +
                         tok + "'");
      }
      fields.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 10) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected 10 fields");
    }
    Eigen::Matrix3d m;
    m << fields[1], fields[2], fields[3], fields[4], fields[5], fields[6],
        fields[7], fields[8], fields[9];
    samples.push_back({static_cast<Timestamp>(fields[0]), Homography(m)});
  }
  if (!have_bounds) throw ParseError(path.string() + ": missing pattern_bounds");
  return SampledTrajectory(std::move(samples), bounds);
}

}  // namespace evcorner
