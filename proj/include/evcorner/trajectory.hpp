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

#include <filesystem>
#include <optional>
#include <vector>

#include "evcorner/events.hpp"
#include "evcorner/homography.hpp"

namespace evcorner {

// Pose of the pattern at one instant. The pattern-to-sensor map is
//   x = scale * R(angle) * (q - pivot) + pivot + (tx, ty)
// preceded by a projective tilt (gx, gy) about the pivot.
struct Keyframe {
  Timestamp t = 0;
  double tx = 0.0;
  double ty = 0.0;
  double angle = 0.0;  // radians
  double scale = 1.0;
  double gx = 0.0;
  double gy = 0.0;
};

// Keyframed motion with parameters linearly interpolated between keyframes
// and held constant outside them.
class Trajectory {
 public:
  Trajectory() = default;
  // Keyframes must be non-empty with increasing times; throws
  // TrajectoryError otherwise.
  Trajectory(std::vector<Keyframe> keyframes, Point2 pivot);

  Keyframe pose_at(Timestamp t) const;
  // Pattern frame -> sensor frame. Throws TrajectoryError when singular.
  Homography at(Timestamp t) const;

  const std::vector<Keyframe>& keyframes() const { return keyframes_; }
  const Point2& pivot() const { return pivot_; }

 private:
  std::vector<Keyframe> keyframes_;
  Point2 pivot_;
};

Homography pose_homography(const Keyframe& pose, const Point2& pivot);

struct PatternBounds {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  bool contains(const Point2& q) const {
    return q.x >= x0 && q.x <= x1 && q.y >= y0 && q.y <= y1;
  }
};

// Timestamped pattern-to-sensor homographies as written by the simulator,
// with entries linearly interpolated between samples.
class SampledTrajectory {
 public:
  struct Sample {
    Timestamp t;
    Homography h;
  };

  SampledTrajectory() = default;
  SampledTrajectory(std::vector<Sample> samples, PatternBounds bounds);

  static SampledTrajectory from(const Trajectory& trajectory,
                                Timestamp duration, Timestamp cadence,
                                PatternBounds bounds);

  Homography at(Timestamp t) const;
  // Maps a sensor point observed at `t` to the sensor position it has at
  // `ref`, following the pattern's motion.
  Point2 transfer(const Point2& p, Timestamp t, Timestamp ref) const;
  // Whether the sensor point at `t` back-projects inside the pattern.
  bool on_pattern(const Point2& p, Timestamp t) const;

  const std::vector<Sample>& samples() const { return samples_; }
  const PatternBounds& bounds() const { return bounds_; }
  Timestamp start() const { return samples_.front().t; }
  Timestamp end() const { return samples_.back().t; }

 private:
  std::vector<Sample> samples_;
  PatternBounds bounds_;
};

// Text format: "# pattern_bounds x0 y0 x1 y1" header, then
// "t_us,h00,h01,h02,h10,h11,h12,h20,h21,h22" rows.
void write_trajectory(const SampledTrajectory& trajectory,
                      const std::filesystem::path& path);
SampledTrajectory read_trajectory(const std::filesystem::path& path);

}  // namespace evcorner
