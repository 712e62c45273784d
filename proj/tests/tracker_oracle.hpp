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

#include <cmath>
#include <vector>

#include "evcorner/tracker.hpp"

namespace evcorner::testing {

// Greedy association by scanning every track for every corner.
inline std::vector<Track> linear_scan_tracks(std::span<const CornerEvent> corners,
                                             const TrackerConfig& cfg) {
  std::vector<Track> tracks;
  for (const CornerEvent& c : corners) {
    int best = -1;
    double best_d = 0;
    for (const Track& t : tracks) {
      const Event& last = t.detections.back().event;
      if (c.event.t - last.t > cfg.window || last.t == c.event.t) continue;
      const double d = std::hypot(double(c.event.x) - last.x, double(c.event.y) - last.y);
      if (d > cfg.radius) continue;
      if (best < 0 || d < best_d) {
        best = t.id;
        best_d = d;
      }
    }
    if (best < 0) {
      tracks.push_back({static_cast<int>(tracks.size()), {c}});
    } else {
      tracks[best].detections.push_back(c);
    }
  }
  return tracks;
}

inline bool same_assignment(const std::vector<Track>& a, const std::vector<Track>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].id != b[i].id || a[i].detections != b[i].detections) return false;
  }
  return true;
}

inline bool gates_hold(const std::vector<Track>& tracks, const TrackerConfig& cfg) {
  for (const Track& t : tracks) {
    for (std::size_t i = 1; i < t.detections.size(); ++i) {
      const Event& a = t.detections[i - 1].event;
      const Event& b = t.detections[i].event;
      if (b.t <= a.t || b.t - a.t > cfg.window) return false;
      if (std::hypot(double(b.x) - a.x, double(b.y) - a.y) > cfg.radius) return false;
    }
  }
  return true;
}

}  // namespace evcorner::testing
