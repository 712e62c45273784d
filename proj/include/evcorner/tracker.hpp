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
#include <unordered_map>
#include <vector>

#include "evcorner/detector.hpp"

namespace evcorner {

struct TrackerConfig {
  // Spatial gate, pixels.
  double radius = 3.0;
  // Temporal gate, microseconds.
  Timestamp window = 10000;
};

struct Track {
  int id = 0;
  std::vector<CornerEvent> detections;  // strictly increasing timestamps

  Timestamp birth() const { return detections.front().event.t; }
  Timestamp last_update() const { return detections.back().event.t; }
  Timestamp lifetime() const { return last_update() - birth(); }
};

// Greedy nearest-neighbor association. Each corner joins the live track whose
// last detection is closest within `radius` and no older than `window`
// (ties: the oldest track), or starts a new one. A track takes at most one
// detection per timestamp.
class NearestNeighborTracker {
 public:
  explicit NearestNeighborTracker(TrackerConfig config = {});

  // Corners must arrive in timestamp order. Returns the track id.
  int push(const CornerEvent& corner);

  const std::vector<Track>& tracks() const { return tracks_; }
  std::vector<Track> release() { return std::move(tracks_); }

 private:
  std::int64_t cell_key(int cx, int cy) const {
    return (static_cast<std::int64_t>(cx) << 32) ^ static_cast<std::uint32_t>(cy);
  }
  int cell_of(int coord) const { return coord / cell_size_; }
  void unlink(int id, std::int64_t key);

  TrackerConfig config_;
  int cell_size_;
  Timestamp last_time_ = 0;
  std::vector<Track> tracks_;
  // Live tracks indexed by the cell of their last detection; stale entries
  // are dropped when visited.
  std::unordered_map<std::int64_t, std::vector<int>> cells_;
};

std::vector<Track> track(std::span<const CornerEvent> corners,
                         const TrackerConfig& config = {});

struct LifetimeSummary {
  double mean_us = 0.0;
  std::size_t tracks_used = 0;
  // Fewer tracks than requested were available.
  bool insufficient = false;
};

// Mean lifetime (last minus first detection) of the first `first_k` tracks by
// birth time.
LifetimeSummary lifetimes(std::span<const Track> tracks,
                          std::size_t first_k = 100);

// Mean time between consecutive detections over all tracks.
double mean_inter_detection_gap(std::span<const Track> tracks);

// Track file: "track_id,x,y,t,score" rows.
void write_tracks(std::span<const Track> tracks,
                  const std::filesystem::path& path);
std::vector<Track> read_tracks(const std::filesystem::path& path);

}  // namespace evcorner
