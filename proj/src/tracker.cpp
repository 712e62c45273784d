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

#include "evcorner/tracker.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string>

#include "evcorner/error.hpp"

namespace evcorner {

NearestNeighborTracker::NearestNeighborTracker(TrackerConfig config)
    : config_(config) {
  if (!(config_.radius > 0.0)) throw ConfigError("tracker radius must be > 0");
  if (config_.window < 0) throw ConfigError("tracker window must be >= 0");
  cell_size_ = std::max(1, static_cast<int>(std::ceil(config_.radius)));
}

void NearestNeighborTracker::unlink(int id, std::int64_t key) {
  auto it = cells_.find(key);
  if (it == cells_.end()) return;
  auto& ids = it->second;
  ids.erase(std::remove(ids.begin(), ids.end(), id), ids.end());
  if (ids.empty()) cells_.erase(it);
}

int NearestNeighborTracker::push(const CornerEvent& corner) {
  const Event& e = corner.event;
  if (e.t < last_time_) throw OrderingError("corners must be time ordered");
  last_time_ = e.t;

  const int cx = cell_of(e.x);
  const int cy = cell_of(e.y);
  int best = -1;
  double best_dist = 0.0;
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      const auto it = cells_.find(cell_key(cx + dx, cy + dy));
      if (it == cells_.end()) continue;
      auto& ids = it->second;
      for (std::size_t k = 0; k < ids.size();) {
        const Track& tr = tracks_[ids[k]];
        const Event& last = tr.detections.back().event;
        if (e.t - last.t > config_.window) {
          ids[k] = ids.back();  // stale
          ids.pop_back();
          continue;
        }
        ++k;
        if (last.t == e.t) continue;
        const double d = std::hypot(static_cast<double>(e.x) - last.x,
                                    static_cast<double>(e.y) - last.y);
        if (d > config_.radius) continue;
        if (best < 0 || d < best_dist || (d == best_dist && tr.id < best)) {
          best = tr.id;
          best_dist = d;
        }
      }
    }
  }

  if (best < 0) {
    best = static_cast<int>(tracks_.size());
    tracks_.push_back({best, {corner}});
  } else {
    Track& tr = tracks_[best];
    const Event& last = tr.detections.back().event;
    unlink(best, cell_key(cell_of(last.x), cell_of(last.y)));
    tr.detections.push_back(corner);
  }
  cells_[cell_key(cx, cy)].push_back(best);
  return best;
}

std::vector<Track> track(std::span<const CornerEvent> corners,
                         const TrackerConfig& config) {
  NearestNeighborTracker tracker(config);
  for (const CornerEvent& c : corners) tracker.push(c);
  return tracker.release();
}

LifetimeSummary lifetimes(std::span<const Track> tracks, std::size_t first_k) {
  std::vector<const Track*> order;
  for (const Track& t : tracks) {
    if (!t.detections.empty()) order.push_back(&t);
  }
  std::stable_sort(order.begin(), order.end(), [](const Track* a, const Track* b) {
    return a->birth() < b->birth();
  });
  LifetimeSummary s;
  s.insufficient = order.size() < first_k;
  s.tracks_used = std::min(first_k, order.size());
  if (s.tracks_used == 0) return s;
  double sum = 0.0;
  for (std::size_t i = 0; i < s.tracks_used; ++i) {
    sum += static_cast<double>(order[i]->lifetime());
  }
  s.mean_us = sum / static_cast<double>(s.tracks_used);
  return s;
}

double mean_inter_detection_gap(std::span<const Track> tracks) {
  double sum = 0.0;
  std::size_t gaps = 0;
  for (const Track& t : tracks) {
    for (std::size_t i = 1; i < t.detections.size(); ++i) {
      sum += static_cast<double>(t.detections[i].event.t -
                                 t.detections[i - 1].event.t);
      ++gaps;
    }
  }
  return gaps ? sum / static_cast<double>(gaps) : 0.0;
}

void write_tracks(std::span<const Track> tracks,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  std::string buf;
  char score[64];
  for (const Track& t : tracks) {
    for (const CornerEvent& c : t.detections) {
      const auto res = std::to_chars(score, score + sizeof(score), c.score);
      buf += std::to_string(t.id) + ',' + std::to_string(c.event.x) + ',' +
             std::to_string(c.event.y) + ',' + std::to_string(c.event.t) + ',';
      buf.append(score, res.ptr);
      buf += '\n';
    }
  }
  out << buf;
  out.close();
  if (!out) throw IoError("write failure on " + path.string());
}

std::vector<Track> read_tracks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::map<int, Track> by_id;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    long long fields[4];
    double score = 0.0;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    bool ok = true;
    for (long long& f : fields) {
      const auto r = std::from_chars(p, end, f);
      ok = ok && r.ec == std::errc() && r.ptr < end && *r.ptr == ',';
      if (!ok) break;
      p = r.ptr + 1;
    }
    if (ok) {
      const auto r = std::from_chars(p, end, score);
      ok = r.ec == std::errc() && r.ptr == end;
    }
    if (!ok || fields[1] < 0 || fields[2] < 0 || fields[3] < 0) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected track_id,x,y,t,score");
    }
    Track& t = by_id[static_cast<int>(fields[0])];
    t.id = static_cast<int>(fields[0]);
    CornerEvent c;
    c.event = {static_cast<std::uint16_t>(fields[1]),
               static_cast<std::uint16_t>(fields[2]), fields[3], 1};
    c.score = score;
    if (!t.detections.empty() && t.detections.back().event.t >= c.event.t) {
      throw OrderingError("line " + std::to_string(line_no) + ": track " +
                          std::to_string(t.id) + " detections out of order");
    }
    t.detections.push_back(c);
  }
  std::vector<Track> tracks;
  for (auto& [id, t] : by_id) tracks.push_back(std::move(t));
  return tracks;
}

}  // namespace evcorner
