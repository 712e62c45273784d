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
#include <string_view>
#include <vector>

namespace evcorner {

// Timestamps are integer microseconds.
using Timestamp = std::int64_t;

struct Event {
  std::uint16_t x = 0;
  std::uint16_t y = 0;
  Timestamp t = 0;
  std::int8_t p = 1;  // -1 or +1

  friend bool operator==(const Event&, const Event&) = default;
};

// Index of the per-polarity plane an event lives in: 0 for OFF, 1 for ON.
inline int channel_of(std::int8_t p) { return p > 0 ? 1 : 0; }

struct SensorGeometry {
  int width = 1;
  int height = 1;

  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width && y < height;
  }
  std::size_t pixels() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }
  friend bool operator==(const SensorGeometry&, const SensorGeometry&) =
      default;
};

// Throws ConfigError unless width and height are at least 1.
void validate(const SensorGeometry& geometry);

// Smallest geometry that contains every event (1x1 for an empty stream).
SensorGeometry bounding_geometry(std::span<const Event> events);

enum class StreamFormat { kCsv, kBinary };

// "csv" or "bin"/"binary"; throws ConfigError otherwise.
StreamFormat parse_format(std::string_view name);
// Picks binary for .bin/.dat extensions and CSV for everything else.
StreamFormat format_for_path(const std::filesystem::path& path);

struct ReadOptions {
  StreamFormat format = StreamFormat::kCsv;
  // Stable-sort by timestamp instead of rejecting out-of-order input.
  bool sort = false;
};

// CSV: header-less `x,y,t,p` lines, p in {0,1} (or -1/1). Binary: packed
// little-endian 13-byte records (u16 x, u16 y, u64 t, i8 p).
std::vector<Event> read_stream(const std::filesystem::path& path,
                               const ReadOptions& options);
void write_stream(std::span<const Event> events,
                  const std::filesystem::path& path, StreamFormat format);

// Parses one CSV record; `line_no` is only used in the error message.
Event parse_csv_event(std::string_view line, std::size_t line_no = 0);

// Throws OrderingError at the first decreasing timestamp.
void check_monotonic(std::span<const Event> events);

// Suppresses the burst of same-polarity events a single contrast step emits
// at one pixel. An event passes if it is the first at its pixel, flips the
// polarity of the last kept event there, or arrives at least `timeout` after
// it.
class TrailFilter {
 public:
  static constexpr Timestamp kDefaultTimeout = 10000;

  TrailFilter(SensorGeometry geometry, Timestamp timeout = kDefaultTimeout);

  // Updates state and returns whether `e` is kept. `e` must lie inside the
  // geometry.
  bool accept(const Event& e) {
    const std::size_t i = static_cast<std::size_t>(e.y) * width_ + e.x;
    const std::int8_t last = last_polarity_[i];
    if (last != 0 && last == e.p && e.t - last_time_[i] < timeout_) {
      return false;
    }
    last_polarity_[i] = e.p;
    last_time_[i] = e.t;
    return true;
  }

  void reset();
  Timestamp timeout() const { return timeout_; }
  const SensorGeometry& geometry() const { return geometry_; }

 private:
  SensorGeometry geometry_;
  std::size_t width_;
  Timestamp timeout_;
  std::vector<std::int8_t> last_polarity_;  // 0 = no event yet
  std::vector<Timestamp> last_time_;
};

std::vector<Event> trail_filter(std::span<const Event> events,
                                const SensorGeometry& geometry,
                                Timestamp timeout = TrailFilter::kDefaultTimeout);

}  // namespace evcorner
