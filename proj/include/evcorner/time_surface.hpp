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
#include <iosfwd>
#include <span>
#include <vector>

#include "evcorner/events.hpp"
#include "evcorner/kernels/sits_kernels.hpp"

namespace evcorner {

// n x n window of surface values around an event, row-major. For even n the
// event sits at local index ((n-1)/2, (n-1)/2), i.e. columns x-3..x+4 for
// n = 8. Cells outside the sensor read 0.
struct Patch {
  int size = 0;
  int x = 0;
  int y = 0;
  std::int8_t p = 1;
  std::vector<float> values;

  float at(int row, int col) const { return values[row * size + col]; }
};

// Offset from the event to the first row/column of its patch.
constexpr int patch_origin_offset(int n) { return (n - 1) / 2; }

// Last-timestamp map per pixel and polarity. Unset cells hold 0.
class TimeSurface {
 public:
  explicit TimeSurface(SensorGeometry geometry);

  // Throws BoundsError for events outside the sensor.
  void update(const Event& e);
  void update_unchecked(const Event& e) {
    stamps_[index(e.x, e.y, channel_of(e.p))] = e.t;
  }

  Timestamp at(int x, int y, std::int8_t p) const {
    return stamps_[index(x, y, channel_of(p))];
  }
  // 0 for cells outside the sensor.
  Timestamp at_or_zero(int x, int y, std::int8_t p) const {
    return geometry_.contains(x, y) ? at(x, y, p) : 0;
  }

  // Classifier input built from the standard surface: per-cell age
  // min(t - T, cap) in milliseconds, with unset or outside cells at `cap`.
  void extract_ages(const Event& e, int n, Timestamp cap,
                    std::span<float> out) const;

  const SensorGeometry& geometry() const { return geometry_; }
  void reset();

 private:
  std::size_t index(int x, int y, int channel) const {
    return (static_cast<std::size_t>(channel) * geometry_.height + y) *
               geometry_.width +
           x;
  }

  SensorGeometry geometry_;
  std::vector<Timestamp> stamps_;
};

// Per-pixel, per-polarity activity map whose profile behind a moving contour
// does not depend on the contour's speed. On each event every neighbor within
// `radius` (same polarity) whose value is at least the event cell's previous
// value is decremented (saturating at 0), then the event cell is set to
// (2r+1)^2. Values are held in bytes, so radius is limited to 7.
class SpeedInvariantSurface {
 public:
  static constexpr int kMaxRadius = 7;
  static constexpr int kMaxPatchSize = 16;

  SpeedInvariantSurface(SensorGeometry geometry, int radius);
  // Pins a specific kernel table (tests and benchmarks).
  SpeedInvariantSurface(SensorGeometry geometry, int radius,
                        const kernels::KernelTable& kernel);

  // Throws BoundsError for events outside the sensor.
  void update(const Event& e);
  void update_unchecked(int x, int y, std::int8_t p) {
    std::uint8_t* center = cell(x, y, channel_of(p));
    const std::uint8_t before = *center;
    kernel_->sits_window(center - radius_ * stride_ - radius_, stride_,
                         2 * radius_ + 1, 2 * radius_ + 1, before);
    *center = peak_;
  }

  std::uint8_t at(int x, int y, std::int8_t p) const {
    return *cell(x, y, channel_of(p));
  }
  // Zero outside the sensor.
  std::uint8_t at_or_zero(int x, int y, std::int8_t p) const;

  // Copies the n x n patch around (x, y) of channel p into `out`.
  void extract(int x, int y, std::int8_t p, int n,
               std::span<std::uint8_t> out) const {
    const int off = patch_origin_offset(n);
    const std::uint8_t* src = cell(x - off, y - off, channel_of(p));
    for (int r = 0; r < n; ++r) {
      const std::uint8_t* row = src + r * stride_;
      std::uint8_t* dst = out.data() + r * n;
      for (int c = 0; c < n; ++c) dst[c] = row[c];
    }
  }
  Patch extract_patch(const Event& e, int n) const;

  int radius() const { return radius_; }
  std::uint8_t peak() const { return peak_; }
  const SensorGeometry& geometry() const { return geometry_; }
  const kernels::KernelTable& kernel() const { return *kernel_; }
  void reset();

  friend bool operator==(const SpeedInvariantSurface& a,
                         const SpeedInvariantSurface& b);

 private:
  static constexpr int kPad = 16;

  std::uint8_t* cell(int x, int y, int channel) {
    return data_.data() + channel * plane_size_ + (y + kPad) * stride_ +
           (x + kPad);
  }
  const std::uint8_t* cell(int x, int y, int channel) const {
    return data_.data() + channel * plane_size_ + (y + kPad) * stride_ +
           (x + kPad);
  }

  SensorGeometry geometry_;
  int radius_;
  std::uint8_t peak_;
  std::ptrdiff_t stride_;
  std::ptrdiff_t plane_size_;
  const kernels::KernelTable* kernel_;
  std::vector<std::uint8_t> data_;
};

// Debug variant without the saturation at zero: neighbors may go negative.
// Comparisons use the event cell's value from before the update, as in
// SpeedInvariantSurface. Scalar and bounds-checked; not for the hot path.
class UnclampedSpeedInvariantSurface {
 public:
  UnclampedSpeedInvariantSurface(SensorGeometry geometry, int radius);

  void update(const Event& e);
  std::int32_t at(int x, int y, std::int8_t p) const {
    return values_[index(x, y, channel_of(p))];
  }
  int radius() const { return radius_; }
  const SensorGeometry& geometry() const { return geometry_; }

 private:
  std::size_t index(int x, int y, int channel) const {
    return (static_cast<std::size_t>(channel) * geometry_.height + y) *
               geometry_.width +
           x;
  }

  SensorGeometry geometry_;
  int radius_;
  std::vector<std::int32_t> values_;
};

// One-dimensional analogue used to draw slope profiles: neighborhood 2r+1
// cells, peak value 2r+1.
class SpeedInvariantLine {
 public:
  SpeedInvariantLine(int length, int radius);

  void update(int x);
  std::span<const int> values() const { return values_; }
  int peak() const { return 2 * radius_ + 1; }

 private:
  int radius_;
  std::vector<int> values_;
};

// Rank transform of the n x n timestamp window around (x, y): each cell is
// replaced by the number of cells with a strictly smaller timestamp (ties
// share the lowest rank), then scaled by peak / (n*n - 1). Cells outside the
// sensor count as timestamp 0.
Patch sorted_normalization(const TimeSurface& surface, int x, int y,
                           std::int8_t p, int n, int radius);

// Integer ranks before scaling, row-major.
std::vector<int> window_ranks(std::span<const Timestamp> window);

// Plain-text dump: a "# channel -1" block then a "# channel +1" block, one
// sensor row per line.
void write_dump(std::ostream& out, const SpeedInvariantSurface& surface);
void write_dump(std::ostream& out, const TimeSurface& surface);

}  // namespace evcorner
