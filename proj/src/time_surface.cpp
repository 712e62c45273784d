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

#include "evcorner/time_surface.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "evcorner/error.hpp"

namespace evcorner {
namespace {

void check_bounds(const SensorGeometry& g, const Event& e) {
  if (!g.contains(e.x, e.y)) {
    throw BoundsError("event (" + std::to_string(e.x) + "," +
                      std::to_string(e.y) + ") outside " +
                      std::to_string(g.width) + "x" +
                      std::to_string(g.height) + " sensor");
  }
}

void check_radius(int radius, int max_radius) {
  if (radius < 0 || radius > max_radius) {
    throw ConfigError("radius must be in [0, " + std::to_string(max_radius) +
                      "], got " + std::to_string(radius));
  }
}

template <typename Surface>
void dump_planes(std::ostream& out, const Surface& s) {
  const SensorGeometry& g = s.geometry();
  for (std::int8_t p : {std::int8_t{-1}, std::int8_t{1}}) {
    out << "# channel " << (p > 0 ? "+1" : "-1") << '\n';
    for (int y = 0; y < g.height; ++y) {
      for (int x = 0; x < g.width; ++x) {
        if (x) out << ' ';
        out << +s.at(x, y, p);
      }
      out << '\n';
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// TimeSurface

TimeSurface::TimeSurface(SensorGeometry geometry) : geometry_(geometry) {
  validate(geometry_);
  stamps_.assign(2 * geometry_.pixels(), 0);
}

void TimeSurface::update(const Event& e) {
  check_bounds(geometry_, e);
  update_unchecked(e);
}

void TimeSurface::extract_ages(const Event& e, int n, Timestamp cap,
                               std::span<float> out) const {
  const int off = patch_origin_offset(n);
  const float cap_ms = static_cast<float>(cap) * 1e-3f;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const int x = e.x - off + c;
      const int y = e.y - off + r;
      const Timestamp t = at_or_zero(x, y, e.p);
      float v = cap_ms;
      if (t != 0) {
        const Timestamp age = e.t - t;
        if (age < cap) v = static_cast<float>(age) * 1e-3f;
      }
      out[r * n + c] = v;
    }
  }
}

void TimeSurface::reset() { std::fill(stamps_.begin(), stamps_.end(), 0); }

// ---------------------------------------------------------------------------
// SpeedInvariantSurface

SpeedInvariantSurface::SpeedInvariantSurface(SensorGeometry geometry,
                                             int radius)
    : SpeedInvariantSurface(geometry, radius, kernels::active()) {}

SpeedInvariantSurface::SpeedInvariantSurface(SensorGeometry geometry,
                                             int radius,
                                             const kernels::KernelTable& kernel)
    : geometry_(geometry), radius_(radius), kernel_(&kernel) {
  validate(geometry_);
  check_radius(radius_, kMaxRadius);
  static_assert(kPad >= kernels::kMaxVectorCols);
  static_assert(kPad >= kMaxPatchSize);
  peak_ = static_cast<std::uint8_t>((2 * radius_ + 1) * (2 * radius_ + 1));
  stride_ = geometry_.width + 2 * kPad;
  plane_size_ = stride_ * (geometry_.height + 2 * kPad);
  data_.assign(static_cast<std::size_t>(2 * plane_size_), 0);
}

void SpeedInvariantSurface::update(const Event& e) {
  check_bounds(geometry_, e);
  update_unchecked(e.x, e.y, e.p);
}

std::uint8_t SpeedInvariantSurface::at_or_zero(int x, int y,
                                               std::int8_t p) const {
  return geometry_.contains(x, y) ? at(x, y, p) : 0;
}

Patch SpeedInvariantSurface::extract_patch(const Event& e, int n) const {
  if (n < 1 || n > kMaxPatchSize) {
    throw ConfigError("patch size must be in [1, " +
                      std::to_string(kMaxPatchSize) + "]");
  }
  Patch patch{n, e.x, e.y, e.p, std::vector<float>(n * n)};
  std::vector<std::uint8_t> raw(n * n);
  if (geometry_.contains(e.x, e.y)) {
    extract(e.x, e.y, e.p, n, raw);
  } else {
    const int off = patch_origin_offset(n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        raw[r * n + c] = at_or_zero(e.x - off + c, e.y - off + r, e.p);
      }
    }
  }
  std::copy(raw.begin(), raw.end(), patch.values.begin());
  return patch;
}

void SpeedInvariantSurface::reset() {
  std::fill(data_.begin(), data_.end(), 0);
}

bool operator==(const SpeedInvariantSurface& a,
                const SpeedInvariantSurface& b) {
  return a.geometry_ == b.geometry_ && a.radius_ == b.radius_ &&
         a.data_ == b.data_;
}

// ---------------------------------------------------------------------------
// UnclampedSpeedInvariantSurface

UnclampedSpeedInvariantSurface::UnclampedSpeedInvariantSurface(
    SensorGeometry geometry, int radius)
    : geometry_(geometry), radius_(radius) {
  validate(geometry_);
  check_radius(radius_, 1 << 10);
  values_.assign(2 * geometry_.pixels(), 0);
}

void UnclampedSpeedInvariantSurface::update(const Event& e) {
  check_bounds(geometry_, e);
  const int ch = channel_of(e.p);
  const std::int32_t before = values_[index(e.x, e.y, ch)];
  for (int dy = -radius_; dy <= radius_; ++dy) {
    for (int dx = -radius_; dx <= radius_; ++dx) {
      const int x = e.x + dx;
      const int y = e.y + dy;
      if (!geometry_.contains(x, y)) continue;
      std::int32_t& v = values_[index(x, y, ch)];
      if (v >= before) --v;
    }
  }
  values_[index(e.x, e.y, ch)] = (2 * radius_ + 1) * (2 * radius_ + 1);
}

// ---------------------------------------------------------------------------
// SpeedInvariantLine

SpeedInvariantLine::SpeedInvariantLine(int length, int radius)
    : radius_(radius) {
  if (length < 1) throw ConfigError("line length must be >= 1");
  check_radius(radius, 1 << 10);
  values_.assign(length, 0);
}

void SpeedInvariantLine::update(int x) {
  if (x < 0 || x >= static_cast<int>(values_.size())) {
    throw BoundsError("position " + std::to_string(x) + " outside line");
  }
  const int before = values_[x];
  const int lo = std::max(0, x - radius_);
  const int hi = std::min(static_cast<int>(values_.size()) - 1, x + radius_);
  for (int i = lo; i <= hi; ++i) {
    if (values_[i] >= before && values_[i] > 0) --values_[i];
  }
  values_[x] = peak();
}

// ---------------------------------------------------------------------------
// Sorted normalization

std::vector<int> window_ranks(std::span<const Timestamp> window) {
  std::vector<Timestamp> sorted(window.begin(), window.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> ranks(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) {
    ranks[i] = static_cast<int>(
        std::lower_bound(sorted.begin(), sorted.end(), window[i]) -
        sorted.begin());
  }
  return ranks;
}

Patch sorted_normalization(const TimeSurface& surface, int x, int y,
                           std::int8_t p, int n, int radius) {
  if (n < 1) throw ConfigError("patch size must be >= 1");
  const int off = patch_origin_offset(n);
  std::vector<Timestamp> window(n * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      window[r * n + c] = surface.at_or_zero(x - off + c, y - off + r, p);
    }
  }
  const std::vector<int> ranks = window_ranks(window);
  const float peak = static_cast<float>((2 * radius + 1) * (2 * radius + 1));
  const float scale = n * n > 1 ? peak / static_cast<float>(n * n - 1) : 0.f;
  Patch patch{n, x, y, p, std::vector<float>(n * n)};
  for (int i = 0; i < n * n; ++i) {
    patch.values[i] = static_cast<float>(ranks[i]) * scale;
  }
  return patch;
}

void write_dump(std::ostream& out, const SpeedInvariantSurface& surface) {
  dump_planes(out, surface);
}

void write_dump(std::ostream& out, const TimeSurface& surface) {
  dump_planes(out, surface);
}

}  // namespace evcorner
