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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <utility>

#include "evcorner/error.hpp"
#include "evcorner/random.hpp"
#include "evcorner/time_surface.hpp"
#include "sits_oracle.hpp"

using namespace evcorner;
using evcorner::testing::ReferenceSits;

namespace {

std::vector<Event> random_events(Rng& rng, SensorGeometry g, int n) {
  std::vector<Event> out;
  Timestamp t = 0;
  for (int i = 0; i < n; ++i) {
    t += static_cast<Timestamp>(uniform_index(rng, 100));
    out.push_back({static_cast<std::uint16_t>(uniform_index(rng, g.width)),
                   static_cast<std::uint16_t>(uniform_index(rng, g.height)), t,
                   static_cast<std::int8_t>(uniform_index(rng, 2) ? 1 : -1)});
  }
  return out;
}

}  // namespace

TEST_CASE("time surface keeps the last timestamp per cell and polarity") {
  TimeSurface ts({10, 10});
  ts.update({5, 5, 100, 1});
  CHECK(ts.at(5, 5, 1) == 100);
  CHECK(ts.at(5, 5, -1) == 0);
  CHECK(ts.at(4, 5, 1) == 0);
  ts.update({5, 5, 200, 1});
  CHECK(ts.at(5, 5, 1) == 200);
  ts.update({5, 5, 300, -1});
  CHECK(ts.at(5, 5, 1) == 200);
  CHECK(ts.at(5, 5, -1) == 300);
  CHECK_THROWS_AS(ts.update({10, 0, 1, 1}), BoundsError);
}

TEST_CASE("time surface ages are capped and unset cells read the cap") {
  TimeSurface ts({10, 10});
  ts.update({2, 2, 1000, 1});
  ts.update({3, 3, 250000, 1});
  std::vector<float> out(4);
  ts.extract_ages({3, 3, 251000, 1}, 2, 100000, out);
  // n = 2: window columns x..x+1, rows y..y+1.
  CHECK(out[0] == doctest::Approx(1.0f));
  CHECK(out[1] == doctest::Approx(100.0f));
  ts.extract_ages({2, 2, 1500, 1}, 2, 100000, out);
  CHECK(out[0] == doctest::Approx(0.5f));
}

TEST_CASE("first event sets the peak and leaves the zero neighborhood at zero") {
  SpeedInvariantSurface s({200, 200}, 6);
  s.update({100, 100, 0, 1});
  CHECK(s.at(100, 100, 1) == 169);
  for (int y = 94; y <= 106; ++y) {
    for (int x = 94; x <= 106; ++x) {
      if (x != 100 || y != 100) CHECK(s.at(x, y, 1) == 0);
    }
  }
  CHECK(s.at(100, 100, -1) == 0);
  CHECK_THROWS_AS(s.update({200, 0, 0, 1}), BoundsError);
  CHECK_THROWS_AS(SpeedInvariantSurface({10, 10}, 8), ConfigError);
}

TEST_CASE("decrement rule uses the event cell's value before the update") {
  SpeedInvariantSurface s({5, 1}, 1);
  s.update({0, 0, 0, 1});  // [9 0 0 0 0]
  s.update({1, 0, 1, 1});  // neighbor 9 >= 0 -> 8
  CHECK(s.at(0, 0, 1) == 8);
  CHECK(s.at(1, 0, 1) == 9);
  s.update({0, 0, 2, 1});  // before = 8; 9 >= 8 -> 8, then center = 9
  CHECK(s.at(0, 0, 1) == 9);
  CHECK(s.at(1, 0, 1) == 8);
}

TEST_CASE("one-dimensional sweep at two speeds gives the same slope and plateau") {
  constexpr int r = 5;
  auto sweep = [](double speed) {
    std::vector<std::pair<double, int>> events;
    for (int x = 1; x <= 10; ++x) events.emplace_back(x / speed, x);
    std::sort(events.begin(), events.end());
    SpeedInvariantLine line(12, r);
    for (const auto& e : events) line.update(e.second);
    return std::vector<int>(line.values().begin(), line.values().end());
  };
  const auto fast = sweep(2.0);
  const auto slow = sweep(1.0);
  CHECK(fast == slow);
  // Peak at the edge, then 5 cells falling by one, then r + 1.
  const std::vector<int> expected{0, 6, 6, 6, 6, 6, 7, 8, 9, 10, 11, 0};
  CHECK(fast == expected);
}

TEST_CASE("optimized surface equals the reference on random streams") {
  for (int r : {1, 3, 6, 7}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(seed * 31 + r);
      const SensorGeometry g{32, 32};
      SpeedInvariantSurface fast(g, r);
      ReferenceSits ref(g, r);
      for (const Event& e : random_events(rng, g, 500)) {
        fast.update(e);
        ref.update(e);
      }
      bool equal = true;
      for (int c : {-1, 1}) {
        for (int y = 0; y < g.height; ++y) {
          for (int x = 0; x < g.width; ++x) {
            equal &= fast.at(x, y, c) == ref.at(x, y, c > 0 ? 1 : 0);
          }
        }
      }
      CHECK(equal);
    }
  }
}

TEST_CASE("unclamped mode follows the literal rule and can go negative") {
  const SensorGeometry g{16, 16};
  Rng rng(5);
  UnclampedSpeedInvariantSurface s(g, 2);
  ReferenceSits ref(g, 2, false);
  bool negative = false;
  for (const Event& e : random_events(rng, g, 2000)) {
    s.update(e);
    ref.update(e);
  }
  bool equal = true;
  for (int y = 0; y < g.height; ++y) {
    for (int x = 0; x < g.width; ++x) {
      equal &= s.at(x, y, 1) == ref.at(x, y, 1);
      negative |= s.at(x, y, 1) < 0;
    }
  }
  CHECK(equal);
  CHECK(negative);
}

TEST_CASE("surface is bounded, local and leaves the other polarity alone") {
  const SensorGeometry g{40, 40};
  Rng rng(11);
  SpeedInvariantSurface s(g, 4);
  for (const Event& e : random_events(rng, g, 3000)) {
    SpeedInvariantSurface before = s;
    s.update(e);
    CHECK(s.at(e.x, e.y, e.p) == 81);
    bool ok = true;
    for (int c : {-1, 1}) {
      for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
          const bool near = std::abs(x - e.x) <= 4 && std::abs(y - e.y) <= 4 && c == e.p;
          if (!near) ok &= s.at(x, y, c) == before.at(x, y, c);
          ok &= s.at(x, y, c) <= 81;
        }
      }
    }
    CHECK(ok);
  }
}

TEST_CASE("patch centering, border fill and freshness") {
  SpeedInvariantSurface s({64, 64}, 6);
  const Event center{32, 32, 0, 1};
  s.update(center);
  const Patch p = s.extract_patch(center, 8);
  CHECK(p.size == 8);
  CHECK(p.at(3, 3) == 169.0f);
  float sum = 0;
  for (float v : p.values) sum += v;
  CHECK(sum == 169.0f);

  const Event corner{0, 0, 1, -1};
  s.update(corner);
  const Patch q = s.extract_patch(corner, 8);
  CHECK(q.at(3, 3) == 169.0f);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 8; ++c) CHECK(q.at(r, c) == 0.0f);
  }
}

TEST_CASE("rank transform examples and monotone invariance") {
  const std::vector<Timestamp> equal{5, 5, 5, 5};
  CHECK(window_ranks(equal) == std::vector<int>{0, 0, 0, 0});
  const std::vector<Timestamp> inc{1, 2, 3, 4};
  CHECK(window_ranks(inc) == std::vector<int>{0, 1, 2, 3});
  const std::vector<Timestamp> ties{4, 1, 4, 2};
  CHECK(window_ranks(ties) == std::vector<int>{2, 0, 2, 1});

  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Timestamp> w(64), w2(64);
    for (int i = 0; i < 64; ++i) {
      w[i] = static_cast<Timestamp>(uniform_index(rng, 20));
      w2[i] = 2 * w[i] + 7;
    }
    CHECK(window_ranks(w) == window_ranks(w2));
  }
}

TEST_CASE("sorted normalization scales ranks to the peak") {
  TimeSurface ts({2, 2});
  ts.update({0, 0, 1, 1});
  ts.update({1, 0, 2, 1});
  ts.update({0, 1, 3, 1});
  ts.update({1, 1, 4, 1});
  // n = 2 around (0, 0): window columns 0..1, rows 0..1.
  const Patch p = sorted_normalization(ts, 0, 0, 1, 2, 6);
  CHECK(p.values[0] == doctest::Approx(0.0));
  CHECK(p.values[1] == doctest::Approx(169.0 / 3));
  CHECK(p.values[2] == doctest::Approx(2 * 169.0 / 3));
  CHECK(p.values[3] == doctest::Approx(169.0));
}

TEST_CASE("surface dump has one block per polarity") {
  SpeedInvariantSurface s({3, 2}, 1);
  s.update({1, 1, 0, 1});
  std::ostringstream out;
  write_dump(out, s);
  CHECK(out.str() == "# channel -1\n0 0 0\n0 0 0\n# channel +1\n0 0 0\n0 9 0\n");
}
