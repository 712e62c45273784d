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

#include <vector>

#include "evcorner/kernels/sits_kernels.hpp"
#include "evcorner/random.hpp"
#include "evcorner/time_surface.hpp"
#include "sits_oracle.hpp"

using namespace evcorner;
namespace k = evcorner::kernels;

TEST_CASE("scalar kernel is listed first and lookups agree") {
  const auto& all = k::available();
  REQUIRE(!all.empty());
  CHECK(all.front().isa == k::Isa::kScalar);
  CHECK(k::find(k::Isa::kScalar) != nullptr);
  CHECK(k::find("scalar") == k::find(k::Isa::kScalar));
  CHECK(k::find("no-such-isa") == nullptr);
  bool active_listed = false;
  for (const auto& t : all) active_listed |= t.isa == k::active().isa;
  CHECK(active_listed);
}

TEST_CASE("scalar kernel decrements cells at or above the level and saturates") {
  std::vector<std::uint8_t> buf{0, 3, 5, 7, 5, 2};
  k::sits_window_scalar(buf.data(), 3, 2, 3, 5);
  CHECK(buf == std::vector<std::uint8_t>{0, 3, 4, 6, 4, 2});
  std::vector<std::uint8_t> zeros(4, 0);
  k::sits_window_scalar(zeros.data(), 2, 2, 2, 0);
  CHECK(zeros == std::vector<std::uint8_t>(4, 0));
}

TEST_CASE("every vector kernel matches the scalar kernel on random windows") {
  constexpr int kPad = 32;
  constexpr std::ptrdiff_t kStride = 48;
  for (const auto& table : k::available()) {
    CAPTURE(table.name);
    Rng rng(17);
    bool equal = true;
    for (int trial = 0; trial < 20000; ++trial) {
      const int rows = 1 + static_cast<int>(uniform_index(rng, 15));
      const int cols = 1 + static_cast<int>(uniform_index(rng, 15));
      const auto level = static_cast<std::uint8_t>(uniform_index(rng, 256));
      std::vector<std::uint8_t> a(kStride * (rows + 2 * kPad / 16 + 2));
      for (auto& v : a) {
        // Bias toward values near the level to exercise the comparison edge.
        v = uniform_index(rng, 2) ? static_cast<std::uint8_t>(uniform_index(rng, 256))
                                  : static_cast<std::uint8_t>(
                                        std::clamp<int>(level + int(uniform_index(rng, 3)) - 1, 0, 255));
      }
      std::vector<std::uint8_t> b = a;
      std::uint8_t* origin_a = a.data() + kStride + 8;
      std::uint8_t* origin_b = b.data() + kStride + 8;
      k::sits_window_scalar(origin_a, kStride, rows, cols, level);
      table.sits_window(origin_b, kStride, rows, cols, level);
      equal &= a == b;
    }
    CHECK(equal);
  }
}

TEST_CASE("surfaces built with each kernel agree with the reference") {
  const SensorGeometry g{32, 32};
  for (const auto& table : k::available()) {
    CAPTURE(table.name);
    for (int r : {1, 4, 6, 7}) {
      Rng rng(r);
      SpeedInvariantSurface s(g, r, table);
      testing::ReferenceSits ref(g, r);
      Timestamp t = 0;
      for (int i = 0; i < 5000; ++i) {
        const Event e{static_cast<std::uint16_t>(uniform_index(rng, 32)),
                      static_cast<std::uint16_t>(uniform_index(rng, 32)), t++,
                      static_cast<std::int8_t>(uniform_index(rng, 2) ? 1 : -1)};
        s.update(e);
        ref.update(e);
      }
      bool equal = true;
      for (int c : {0, 1}) {
        for (int y = 0; y < 32; ++y) {
          for (int x = 0; x < 32; ++x) {
            equal &= s.at(x, y, c ? 1 : -1) == ref.at(x, y, c);
          }
        }
      }
      CHECK(equal);
    }
  }
}
