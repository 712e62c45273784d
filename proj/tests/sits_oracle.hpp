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

#include <algorithm>
#include <vector>

#include "evcorner/events.hpp"

namespace evcorner::testing {

// Direct transcription of the update rule over plain ints, no padding, no
// vectorization.
class ReferenceSits {
 public:
  ReferenceSits(SensorGeometry g, int r, bool clamp = true)
      : g_(g), r_(r), clamp_(clamp), s_(2 * g.pixels(), 0) {}

  void update(const Event& e) {
    const int c = e.p > 0 ? 1 : 0;
    const int before = at(e.x, e.y, c);
    for (int y = e.y - r_; y <= e.y + r_; ++y) {
      for (int x = e.x - r_; x <= e.x + r_; ++x) {
        if (x < 0 || y < 0 || x >= g_.width || y >= g_.height) continue;
        int& v = ref(x, y, c);
        if (v >= before) v = clamp_ ? std::max(v - 1, 0) : v - 1;
      }
    }
    ref(e.x, e.y, c) = (2 * r_ + 1) * (2 * r_ + 1);
  }

  int at(int x, int y, int c) const { return s_[index(x, y, c)]; }

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(c) * g_.height + y) * g_.width + x;
  }
  int& ref(int x, int y, int c) { return s_[index(x, y, c)]; }

  SensorGeometry g_;
  int r_;
  bool clamp_;
  std::vector<int> s_;
};

}  // namespace evcorner::testing
