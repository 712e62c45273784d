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

#include "evcorner/kernels/sits_kernels.hpp"

namespace evcorner::kernels {

void sits_window_scalar(std::uint8_t* origin, std::ptrdiff_t stride, int rows,
                        int cols, std::uint8_t level) {
  for (int r = 0; r < rows; ++r) {
    std::uint8_t* row = origin + r * stride;
    for (int c = 0; c < cols; ++c) {
      const std::uint8_t v = row[c];
      if (v >= level && v > 0) row[c] = static_cast<std::uint8_t>(v - 1);
    }
  }
}

}  // namespace evcorner::kernels
