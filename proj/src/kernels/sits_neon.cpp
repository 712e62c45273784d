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

#if defined(__aarch64__) || defined(__ARM_NEON)
#include <arm_neon.h>

namespace evcorner::kernels {

void sits_window_neon(std::uint8_t* origin, std::ptrdiff_t stride, int rows,
                      int cols, std::uint8_t level) {
  static const std::uint8_t kRamp[16] = {0, 1, 2,  3,  4,  5,  6,  7,
                                         8, 9, 10, 11, 12, 13, 14, 15};
  const uint8x16_t ones =
      vandq_u8(vcltq_u8(vld1q_u8(kRamp), vdupq_n_u8(static_cast<std::uint8_t>(cols))),
               vdupq_n_u8(1));
  const uint8x16_t lvl = vdupq_n_u8(level);
  for (int r = 0; r < rows; ++r) {
    std::uint8_t* row = origin + r * stride;
    const uint8x16_t v = vld1q_u8(row);
    const uint8x16_t dec = vandq_u8(vcgeq_u8(v, lvl), ones);
    vst1q_u8(row, vqsubq_u8(v, dec));
  }
}

}  // namespace evcorner::kernels
#endif
