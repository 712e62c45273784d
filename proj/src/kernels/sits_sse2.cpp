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

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
#include <emmintrin.h>

namespace evcorner::kernels {
namespace {

// 0x01 in the first `cols` lanes.
__m128i lane_ones(int cols) {
  alignas(16) static const std::uint8_t kRamp[16] = {0, 1, 2,  3,  4,  5,  6,  7,
                                                     8, 9, 10, 11, 12, 13, 14, 15};
  const __m128i ramp = _mm_load_si128(reinterpret_cast<const __m128i*>(kRamp));
  const __m128i in_window =
      _mm_cmplt_epi8(ramp, _mm_set1_epi8(static_cast<char>(cols)));
  return _mm_and_si128(in_window, _mm_set1_epi8(1));
}

}  // namespace

void sits_window_sse2(std::uint8_t* origin, std::ptrdiff_t stride, int rows,
                      int cols, std::uint8_t level) {
  const __m128i ones = lane_ones(cols);
  const __m128i lvl = _mm_set1_epi8(static_cast<char>(level));
  for (int r = 0; r < rows; ++r) {
    auto* row = reinterpret_cast<__m128i*>(origin + r * stride);
    const __m128i v = _mm_loadu_si128(row);
    // unsigned v >= level  <=>  max(v, level) == v
    const __m128i ge = _mm_cmpeq_epi8(_mm_max_epu8(v, lvl), v);
    _mm_storeu_si128(row, _mm_subs_epu8(v, _mm_and_si128(ge, ones)));
  }
}

}  // namespace evcorner::kernels
#endif
