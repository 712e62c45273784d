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
#include <immintrin.h>

// Compiled with -mavx2; only reached after a runtime CPU check.

namespace evcorner::kernels {

void sits_window_avx2(std::uint8_t* origin, std::ptrdiff_t stride, int rows,
                      int cols, std::uint8_t level) {
  alignas(32) static const std::uint8_t kRamp[32] = {
      0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15,
      0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
  const __m256i ramp =
      _mm256_load_si256(reinterpret_cast<const __m256i*>(kRamp));
  const __m256i ones = _mm256_and_si256(
      _mm256_cmpgt_epi8(_mm256_set1_epi8(static_cast<char>(cols)), ramp),
      _mm256_set1_epi8(1));
  const __m256i lvl = _mm256_set1_epi8(static_cast<char>(level));

  // Two rows per 256-bit register.
  int r = 0;
  for (; r + 1 < rows; r += 2) {
    auto* lo = reinterpret_cast<__m128i*>(origin + r * stride);
    auto* hi = reinterpret_cast<__m128i*>(origin + (r + 1) * stride);
    const __m256i v = _mm256_inserti128_si256(
        _mm256_castsi128_si256(_mm_loadu_si128(lo)), _mm_loadu_si128(hi), 1);
    const __m256i ge = _mm256_cmpeq_epi8(_mm256_max_epu8(v, lvl), v);
    const __m256i out = _mm256_subs_epu8(v, _mm256_and_si256(ge, ones));
    _mm_storeu_si128(lo, _mm256_castsi256_si128(out));
    _mm_storeu_si128(hi, _mm256_extracti128_si256(out, 1));
  }
  if (r < rows) {
    auto* row = reinterpret_cast<__m128i*>(origin + r * stride);
    const __m128i v = _mm_loadu_si128(row);
    const __m128i lvl128 = _mm256_castsi256_si128(lvl);
    const __m128i ge = _mm_cmpeq_epi8(_mm_max_epu8(v, lvl128), v);
    _mm_storeu_si128(row, _mm_subs_epu8(v, _mm_and_si128(
                                              ge, _mm256_castsi256_si128(ones))));
  }
}

}  // namespace evcorner::kernels
#endif
