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

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

// Inner loop of the speed-invariant surface update, in one scalar reference
// and several vector variants. The variant is picked once per process from
// the CPU's capabilities; EVCORNER_SIMD=scalar|sse2|avx2|neon overrides it.

namespace evcorner::kernels {

// Within a `rows` x `cols` window whose top-left cell is `origin` (row pitch
// `stride` bytes), decrements by one every cell whose value is >= `level`,
// saturating at zero. Vector variants require cols <= kMaxVectorCols and may
// read and rewrite (unchanged) up to kMaxVectorCols bytes from the start of
// each row, so callers must pad their rows.
using SitsWindowFn = void (*)(std::uint8_t* origin, std::ptrdiff_t stride,
                              int rows, int cols, std::uint8_t level);

inline constexpr int kMaxVectorCols = 16;

enum class Isa { kScalar, kSse2, kAvx2, kNeon };

struct KernelTable {
  Isa isa;
  std::string_view name;
  SitsWindowFn sits_window;
};

void sits_window_scalar(std::uint8_t* origin, std::ptrdiff_t stride, int rows,
                        int cols, std::uint8_t level);
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
void sits_window_sse2(std::uint8_t* origin, std::ptrdiff_t stride, int rows,
                      int cols, std::uint8_t level);
void sits_window_avx2(std::uint8_t* origin, std::ptrdiff_t stride, int rows,
                      int cols, std::uint8_t level);
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
void sits_window_neon(std::uint8_t* origin, std::ptrdiff_t stride, int rows,
                      int cols, std::uint8_t level);
#endif

// Tables the running CPU can execute, scalar first.
const std::vector<KernelTable>& available();
// nullptr when the CPU (or build) lacks the ISA.
const KernelTable* find(Isa isa);
const KernelTable* find(std::string_view name);
// Best available table, or the EVCORNER_SIMD override when it names one.
const KernelTable& active();

}  // namespace evcorner::kernels
