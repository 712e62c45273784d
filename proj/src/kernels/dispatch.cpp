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

#include <cstdlib>
#include <string>

#include "evcorner/kernels/sits_kernels.hpp"

namespace evcorner::kernels {
namespace {

std::vector<KernelTable> detect() {
  std::vector<KernelTable> tables;
  tables.push_back({Isa::kScalar, "scalar", &sits_window_scalar});
#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
  tables.push_back({Isa::kSse2, "sse2", &sits_window_sse2});
#if defined(__GNUC__)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) {
    tables.push_back({Isa::kAvx2, "avx2", &sits_window_avx2});
  }
#endif
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
  tables.push_back({Isa::kNeon, "neon", &sits_window_neon});
#endif
  return tables;
}

}  // namespace

const std::vector<KernelTable>& available() {
  static const std::vector<KernelTable> tables = detect();
  return tables;
}

const KernelTable* find(Isa isa) {
  for (const auto& t : available()) {
    if (t.isa == isa) return &t;
  }
  return nullptr;
}

const KernelTable* find(std::string_view name) {
  for (const auto& t : available()) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const KernelTable& active() {
  static const KernelTable& chosen = []() -> const KernelTable& {
    if (const char* env = std::getenv("EVCORNER_SIMD")) {
      if (const KernelTable* t = find(std::string_view(env))) return *t;
    }
    return available().back();
  }();
  return chosen;
}

}  // namespace evcorner::kernels
