// Copyright 2026 The lfsd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lfsd/random.h"

#include <limits>

namespace lfsd {
namespace {

std::mt19937_64 SeededEngine(uint64_t seed, uint64_t stream) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

ColumnRng::ColumnRng(uint64_t seed, uint64_t stream) : engine_(SeededEngine(seed, stream)) {}

uint64_t ColumnRng::UniformIndex(uint64_t n) {
  // Rejection sampling over the largest multiple of n.
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         (std::numeric_limits<uint64_t>::max() % n + 1) % n;
  uint64_t x = engine_();
  while (x > limit) x = engine_();
  return x % n;
}

int64_t ColumnRng::UniformInt(int64_t lo, int64_t hi) {
  const uint64_t span = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo) + 1;
  if (span == 0) return static_cast<int64_t>(engine_());  // full 64-bit range
  return lo + static_cast<int64_t>(UniformIndex(span));
}

double ColumnRng::UniformUnit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

}  // namespace lfsd
