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

#ifndef LFSD_RANDOM_H_
#define LFSD_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>

namespace lfsd {

// Independent random stream for one column, keyed by (seed, stream index).
// Both the engine and the seed_seq mixing are fully specified by the
// standard; the draw helpers avoid std::*_distribution, whose algorithms are
// implementation-defined, so outputs are identical across toolchains.
class ColumnRng {
 public:
  ColumnRng(uint64_t seed, uint64_t stream);

  // Uniform on [0, n). n must be positive.
  uint64_t UniformIndex(uint64_t n);
  // Uniform on [lo, hi] for lo <= hi.
  int64_t UniformInt(int64_t lo, int64_t hi);
  // Uniform on [0, 1) with 53 random bits.
  double UniformUnit();
  bool Bernoulli(double p) { return UniformUnit() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lfsd

#endif  // LFSD_RANDOM_H_
