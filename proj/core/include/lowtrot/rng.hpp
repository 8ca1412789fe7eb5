// Copyright 2026 The lowtrot Authors
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

#ifndef LOWTROT_RNG_HPP
#define LOWTROT_RNG_HPP

#include <cstdint>
#include <random>

namespace lowtrot {

/// Fixed odd constant used to spread task indices before mixing.
inline constexpr std::uint64_t kStreamMixConstant = 0x9E3779B97F4A7C15ULL;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Seed of the substream for one task: mix64(master ^ mix64((index + 1) * C)).
/// Depends only on (master, index), never on scheduling.
std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t task_index);

/// Two-level split for (grid point, sample) addressing.
std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t grid_index, std::uint64_t sample_index);

/// Random stream with platform-independent draws: only the raw mt19937_64
/// output (fully specified by the standard) is used, never the
/// implementation-defined std distributions.
class RngStream {
   public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [0, bound) by rejection; bound >= 1.
    std::uint64_t uniform_index(std::uint64_t bound);
    /// Standard normal via Box-Muller (no cached second value).
    double normal();

   private:
    std::mt19937_64 engine_;
};

}  // namespace lowtrot

#endif  // LOWTROT_RNG_HPP
