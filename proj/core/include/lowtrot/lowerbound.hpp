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

#ifndef LOWTROT_LOWERBOUND_HPP
#define LOWTROT_LOWERBOUND_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lowtrot/linalg.hpp"
#include "lowtrot/models.hpp"

namespace lowtrot::harness {

/// Amplitudes reached from (track 0, position 0) after exp(-i H t).
struct OverlapRow {
    std::string bits;
    int parity = 0;
    double t = 0.0;
    /// |<target|exp(-iHt)|start>|
    double overlap = 0.0;
    /// |sin(t/2)|^D
    double predicted = 0.0;
    /// |<wrong target|exp(-iHt)|start>|
    double wrong_overlap = 0.0;
    /// Track holding the end-of-path amplitude, -1 when neither end is populated.
    int decoded = -1;
};

struct LowerBoundReport {
    int D = 0;
    std::vector<OverlapRow> rows;
    double max_deviation = 0.0;
    double max_wrong_overlap = 0.0;
    /// Every row with a populated end decodes to the true parity.
    bool all_decoded = true;
};

std::vector<int> parse_bits(const std::string& bits);
std::string bits_to_string(const std::vector<int>& bits);

OverlapRow parity_overlap(const models::ParityInstance& inst, const linalg::SpectralBasis& basis, double t);

/// All 2^D strings when bits is empty. t_grid defaults to {pi/2, pi}.
LowerBoundReport lowerbound_demo(int D, const std::optional<std::vector<int>>& bits,
                                 std::vector<double> t_grid = {});

/// count random (x, t) pairs with t uniform in [0, 2 pi).
LowerBoundReport lowerbound_random(int D, int count, std::uint64_t seed);

void write_lowerbound_csv(std::ostream& out, const LowerBoundReport& report);

}  // namespace lowtrot::harness

#endif  // LOWTROT_LOWERBOUND_HPP
