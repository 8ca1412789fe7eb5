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

#ifndef LOWTROT_RUNNER_HPP
#define LOWTROT_RUNNER_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lowtrot/config.hpp"

namespace lowtrot::harness {

/// One measurement. Randomized methods tag the scheme column with the
/// statistic: "sample" (||(U_s - V) P||), "fluctuation" (||(U_s - R) P||
/// against the averaged evolution R) and "bias" (||(R - V) P||).
struct ErrorRecord {
    std::string experiment_id;
    std::string model;
    int n = 0;
    int L = 0;
    std::string method;
    int p = 0;
    std::string scheme;
    double delta_step = 0.0;
    std::int64_t r = 0;
    double t = 0.0;
    std::optional<double> Delta;
    std::string subspace;
    std::uint64_t seed = 0;
    int sample_index = 0;
    double error = 0.0;
    double wall_time_ms = 0.0;
    /// Position in the experiment's grid; the sort key with sample_index.
    std::int64_t grid_index = 0;
};

struct RunOptions {
    bool long_mode = false;
    int threads = 1;
    /// Progress and skip notices; nullptr silences them.
    std::ostream* log = nullptr;
};

/// Models above this dimension run only with --long.
inline constexpr long kShortRunMaxDimension = 1024;

std::vector<ErrorRecord> run_experiment(const ExperimentConfig& config, const RunOptions& options);
std::vector<ErrorRecord> run_config(const ConfigFile& config, const RunOptions& options);

std::string csv_header();
/// Shortest round-trip decimal form ("%.17g").
std::string format_number(double v);
/// strip_timing leaves wall_time_ms empty so outputs compare byte for byte.
void write_csv(std::ostream& out, const std::vector<ErrorRecord>& records, bool strip_timing = false);
void write_csv_file(const std::string& path, const std::vector<ErrorRecord>& records, bool strip_timing = false);

/// Rows where the low-energy error exceeds the matching full-space error by
/// more than tolerance. Rows are matched on (experiment, grid point, scheme,
/// sample).
struct DominanceViolation {
    ErrorRecord full;
    ErrorRecord low;
};
std::vector<DominanceViolation> check_dominance(const std::vector<ErrorRecord>& records, double tolerance = 1e-12);

/// --threads if given, else LOWTROT_THREADS, else 1. Throws InvalidInput on
/// a non-positive or malformed value.
int resolve_threads(std::optional<int> flag);

/// Pins the BLAS backend to one thread so results do not depend on its
/// internal work split.
void pin_blas_threads();

}  // namespace lowtrot::harness

#endif  // LOWTROT_RUNNER_HPP
