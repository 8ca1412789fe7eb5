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

#ifndef LOWTROT_RANDOMIZED_HPP
#define LOWTROT_RANDOMIZED_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lowtrot/formulas.hpp"
#include "lowtrot/linalg.hpp"
#include "lowtrot/models.hpp"
#include "lowtrot/rng.hpp"

namespace lowtrot::randomized {

using linalg::ComplexMatrix;
using linalg::Propagator;
using linalg::SpectralBasis;

/// Largest L for which the permutation average is enumerated.
inline constexpr int kMaxEnumeratedTerms = 6;

/// Sampling distribution of qDRIFT. Terms with zero norm are left out, so
/// `terms` maps distribution slots back to model term indices.
struct QDriftPlan {
    std::int64_t r = 1;
    double tau = 0.0;
    double lambda_H = 0.0;
    std::vector<int> terms;
    std::vector<double> probs;
    /// lambda_H * tau / ||H_l|| per slot.
    std::vector<double> scaled_time_per_term;
};

QDriftPlan qdrift_plan(const models::HamiltonianModel& model, double t, std::int64_t r);

/// Term indices for one qDRIFT sample (length r).
std::vector<int> qdrift_sequence(const QDriftPlan& plan, RngStream& rng);

/// U_r ... U_1 with U_i = exp(-i tau lambda_H H_j / ||H_j||), j drawn from probs.
Propagator qdrift_sample(const models::HamiltonianModel& model, std::span<const SpectralBasis> bases, double t,
                         std::int64_t r, RngStream& rng);
ComplexMatrix qdrift_sample_unitary(const models::HamiltonianModel& model, double t, std::int64_t r,
                                    RngStream& rng);

/// E[U_i] = sum_l p_l exp(-i tau lambda_H H_l / ||H_l||). Not unitary in general.
Propagator qdrift_expectation(const models::HamiltonianModel& model, std::span<const SpectralBasis> bases, double t,
                              std::int64_t r);
ComplexMatrix qdrift_expectation_step(const models::HamiltonianModel& model, double t, std::int64_t r);

/// Uniform permutation of 0..L-1 (Fisher-Yates).
std::vector<int> random_permutation(int L, RngStream& rng);

/// One uniformly random ordering per step.
formulas::PermutationSchedule randperm_schedule(int L, std::int64_t r, RngStream& rng);

/// prod_i S_p^{sigma_i}(t/r) with sigma_i drawn independently.
Propagator randperm_sample(std::span<const SpectralBasis> bases, int p, double t, std::int64_t r, RngStream& rng);
ComplexMatrix randperm_sample_unitary(const models::HamiltonianModel& model, int p, double t, std::int64_t r,
                                      RngStream& rng);

/// (1/L!) sum_sigma S_p^sigma(delta). Throws InvalidInput for L > 6.
Propagator randperm_expectation(std::span<const SpectralBasis> bases, int p, double delta);
ComplexMatrix randperm_expectation_step(const models::HamiltonianModel& model, int p, double delta);

enum class Method { qdrift, randperm };

struct RandomizedParams {
    Method method = Method::qdrift;
    int p = 2;
    double t = 1.0;
    std::int64_t r = 1;
};

struct SampleStats {
    int num_samples = 0;
    double mean_error = 0.0;
    /// Unbiased (n - 1) estimator.
    double std_error = 0.0;
    std::vector<double> errors;
};

SampleStats summarize(std::vector<double> errors);

/// Per-sample errors of one randomized configuration.
struct FluctuationStats {
    /// ||(U_s - V) P|| per sample.
    SampleStats against_exact;
    /// ||(U_s - R) P|| per sample, R = E^r when the expectation is exact,
    /// otherwise the empirical mean of the samples.
    SampleStats against_expectation;
    /// ||(E^r - V) P||; empty when the expectation is not available.
    std::optional<double> bias;
    /// sqrt(mean ||(U_s - R) P||^2): the spread of the random operator.
    double fluctuation_rms = 0.0;
    bool exact_reference = false;
};

/// Samples are drawn from substream (master_seed, grid_index, s), s = 0..num_samples-1.
/// isometry, when given, restricts every difference to its column space:
/// ||(A - B) Q|| = ||(A - B) Q Q^dagger||.
FluctuationStats fluctuation_stats(const models::HamiltonianModel& model, std::span<const SpectralBasis> bases,
                                   const RandomizedParams& params, int num_samples,
                                   const std::optional<ComplexMatrix>& isometry, std::uint64_t master_seed,
                                   std::uint64_t grid_index = 0);

}  // namespace lowtrot::randomized

#endif  // LOWTROT_RANDOMIZED_HPP
