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

#include "lowtrot/randomized.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lowtrot/errors.hpp"

namespace lowtrot::randomized {
namespace {

void check_steps(std::int64_t r, const char* what) {
    if (r < 1) {
        throw InvalidInput(std::string(what) + ": r must be >= 1");
    }
}

std::vector<SpectralBasis> bases_of(const models::HamiltonianModel& model) {
    return formulas::term_bases(model);
}

double restricted_norm(const ComplexMatrix& diff, const std::optional<ComplexMatrix>& isometry) {
    return isometry ? linalg::isometry_norm(diff, *isometry) : linalg::spectral_norm(diff);
}

}  // namespace

QDriftPlan qdrift_plan(const models::HamiltonianModel& model, double t, std::int64_t r) {
    check_steps(r, "qdrift_plan");
    if (model.num_terms() < 1) {
        throw InvalidInput("qdrift_plan: model has no terms");
    }
    QDriftPlan plan;
    plan.r = r;
    plan.tau = t / static_cast<double>(r);
    for (int l = 0; l < model.num_terms(); ++l) {
        if (model.term_norms(l) > 0.0) {
            plan.terms.push_back(l);
            plan.lambda_H += model.term_norms(l);
        }
    }
    if (plan.terms.empty()) {
        throw InvalidInput("qdrift_plan: every term has zero norm");
    }
    for (int l : plan.terms) {
        plan.probs.push_back(model.term_norms(l) / plan.lambda_H);
        plan.scaled_time_per_term.push_back(plan.lambda_H * plan.tau / model.term_norms(l));
    }
    return plan;
}

std::vector<int> qdrift_sequence(const QDriftPlan& plan, RngStream& rng) {
    std::vector<double> cumulative(plan.probs.size());
    std::partial_sum(plan.probs.begin(), plan.probs.end(), cumulative.begin());
    std::vector<int> slots(static_cast<std::size_t>(plan.r));
    for (auto& slot : slots) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end() - 1, u);
        slot = static_cast<int>(it - cumulative.begin());
    }
    return slots;
}

Propagator qdrift_sample(const models::HamiltonianModel& model, std::span<const SpectralBasis> bases, double t,
                         std::int64_t r, RngStream& rng) {
    const QDriftPlan plan = qdrift_plan(model, t, r);
    std::vector<Propagator> steps;
    steps.reserve(plan.terms.size());
    for (std::size_t j = 0; j < plan.terms.size(); ++j) {
        steps.push_back(Propagator::exact(bases[static_cast<std::size_t>(plan.terms[j])], plan.scaled_time_per_term[j]));
    }
    Propagator out = Propagator::identity(model.dim());
    for (int slot : qdrift_sequence(plan, rng)) {
        out.then(steps[static_cast<std::size_t>(slot)]);
    }
    return out;
}

ComplexMatrix qdrift_sample_unitary(const models::HamiltonianModel& model, double t, std::int64_t r,
                                    RngStream& rng) {
    const auto bases = bases_of(model);
    return qdrift_sample(model, bases, t, r, rng).matrix();
}

Propagator qdrift_expectation(const models::HamiltonianModel& model, std::span<const SpectralBasis> bases, double t,
                              std::int64_t r) {
    const QDriftPlan plan = qdrift_plan(model, t, r);
    // sum_l p_l (U_l - I) is the offset of sum_l p_l U_l since the p_l sum to 1.
    ComplexMatrix offset = ComplexMatrix::Zero(model.dim(), model.dim());
    for (std::size_t j = 0; j < plan.terms.size(); ++j) {
        offset += plan.probs[j] * linalg::expm_hermitian_minus_identity(
                                      bases[static_cast<std::size_t>(plan.terms[j])], plan.scaled_time_per_term[j]);
    }
    return Propagator::from_offset(std::move(offset));
}

ComplexMatrix qdrift_expectation_step(const models::HamiltonianModel& model, double t, std::int64_t r) {
    const auto bases = bases_of(model);
    return qdrift_expectation(model, bases, t, r).matrix();
}

std::vector<int> random_permutation(int L, RngStream& rng) {
    std::vector<int> sigma(static_cast<std::size_t>(L));
    std::iota(sigma.begin(), sigma.end(), 0);
    for (int i = L - 1; i > 0; --i) {
        const auto j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(i) + 1));
        std::swap(sigma[static_cast<std::size_t>(i)], sigma[static_cast<std::size_t>(j)]);
    }
    return sigma;
}

formulas::PermutationSchedule randperm_schedule(int L, std::int64_t r, RngStream& rng) {
    check_steps(r, "randperm_schedule");
    formulas::PermutationSchedule schedule;
    schedule.reserve(static_cast<std::size_t>(r));
    for (std::int64_t i = 0; i < r; ++i) {
        schedule.push_back(random_permutation(L, rng));
    }
    return schedule;
}

Propagator randperm_sample(std::span<const SpectralBasis> bases, int p, double t, std::int64_t r, RngStream& rng) {
    formulas::validate_order(p);
    const auto schedule = randperm_schedule(static_cast<int>(bases.size()), r, rng);
    return formulas::trotter_evolution(bases, p, t, r, schedule);
}

ComplexMatrix randperm_sample_unitary(const models::HamiltonianModel& model, int p, double t, std::int64_t r,
                                      RngStream& rng) {
    const auto bases = bases_of(model);
    return randperm_sample(bases, p, t, r, rng).matrix();
}

Propagator randperm_expectation(std::span<const SpectralBasis> bases, int p, double delta) {
    const int L = static_cast<int>(bases.size());
    if (L > kMaxEnumeratedTerms) {
        throw InvalidInput("randperm_expectation: L = " + std::to_string(L) + " exceeds " +
                           std::to_string(kMaxEnumeratedTerms) +
                           " (L! orderings); estimate the average from samples instead");
    }
    std::vector<int> sigma(static_cast<std::size_t>(L));
    std::iota(sigma.begin(), sigma.end(), 0);
    ComplexMatrix offset = ComplexMatrix::Zero(bases.front().dim(), bases.front().dim());
    std::int64_t count = 0;
    do {
        offset += formulas::realize(formulas::suzuki_plan(p, L, delta, sigma), bases).offset();
        ++count;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    offset /= static_cast<double>(count);
    return Propagator::from_offset(std::move(offset));
}

ComplexMatrix randperm_expectation_step(const models::HamiltonianModel& model, int p, double delta) {
    const auto bases = bases_of(model);
    return randperm_expectation(bases, p, delta).matrix();
}

SampleStats summarize(std::vector<double> errors) {
    SampleStats stats;
    stats.num_samples = static_cast<int>(errors.size());
    if (!errors.empty()) {
        stats.mean_error = std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(errors.size());
    }
    if (errors.size() > 1) {
        double ss = 0.0;
        for (double e : errors) {
            ss += (e - stats.mean_error) * (e - stats.mean_error);
        }
        stats.std_error = std::sqrt(ss / static_cast<double>(errors.size() - 1));
    }
    stats.errors = std::move(errors);
    return stats;
}

FluctuationStats fluctuation_stats(const models::HamiltonianModel& model, std::span<const SpectralBasis> bases,
                                   const RandomizedParams& params, int num_samples,
                                   const std::optional<ComplexMatrix>& isometry, std::uint64_t master_seed,
                                   std::uint64_t grid_index) {
    if (num_samples < 2) {
        throw InvalidInput("fluctuation_stats: need at least 2 samples");
    }
    check_steps(params.r, "fluctuation_stats");
    const Propagator exact = Propagator::exact(linalg::eigh(model.total()), params.t);

    std::vector<Propagator> samples;
    samples.reserve(static_cast<std::size_t>(num_samples));
    for (int s = 0; s < num_samples; ++s) {
        RngStream rng(substream_seed(master_seed, grid_index, static_cast<std::uint64_t>(s)));
        if (params.method == Method::qdrift) {
            samples.push_back(qdrift_sample(model, bases, params.t, params.r, rng));
        } else {
            samples.push_back(randperm_sample(bases, params.p, params.t, params.r, rng));
        }
    }

    FluctuationStats out;
    Propagator reference;
    const bool exact_available =
        params.method == Method::qdrift || static_cast<int>(bases.size()) <= kMaxEnumeratedTerms;
    if (exact_available) {
        const Propagator step = params.method == Method::qdrift
                                    ? qdrift_expectation(model, bases, params.t, params.r)
                                    : randperm_expectation(bases, params.p, params.t / static_cast<double>(params.r));
        reference = step.power(params.r);
        out.bias = restricted_norm(reference.offset() - exact.offset(), isometry);
        out.exact_reference = true;
    } else {
        ComplexMatrix mean = ComplexMatrix::Zero(model.dim(), model.dim());
        for (const auto& u : samples) {
            mean += u.offset();
        }
        reference = Propagator::from_offset(mean / static_cast<double>(num_samples));
    }

    std::vector<double> to_exact;
    std::vector<double> to_reference;
    double sum_sq = 0.0;
    for (const auto& u : samples) {
        to_exact.push_back(restricted_norm(u.offset() - exact.offset(), isometry));
        const double dev = restricted_norm(u.offset() - reference.offset(), isometry);
        to_reference.push_back(dev);
        sum_sq += dev * dev;
    }
    out.against_exact = summarize(std::move(to_exact));
    out.against_expectation = summarize(std::move(to_reference));
    out.fluctuation_rms = std::sqrt(sum_sq / static_cast<double>(num_samples));
    return out;
}

}  // namespace lowtrot::randomized
