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

#include "lowtrot/formulas.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "lowtrot/errors.hpp"

namespace lowtrot::formulas {

void validate_order(int p) {
    if (p == 1) {
        return;
    }
    if (p < 2 || p > kMaxOrder || p % 2 != 0) {
        throw InvalidInput("product-formula order must be 1 or even in 2.." + std::to_string(kMaxOrder) +
                           ", got " + std::to_string(p));
    }
}

int expected_stage_count(int p, int L) {
    validate_order(p);
    if (p == 1) {
        return L;
    }
    int count = 2 * L;
    for (int k = 4; k <= p; k += 2) {
        count *= 5;
    }
    return count;
}

long double suzuki_u(int p) {
    return 1.0L / (4.0L - std::pow(4.0L, 1.0L / static_cast<long double>(p - 1)));
}

void validate_permutation(const std::vector<int>& sigma, int L) {
    if (static_cast<int>(sigma.size()) != L) {
        throw InvalidInput("permutation length " + std::to_string(sigma.size()) + " does not match L = " +
                           std::to_string(L));
    }
    std::vector<bool> seen(static_cast<std::size_t>(L), false);
    for (int s : sigma) {
        if (s < 0 || s >= L || seen[static_cast<std::size_t>(s)]) {
            throw InvalidInput("permutation is not a bijection on the term indices");
        }
        seen[static_cast<std::size_t>(s)] = true;
    }
}

FormulaPlan suzuki_plan(int p, int L, double delta, const std::optional<std::vector<int>>& sigma) {
    validate_order(p);
    if (L < 1) {
        throw InvalidInput("suzuki_plan: L must be positive");
    }
    if (!std::isfinite(delta)) {
        throw InvalidInput("suzuki_plan: step must be finite");
    }
    if (sigma) {
        validate_permutation(*sigma, L);
    }
    std::vector<std::pair<int, long double>> raw;
    raw.reserve(static_cast<std::size_t>(expected_stage_count(p, L)));
    append_suzuki_stages<long double>(p, L, static_cast<long double>(delta), suzuki_u, raw);

    FormulaPlan plan;
    plan.order = p;
    plan.step = delta;
    plan.num_terms = L;
    plan.stages.reserve(raw.size());
    for (const auto& [slot, coeff] : raw) {
        const int term = sigma ? (*sigma)[static_cast<std::size_t>(slot)] : slot;
        plan.stages.push_back({term, static_cast<double>(coeff)});
    }
    if (sigma) {
        plan.permutation = *sigma;
    }
    return plan;
}

FormulaPlan reversed(const FormulaPlan& plan) {
    FormulaPlan out = plan;
    std::reverse(out.stages.begin(), out.stages.end());
    return out;
}

std::vector<SpectralBasis> term_bases(const models::HamiltonianModel& model) {
    std::vector<SpectralBasis> bases;
    bases.reserve(model.terms.size());
    for (const auto& term : model.terms) {
        bases.push_back(linalg::eigh(term));
    }
    return bases;
}

Propagator realize(const FormulaPlan& plan, std::span<const SpectralBasis> bases) {
    if (bases.empty()) {
        throw InvalidInput("realize: no term bases");
    }
    // Adjacent stages on one term commute and fuse; repeated (term, coeff)
    // exponentials are formed once.
    std::vector<Stage> fused;
    for (const auto& stage : plan.stages) {
        if (stage.term < 0 || stage.term >= static_cast<int>(bases.size())) {
            throw InvalidInput("realize: stage term index " + std::to_string(stage.term + 1) +
                               " outside 1.." + std::to_string(bases.size()));
        }
        if (!fused.empty() && fused.back().term == stage.term) {
            fused.back().coeff += stage.coeff;
        } else {
            fused.push_back(stage);
        }
    }
    std::vector<std::pair<Stage, Propagator>> made;
    Propagator out = Propagator::identity(bases.front().dim());
    for (const auto& stage : fused) {
        auto it = std::find_if(made.begin(), made.end(), [&](const auto& m) {
            return m.first.term == stage.term && m.first.coeff == stage.coeff;
        });
        if (it == made.end()) {
            made.emplace_back(stage, Propagator::exact(bases[static_cast<std::size_t>(stage.term)], stage.coeff));
            it = made.end() - 1;
        }
        out.then(it->second);
    }
    return out;
}

Propagator trotter_evolution(std::span<const SpectralBasis> bases, int p, double t, std::int64_t r,
                             const PermutationSchedule& schedule) {
    if (r < 1) {
        throw InvalidInput("trotter_evolution: r must be >= 1");
    }
    const int L = static_cast<int>(bases.size());
    const double delta = t / static_cast<double>(r);
    if (schedule.empty()) {
        return realize(suzuki_plan(p, L, delta), bases).power(r);
    }
    if (static_cast<std::int64_t>(schedule.size()) < r) {
        throw InvalidInput("trotter_evolution: schedule shorter than r");
    }
    // At most L! distinct steps; realize each once.
    std::map<std::vector<int>, Propagator> cache;
    Propagator out = Propagator::identity(bases.front().dim());
    for (std::int64_t i = 0; i < r; ++i) {
        const auto& sigma = schedule[static_cast<std::size_t>(i)];
        auto it = cache.find(sigma);
        if (it == cache.end()) {
            std::optional<std::vector<int>> perm;
            if (!sigma.empty()) {
                perm = sigma;
            }
            it = cache.emplace(sigma, realize(suzuki_plan(p, L, delta, perm), bases)).first;
        }
        out.then(it->second);
    }
    return out;
}

}  // namespace lowtrot::formulas
