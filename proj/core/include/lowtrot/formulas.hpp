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

#ifndef LOWTROT_FORMULAS_HPP
#define LOWTROT_FORMULAS_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lowtrot/linalg.hpp"
#include "lowtrot/models.hpp"

namespace lowtrot::formulas {

using linalg::Propagator;
using linalg::SpectralBasis;

inline constexpr int kMaxOrder = 8;

/// One exponential exp(-i coeff H_term). Terms are 0-based.
struct Stage {
    int term = 0;
    double coeff = 0.0;
};

/// Ordered stages of S_p(delta) (or S_p^sigma). Stage 0 is applied first.
struct FormulaPlan {
    int order = 1;
    double step = 0.0;
    int num_terms = 0;
    std::vector<Stage> stages;
    /// Empty means identity ordering.
    std::vector<int> permutation;

    int stage_count() const { return static_cast<int>(stages.size()); }
};

/// Throws InvalidInput unless p == 1 or p is even with 2 <= p <= kMaxOrder.
void validate_order(int p);

/// L for p = 1, 2 * 5^(p/2 - 1) * L for even p.
int expected_stage_count(int p, int L);

/// Suzuki's u_p = 1 / (4 - 4^(1/(p-1))).
long double suzuki_u(int p);

/// The Suzuki recursion written once for any coefficient field T. u(p) must
/// return u_p in T. Appends (term, coefficient) pairs, first-applied first:
///   S_1(d)  = exp(-i d H_1) ... exp(-i d H_L) applied in order 1..L
///   S_2(d)  = S_1(d/2) followed by the reversed S_1(d/2)
///   S_p(d)  = S_{p-2}(u d)^2 S_{p-2}((1 - 4u) d) S_{p-2}(u d)^2
template <class T, class UFn>
void append_suzuki_stages(int p, int L, const T& delta, const UFn& u, std::vector<std::pair<int, T>>& out) {
    if (p == 1) {
        for (int l = 0; l < L; ++l) {
            out.emplace_back(l, delta);
        }
        return;
    }
    if (p == 2) {
        const T half = delta / T(2);
        for (int l = 0; l < L; ++l) {
            out.emplace_back(l, half);
        }
        for (int l = L - 1; l >= 0; --l) {
            out.emplace_back(l, half);
        }
        return;
    }
    const T up = u(p);
    const T outer = up * delta;
    const T middle = (T(1) - T(4) * up) * delta;
    append_suzuki_stages(p - 2, L, outer, u, out);
    append_suzuki_stages(p - 2, L, outer, u, out);
    append_suzuki_stages(p - 2, L, middle, u, out);
    append_suzuki_stages(p - 2, L, outer, u, out);
    append_suzuki_stages(p - 2, L, outer, u, out);
}

/// Plan for S_p(delta), or S_p^sigma when sigma is given (a 0-based
/// bijection on terms; stage on slot l acts with term sigma[l]).
FormulaPlan suzuki_plan(int p, int L, double delta, const std::optional<std::vector<int>>& sigma = std::nullopt);

/// Stage order reversed; realizes the inverse of plan(delta) when the
/// coefficients are negated.
FormulaPlan reversed(const FormulaPlan& plan);

/// Eigendecomposition of every term of the model.
std::vector<SpectralBasis> term_bases(const models::HamiltonianModel& model);

/// Product of the plan's exponentials, stage 0 applied first.
Propagator realize(const FormulaPlan& plan, std::span<const SpectralBasis> bases);

/// Per-step orderings for trotter_evolution; empty entries mean identity.
using PermutationSchedule = std::vector<std::vector<int>>;

/// prod_{i=1..r} S_p^{sigma_i}(t / r). Without a schedule the single-step
/// propagator is raised to the r-th power.
Propagator trotter_evolution(std::span<const SpectralBasis> bases, int p, double t, std::int64_t r,
                             const PermutationSchedule& schedule = {});

/// Throws InvalidInput unless sigma is a bijection on 0..L-1.
void validate_permutation(const std::vector<int>& sigma, int L);

}  // namespace lowtrot::formulas

#endif  // LOWTROT_FORMULAS_HPP
