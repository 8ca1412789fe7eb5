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

#ifndef LOWTROT_SYMMETRY_HPP
#define LOWTROT_SYMMETRY_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lowtrot/linalg.hpp"
#include "lowtrot/models.hpp"
#include "lowtrot/rng.hpp"

namespace lowtrot::symmetry {

using linalg::ComplexMatrix;
using linalg::Propagator;
using linalg::SpectralBasis;

enum class Scheme { standard, random_st, optimal_sp };

std::string scheme_name(Scheme scheme);
Scheme parse_scheme(const std::string& name);

/// Per-step transformations C_mu = c_mu^{(x) n}. Only the single-qubit
/// factors are stored; unitary(mu) builds the n-qubit operator.
struct SymmetrySchedule {
    Scheme scheme = Scheme::standard;
    int n = 0;
    std::vector<ComplexMatrix> local;
    /// Expected averaging exponent; informational only.
    double theta_hint = 0.0;

    std::int64_t length() const { return static_cast<std::int64_t>(local.size()); }
    ComplexMatrix unitary(std::int64_t mu) const;
};

/// Haar-like SU(2) element: complex Gaussian 2x2, QR, then divided by a
/// square root of its determinant.
ComplexMatrix random_su2(RngStream& rng);

SymmetrySchedule standard_schedule(int n, std::int64_t r);
SymmetrySchedule random_su2_schedule(int n, std::int64_t r, RngStream& rng);
/// Hadamard^{(x) n} on odd steps (mu = 1, 3, ...), identity on even steps.
SymmetrySchedule hadamard_schedule(int n, std::int64_t r);

/// Relative commutation tolerance: ||[H, C]|| <= kCommutationTolerance ||H||.
inline constexpr double kCommutationTolerance = 1e-8;

/// Largest ||[H, C_mu]|| / ||H|| over the distinct transformations.
double max_relative_commutator(const ComplexMatrix& h, const SymmetrySchedule& schedule);

/// prod_{mu=1..r} C_mu^dagger S_1(t/r) C_mu, step mu = 1 applied first.
/// Throws InvalidInput when a transformation fails to commute with the
/// total Hamiltonian or when the schedule is shorter than r.
Propagator protected_evolution(const models::HamiltonianModel& model, std::span<const SpectralBasis> bases,
                               const SymmetrySchedule& schedule, double t, std::int64_t r);
ComplexMatrix protected_evolution(const models::HamiltonianModel& model, const SymmetrySchedule& schedule, double t,
                                  std::int64_t r);

}  // namespace lowtrot::symmetry

#endif  // LOWTROT_SYMMETRY_HPP
