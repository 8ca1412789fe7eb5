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

#ifndef LOWTROT_LOWENERGY_HPP
#define LOWTROT_LOWENERGY_HPP

#include <optional>
#include <vector>

#include "lowtrot/linalg.hpp"

namespace lowtrot::lowenergy {

using linalg::ComplexMatrix;
using linalg::Index;
using linalg::RealVector;
using linalg::SpectralBasis;

inline constexpr double kInclusionTolerance = 1e-9;

/// Eigenstates with E <= Delta + tolerance are inside the window.
struct EnergyWindow {
    double Delta = 0.0;
    std::optional<double> DeltaPrime;
    double tolerance = kInclusionTolerance;
};

/// Throws InvalidInput on a negative or non-finite threshold, or DeltaPrime < Delta.
void validate_window(const EnergyWindow& window);

/// Number of eigenvalues inside the window.
Index window_rank(const SpectralBasis& basis, const EnergyWindow& window);

/// Orthonormal eigenvectors spanning the window (dim x rank).
ComplexMatrix isometry_below(const SpectralBasis& basis, const EnergyWindow& window);

/// Orthonormal eigenvectors with E > threshold + tolerance.
ComplexMatrix isometry_above(const SpectralBasis& basis, double threshold, double tolerance = kInclusionTolerance);

/// Q Q^dagger for the window's isometry.
ComplexMatrix projector_below(const SpectralBasis& basis, const EnergyWindow& window);

/// ||(U - V) P||.
double low_energy_error(const ComplexMatrix& u, const ComplexMatrix& v, const ComplexMatrix& projector);

/// Diagonal state over the eigenbasis of H.
struct PreparedState {
    RealVector weights;
    const SpectralBasis* basis = nullptr;
    double sigma = 0.0;
    double center = 0.0;

    ComplexMatrix density() const;
};

/// w_i proportional to exp(-(E_i - Delta)^2 / sigma^2) over the whole
/// spectrum (no factor 2 in the exponent). Normalized in log space so that a
/// narrow sigma still concentrates on the nearest level instead of
/// underflowing. The basis must outlive the returned state.
PreparedState gaussian_prepared_state(const SpectralBasis& basis, double Delta, double sigma);

/// All weight on eigenstate i.
PreparedState eigenstate(const SpectralBasis& basis, Index i);

/// ||U rho U^dagger - V rho V^dagger||.
double mixed_state_error(const ComplexMatrix& u, const ComplexMatrix& v, const PreparedState& state);

struct LeakagePoint {
    double Lambda_prime = 0.0;
    double leakage = 0.0;
};

/// ||P_{>Lambda'} exp(-i delta H_l) P_{<=Lambda}|| for each Lambda' in the
/// ascending grid, projectors taken in the eigenbasis of the total H.
std::vector<LeakagePoint> leakage_probe(const SpectralBasis& total, const SpectralBasis& term, double delta,
                                        double Lambda, const std::vector<double>& Lambda_prime_grid);

}  // namespace lowtrot::lowenergy

#endif  // LOWTROT_LOWENERGY_HPP
