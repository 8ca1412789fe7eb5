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

#include "lowtrot/lowenergy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lowtrot/errors.hpp"

namespace lowtrot::lowenergy {
namespace {

ComplexMatrix select_columns(const SpectralBasis& basis, Index first, Index count) {
    return basis.eigenvectors.middleCols(first, count);
}

}  // namespace

void validate_window(const EnergyWindow& window) {
    if (!std::isfinite(window.Delta) || window.Delta < 0.0) {
        throw InvalidInput("energy window: Delta must be finite and >= 0");
    }
    if (window.DeltaPrime && !(*window.DeltaPrime >= window.Delta)) {
        throw InvalidInput("energy window: DeltaPrime must be >= Delta");
    }
    if (!(window.tolerance >= 0.0)) {
        throw InvalidInput("energy window: tolerance must be >= 0");
    }
}

Index window_rank(const SpectralBasis& basis, const EnergyWindow& window) {
    validate_window(window);
    const double cut = window.Delta + window.tolerance;
    const auto* begin = basis.eigenvalues.data();
    const auto* end = begin + basis.eigenvalues.size();
    return static_cast<Index>(std::upper_bound(begin, end, cut) - begin);
}

ComplexMatrix isometry_below(const SpectralBasis& basis, const EnergyWindow& window) {
    return select_columns(basis, 0, window_rank(basis, window));
}

ComplexMatrix isometry_above(const SpectralBasis& basis, double threshold, double tolerance) {
    const double cut = threshold + tolerance;
    const auto* begin = basis.eigenvalues.data();
    const auto* end = begin + basis.eigenvalues.size();
    const auto first = static_cast<Index>(std::upper_bound(begin, end, cut) - begin);
    return select_columns(basis, first, basis.dim() - first);
}

ComplexMatrix projector_below(const SpectralBasis& basis, const EnergyWindow& window) {
    const ComplexMatrix q = isometry_below(basis, window);
    return q * q.adjoint();
}

double low_energy_error(const ComplexMatrix& u, const ComplexMatrix& v, const ComplexMatrix& projector) {
    return linalg::projected_distance(u, v, projector);
}

ComplexMatrix PreparedState::density() const {
    if (basis == nullptr) {
        throw InvalidInput("PreparedState: no basis");
    }
    const auto& q = basis->eigenvectors;
    return q * weights.cast<linalg::Complex>().asDiagonal() * q.adjoint();
}

PreparedState gaussian_prepared_state(const SpectralBasis& basis, double Delta, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw InvalidInput("gaussian_prepared_state: sigma must be positive and finite");
    }
    const RealVector& e = basis.eigenvalues;
    RealVector log_w = -((e.array() - Delta).square() / (sigma * sigma)).matrix();
    const double top = log_w.maxCoeff();
    RealVector w = (log_w.array() - top).exp().matrix();
    const double total = w.sum();
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw InvalidInput("gaussian_prepared_state: weights vanish numerically; widen sigma");
    }
    PreparedState state;
    state.weights = w / total;
    state.basis = &basis;
    state.sigma = sigma;
    state.center = Delta;
    return state;
}

PreparedState eigenstate(const SpectralBasis& basis, Index i) {
    if (i < 0 || i >= basis.dim()) {
        throw InvalidInput("eigenstate: index out of range");
    }
    PreparedState state;
    state.weights = RealVector::Zero(basis.dim());
    state.weights(i) = 1.0;
    state.basis = &basis;
    state.center = basis.eigenvalues(i);
    return state;
}

double mixed_state_error(const ComplexMatrix& u, const ComplexMatrix& v, const PreparedState& state) {
    if (state.basis == nullptr || u.rows() != state.basis->dim() || v.rows() != u.rows()) {
        throw InvalidInput("mixed_state_error: non-conformable state");
    }
    // rho = X X^dagger with X = Q diag(sqrt w); then U rho U^dagger = (U X)(U X)^dagger.
    const ComplexMatrix x =
        state.basis->eigenvectors * state.weights.cwiseSqrt().cast<linalg::Complex>().asDiagonal();
    const ComplexMatrix ux = u * x;
    const ComplexMatrix vx = v * x;
    return linalg::spectral_norm(ux * ux.adjoint() - vx * vx.adjoint());
}

std::vector<LeakagePoint> leakage_probe(const SpectralBasis& total, const SpectralBasis& term, double delta,
                                        double Lambda, const std::vector<double>& Lambda_prime_grid) {
    if (total.dim() != term.dim()) {
        throw InvalidInput("leakage_probe: dimension mismatch");
    }
    for (std::size_t i = 0; i < Lambda_prime_grid.size(); ++i) {
        if (Lambda_prime_grid[i] < Lambda || (i > 0 && Lambda_prime_grid[i] < Lambda_prime_grid[i - 1])) {
            throw InvalidInput("leakage_probe: Lambda' grid must be ascending and >= Lambda");
        }
    }
    const ComplexMatrix low = isometry_below(total, EnergyWindow{Lambda, std::nullopt, kInclusionTolerance});
    const ComplexMatrix evolved = linalg::expm_hermitian(term, delta) * low;
    std::vector<LeakagePoint> out;
    out.reserve(Lambda_prime_grid.size());
    for (double lp : Lambda_prime_grid) {
        const ComplexMatrix high = isometry_above(total, lp);
        double value = 0.0;
        if (high.cols() > 0 && low.cols() > 0) {
            value = linalg::spectral_norm(high.adjoint() * evolved);
        }
        out.push_back({lp, value});
    }
    return out;
}

}  // namespace lowtrot::lowenergy
