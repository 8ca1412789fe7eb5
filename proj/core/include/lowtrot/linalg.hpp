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

#ifndef LOWTROT_LINALG_HPP
#define LOWTROT_LINALG_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>

namespace lowtrot::linalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Largest operator dimension any kernel accepts (12 qubits).
inline constexpr Index kMaxDimension = 4096;
/// Absolute tolerance on max |H - H^dagger| entries accepted by eigh.
inline constexpr double kHermitianTolerance = 1e-10;

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
/// Hermitian operator.
struct SpectralBasis {
    RealVector eigenvalues;
    ComplexMatrix eigenvectors;

    Index dim() const { return eigenvalues.size(); }
    double min_eigenvalue() const { return eigenvalues(0); }
    double max_eigenvalue() const { return eigenvalues(eigenvalues.size() - 1); }
};

ComplexMatrix identity(Index dim);

/// Kronecker product a (x) b with a acting on the more significant index.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Max entrywise |A - A^dagger|; A must be square.
double max_asymmetry(const ComplexMatrix& a);

/// True when every entry of a is finite.
bool all_finite(const ComplexMatrix& a);

/// Hermitian eigendecomposition. Rejects non-square, non-finite,
/// non-Hermitian (max asymmetry reported in the message) or oversize input
/// with InvalidInput; solver non-convergence raises NumericalFailure.
/// Real symmetric input is routed through the real solver.
SpectralBasis eigh(const ComplexMatrix& h);

/// Eigenvalues only, same validation as eigh.
RealVector eigvalsh(const ComplexMatrix& h);

/// exp(-i s H) = Q diag(exp(-i s E)) Q^dagger.
ComplexMatrix expm_hermitian(const SpectralBasis& basis, double s);

/// exp(-i s H) - I, evaluated without cancellation: the diagonal factor is
/// -2i sin(sE/2) exp(-i sE/2), accurate even when sE is tiny.
ComplexMatrix expm_hermitian_minus_identity(const SpectralBasis& basis, double s);

/// Operands at least this large on both sides go through the Krylov path
/// first; a dense Gram eigensolve at 4096 costs minutes.
inline constexpr Index kKrylovMinDimension = 2048;

/// Largest singular value via the largest eigenvalue of the Gram matrix.
double spectral_norm(const ComplexMatrix& a);

/// Largest singular value via Lanczos on the Gram operator with full
/// reorthogonalisation. Stops once the top Ritz residual is below
/// relative_tolerance times the Ritz value; nullopt if that never happens.
std::optional<double> spectral_norm_krylov(const ComplexMatrix& a, int max_steps = 300,
                                           double relative_tolerance = 1e-12);

/// Largest singular value via power iteration on A^dagger A. Faster for big
/// matrices; tests pin it to the Gram route.
double spectral_norm_power(const ComplexMatrix& a, int max_iterations = 500,
                           double relative_tolerance = 1e-13);

/// ||(U - V) P||; P must be a Hermitian idempotent to 1e-9 (InvalidInput
/// otherwise).
double projected_distance(const ComplexMatrix& u, const ComplexMatrix& v,
                          const ComplexMatrix& projector);

/// ||A Q|| for an isometry Q (orthonormal columns). Equals ||A Q Q^dagger||
/// but only forms a cols(Q)-sized Gram matrix. Zero columns give 0.
double isometry_norm(const ComplexMatrix& a, const ComplexMatrix& isometry);

/// ||U U^dagger - I||.
double unitarity_defect(const ComplexMatrix& u);

/// A unitary (or contraction) stored as its offset from the identity,
/// U = I + D. Products and powers are formed on D directly,
/// (I + A)(I + B) = I + A + B + AB, so the difference of two nearby
/// evolutions keeps full relative precision even when ||U - V|| is far below
/// machine epsilon relative to ||U|| = 1.
class Propagator {
   public:
    Propagator() = default;

    static Propagator identity(Index dim);
    static Propagator from_offset(ComplexMatrix offset);
    static Propagator from_matrix(const ComplexMatrix& u);
    /// exp(-i s H) for the operator described by basis.
    static Propagator exact(const SpectralBasis& basis, double s);

    Index dim() const { return offset_.rows(); }
    const ComplexMatrix& offset() const { return offset_; }
    ComplexMatrix matrix() const;

    /// Applies step after the current evolution: this <- step * this.
    void then(const Propagator& step);

    /// this^r by binary powering; r = 0 gives the identity.
    Propagator power(std::int64_t r) const;

    /// C^dagger (this) C for unitary C.
    Propagator conjugated_by(const ComplexMatrix& c) const;

    /// later * earlier.
    friend Propagator operator*(const Propagator& later, const Propagator& earlier);

   private:
    explicit Propagator(ComplexMatrix offset) : offset_(std::move(offset)) {}
    ComplexMatrix offset_;
};

/// ||A - B|| for two propagators of equal dimension.
double distance(const Propagator& a, const Propagator& b);

/// ||(A - B) Q|| for an isometry Q onto the subspace of interest.
double projected_distance(const Propagator& a, const Propagator& b,
                          const ComplexMatrix& isometry);

}  // namespace lowtrot::linalg

#endif  // LOWTROT_LINALG_HPP
