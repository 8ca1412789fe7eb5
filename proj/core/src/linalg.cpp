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

#include "lowtrot/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "lowtrot/errors.hpp"
#include "lowtrot/rng.hpp"

namespace lowtrot::linalg {
namespace {

void check_square(const ComplexMatrix& a, const char* what) {
    if (a.rows() != a.cols() || a.rows() < 1) {
        std::ostringstream msg;
        msg << what << ": expected a non-empty square matrix, got " << a.rows() << "x" << a.cols();
        throw InvalidInput(msg.str());
    }
}

void check_hermitian_input(const ComplexMatrix& h) {
    check_square(h, "eigh");
    if (h.rows() > kMaxDimension) {
        throw InvalidInput("eigh: dimension " + std::to_string(h.rows()) + " exceeds the supported maximum " +
                           std::to_string(kMaxDimension));
    }
    if (!all_finite(h)) {
        throw InvalidInput("eigh: matrix has non-finite entries");
    }
    const double asym = max_asymmetry(h);
    if (asym > kHermitianTolerance) {
        std::ostringstream msg;
        msg << "eigh: matrix is not Hermitian (max |H - H^dagger| = " << asym << ", tolerance "
            << kHermitianTolerance << ")";
        throw InvalidInput(msg.str());
    }
}

bool is_real(const ComplexMatrix& h) {
    return (h.imag().array() == 0.0).all();
}

void check_info(lapack_int info, const char* routine) {
    if (info < 0) {
        throw NumericalFailure(std::string(routine) + ": illegal argument " + std::to_string(-info));
    }
    if (info > 0) {
        throw NumericalFailure(std::string(routine) + ": eigensolver failed to converge (info = " +
                               std::to_string(info) + ")");
    }
}

// Symmetrized copy; the solvers only read one triangle, so averaging keeps
// rounding-level asymmetry from biasing the result.
ComplexMatrix symmetrized(const ComplexMatrix& h) {
    return 0.5 * (h + h.adjoint());
}

SpectralBasis solve(const ComplexMatrix& h, bool want_vectors) {
    check_hermitian_input(h);
    const auto n = static_cast<lapack_int>(h.rows());
    const char jobz = want_vectors ? 'V' : 'N';
    SpectralBasis out;
    out.eigenvalues.resize(n);
    if (is_real(h)) {
        Eigen::MatrixXd a = symmetrized(h).real();
        check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, jobz, 'L', n, a.data(), n, out.eigenvalues.data()),
                   "dsyevd");
        if (want_vectors) {
            out.eigenvectors = a.cast<Complex>();
        }
    } else {
        ComplexMatrix a = symmetrized(h);
        check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, jobz, 'L', n, a.data(), n, out.eigenvalues.data()),
                   "zheevd");
        if (want_vectors) {
            out.eigenvectors = std::move(a);
        }
    }
    if (!out.eigenvalues.allFinite()) {
        throw NumericalFailure("eigh: non-finite eigenvalues");
    }
    return out;
}

// Largest eigenvalue of a Hermitian PSD Gram matrix.
double largest_gram_eigenvalue(const ComplexMatrix& gram) {
    const auto n = static_cast<lapack_int>(gram.rows());
    if (n == 1) {
        return std::max(0.0, gram(0, 0).real());
    }
    lapack_int found = 0;
    // The drivers use the full eigenvalue array as scratch even when a single
    // eigenvalue is requested.
    std::vector<double> w(static_cast<std::size_t>(n));
    if (is_real(gram)) {
        Eigen::MatrixXd a = symmetrized(gram).real();
        Eigen::MatrixXd z(1, 1);
        std::vector<lapack_int> support(2);
        check_info(LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'N', 'I', 'L', n, a.data(), n, 0.0, 0.0, n, n, 0.0,
                                  &found, w.data(), z.data(), 1, support.data()),
                   "dsyevr");
    } else {
        ComplexMatrix a = symmetrized(gram);
        ComplexMatrix z(1, 1);
        std::vector<lapack_int> support(2);
        check_info(LAPACKE_zheevr(LAPACK_COL_MAJOR, 'N', 'I', 'L', n, a.data(), n, 0.0, 0.0, n, n, 0.0,
                                  &found, w.data(), z.data(), 1, support.data()),
                   "zheevr");
    }
    if (found != 1 || !std::isfinite(w[0])) {
        throw NumericalFailure("spectral_norm: Gram eigenvalue extraction failed");
    }
    return std::max(0.0, w[0]);
}

ComplexMatrix phase_diagonal_times_adjoint(const SpectralBasis& basis, const ComplexVector& diag) {
    return basis.eigenvectors * diag.asDiagonal() * basis.eigenvectors.adjoint();
}

}  // namespace

ComplexMatrix identity(Index dim) {
    return ComplexMatrix::Identity(dim, dim);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

double max_asymmetry(const ComplexMatrix& a) {
    check_square(a, "max_asymmetry");
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool all_finite(const ComplexMatrix& a) {
    return a.allFinite();
}

SpectralBasis eigh(const ComplexMatrix& h) {
    return solve(h, true);
}

RealVector eigvalsh(const ComplexMatrix& h) {
    return solve(h, false).eigenvalues;
}

ComplexMatrix expm_hermitian(const SpectralBasis& basis, double s) {
    ComplexVector phases(basis.dim());
    for (Index i = 0; i < basis.dim(); ++i) {
        phases(i) = std::polar(1.0, -s * basis.eigenvalues(i));
    }
    return phase_diagonal_times_adjoint(basis, phases);
}

ComplexMatrix expm_hermitian_minus_identity(const SpectralBasis& basis, double s) {
    ComplexVector diag(basis.dim());
    for (Index i = 0; i < basis.dim(); ++i) {
        const double x = s * basis.eigenvalues(i);
        // exp(-ix) - 1 = -2i sin(x/2) exp(-ix/2)
        diag(i) = Complex(0.0, -2.0 * std::sin(0.5 * x)) * std::polar(1.0, -0.5 * x);
    }
    return phase_diagonal_times_adjoint(basis, diag);
}

double spectral_norm(const ComplexMatrix& a) {
    if (a.size() == 0) {
        return 0.0;
    }
    if (!all_finite(a)) {
        throw InvalidInput("spectral_norm: matrix has non-finite entries");
    }
    // Rescale so the Gram matrix neither overflows nor underflows.
    const double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
        return 0.0;
    }
    if (std::min(a.rows(), a.cols()) >= kKrylovMinDimension) {
        if (const auto krylov = spectral_norm_krylov(a)) {
            return *krylov;
        }
    }
    const ComplexMatrix b = a / scale;
    const ComplexMatrix gram = b.cols() <= b.rows() ? ComplexMatrix(b.adjoint() * b) : ComplexMatrix(b * b.adjoint());
    return scale * std::sqrt(largest_gram_eigenvalue(gram));
}

std::optional<double> spectral_norm_krylov(const ComplexMatrix& a, int max_steps, double relative_tolerance) {
    if (a.size() == 0) {
        return 0.0;
    }
    const double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
        return 0.0;
    }
    const ComplexMatrix b = a / scale;
    const bool right = b.cols() <= b.rows();
    const Index n = right ? b.cols() : b.rows();
    auto apply = [&](const ComplexVector& x) -> ComplexVector {
        if (right) {
            return b.adjoint() * (b * x);
        }
        return b * (b.adjoint() * x);
    };
    const int steps = static_cast<int>(std::min<Index>(n, max_steps));
    ComplexMatrix q(n, steps);
    RngStream rng(0x6C616E637A6F73ULL);
    for (Index i = 0; i < n; ++i) {
        q(i, 0) = Complex(rng.normal(), rng.normal());
    }
    q.col(0).normalize();
    std::vector<double> alpha;
    std::vector<double> beta;
    for (int j = 0; j < steps; ++j) {
        ComplexVector w = apply(q.col(j));
        alpha.push_back(q.col(j).dot(w).real());
        // Full reorthogonalisation, twice.
        for (int pass = 0; pass < 2; ++pass) {
            w -= q.leftCols(j + 1) * (q.leftCols(j + 1).adjoint() * w);
        }
        const double next = w.norm();
        const bool last = j + 1 == steps;
        if (j % 5 == 4 || last || next <= 1e-14 * alpha.front()) {
            const auto m = static_cast<Index>(alpha.size());
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
            for (Index i = 0; i < m; ++i) {
                t(i, i) = alpha[static_cast<std::size_t>(i)];
                if (i + 1 < m) {
                    t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
                }
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(t);
            const double theta = eig.eigenvalues()(m - 1);
            const double residual = next * std::abs(eig.eigenvectors()(m - 1, m - 1));
            if (theta > 0.0 && residual <= relative_tolerance * theta) {
                return scale * std::sqrt(theta);
            }
            if (next <= 1e-14 * std::max(theta, 1e-300)) {
                return scale * std::sqrt(std::max(theta, 0.0));
            }
        }
        if (last) {
            break;
        }
        beta.push_back(next);
        q.col(j + 1) = w / next;
    }
    return std::nullopt;
}

double spectral_norm_power(const ComplexMatrix& a, int max_iterations, double relative_tolerance) {
    if (a.size() == 0) {
        return 0.0;
    }
    const double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
        return 0.0;
    }
    const ComplexMatrix b = a / scale;
    // Deterministic start vector with no special alignment.
    ComplexVector x(b.cols());
    for (Index i = 0; i < x.size(); ++i) {
        x(i) = Complex(1.0 + 0.1 * std::sin(1.0 + static_cast<double>(i)),
                       0.05 * std::cos(2.0 + static_cast<double>(i)));
    }
    x.normalize();
    double estimate = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
        ComplexVector y = b.adjoint() * (b * x);
        const double next = y.norm();
        if (next == 0.0) {
            return 0.0;
        }
        x = y / next;
        if (it > 0 && std::abs(next - estimate) <= relative_tolerance * next) {
            estimate = next;
            break;
        }
        estimate = next;
    }
    return scale * std::sqrt(estimate);
}

double projected_distance(const ComplexMatrix& u, const ComplexMatrix& v, const ComplexMatrix& projector) {
    if (u.rows() != v.rows() || u.cols() != v.cols() || projector.rows() != u.cols() ||
        projector.cols() != u.cols()) {
        throw InvalidInput("projected_distance: non-conformable dimensions");
    }
    const double herm = max_asymmetry(projector);
    const double idem = (projector * projector - projector).cwiseAbs().maxCoeff();
    if (herm > 1e-9 || idem > 1e-9) {
        std::ostringstream msg;
        msg << "projected_distance: P is not a Hermitian idempotent (asymmetry " << herm << ", |P^2 - P| "
            << idem << ")";
        throw InvalidInput(msg.str());
    }
    return spectral_norm((u - v) * projector);
}

double isometry_norm(const ComplexMatrix& a, const ComplexMatrix& isometry) {
    if (isometry.rows() != a.cols()) {
        throw InvalidInput("isometry_norm: non-conformable dimensions");
    }
    if (isometry.cols() == 0) {
        return 0.0;
    }
    return spectral_norm(a * isometry);
}

double unitarity_defect(const ComplexMatrix& u) {
    check_square(u, "unitarity_defect");
    return spectral_norm(u * u.adjoint() - identity(u.rows()));
}

Propagator Propagator::identity(Index dim) {
    return Propagator(ComplexMatrix::Zero(dim, dim));
}

Propagator Propagator::from_offset(ComplexMatrix offset) {
    check_square(offset, "Propagator");
    return Propagator(std::move(offset));
}

Propagator Propagator::from_matrix(const ComplexMatrix& u) {
    check_square(u, "Propagator");
    return Propagator(u - linalg::identity(u.rows()));
}

Propagator Propagator::exact(const SpectralBasis& basis, double s) {
    return Propagator(expm_hermitian_minus_identity(basis, s));
}

ComplexMatrix Propagator::matrix() const {
    return offset_ + linalg::identity(dim());
}

void Propagator::then(const Propagator& step) {
    if (step.dim() != dim()) {
        throw InvalidInput("Propagator::then: dimension mismatch");
    }
    ComplexMatrix product = step.offset_ * offset_;
    offset_ += step.offset_;
    offset_ += product;
}

Propagator Propagator::power(std::int64_t r) const {
    if (r < 0) {
        throw InvalidInput("Propagator::power: negative exponent");
    }
    Propagator result = identity(dim());
    Propagator base = *this;
    while (r > 0) {
        if (r & 1) {
            result.then(base);
        }
        r >>= 1;
        if (r > 0) {
            base.then(base);
        }
    }
    return result;
}

Propagator Propagator::conjugated_by(const ComplexMatrix& c) const {
    return Propagator(c.adjoint() * offset_ * c);
}

Propagator operator*(const Propagator& later, const Propagator& earlier) {
    Propagator out = earlier;
    out.then(later);
    return out;
}

double distance(const Propagator& a, const Propagator& b) {
    if (a.dim() != b.dim()) {
        throw InvalidInput("distance: dimension mismatch");
    }
    return spectral_norm(a.offset() - b.offset());
}

double projected_distance(const Propagator& a, const Propagator& b, const ComplexMatrix& isometry) {
    if (a.dim() != b.dim()) {
        throw InvalidInput("projected_distance: dimension mismatch");
    }
    return isometry_norm(a.offset() - b.offset(), isometry);
}

}  // namespace lowtrot::linalg
