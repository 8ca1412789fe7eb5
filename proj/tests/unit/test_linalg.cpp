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
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lowtrot/errors.hpp"
#include "lowtrot/formulas.hpp"
#include "lowtrot/linalg.hpp"
#include "lowtrot/models.hpp"
#include "testutil.hpp"

using namespace lowtrot;
using namespace lowtrot::linalg;
using testutil::random_hermitian;
using testutil::random_matrix;
using testutil::random_unitary;

namespace {

ComplexMatrix pauli_x() {
    ComplexMatrix x(2, 2);
    x << 0, 1, 1, 0;
    return x;
}

ComplexMatrix pauli_z() {
    ComplexMatrix z(2, 2);
    z << 1, 0, 0, -1;
    return z;
}

// Characteristic polynomial det(lambda I - A) by Faddeev-LeVerrier;
// coefficients c[0..n] of lambda^n .. lambda^0.
std::vector<Complex> faddeev_leverrier(const ComplexMatrix& a) {
    const auto n = a.rows();
    std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
    c[0] = 1.0;
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    for (Index k = 1; k <= n; ++k) {
        m = a * m + c[static_cast<std::size_t>(k - 1)] * ComplexMatrix::Identity(n, n);
        c[static_cast<std::size_t>(k)] = -(a * m).trace() / static_cast<double>(k);
    }
    return c;
}

// Coefficients of prod_i (lambda - roots_i).
std::vector<Complex> poly_from_roots(const RealVector& roots) {
    std::vector<Complex> c{1.0};
    for (Index i = 0; i < roots.size(); ++i) {
        std::vector<Complex> next(c.size() + 1, 0.0);
        for (std::size_t j = 0; j < c.size(); ++j) {
            next[j] += c[j];
            next[j + 1] -= roots(i) * c[j];
        }
        c = next;
    }
    return c;
}

ComplexMatrix taylor_expm(const ComplexMatrix& h, double s, int terms) {
    const ComplexMatrix a = Complex(0.0, -s) * h;
    ComplexMatrix sum = ComplexMatrix::Identity(h.rows(), h.cols());
    ComplexMatrix term = sum;
    for (int k = 1; k < terms; ++k) {
        term = term * a / static_cast<double>(k);
        sum += term;
    }
    return sum;
}

}  // namespace

TEST(Eigh, PauliZ) {
    const auto b = eigh(pauli_z());
    EXPECT_NEAR(b.eigenvalues(0), -1.0, 1e-14);
    EXPECT_NEAR(b.eigenvalues(1), 1.0, 1e-14);
}

TEST(Eigh, IdentityHasUnitEigenvaluesAndBasis) {
    const auto b = eigh(identity(2));
    EXPECT_NEAR(b.eigenvalues(0), 1.0, 1e-14);
    EXPECT_NEAR(b.eigenvalues(1), 1.0, 1e-14);
    EXPECT_LT((b.eigenvectors.cwiseAbs() - ComplexMatrix::Identity(2, 2).cwiseAbs()).norm(), 1e-14);
}

TEST(Eigh, XxMatchesCharacteristicPolynomial) {
    const ComplexMatrix xx = kron(pauli_x(), pauli_x());
    const auto b = eigh(xx);
    const RealVector expected = (RealVector(4) << -1, -1, 1, 1).finished();
    EXPECT_LT((b.eigenvalues - expected).cwiseAbs().maxCoeff(), 1e-12);
    const auto oracle = faddeev_leverrier(xx);
    const auto from_eigs = poly_from_roots(b.eigenvalues);
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        EXPECT_LT(std::abs(oracle[i] - from_eigs[i]), 1e-12) << "coefficient " << i;
    }
}

TEST(Eigh, RandomHermitianCharacteristicPolynomial) {
    RngStream rng(11);
    const ComplexMatrix h = random_hermitian(6, rng);
    const auto oracle = faddeev_leverrier(h);
    const auto from_eigs = poly_from_roots(eigh(h).eigenvalues);
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        EXPECT_LT(std::abs(oracle[i] - from_eigs[i]), 1e-9 * (1.0 + std::abs(oracle[i])));
    }
}

TEST(Eigh, ReconstructsAcrossSizesAndRoutes) {
    RngStream rng(12);
    for (int dim : {3, 64, 300}) {
        const ComplexMatrix h = random_hermitian(dim, rng);
        const ComplexMatrix real_h = h.real().cast<Complex>();
        for (const auto& m : {h, real_h}) {
            const auto b = eigh(m);
            const ComplexMatrix rec = b.eigenvectors * b.eigenvalues.cast<Complex>().asDiagonal() *
                                      b.eigenvectors.adjoint();
            EXPECT_LT((rec - m).cwiseAbs().maxCoeff(), 1e-10 * dim) << "dim " << dim;
            EXPECT_LT(unitarity_defect(b.eigenvectors), 1e-10);
            EXPECT_TRUE(std::is_sorted(b.eigenvalues.begin(), b.eigenvalues.end()));
        }
    }
}

TEST(Eigh, RejectsBadInput) {
    ComplexMatrix bad = pauli_x();
    bad(0, 1) += 1e-6;
    EXPECT_THROW(eigh(bad), InvalidInput);
    EXPECT_THROW(eigh(ComplexMatrix::Zero(2, 3)), InvalidInput);
    ComplexMatrix nan = pauli_z();
    nan(0, 0) = std::nan("");
    EXPECT_THROW(eigh(nan), InvalidInput);
}

TEST(Expm, ZeroTimeIsIdentity) {
    RngStream rng(13);
    const auto b = eigh(random_hermitian(5, rng));
    EXPECT_LT((expm_hermitian(b, 0.0) - identity(5)).norm(), 1e-14);
    EXPECT_EQ(expm_hermitian_minus_identity(b, 0.0).norm(), 0.0);
}

TEST(Expm, DiagonalCase) {
    const ComplexMatrix u = expm_hermitian(eigh(pauli_z()), std::numbers::pi / 2);
    EXPECT_LT(std::abs(u(0, 0) - Complex(0, -1)), 1e-14);
    EXPECT_LT(std::abs(u(1, 1) - Complex(0, 1)), 1e-14);
    EXPECT_LT(std::abs(u(0, 1)), 1e-14);
}

TEST(Expm, MatchesTaylorSeries) {
    RngStream rng(14);
    const ComplexMatrix h = random_hermitian(8, rng);
    const ComplexMatrix oracle = taylor_expm(h, 0.3, 30);
    EXPECT_LT(spectral_norm(expm_hermitian(eigh(h), 0.3) - oracle), 1e-10);
}

TEST(Expm, OffsetFormKeepsTinySteps) {
    RngStream rng(15);
    const ComplexMatrix h = random_hermitian(6, rng);
    const auto b = eigh(h);
    const double s = 1e-12;
    const ComplexMatrix offset = expm_hermitian_minus_identity(b, s);
    // First-order term -i s H dominates; relative error is O(s).
    EXPECT_LT(spectral_norm(offset - Complex(0, -s) * h) / (s * spectral_norm(h)), 1e-9);
}

TEST(Expm, UnitarityAndGroupLaw) {
    RngStream rng(16);
    for (int trial = 0; trial < 5; ++trial) {
        const auto b = eigh(random_hermitian(10, rng));
        const double s1 = rng.normal();
        const double s2 = rng.normal();
        const ComplexMatrix u1 = expm_hermitian(b, s1);
        EXPECT_LT(unitarity_defect(u1), 1e-10);
        EXPECT_LT(spectral_norm(u1 * expm_hermitian(b, s2) - expm_hermitian(b, s1 + s2)), 1e-10);
    }
}

TEST(SpectralNorm, TrivialValues) {
    for (int dim : {1, 2, 7}) {
        EXPECT_NEAR(spectral_norm(identity(dim)), 1.0, 1e-14);
    }
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 3;
    d(1, 1) = -4;
    EXPECT_NEAR(spectral_norm(d), 4.0, 1e-14);
    EXPECT_EQ(spectral_norm(ComplexMatrix::Zero(3, 3)), 0.0);
}

TEST(SpectralNorm, MatchesGramOracleAndPowerRoute) {
    RngStream rng(17);
    const ComplexMatrix a = random_matrix(16, rng);
    const ComplexMatrix gram = a.adjoint() * a;
    const double oracle = std::sqrt(eigh(gram).max_eigenvalue());
    EXPECT_NEAR(spectral_norm(a), oracle, 1e-9 * oracle);
    EXPECT_NEAR(spectral_norm_power(a), oracle, 1e-9 * oracle);
    EXPECT_NEAR(spectral_norm(a), testutil::svd_norm(a), 1e-9 * oracle);
}

TEST(SpectralNorm, RectangularOperands) {
    RngStream rng(18);
    const ComplexMatrix a = random_matrix(12, rng).leftCols(5);
    EXPECT_NEAR(spectral_norm(a), testutil::svd_norm(a), 1e-10 * testutil::svd_norm(a));
    EXPECT_NEAR(spectral_norm(a.adjoint()), testutil::svd_norm(a), 1e-10 * testutil::svd_norm(a));
}

TEST(SpectralNorm, KrylovMatchesGramRoute) {
    RngStream rng(21);
    const ComplexMatrix square = random_matrix(300, rng);
    const ComplexMatrix tall = random_matrix(200, rng).leftCols(120);
    for (const ComplexMatrix& a : {square, tall, ComplexMatrix(tall.adjoint())}) {
        const auto k = spectral_norm_krylov(a);
        ASSERT_TRUE(k.has_value());
        EXPECT_NEAR(*k, spectral_norm(a), 1e-9 * spectral_norm(a));
    }
}

TEST(SpectralNorm, KrylovHandlesDegenerateAndClusteredTops) {
    RngStream rng(22);
    const ComplexMatrix q = testutil::random_unitary(200, rng);
    linalg::RealVector s = linalg::RealVector::LinSpaced(200, 0.0, 1.0);
    s(199) = s(198) = s(197) = 2.0;  // threefold top
    s(196) = 2.0 - 1e-7;             // nearly touching
    const ComplexMatrix a = q * s.cast<Complex>().asDiagonal() * q.adjoint();
    const auto k = spectral_norm_krylov(a);
    ASSERT_TRUE(k.has_value());
    EXPECT_NEAR(*k, 2.0, 1e-9 * 2.0);
}

TEST(SpectralNorm, KrylovOnPropagatorDifference) {
    const auto m = models::heisenberg_ladder(4);
    const auto bases = formulas::term_bases(m);
    const auto u = formulas::trotter_evolution(bases, 2, 0.5, 3);
    const auto v = Propagator::exact(eigh(m.total()), 0.5);
    const ComplexMatrix diff = u.offset() - v.offset();
    const auto k = spectral_norm_krylov(diff);
    ASSERT_TRUE(k.has_value());
    EXPECT_NEAR(*k, spectral_norm(diff), 1e-9 * spectral_norm(diff));
}

TEST(SpectralNorm, LargeOperandsUseKrylovAccurately) {
    // ||A (x) B|| = ||A|| ||B||, with the factors small enough for the dense route.
    RngStream rng(23);
    const ComplexMatrix a = random_matrix(64, rng);
    const ComplexMatrix b = random_matrix(32, rng);
    const ComplexMatrix big = kron(a, b);
    ASSERT_GE(big.rows(), linalg::kKrylovMinDimension);
    const double oracle = spectral_norm(a) * spectral_norm(b);
    EXPECT_NEAR(spectral_norm(big), oracle, 1e-9 * oracle);
}

TEST(SpectralNorm, Submultiplicative) {
    RngStream rng(19);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix a = random_matrix(8, rng);
        const ComplexMatrix b = random_matrix(8, rng);
        EXPECT_LE(spectral_norm(a * b), spectral_norm(a) * spectral_norm(b) + 1e-9);
    }
}

TEST(ProjectedDistance, TrivialProjectors) {
    RngStream rng(20);
    const ComplexMatrix u = random_unitary(6, rng);
    const ComplexMatrix v = random_unitary(6, rng);
    EXPECT_EQ(projected_distance(u, u, identity(6)), 0.0);
    EXPECT_NEAR(projected_distance(u, v, identity(6)), spectral_norm(u - v), 1e-12);
    EXPECT_EQ(projected_distance(u, v, ComplexMatrix::Zero(6, 6)), 0.0);
}

TEST(ProjectedDistance, MonotoneUnderProjection) {
    RngStream rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix u = random_unitary(8, rng);
        const ComplexMatrix v = random_unitary(8, rng);
        const ComplexMatrix q = random_unitary(8, rng).leftCols(1 + trial % 7);
        const ComplexMatrix p = q * q.adjoint();
        const double full = projected_distance(u, v, identity(8));
        EXPECT_LE(projected_distance(u, v, p), full + 1e-12);
        EXPECT_NEAR(projected_distance(u, v, p), isometry_norm(u - v, q), 1e-10);
    }
}

TEST(Kron, MostSignificantFactorFirst) {
    ComplexMatrix a(2, 2);
    a << 1, 2, 3, 4;
    const ComplexMatrix k = kron(a, identity(2));
    EXPECT_EQ(k(2, 0), Complex(3));
    EXPECT_EQ(k(0, 2), Complex(2));
    EXPECT_EQ(k(1, 0), Complex(0));
}

TEST(Propagator, OffsetRoundTrip) {
    RngStream rng(22);
    const ComplexMatrix u = random_unitary(5, rng);
    const auto p = Propagator::from_matrix(u);
    EXPECT_LT((p.matrix() - u).norm(), 1e-14);
    EXPECT_LT((p.offset() - (u - identity(5))).norm(), 1e-14);
    EXPECT_EQ(Propagator::identity(5).offset().norm(), 0.0);
}

TEST(Propagator, CompositionOrderAndPower) {
    RngStream rng(23);
    const ComplexMatrix a = random_unitary(4, rng);
    const ComplexMatrix b = random_unitary(4, rng);
    auto p = Propagator::from_matrix(a);
    p.then(Propagator::from_matrix(b));
    EXPECT_LT((p.matrix() - b * a).norm(), 1e-13);
    EXPECT_LT(((Propagator::from_matrix(b) * Propagator::from_matrix(a)).matrix() - b * a).norm(), 1e-13);
    ComplexMatrix a7 = identity(4);
    for (int i = 0; i < 7; ++i) {
        a7 = a * a7;
    }
    EXPECT_LT((Propagator::from_matrix(a).power(7).matrix() - a7).norm(), 1e-12);
    EXPECT_LT((Propagator::from_matrix(a).power(0).matrix() - identity(4)).norm(), 1e-15);
}

TEST(Propagator, ConjugationAndExact) {
    RngStream rng(24);
    const ComplexMatrix h = random_hermitian(6, rng);
    const ComplexMatrix c = random_unitary(6, rng);
    const auto b = eigh(h);
    const auto step = Propagator::exact(b, 0.4);
    EXPECT_LT((step.matrix() - expm_hermitian(b, 0.4)).norm(), 1e-13);
    const ComplexMatrix rotated = expm_hermitian(eigh(c.adjoint() * h * c), 0.4);
    EXPECT_LT(spectral_norm(step.conjugated_by(c).matrix() - rotated), 1e-10);
}

TEST(Propagator, DistancePreservesTinyDifferences) {
    RngStream rng(25);
    const auto b = eigh(random_hermitian(6, rng));
    const auto a = Propagator::exact(b, 1e-9);
    const auto c = Propagator::exact(b, 1.1e-9);
    const double expected = 1e-10 * (b.eigenvalues.cwiseAbs().maxCoeff());
    EXPECT_NEAR(distance(a, c), expected, 1e-6 * expected);
}
