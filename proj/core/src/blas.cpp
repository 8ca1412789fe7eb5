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
#include "lowtrot/blas.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdlib>
#include <random>
#include <string>
#include <unistd.h>

#include "lowtrot/errors.hpp"

extern "C" {
char* openblas_get_corename(void);
void openblas_set_num_threads(int num_threads);
}

namespace lowtrot::blas {
namespace {

constexpr double kTolerance = 1e-12;
constexpr const char* kCoreTypeVar = "OPENBLAS_CORETYPE";

template <class Matrix>
double deviation(const Matrix& a, const Matrix& b) {
    const Matrix c = a * b;
    using Scalar = typename Matrix::Scalar;
    double worst = 0.0;
    double scale = 0.0;
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            Scalar ref{};
            for (Eigen::Index k = 0; k < a.cols(); ++k) {
                ref += a(i, k) * b(k, j);
            }
            worst = std::max(worst, std::abs(ref - c(i, j)));
            scale = std::max(scale, std::abs(ref));
        }
    }
    return worst / std::max(scale, 1.0);
}

}  // namespace

std::string kernel_name() {
    const char* name = openblas_get_corename();
    return name != nullptr ? std::string(name) : std::string("unknown");
}

double gemm_deviation(int dim) {
    std::mt19937_64 gen(7);
    std::normal_distribution<double> normal;
    auto draw = [&] { return normal(gen); };
    const Eigen::MatrixXd ra = Eigen::MatrixXd::NullaryExpr(dim, dim, draw);
    const Eigen::MatrixXd rb = Eigen::MatrixXd::NullaryExpr(dim, dim, draw);
    auto cdraw = [&] { return std::complex<double>(normal(gen), normal(gen)); };
    const Eigen::MatrixXcd ca = Eigen::MatrixXcd::NullaryExpr(dim, dim, cdraw);
    const Eigen::MatrixXcd cb = Eigen::MatrixXcd::NullaryExpr(dim, dim, cdraw);
    return std::max(deviation(ra, rb), deviation(ca, cb));
}

bool gemm_reliable() {
    return gemm_deviation() < kTolerance;
}

void ensure_reliable_blas(char** argv) {
    if (gemm_reliable()) {
        return;
    }
    const std::string kernel = kernel_name();
    if (std::getenv(kCoreTypeVar) == nullptr) {
        // AVX-512 parts fall back to the SkylakeX kernels, everything else to
        // Haswell.
        const bool avx512 = kernel == "Cooperlake" || kernel == "SapphireRapids";
        ::setenv(kCoreTypeVar, avx512 ? "SkylakeX" : "Haswell", 1);
        ::execv("/proc/self/exe", argv);
    }
    throw NumericalFailure("BLAS kernel '" + kernel + "' produces wrong matrix products; set " + kCoreTypeVar +
                           " to a different kernel family");
}

void pin_single_thread() {
    openblas_set_num_threads(1);
}

}  // namespace lowtrot::blas
