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
// Runtime guard for the BLAS backend.
//
// Some OpenBLAS builds pick a kernel at load time from CPUID and have shipped
// mis-compiled kernels for specific cores. The check below compares a
// medium-size product against plain loops; executables call
// ensure_reliable_blas() first thing so a bad kernel is swapped before any
// numerics run.

#pragma once

#include <string>

namespace lowtrot::blas {

/// Name of the kernel family the BLAS library selected, or "unknown".
std::string kernel_name();

/// Largest relative deviation between a BLAS-backed product and a loop
/// reference, over real and complex operands of dimension `dim`.
double gemm_deviation(int dim = 256);

/// True when gemm_deviation() is at rounding level.
bool gemm_reliable();

/// Verifies the BLAS kernels. If they are wrong and OPENBLAS_CORETYPE is not
/// already set, sets it to a known-good family and re-executes the current
/// process image with the same argv (does not return on success). Throws
/// NumericalFailure if the kernels are wrong and no override helps.
void ensure_reliable_blas(char** argv);

/// Restricts the BLAS library to one thread; the harness parallelises over
/// grid points instead.
void pin_single_thread();

}  // namespace lowtrot::blas
