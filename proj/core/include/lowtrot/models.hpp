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

#ifndef LOWTROT_MODELS_HPP
#define LOWTROT_MODELS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lowtrot/linalg.hpp"

namespace lowtrot::models {

using linalg::ComplexMatrix;
using linalg::Index;
using linalg::RealVector;

/// Largest qubit count for which dense operators are built.
inline constexpr int kMaxQubits = 12;

/// One physical interaction as recorded by a builder: the sites it touches,
/// its scalar coupling (a unit Heisenberg bond has coupling 1 regardless of
/// how its Pauli parts are split across terms), the term it belongs to, and
/// its operator on those sites (dimension 2^|sites|).
struct Interaction {
    std::vector<int> sites;
    double coupling = 0.0;
    int term = 0;
    ComplexMatrix local;
};

/// k-locality parameters of a decomposed Hamiltonian.
///   k         max qubits per interaction
///   M         max bonds (distinct site sets) inside one term
///   d         max number of terms touching a single qubit
///   J         max spectral norm of a single bond (all interaction parts on
///             the same site set summed)
///   g         max over qubits of the summed |coupling| of bonds touching it
///   lambda_H  sum of term norms, lambda_h the largest term norm
struct LocalityMeta {
    int k = 0;
    int M = 0;
    int d = 0;
    double J = 0.0;
    double g = 0.0;
    double lambda_H = 0.0;
    double lambda_h = 0.0;
};

/// H = sum_l H_l with every stored H_l positive semidefinite. shifts(l) is
/// the raw ground energy E_0l that was subtracted from raw term l.
struct HamiltonianModel {
    std::string id;
    int n = 0;
    std::vector<ComplexMatrix> terms;
    RealVector shifts;
    RealVector term_norms;
    std::vector<Interaction> interactions;

    int num_terms() const { return static_cast<int>(terms.size()); }
    Index dim() const { return terms.empty() ? 0 : terms.front().rows(); }
    ComplexMatrix total() const;
    /// Sum of raw (unshifted) terms.
    ComplexMatrix total_raw() const;
};

/// Assembles a model from raw Hermitian terms: computes each term's ground
/// energy, subtracts it, and records the norms. Interactions are optional
/// metadata used by model_meta.
HamiltonianModel make_model(std::string id, int n, std::vector<ComplexMatrix> raw_terms,
                            std::vector<Interaction> interactions = {});

/// Keeps only the listed terms (in the given order).
HamiltonianModel select_terms(const HamiltonianModel& model, const std::vector<int>& indices);

/// Open Heisenberg chain split by Pauli type: H_1 = -sum XX, H_2 = -sum YY,
/// H_3 = -sum ZZ over nearest neighbours. 2 <= n <= 8.
HamiltonianModel heisenberg_chain(int n);

/// Open 2 x cols Heisenberg ladder. Every bond carries -(XX + YY + ZZ).
/// H_1: horizontal bonds starting in even columns, H_2: horizontal bonds
/// starting in odd columns, H_3: rungs. 2 <= cols <= 6.
HamiltonianModel heisenberg_ladder(int cols);

/// Open rows x cols lattice with every pair coupled by
/// -(XX + YY + ZZ) / dist^alpha. H_1: same-row pairs, H_2: same-column pairs,
/// H_3: all remaining pairs. rows, cols >= 2, rows * cols <= 12, alpha >= 0.
HamiltonianModel power_law_lattice(int rows, int cols, double alpha);

/// Two-track path Hamiltonian whose connectivity encodes the parity of x.
struct ParityInstance {
    int D = 0;
    std::vector<int> bits;
    int parity = 0;
    Index dim = 0;
    ComplexMatrix H;
    Index start_index = 0;
    Index target_index = 0;
    /// (track parity ^ 1, position D): never reachable from start.
    Index wrong_target_index = 0;
};

/// Basis index of (track, position) in a parity instance of length D.
Index parity_index(int D, int track, int position);

/// Builds H = H_2 + (D/2) I on tracks {0,1} x positions {0..D}: position j is
/// coupled to j+1 with weight sqrt((D-j)(j+1))/2, staying on the same track
/// when x_{j+1} = 0 and switching tracks when x_{j+1} = 1. 1 <= D <= 10.
ParityInstance parity_hamiltonian(const std::vector<int>& bits);

/// Parity instance as a single-term model (already PSD).
HamiltonianModel parity_model(const std::vector<int>& bits);

LocalityMeta model_meta(const HamiltonianModel& model);

/// Builds a model from a config identifier: chain:<n>, ladder:2x<cols>,
/// powerlaw:<rows>x<cols>:alpha=<a>, parity:<bits>.
HamiltonianModel build_model(const std::string& id);

/// Qubit count implied by an identifier without building anything (0 for
/// parity ids, which are not qubit systems).
int qubits_for_id(const std::string& id);

/// Operator dimension implied by an identifier without building anything.
Index dimension_for_id(const std::string& id);

/// Adds coeff * (Pauli string) to m. The string has one character per qubit
/// (I, X, Y, Z), qubit 0 being the most significant bit of the basis index.
void add_pauli_string(ComplexMatrix& m, linalg::Complex coeff, const std::string& paulis);

/// Pauli operator on n qubits, e.g. pauli_operator("XIZ").
ComplexMatrix pauli_operator(const std::string& paulis);

/// u tensored n times.
ComplexMatrix tensor_power(const ComplexMatrix& u, int n);

}  // namespace lowtrot::models

#endif  // LOWTROT_MODELS_HPP
