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

#include "lowtrot/lowerbound.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "lowtrot/errors.hpp"
#include "lowtrot/rng.hpp"
#include "lowtrot/runner.hpp"

namespace lowtrot::harness {
namespace {

constexpr double kPopulated = 1e-9;

void accumulate(LowerBoundReport& report, OverlapRow row) {
    report.max_deviation = std::max(report.max_deviation, std::abs(row.overlap - row.predicted));
    report.max_wrong_overlap = std::max(report.max_wrong_overlap, row.wrong_overlap);
    if (row.decoded >= 0 && row.decoded != row.parity) {
        report.all_decoded = false;
    }
    report.rows.push_back(std::move(row));
}

}  // namespace

std::vector<int> parse_bits(const std::string& bits) {
    std::vector<int> out;
    for (char ch : bits) {
        if (ch != '0' && ch != '1') {
            throw InvalidInput("bit string must contain only 0 and 1, got '" + bits + "'");
        }
        out.push_back(ch - '0');
    }
    return out;
}

std::string bits_to_string(const std::vector<int>& bits) {
    std::string s;
    for (int b : bits) {
        s.push_back(static_cast<char>('0' + b));
    }
    return s;
}

OverlapRow parity_overlap(const models::ParityInstance& inst, const linalg::SpectralBasis& basis, double t) {
    const auto& q = basis.eigenvectors;
    // Column of exp(-iHt) at start: Q diag(e^{-iEt}) Q^dagger e_start.
    const linalg::ComplexVector phases =
        (basis.eigenvalues.array() * linalg::Complex(0.0, -t)).exp().matrix().cwiseProduct(
            q.row(inst.start_index).adjoint());
    const linalg::ComplexVector psi = q * phases;

    OverlapRow row;
    row.bits = bits_to_string(inst.bits);
    row.parity = inst.parity;
    row.t = t;
    row.overlap = std::abs(psi(inst.target_index));
    row.predicted = std::pow(std::abs(std::sin(t / 2.0)), inst.D);
    row.wrong_overlap = std::abs(psi(inst.wrong_target_index));
    const double end0 = std::abs(psi(models::parity_index(inst.D, 0, inst.D)));
    const double end1 = std::abs(psi(models::parity_index(inst.D, 1, inst.D)));
    if (std::max(end0, end1) > kPopulated) {
        row.decoded = end1 > end0 ? 1 : 0;
    }
    return row;
}

LowerBoundReport lowerbound_demo(int D, const std::optional<std::vector<int>>& bits, std::vector<double> t_grid) {
    if (D < 1 || D > 10) {
        throw InvalidInput("lowerbound: D must be in 1..10");
    }
    if (bits && static_cast<int>(bits->size()) != D) {
        throw InvalidInput("lowerbound: bit string length differs from D");
    }
    if (t_grid.empty()) {
        t_grid = {std::numbers::pi / 2.0, std::numbers::pi};
    }
    std::vector<std::vector<int>> strings;
    if (bits) {
        strings.push_back(*bits);
    } else {
        for (int x = 0; x < (1 << D); ++x) {
            std::vector<int> s(static_cast<std::size_t>(D));
            for (int j = 0; j < D; ++j) {
                s[static_cast<std::size_t>(j)] = (x >> (D - 1 - j)) & 1;
            }
            strings.push_back(std::move(s));
        }
    }
    LowerBoundReport report;
    report.D = D;
    for (const auto& s : strings) {
        const auto inst = models::parity_hamiltonian(s);
        const auto basis = linalg::eigh(inst.H);
        for (double t : t_grid) {
            accumulate(report, parity_overlap(inst, basis, t));
        }
    }
    return report;
}

LowerBoundReport lowerbound_random(int D, int count, std::uint64_t seed) {
    if (D < 1 || D > 10 || count < 1) {
        throw InvalidInput("lowerbound_random: need D in 1..10 and count >= 1");
    }
    LowerBoundReport report;
    report.D = D;
    for (int i = 0; i < count; ++i) {
        RngStream rng(substream_seed(seed, static_cast<std::uint64_t>(D), static_cast<std::uint64_t>(i)));
        std::vector<int> s(static_cast<std::size_t>(D));
        for (auto& b : s) {
            b = static_cast<int>(rng.uniform_index(2));
        }
        const double t = 2.0 * std::numbers::pi * rng.uniform();
        const auto inst = models::parity_hamiltonian(s);
        accumulate(report, parity_overlap(inst, linalg::eigh(inst.H), t));
    }
    return report;
}

void write_lowerbound_csv(std::ostream& out, const LowerBoundReport& report) {
    out << "D,bits,parity,t,overlap,predicted,wrong_overlap,decoded\n";
    for (const auto& row : report.rows) {
        out << report.D << ',' << row.bits << ',' << row.parity << ',' << format_number(row.t) << ','
            << format_number(row.overlap) << ',' << format_number(row.predicted) << ','
            << format_number(row.wrong_overlap) << ',' << row.decoded << '\n';
    }
}

}  // namespace lowtrot::harness
