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

#include "lowtrot/symmetry.hpp"

#include <cmath>
#include <utility>

#include <Eigen/QR>

#include "lowtrot/errors.hpp"
#include "lowtrot/formulas.hpp"

namespace lowtrot::symmetry {
namespace {

using linalg::Complex;

void check_schedule_args(int n, std::int64_t r) {
    if (n < 1 || n > models::kMaxQubits) {
        throw InvalidInput("symmetry schedule: n must be in 1.." + std::to_string(models::kMaxQubits));
    }
    if (r < 1) {
        throw InvalidInput("symmetry schedule: r must be >= 1");
    }
}

ComplexMatrix hadamard() {
    ComplexMatrix h(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    h << s, s, s, -s;
    return h;
}

bool same_local(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.rows() == b.rows() && a == b;
}

}  // namespace

std::string scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::standard:
            return "standard";
        case Scheme::random_st:
            return "random_st";
        case Scheme::optimal_sp:
            return "optimal_sp";
    }
    return "standard";
}

Scheme parse_scheme(const std::string& name) {
    if (name == "standard") {
        return Scheme::standard;
    }
    if (name == "random_st") {
        return Scheme::random_st;
    }
    if (name == "optimal_sp") {
        return Scheme::optimal_sp;
    }
    throw InvalidInput("unknown symmetry scheme '" + name + "' (standard | random_st | optimal_sp)");
}

ComplexMatrix SymmetrySchedule::unitary(std::int64_t mu) const {
    if (mu < 1 || mu > length()) {
        throw InvalidInput("SymmetrySchedule::unitary: step index out of range");
    }
    return models::tensor_power(local[static_cast<std::size_t>(mu - 1)], n);
}

ComplexMatrix random_su2(RngStream& rng) {
    ComplexMatrix g(2, 2);
    for (int j = 0; j < 2; ++j) {
        for (int i = 0; i < 2; ++i) {
            const double re = rng.normal();
            const double im = rng.normal();
            g(i, j) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(2, 2);
    const Complex det = q(0, 0) * q(1, 1) - q(0, 1) * q(1, 0);
    return q / std::sqrt(det);
}

SymmetrySchedule standard_schedule(int n, std::int64_t r) {
    check_schedule_args(n, r);
    SymmetrySchedule s;
    s.scheme = Scheme::standard;
    s.n = n;
    s.local.assign(static_cast<std::size_t>(r), ComplexMatrix::Identity(2, 2));
    return s;
}

SymmetrySchedule random_su2_schedule(int n, std::int64_t r, RngStream& rng) {
    check_schedule_args(n, r);
    SymmetrySchedule s;
    s.scheme = Scheme::random_st;
    s.n = n;
    s.theta_hint = 0.5;
    s.local.reserve(static_cast<std::size_t>(r));
    for (std::int64_t mu = 0; mu < r; ++mu) {
        s.local.push_back(random_su2(rng));
    }
    return s;
}

SymmetrySchedule hadamard_schedule(int n, std::int64_t r) {
    check_schedule_args(n, r);
    SymmetrySchedule s;
    s.scheme = Scheme::optimal_sp;
    s.n = n;
    s.theta_hint = 1.0;
    const ComplexMatrix h = hadamard();
    s.local.reserve(static_cast<std::size_t>(r));
    for (std::int64_t mu = 1; mu <= r; ++mu) {
        s.local.push_back(mu % 2 == 1 ? h : ComplexMatrix::Identity(2, 2));
    }
    return s;
}

double max_relative_commutator(const ComplexMatrix& h, const SymmetrySchedule& schedule) {
    const double scale = std::max(linalg::spectral_norm(h), 1e-300);
    double worst = 0.0;
    const ComplexMatrix* previous = nullptr;
    for (std::int64_t mu = 1; mu <= schedule.length(); ++mu) {
        const auto& c_local = schedule.local[static_cast<std::size_t>(mu - 1)];
        if (previous != nullptr && same_local(*previous, c_local)) {
            continue;
        }
        previous = &c_local;
        const ComplexMatrix c = models::tensor_power(c_local, schedule.n);
        worst = std::max(worst, linalg::spectral_norm(h * c - c * h) / scale);
    }
    return worst;
}

Propagator protected_evolution(const models::HamiltonianModel& model, std::span<const SpectralBasis> bases,
                               const SymmetrySchedule& schedule, double t, std::int64_t r) {
    if (r < 1) {
        throw InvalidInput("protected_evolution: r must be >= 1");
    }
    if (schedule.length() < r) {
        throw InvalidInput("protected_evolution: schedule has " + std::to_string(schedule.length()) +
                           " steps, need " + std::to_string(r));
    }
    if (schedule.n != model.n) {
        throw InvalidInput("protected_evolution: schedule qubit count does not match the model");
    }
    const double commutator = max_relative_commutator(model.total(), schedule);
    if (commutator > kCommutationTolerance) {
        throw InvalidInput("protected_evolution: transformation does not commute with H (relative commutator " +
                           std::to_string(commutator) + ")");
    }
    const int L = static_cast<int>(bases.size());
    const Propagator step = formulas::realize(formulas::suzuki_plan(1, L, t / static_cast<double>(r)), bases);

    // Hadamard and identity schedules repeat; conjugate each distinct factor once.
    constexpr std::size_t kCacheSize = 4;
    std::vector<std::pair<const ComplexMatrix*, Propagator>> cache;
    Propagator out = Propagator::identity(model.dim());
    for (std::int64_t mu = 0; mu < r; ++mu) {
        const auto& c_local = schedule.local[static_cast<std::size_t>(mu)];
        const Propagator* conjugated = nullptr;
        for (const auto& [local, prop] : cache) {
            if (same_local(*local, c_local)) {
                conjugated = &prop;
                break;
            }
        }
        if (conjugated != nullptr) {
            out.then(*conjugated);
            continue;
        }
        Propagator fresh = step.conjugated_by(models::tensor_power(c_local, schedule.n));
        out.then(fresh);
        if (cache.size() < kCacheSize) {
            cache.emplace_back(&c_local, std::move(fresh));
        }
    }
    return out;
}

ComplexMatrix protected_evolution(const models::HamiltonianModel& model, const SymmetrySchedule& schedule, double t,
                                  std::int64_t r) {
    const auto bases = formulas::term_bases(model);
    return protected_evolution(model, bases, schedule, t, r).matrix();
}

}  // namespace lowtrot::symmetry
