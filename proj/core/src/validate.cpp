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

#include "lowtrot/validate.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "lowtrot/blas.hpp"
#include "lowtrot/errors.hpp"
#include "lowtrot/estimators.hpp"
#include "lowtrot/formulas.hpp"
#include "lowtrot/lowenergy.hpp"
#include "lowtrot/lowerbound.hpp"
#include "lowtrot/models.hpp"
#include "lowtrot/randomized.hpp"
#include "lowtrot/rng.hpp"
#include "lowtrot/symmetry.hpp"

namespace lowtrot::harness {
namespace {

using linalg::ComplexMatrix;
using linalg::Propagator;

constexpr const char* kSuite = R"(
master_seed = 20240607
Delta = 14

[experiment]
id = validate_pf
model = chain:{3..4}, ladder:2x2, powerlaw:2x2:alpha=3
method = pf
p = 1, 2, 4
r = 1, 4
delta = 0.05, 0.2

[experiment]
id = validate_qdrift
model = chain:4
method = qdrift
r = 20, 80
t = 1
samples = 4

[experiment]
id = validate_randperm
model = chain:4
method = randperm
p = 2
r = 5, 20
t = 1
samples = 4

[experiment]
id = validate_symprot
model = chain:4
method = symprot
scheme = standard, random_st, optimal_sp
r = 10, 40
t = 1
samples = 2

[experiment]
id = validate_parity
model = parity:1011
method = pf
p = 1
r = 1, 8
t = 1
Delta = 2
)";

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(3);
    s << std::scientific << v;
    return s.str();
}

class Checker {
   public:
    explicit Checker(ValidationReport& report) : report_(report) {}

    /// body returns the empty string on success, else a description.
    void run(const std::string& name, const std::function<std::string()>& body) {
        CheckResult result;
        result.name = name;
        try {
            result.detail = body();
            result.passed = result.detail.empty();
        } catch (const std::exception& err) {
            result.detail = std::string("threw: ") + err.what();
        }
        if (result.passed) {
            result.detail = "ok";
        }
        report_.checks.push_back(std::move(result));
    }

   private:
    ValidationReport& report_;
};

std::string bound(const std::string& what, double value, double limit) {
    if (value <= limit && std::isfinite(value)) {
        return {};
    }
    return what + " = " + fmt(value) + " exceeds " + fmt(limit);
}

std::string first_failure(std::initializer_list<std::string> parts) {
    for (const auto& p : parts) {
        if (!p.empty()) {
            return p;
        }
    }
    return {};
}

ComplexMatrix fixture_matrix(int dim, std::uint64_t seed) {
    RngStream rng(seed);
    ComplexMatrix a(dim, dim);
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < dim; ++i) {
            const double re = rng.normal();
            const double im = rng.normal();
            a(i, j) = {re, im};
        }
    }
    return a;
}

}  // namespace

bool ValidationReport::ok() const {
    for (const auto& c : checks) {
        if (!c.passed) {
            return false;
        }
    }
    return true;
}

Fault parse_fault(const std::string& name) {
    if (name == "none") {
        return Fault::none;
    }
    if (name == "non_hermitian") {
        return Fault::non_hermitian;
    }
    throw InvalidInput("unknown fault '" + name + "' (none | non_hermitian)");
}

ConfigFile validation_suite() {
    return parse_config(kSuite, "<validation suite>");
}

ValidationReport validate(Fault fault) {
    ValidationReport report;
    Checker check(report);
    const auto chain = models::heisenberg_chain(4);
    const auto chain_bases = formulas::term_bases(chain);
    const ComplexMatrix h = chain.total();
    const auto spectrum = linalg::eigh(h);

    check.run("linalg.eigh_reconstruction", [&] {
        const auto& q = spectrum.eigenvectors;
        const ComplexMatrix rebuilt = q * spectrum.eigenvalues.cast<linalg::Complex>().asDiagonal() * q.adjoint();
        return first_failure({bound("orthonormality defect", linalg::spectral_norm(q.adjoint() * q - linalg::identity(q.rows())), 1e-10),
                              bound("relative reconstruction error", linalg::spectral_norm(rebuilt - h) / linalg::spectral_norm(h), 1e-9)});
    });
    check.run("linalg.expm_unitarity_group_law", [&] {
        const ComplexMatrix a = linalg::expm_hermitian(spectrum, 0.3);
        const ComplexMatrix b = linalg::expm_hermitian(spectrum, 0.45);
        return first_failure({bound("unitarity defect", linalg::unitarity_defect(a), 1e-10),
                              bound("group law", linalg::spectral_norm(a * b - linalg::expm_hermitian(spectrum, 0.75)), 1e-10)});
    });
    check.run("linalg.blas_gemm", [&] {
        return bound("gemm deviation (kernel " + blas::kernel_name() + ")", blas::gemm_deviation(), 1e-12);
    });
    check.run("linalg.spectral_norm_routes", [&] {
        const ComplexMatrix a = fixture_matrix(16, 7);
        const double gram = linalg::spectral_norm(a);
        return bound("relative route gap", std::abs(gram - linalg::spectral_norm_power(a)) / gram, 1e-9);
    });

    std::vector<models::HamiltonianModel> fixtures = {models::heisenberg_chain(4), models::heisenberg_ladder(3),
                                                      models::power_law_lattice(2, 3, 3.0),
                                                      models::parity_model({1, 0, 1})};
    if (fault == Fault::non_hermitian) {
        auto broken = models::heisenberg_chain(3);
        broken.terms[1](0, 1) += linalg::Complex(0.25, 0.0);
        broken.id = "chain:3 (injected non-Hermitian term)";
        fixtures.push_back(std::move(broken));
    }
    check.run("models.hermiticity", [&]() -> std::string {
        for (const auto& m : fixtures) {
            for (int l = 0; l < m.num_terms(); ++l) {
                const double asym = linalg::max_asymmetry(m.terms[static_cast<std::size_t>(l)]);
                if (asym > linalg::kHermitianTolerance) {
                    return m.id + " term " + std::to_string(l + 1) + " asymmetry " + fmt(asym);
                }
            }
        }
        return {};
    });
    check.run("models.psd_terms", [&]() -> std::string {
        for (const auto& m : fixtures) {
            for (const auto& term : m.terms) {
                const double low = linalg::eigvalsh(term)(0);
                if (low < -1e-9) {
                    return m.id + " has a term with min eigenvalue " + fmt(low);
                }
            }
        }
        return {};
    });
    check.run("models.shift_phase", [&] {
        const double t = 0.7;
        const auto raw = linalg::eigh(chain.total_raw());
        const linalg::Complex phase = std::exp(linalg::Complex(0.0, -chain.shifts.sum() * t));
        return bound("phase identity", linalg::spectral_norm(linalg::expm_hermitian(raw, t) - phase * linalg::expm_hermitian(spectrum, t)), 1e-10);
    });
    check.run("models.meta_bounds", [&]() -> std::string {
        for (const auto& m : fixtures) {
            const auto meta = models::model_meta(m);
            if (meta.g > meta.d * meta.J + 1e-9) {
                return m.id + ": g = " + fmt(meta.g) + " > d J = " + fmt(meta.d * meta.J);
            }
            if (meta.lambda_h > meta.lambda_H) {
                return m.id + ": lambda_h > lambda_H";
            }
        }
        return {};
    });
    check.run("models.parity_spectrum", [&]() -> std::string {
        const auto inst = models::parity_hamiltonian({1, 1, 0, 1});
        const auto e = linalg::eigvalsh(inst.H);
        for (int i = 0; i < e.size(); ++i) {
            if (std::abs(e(i) - i / 2) > 1e-9) {
                return "eigenvalue " + std::to_string(i) + " = " + fmt(e(i));
            }
        }
        return {};
    });
    check.run("formulas.plan_invariants", [&]() -> std::string {
        for (int p : {1, 2, 4, 6, 8}) {
            const auto plan = formulas::suzuki_plan(p, 3, 0.1);
            if (plan.stage_count() != formulas::expected_stage_count(p, 3)) {
                return "stage count for p = " + std::to_string(p);
            }
            double sums[3] = {0, 0, 0};
            for (const auto& s : plan.stages) {
                sums[s.term] += s.coeff;
            }
            for (double s : sums) {
                if (std::abs(s - 0.1) > 1e-12) {
                    return "coefficient sum " + fmt(s) + " for p = " + std::to_string(p);
                }
            }
        }
        return {};
    });
    check.run("formulas.time_reversal", [&]() -> std::string {
        for (int p : {1, 2, 4}) {
            auto forward = formulas::suzuki_plan(p, 3, 0.1);
            auto backward = formulas::suzuki_plan(p, 3, -0.1);
            if (p == 1) {
                backward = formulas::reversed(backward);
            }
            const Propagator u = formulas::realize(backward, chain_bases) * formulas::realize(forward, chain_bases);
            if (auto e = bound("p = " + std::to_string(p) + " defect", linalg::spectral_norm(u.offset()), 1e-9); !e.empty()) {
                return e;
            }
        }
        return {};
    });
    check.run("randomized.qdrift_distribution", [&]() -> std::string {
        const auto plan = randomized::qdrift_plan(chain, 1.0, 50);
        double total = 0.0;
        for (double p : plan.probs) {
            if (p < 0.0) {
                return "negative probability";
            }
            total += p;
        }
        const auto e = randomized::qdrift_expectation(chain, chain_bases, 1.0, 50).matrix();
        return first_failure({bound("probability sum defect", std::abs(total - 1.0), 1e-12),
                              bound("expectation norm - 1", linalg::spectral_norm(e) - 1.0, 1e-12)});
    });
    check.run("randomized.randperm_contraction", [&] {
        const auto e = randomized::randperm_expectation(chain_bases, 2, 0.2).matrix();
        return bound("expectation norm - 1", linalg::spectral_norm(e) - 1.0, 1e-12);
    });
    check.run("symmetry.commutation", [&]() -> std::string {
        RngStream rng(11);
        const auto random = symmetry::random_su2_schedule(4, 5, rng);
        const auto hadamard = symmetry::hadamard_schedule(4, 2);
        return first_failure({bound("random SU(2) commutator", symmetry::max_relative_commutator(h, random), 1e-9),
                              bound("Hadamard commutator", symmetry::max_relative_commutator(h, hadamard), 1e-9)});
    });
    check.run("lowenergy.projector_algebra", [&] {
        lowenergy::EnergyWindow window;
        window.Delta = 10.0;
        const ComplexMatrix p = lowenergy::projector_below(spectrum, window);
        const ComplexMatrix above = lowenergy::isometry_above(spectrum, 10.0);
        const ComplexMatrix q = above * above.adjoint();
        const auto id = linalg::identity(p.rows());
        return first_failure({bound("|P^2 - P|", linalg::spectral_norm(p * p - p), 1e-10),
                              bound("|P - P^dagger|", linalg::max_asymmetry(p), 1e-10),
                              bound("|P Q|", linalg::spectral_norm(p * q), 1e-10),
                              bound("|P + Q - I|", linalg::spectral_norm(p + q - id), 1e-10)});
    });
    check.run("lowenergy.dominance", [&]() -> std::string {
        RunOptions opts;
        report.records = run_config(validation_suite(), opts);
        const auto bad = check_dominance(report.records);
        if (!bad.empty()) {
            const auto& v = bad.front();
            return std::to_string(bad.size()) + " violations, first " + v.low.experiment_id + " grid " +
                   std::to_string(v.low.grid_index) + ": low " + fmt(v.low.error) + " > full " + fmt(v.full.error);
        }
        return {};
    });
    check.run("estimators.monotonicity", [&]() -> std::string {
        auto q = estimators::query_for_model(chain);
        q.t = 1.0;
        q.eps = 1e-3;
        q.Delta = 14.0;
        q.chi = 0.05;
        for (const auto& row : estimators::estimate_table(q)) {
            auto longer = q;
            longer.t = 2.0;
            auto tighter = q;
            tighter.eps = 5e-4;
            const auto find = [&](const estimators::BudgetQuery& x) {
                for (const auto& r : estimators::estimate_table(x)) {
                    if (r.method == row.method) {
                        return r.r_exp;
                    }
                }
                return 0.0;
            };
            if (!(row.r_exp > 0.0) || !std::isfinite(row.r_exp) || row.gates < row.r_exp) {
                return row.method + ": invalid budget";
            }
            if (find(longer) < row.r_exp || find(tighter) < row.r_exp) {
                return row.method + ": not monotone in t or eps";
            }
        }
        return {};
    });
    check.run("harness.lowerbound_overlap", [&] {
        const auto rep = lowerbound_demo(3, std::vector<int>{1, 0, 1}, {std::numbers::pi / 2.0, std::numbers::pi});
        return first_failure({bound("overlap deviation", rep.max_deviation, 1e-9),
                              bound("wrong-parity overlap", rep.max_wrong_overlap, 1e-12),
                              rep.all_decoded ? std::string() : std::string("parity decoded incorrectly")});
    });
    return report;
}

void print_report(std::ostream& out, const ValidationReport& report) {
    int failed = 0;
    for (const auto& c : report.checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        failed += c.passed ? 0 : 1;
    }
    out << report.checks.size() - static_cast<std::size_t>(failed) << "/" << report.checks.size()
        << " checks passed, " << report.records.size() << " dominance rows\n";
}

}  // namespace lowtrot::harness
