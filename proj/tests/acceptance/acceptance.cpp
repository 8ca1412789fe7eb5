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
// Acceptance driver. Each criterion prints one PASS/FAIL line; with no
// arguments every short-form criterion runs and a summary follows.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lowtrot/blas.hpp"
#include "lowtrot/config.hpp"
#include "lowtrot/estimators.hpp"
#include "lowtrot/formulas.hpp"
#include "lowtrot/linalg.hpp"
#include "lowtrot/lowenergy.hpp"
#include "lowtrot/lowerbound.hpp"
#include "lowtrot/models.hpp"
#include "lowtrot/randomized.hpp"
#include "lowtrot/rng.hpp"
#include "lowtrot/runner.hpp"
#include "lowtrot/symmetry.hpp"
#include "lowtrot/validate.hpp"

#include "estimator_oracle.hpp"

namespace {

using namespace lowtrot;
using linalg::ComplexMatrix;
using linalg::Propagator;
using linalg::SpectralBasis;

struct Outcome {
    bool passed = false;
    std::string detail;
};

struct Criterion {
    std::string name;
    double time_limit_s;
    bool long_only;
    std::function<Outcome()> body;
};

std::string source_path(const std::string& rel) {
    return std::string(LOWTROT_SOURCE_DIR) + "/" + rel;
}

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double linear_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> geometric_grid(double lo, double hi, int points) {
    std::vector<double> out;
    for (int i = 0; i < points; ++i) {
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
    }
    return out;
}

bool within(double value, double target, double tol) {
    return std::abs(value - target) <= tol;
}

struct Chain {
    models::HamiltonianModel model;
    std::vector<SpectralBasis> bases;
    SpectralBasis spectrum;

    explicit Chain(int n)
        : model(models::heisenberg_chain(n)),
          bases(formulas::term_bases(model)),
          spectrum(linalg::eigh(model.total())) {}
};

constexpr std::uint64_t kSeed = 20240607;

// ---------------------------------------------------------------------------

Outcome universal_dominance() {
    const auto report = harness::validate();
    auto records = report.records;
    const auto suite = harness::load_config(source_path("configs/default.conf"));
    const auto run = harness::run_config(suite, {});
    records.insert(records.end(), run.begin(), run.end());
    const auto violations = harness::check_dominance(records, 1e-12);
    std::size_t pairs = 0;
    for (const auto& r : records) {
        pairs += r.subspace == "low" ? 1 : 0;
    }
    std::ostringstream os;
    os << records.size() << " rows, " << pairs << " low/full pairs, " << violations.size() << " violations";
    if (!violations.empty()) {
        const auto& v = violations.front();
        os << "; first: " << v.low.experiment_id << " grid " << v.low.grid_index << " low " << fmt(v.low.error)
           << " > full " << fmt(v.full.error);
    }
    if (!report.ok()) {
        os << "; validate checks failed";
    }
    return {violations.empty() && report.ok() && pairs > 0, os.str()};
}

Outcome order_of_accuracy() {
    const Chain chain(4);
    const auto deltas = geometric_grid(1e-3, 1e-1, 9);
    bool ok = true;
    std::ostringstream os;
    for (int p : {1, 2, 4}) {
        std::vector<double> errors;
        for (double d : deltas) {
            const auto plan = formulas::suzuki_plan(p, chain.model.num_terms(), d);
            const Propagator u = formulas::realize(plan, chain.bases);
            errors.push_back(linalg::distance(u, Propagator::exact(chain.spectrum, d)));
        }
        const double slope = loglog_slope(deltas, errors);
        ok = ok && within(slope, p + 1, 0.3);
        os << "p=" << p << " slope " << fmt(slope) << " (want " << p + 1 << "+-0.3); ";
    }
    return {ok, os.str()};
}

Outcome fig1_check(const std::string& config, bool long_mode) {
    const auto cfg = harness::load_config(source_path(config));
    harness::RunOptions opts;
    opts.long_mode = long_mode;
    const auto records = harness::run_config(cfg, opts);
    if (records.empty()) {
        return {false, "no rows produced"};
    }
    const auto& e = cfg.experiments.front();
    const auto model = models::build_model(e.models.front());
    const auto spectrum = linalg::eigvalsh(model.total());
    const auto rank = std::count_if(spectrum.begin(), spectrum.end(),
                                    [&](double v) { return v <= *e.Delta + lowenergy::kInclusionTolerance; });

    // series keyed by r: delta -> (full, low)
    std::map<std::int64_t, std::map<double, std::pair<double, double>>> series;
    for (const auto& r : records) {
        auto& cell = series[r.r][r.delta_step];
        (r.subspace == "full" ? cell.first : cell.second) = r.error;
    }
    bool ok = rank > 0 && rank < spectrum.size();
    std::ostringstream os;
    os << model.id << " Delta=" << fmt(*e.Delta) << " rank " << rank << "/" << spectrum.size() << "; ";
    int below = 0;
    int points = 0;
    for (const auto& [r, curve] : series) {
        std::vector<double> d;
        std::vector<double> full;
        for (const auto& [delta, errs] : curve) {
            d.push_back(delta);
            full.push_back(errs.first);
            ++points;
            below += errs.second < errs.first ? 1 : 0;
        }
        const double slope = loglog_slope(d, full);
        ok = ok && within(slope, 3.0, 0.3);
        os << "r=" << r << " full slope " << fmt(slope) << "; ";
    }
    ok = ok && below == points;
    os << "low < full at " << below << "/" << points << " points";
    return {ok, os.str()};
}

Outcome qdrift_bias() {
    const Chain chain(4);
    const std::vector<double> rs{100, 200, 400, 800};
    std::vector<double> bias;
    const Propagator v = Propagator::exact(chain.spectrum, 1.0);
    for (double r : rs) {
        const auto step = randomized::qdrift_expectation(chain.model, chain.bases, 1.0, static_cast<std::int64_t>(r));
        bias.push_back(linalg::distance(step.power(static_cast<std::int64_t>(r)), v));
    }
    const double slope = loglog_slope(rs, bias);
    return {within(slope, -1.0, 0.15),
            "bias " + fmt(bias.front()) + " .. " + fmt(bias.back()) + ", slope " + fmt(slope) + " (want -1+-0.15)"};
}

Outcome qdrift_fluctuation() {
    const Chain chain(4);
    const std::vector<std::int64_t> rs{100, 200, 400, 800};
    std::map<std::int64_t, randomized::FluctuationStats> stats;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        randomized::RandomizedParams params;
        params.method = randomized::Method::qdrift;
        params.t = 1.0;
        params.r = rs[i];
        stats[rs[i]] = randomized::fluctuation_stats(chain.model, chain.bases, params, 10, std::nullopt, kSeed, i);
    }
    bool ok = true;
    std::ostringstream os;
    for (auto [lo, hi] : {std::pair<std::int64_t, std::int64_t>{100, 400}, {200, 800}}) {
        const double ratio = stats[lo].fluctuation_rms / stats[hi].fluctuation_rms;
        const double scalar = stats[lo].against_exact.std_error / stats[hi].against_exact.std_error;
        ok = ok && within(ratio, 2.0, 0.6);
        os << "r " << lo << "->" << hi << ": spread ratio " << fmt(ratio) << " (scalar error std ratio "
           << fmt(scalar) << "); ";
    }
    os << "want 2+-30%";
    return {ok, os.str()};
}

Outcome randperm_bias() {
    const Chain chain(4);
    const std::vector<double> rs{10, 20, 40, 80, 160, 320};
    const Propagator v = Propagator::exact(chain.spectrum, 1.0);
    std::vector<double> bias;
    for (double r : rs) {
        const auto step = randomized::randperm_expectation(chain.bases, 2, 1.0 / r);
        bias.push_back(linalg::distance(step.power(static_cast<std::int64_t>(r)), v));
    }
    const double slope = loglog_slope(rs, bias);

    // Two-term case: one S_2 step under each ordering.
    const auto pair = models::select_terms(chain.model, {0, 1});
    const auto pair_bases = formulas::term_bases(pair);
    const auto pair_spectrum = linalg::eigh(pair.total());
    const double delta = 0.1;
    const Propagator vd = Propagator::exact(pair_spectrum, delta);
    std::vector<double> errors;
    std::vector<Propagator> ops;
    for (const auto& sigma : {std::vector<int>{0, 1}, std::vector<int>{1, 0}}) {
        ops.push_back(formulas::realize(formulas::suzuki_plan(2, 2, delta, sigma), pair_bases));
        errors.push_back(linalg::distance(ops.back(), vd));
    }
    const double mean = 0.5 * (errors[0] + errors[1]);
    const double variance = 0.5 * ((errors[0] - mean) * (errors[0] - mean) + (errors[1] - mean) * (errors[1] - mean));
    const double op_gap = linalg::distance(ops[0], ops[1]);

    const bool ok = within(slope, -2.0, 0.3) && variance <= 1e-12;
    return {ok, "p=2 bias slope " + fmt(slope) + " (want -2+-0.3); L=2 error variance " + fmt(variance) +
                    " (want <=1e-12), operator gap between orderings " + fmt(op_gap)};
}

Outcome symmetry_ordering() {
    const Chain chain(4);
    const std::vector<double> rs{10, 20, 50, 100, 200, 500, 1000};
    const Propagator v = Propagator::exact(chain.spectrum, 1.0);
    std::map<symmetry::Scheme, std::vector<double>> curves;
    constexpr int kRandomSchedules = 5;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const auto r = static_cast<std::int64_t>(rs[i]);
        auto run = [&](const symmetry::SymmetrySchedule& s) {
            return linalg::distance(symmetry::protected_evolution(chain.model, chain.bases, s, 1.0, r), v);
        };
        curves[symmetry::Scheme::standard].push_back(run(symmetry::standard_schedule(4, r)));
        curves[symmetry::Scheme::optimal_sp].push_back(run(symmetry::hadamard_schedule(4, r)));
        double sum = 0.0;
        for (int s = 0; s < kRandomSchedules; ++s) {
            RngStream rng(substream_seed(kSeed, i, static_cast<std::uint64_t>(s)));
            sum += run(symmetry::random_su2_schedule(4, r, rng));
        }
        curves[symmetry::Scheme::random_st].push_back(sum / kRandomSchedules);
    }
    const double s_std = loglog_slope(rs, curves[symmetry::Scheme::standard]);
    const double s_rnd = loglog_slope(rs, curves[symmetry::Scheme::random_st]);
    const double s_opt = loglog_slope(rs, curves[symmetry::Scheme::optimal_sp]);
    bool below = true;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        below = below && curves[symmetry::Scheme::optimal_sp][i] <= curves[symmetry::Scheme::standard][i];
    }
    const bool ok = s_opt <= s_rnd && s_rnd <= s_std && within(s_std, -1.0, 0.2) && within(s_opt, -2.0, 0.3) && below;
    return {ok, "slopes standard " + fmt(s_std) + " random_st " + fmt(s_rnd) + " optimal_sp " + fmt(s_opt) +
                    "; optimal_sp <= standard at every r: " + (below ? "yes" : "no")};
}

Outcome lower_bound() {
    double worst_dev = 0.0;
    double worst_wrong = 0.0;
    bool decoded = true;
    for (int D = 1; D <= 8; ++D) {
        const auto random = harness::lowerbound_random(D, 20, kSeed + static_cast<std::uint64_t>(D));
        worst_dev = std::max(worst_dev, random.max_deviation);
        worst_wrong = std::max(worst_wrong, random.max_wrong_overlap);
        const auto at_pi = harness::lowerbound_demo(D, std::nullopt, {std::numbers::pi});
        decoded = decoded && at_pi.all_decoded;
        worst_wrong = std::max(worst_wrong, at_pi.max_wrong_overlap);
    }
    return {worst_dev <= 1e-9 && worst_wrong <= 1e-12 && decoded,
            "max |overlap - sin(t/2)^D| " + fmt(worst_dev) + ", max wrong-parity overlap " + fmt(worst_wrong) +
                ", all parities decoded at t=pi: " + (decoded ? "yes" : "no")};
}

Outcome imperfect_prep() {
    const Chain chain(4);
    const auto& e = chain.spectrum.eigenvalues;
    const double Delta = 0.5 * (e.minCoeff() + e.maxCoeff());
    const double t = 1.0;
    const std::int64_t r = 4;
    const ComplexMatrix u = formulas::trotter_evolution(chain.bases, 2, t, r).matrix();
    const ComplexMatrix v = Propagator::exact(chain.spectrum, t).matrix();
    const double sharp =
        lowenergy::mixed_state_error(u, v, lowenergy::gaussian_prepared_state(chain.spectrum, Delta, 1e-4 * Delta));
    const auto ratios = geometric_grid(0.02, 0.2, 10);
    std::vector<double> sigmas;
    std::vector<double> excess;
    for (double q : ratios) {
        const double err =
            lowenergy::mixed_state_error(u, v, lowenergy::gaussian_prepared_state(chain.spectrum, Delta, q * Delta));
        const double x = std::abs(err - sharp) / sharp;
        if (x > 0.0) {
            sigmas.push_back(q);
            excess.push_back(x);
        }
    }
    if (sigmas.size() < 3) {
        return {false, "excess error vanishes across the sweep"};
    }
    const double slope = loglog_slope(sigmas, excess);
    return {within(slope, 2.0, 0.4), "Delta=" + fmt(Delta) + " sharp error " + fmt(sharp) + ", relative excess " +
                                         fmt(excess.front()) + " .. " + fmt(excess.back()) + ", slope " +
                                         fmt(slope) + " (want 2+-0.4)"};
}

Outcome leakage() {
    const Chain chain(4);
    const auto& e = chain.spectrum.eigenvalues;
    const double Lambda = e(0) + 0.25 * (e(e.size() - 1) - e(0));
    // The projectors only change at eigenvalues, so the probe sits on the
    // distinct eigenvalues at or above Lambda.
    std::vector<double> grid{Lambda};
    for (Eigen::Index i = 0; i < e.size(); ++i) {
        if (e(i) > grid.back() + 1e-9) {
            grid.push_back(e(i));
        }
    }
    bool ok = true;
    std::ostringstream os;
    os << "Lambda=" << fmt(Lambda) << ", " << grid.size() << " thresholds; ";
    for (int l = 0; l < chain.model.num_terms(); ++l) {
        const auto table = lowenergy::leakage_probe(chain.spectrum, chain.bases[static_cast<std::size_t>(l)], 0.1,
                                                    Lambda, grid);
        std::vector<double> x;
        std::vector<double> y;
        int flat = 0;
        double previous = INFINITY;
        for (const auto& pt : table) {
            if (pt.leakage <= 1e-12) {
                break;
            }
            // Steps smaller than the floor are rounding, not decrease.
            if (previous - pt.leakage <= 1e-12) {
                ++flat;
            }
            previous = pt.leakage;
            x.push_back(pt.Lambda_prime);
            y.push_back(std::log(pt.leakage));
        }
        const double slope = x.size() >= 2 ? linear_slope(x, y) : 0.0;
        ok = ok && flat == 0 && x.size() >= 2 && slope < 0.0;
        os << "term " << l + 1 << ": " << x.size() << " pre-floor points, " << flat << " non-decreasing steps, slope "
           << fmt(slope) << "; ";
    }
    return {ok, os.str()};
}

Outcome estimator_dual_path() {
    RngStream rng(kSeed);
    double worst = 0.0;
    std::string worst_name;
    for (int i = 0; i < 100; ++i) {
        const auto q = oracle::random_query(rng);
        for (const auto& [name, pair] : oracle::compare_all(q)) {
            const double rel = std::abs(pair.first - pair.second) / std::abs(pair.second);
            if (rel > worst || std::isnan(rel)) {
                worst = std::isnan(rel) ? INFINITY : rel;
                worst_name = name;
            }
        }
    }
    return {worst <= 1e-12, "100 points, worst relative gap " + fmt(worst) + " (" + worst_name + ")"};
}

std::vector<Criterion> criteria() {
    return {
        {"universal_dominance", 300, false, universal_dominance},
        {"order_of_accuracy", 60, false, order_of_accuracy},
        {"fig1_short", 600, false, [] { return fig1_check("configs/fig1_short.conf", false); }},
        {"fig1_long", 1800, true, [] { return fig1_check("configs/fig1_long.conf", true); }},
        {"qdrift_bias", 120, false, qdrift_bias},
        {"qdrift_fluctuation", 300, false, qdrift_fluctuation},
        {"randperm_bias", 300, false, randperm_bias},
        {"symmetry_ordering", 300, false, symmetry_ordering},
        {"lower_bound", 60, false, lower_bound},
        {"imperfect_prep", 120, false, imperfect_prep},
        {"leakage", 60, false, leakage},
        {"estimator_dual_path", 10, false, estimator_dual_path},
    };
}

bool run_one(const Criterion& c) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = c.body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.time_limit_s;
    const bool pass = out.passed && in_time;
    std::cout << (pass ? "PASS " : "FAIL ") << c.name << ": " << out.detail << " [" << fmt(secs, 3) << " s, limit "
              << c.time_limit_s << " s" << (in_time ? "" : ", over limit") << "]" << std::endl;
    return pass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<std::string> names;
    bool long_mode = false;
    bool list = false;
    app.add_option("--criterion", names, "criterion to run (repeatable)");
    app.add_flag("--long", long_mode, "include long-form criteria");
    app.add_flag("--list", list, "list criteria and exit");
    CLI11_PARSE(app, argc, argv);

    blas::pin_single_thread();
    blas::ensure_reliable_blas(argv);

    const auto all = criteria();
    if (list) {
        for (const auto& c : all) {
            std::cout << c.name << (c.long_only ? " (long)" : "") << "\n";
        }
        return 0;
    }
    int passed = 0;
    int total = 0;
    for (const auto& c : all) {
        const bool selected = names.empty() ? (!c.long_only || long_mode)
                                            : std::find(names.begin(), names.end(), c.name) != names.end();
        if (!selected) {
            continue;
        }
        ++total;
        passed += run_one(c) ? 1 : 0;
    }
    if (total == 0) {
        std::cerr << "no criterion matched\n";
        return 2;
    }
    if (total > 1) {
        std::cout << passed << "/" << total << " criteria passed" << std::endl;
    }
    return passed == total ? 0 : 1;
}
