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

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lowtrot/blas.hpp"
#include "lowtrot/config.hpp"
#include "lowtrot/errors.hpp"
#include "lowtrot/estimators.hpp"
#include "lowtrot/lowerbound.hpp"
#include "lowtrot/models.hpp"
#include "lowtrot/runner.hpp"
#include "lowtrot/validate.hpp"

namespace {

using namespace lowtrot;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitValidation = 3;

struct RunArgs {
    std::string config;
    bool long_mode = false;
    std::optional<int> threads;
    std::string out;
    bool strip_timing = false;
    bool quiet = false;
};

int do_run(const RunArgs& a) {
    harness::pin_blas_threads();
    const auto config = harness::load_config(a.config);
    harness::RunOptions opts;
    opts.long_mode = a.long_mode;
    opts.threads = harness::resolve_threads(a.threads);
    opts.log = a.quiet ? nullptr : &std::cerr;
    const auto records = harness::run_config(config, opts);

    const std::string path = !a.out.empty() ? a.out : config.output;
    if (path.empty() || path == "-") {
        harness::write_csv(std::cout, records, a.strip_timing);
    } else {
        harness::write_csv_file(path, records, a.strip_timing);
        std::cerr << "wrote " << records.size() << " rows to " << path << "\n";
    }
    const auto bad = harness::check_dominance(records);
    if (!bad.empty()) {
        for (const auto& v : bad) {
            std::cerr << "dominance violated: " << v.low.experiment_id << " grid " << v.low.grid_index << " sample "
                      << v.low.sample_index << ": low " << v.low.error << " > full " << v.full.error << "\n";
        }
        return kExitValidation;
    }
    return kExitOk;
}

struct EstimateArgs {
    std::string method = "all";
    double t = 1.0;
    double eps = 1e-3;
    double Delta = 1.0;
    std::optional<double> chi;
    int p = 2;
    double theta = 0.0;
    double c = 1.0;
    std::string model;
};

std::string cell(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << std::scientific << v;
    return s.str();
}

int do_estimate(const EstimateArgs& a) {
    estimators::BudgetQuery q;
    q.t = a.t;
    q.eps = a.eps;
    q.Delta = a.Delta;
    q.chi = a.chi;
    q.p = a.p;
    q.theta = a.theta;
    q.c = a.c;
    q = estimators::query_for_model(models::build_model(a.model), q);
    const auto rows = estimators::estimate_table(q);

    std::cout << "# estimate, not guarantee: big-O constants set to c = " << a.c << "\n";
    std::cout << "# model " << a.model << ": L=" << q.L << " n=" << q.n << " k=" << q.k << " M=" << q.M
              << " d=" << q.d << " J=" << q.J << " g=" << q.g << "\n";
    std::cout << std::left << std::setw(10) << "method" << std::setw(16) << "r_exp" << std::setw(16) << "r_prob"
              << std::setw(16) << "gates" << "dominant_term\n";
    bool found = false;
    for (const auto& row : rows) {
        if (a.method != "all" && row.method != a.method) {
            continue;
        }
        found = true;
        std::cout << std::left << std::setw(10) << row.method << std::setw(16) << cell(row.r_exp) << std::setw(16)
                  << (row.r_prob ? cell(*row.r_prob) : std::string("-")) << std::setw(16) << cell(row.gates)
                  << row.dominant_term << (row.method == "symprot" ? " (gates exclude transformations)" : "")
                  << "\n";
    }
    if (!found) {
        throw InvalidInput("unknown estimate method '" + a.method +
                           "' (all | pf_full | pf | qdrift | randperm | doubling | symprot | powerlaw)");
    }
    return kExitOk;
}

struct LowerBoundArgs {
    int D = 4;
    std::string x;
    std::vector<double> t_grid;
    std::string out;
};

int do_lowerbound(const LowerBoundArgs& a) {
    std::optional<std::vector<int>> bits;
    if (!a.x.empty()) {
        bits = harness::parse_bits(a.x);
    }
    const auto report = harness::lowerbound_demo(a.D, bits, a.t_grid);
    if (!a.out.empty()) {
        std::ofstream out(a.out, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw InvalidInput("cannot write output " + a.out);
        }
        harness::write_lowerbound_csv(out, report);
    } else {
        harness::write_lowerbound_csv(std::cout, report);
    }
    std::cerr << "max |overlap - |sin(t/2)|^D| = " << report.max_deviation
              << ", max wrong-parity overlap = " << report.max_wrong_overlap
              << ", parity decoded: " << (report.all_decoded ? "yes" : "NO") << "\n";
    const bool ok = report.max_deviation <= 1e-9 && report.max_wrong_overlap <= 1e-12 && report.all_decoded;
    return ok ? kExitOk : kExitValidation;
}

int do_validate(const std::string& fault) {
    harness::pin_blas_threads();
    const auto report = harness::validate(harness::parse_fault(fault));
    harness::print_report(std::cout, report);
    return report.ok() ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lowtrot: product-formula error in low-energy subspaces"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "run an experiment config and write CSV");
    run->add_option("--config", run_args.config, "config file")->required();
    run->add_flag("--long", run_args.long_mode, "include dimension-4096 models");
    run->add_option("--threads", run_args.threads, "worker threads (default: LOWTROT_THREADS or 1)");
    run->add_option("--out", run_args.out, "CSV output path ('-' for stdout)");
    run->add_flag("--strip-timing", run_args.strip_timing, "leave wall_time_ms empty");
    run->add_flag("--quiet", run_args.quiet, "no progress output");

    EstimateArgs est;
    auto* estimate = app.add_subcommand("estimate", "evaluate Trotter-number budgets");
    estimate->add_option("--method", est.method, "budget to print (default all)");
    estimate->add_option("--t", est.t, "evolution time")->required();
    estimate->add_option("--eps", est.eps, "target error")->required();
    estimate->add_option("--Delta", est.Delta, "energy threshold")->required();
    estimate->add_option("--chi", est.chi, "failure probability for r_prob");
    estimate->add_option("--p", est.p, "product-formula order");
    estimate->add_option("--theta", est.theta, "symmetry averaging exponent");
    estimate->add_option("--c", est.c, "calibration constant");
    estimate->add_option("--model", est.model, "model id")->required();

    LowerBoundArgs lb;
    auto* lower = app.add_subcommand("lowerbound", "parity Hamiltonian overlap demo");
    lower->add_option("--D", lb.D, "path length (1..10)")->required();
    lower->add_option("--x", lb.x, "bit string (default: all strings)");
    lower->add_option("--t-grid", lb.t_grid, "evolution times")->delimiter(',');
    lower->add_option("--out", lb.out, "CSV output path");

    std::string fault = "none";
    auto* val = app.add_subcommand("validate", "run the invariant suite");
    val->add_option("--inject-fault", fault, "none | non_hermitian");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    try {
        lowtrot::blas::pin_single_thread();
        lowtrot::blas::ensure_reliable_blas(argv);
        if (*run) {
            return do_run(run_args);
        }
        if (*estimate) {
            return do_estimate(est);
        }
        if (*lower) {
            return do_lowerbound(lb);
        }
        if (*val) {
            return do_validate(fault);
        }
    } catch (const lowtrot::InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const lowtrot::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitInvalid;
}
