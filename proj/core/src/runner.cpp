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

#include "lowtrot/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <span>
#include <thread>
#include <tuple>

#include "lowtrot/blas.hpp"
#include "lowtrot/errors.hpp"
#include "lowtrot/formulas.hpp"
#include "lowtrot/lowenergy.hpp"
#include "lowtrot/models.hpp"
#include "lowtrot/randomized.hpp"
#include "lowtrot/rng.hpp"
#include "lowtrot/symmetry.hpp"

namespace lowtrot::harness {
namespace {

using linalg::ComplexMatrix;
using linalg::Propagator;
using linalg::SpectralBasis;
using Clock = std::chrono::steady_clock;

// Realized S_p(delta) steps keyed by (p, delta). Grid points that share a
// step (same delta, different r) reuse it; realize is deterministic, so a
// hit gives the same bytes as a recomputation.
class StepCache {
   public:
    explicit StepCache(linalg::Index dim)
        : capacity_(std::max<std::size_t>(1, kBudgetBytes / (sizeof(linalg::Complex) * dim * dim))) {}

    std::shared_ptr<const Propagator> get(int p, double delta, std::span<const SpectralBasis> bases) {
        const Key key{p, delta};
        {
            std::lock_guard lock(mutex_);
            for (const auto& [k, v] : entries_) {
                if (k == key) {
                    return v;
                }
            }
        }
        auto made = std::make_shared<const Propagator>(
            formulas::realize(formulas::suzuki_plan(p, static_cast<int>(bases.size()), delta), bases));
        std::lock_guard lock(mutex_);
        if (entries_.size() >= capacity_) {
            entries_.pop_front();
        }
        entries_.emplace_back(key, made);
        return made;
    }

   private:
    using Key = std::pair<int, double>;
    static constexpr std::size_t kBudgetBytes = std::size_t{1} << 30;
    std::size_t capacity_;
    std::mutex mutex_;
    std::deque<std::pair<Key, std::shared_ptr<const Propagator>>> entries_;
};

struct ModelContext {
    models::HamiltonianModel model;
    std::vector<SpectralBasis> bases;
    SpectralBasis spectrum;
    ComplexMatrix low;
    std::unique_ptr<StepCache> steps;
};

struct GridPoint {
    std::int64_t index = 0;
    std::size_t model = 0;
    int p = 1;
    std::string scheme;
    std::int64_t r = 1;
    double t = 0.0;
};

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

class RowSink {
   public:
    RowSink(const ExperimentConfig& cfg, const ModelContext& ctx, const GridPoint& pt, std::vector<ErrorRecord>& out)
        : cfg_(cfg), ctx_(ctx), pt_(pt), out_(out) {}

    void add(int p, const std::string& scheme, const std::string& subspace, int sample, double error,
             double wall_ms) {
        ErrorRecord rec;
        rec.experiment_id = cfg_.id;
        rec.model = ctx_.model.id;
        rec.n = ctx_.model.n;
        rec.L = ctx_.model.num_terms();
        rec.method = method_name(cfg_.method);
        rec.p = p;
        rec.scheme = scheme;
        rec.delta_step = pt_.t / static_cast<double>(pt_.r);
        rec.r = pt_.r;
        rec.t = pt_.t;
        rec.Delta = cfg_.Delta;
        rec.subspace = subspace;
        rec.seed = cfg_.master_seed.value_or(0);
        rec.sample_index = sample;
        rec.error = error;
        rec.wall_time_ms = wall_ms;
        rec.grid_index = pt_.index;
        out_.push_back(std::move(rec));
    }

    /// One row per requested subspace for the difference a - b.
    void add_pair(int p, const std::string& scheme, int sample, const ComplexMatrix& a_offset,
                  const ComplexMatrix& b_offset, double wall_ms) {
        const ComplexMatrix diff = a_offset - b_offset;
        if (cfg_.subspace != SubspaceMode::low) {
            add(p, scheme, "full", sample, linalg::spectral_norm(diff), wall_ms);
        }
        if (cfg_.subspace != SubspaceMode::full) {
            add(p, scheme, "low", sample, linalg::isometry_norm(diff, ctx_.low), wall_ms);
        }
    }

   private:
    const ExperimentConfig& cfg_;
    const ModelContext& ctx_;
    const GridPoint& pt_;
    std::vector<ErrorRecord>& out_;
};

std::string prep_scheme(const PrepSpec& prep) {
    return "gaussian:sigma=" + format_number(prep.sigma);
}

void run_pf(const ExperimentConfig& cfg, const ModelContext& ctx, const GridPoint& pt, RowSink& sink) {
    const auto start = Clock::now();
    const int L = ctx.model.num_terms();
    formulas::PermutationSchedule schedule;
    if (cfg.perm_seed) {
        RngStream rng(substream_seed(*cfg.perm_seed, static_cast<std::uint64_t>(pt.index)));
        schedule.assign(static_cast<std::size_t>(pt.r), randomized::random_permutation(L, rng));
    }
    const Propagator u = schedule.empty()
                             ? ctx.steps->get(pt.p, pt.t / static_cast<double>(pt.r), ctx.bases)->power(pt.r)
                             : formulas::trotter_evolution(ctx.bases, pt.p, pt.t, pt.r, schedule);
    const Propagator v = Propagator::exact(ctx.spectrum, pt.t);
    const double ms = elapsed_ms(start);
    sink.add_pair(pt.p, "standard", 0, u.offset(), v.offset(), ms);
    if (cfg.prep.gaussian) {
        const auto state = lowenergy::gaussian_prepared_state(ctx.spectrum, *cfg.Delta, cfg.prep.sigma);
        sink.add(pt.p, prep_scheme(cfg.prep), "full", 0, lowenergy::mixed_state_error(u.matrix(), v.matrix(), state),
                 elapsed_ms(start));
    }
}

void run_randomized(const ExperimentConfig& cfg, const ModelContext& ctx, const GridPoint& pt, RowSink& sink) {
    const bool qdrift = cfg.method == MethodKind::qdrift;
    const int p = qdrift ? 1 : pt.p;
    const Propagator v = Propagator::exact(ctx.spectrum, pt.t);

    auto start = Clock::now();
    std::optional<Propagator> reference;
    const bool exact_reference = qdrift || ctx.model.num_terms() <= randomized::kMaxEnumeratedTerms;
    if (exact_reference) {
        const Propagator step =
            qdrift ? randomized::qdrift_expectation(ctx.model, ctx.bases, pt.t, pt.r)
                   : randomized::randperm_expectation(ctx.bases, p, pt.t / static_cast<double>(pt.r));
        reference = step.power(pt.r);
    }
    const double reference_ms = elapsed_ms(start);

    std::vector<Propagator> samples;
    std::vector<double> sample_ms;
    const auto seed = cfg.master_seed.value_or(0);
    for (int s = 0; s < cfg.samples; ++s) {
        start = Clock::now();
        RngStream rng(substream_seed(seed, static_cast<std::uint64_t>(pt.index), static_cast<std::uint64_t>(s)));
        samples.push_back(qdrift ? randomized::qdrift_sample(ctx.model, ctx.bases, pt.t, pt.r, rng)
                                 : randomized::randperm_sample(ctx.bases, p, pt.t, pt.r, rng));
        sample_ms.push_back(elapsed_ms(start));
    }
    if (!reference) {
        ComplexMatrix mean = ComplexMatrix::Zero(ctx.model.dim(), ctx.model.dim());
        for (const auto& u : samples) {
            mean += u.offset();
        }
        reference = Propagator::from_offset(mean / static_cast<double>(samples.size()));
    } else {
        sink.add_pair(p, "bias", 0, reference->offset(), v.offset(), reference_ms);
    }
    for (int s = 0; s < cfg.samples; ++s) {
        const auto& u = samples[static_cast<std::size_t>(s)];
        sink.add_pair(p, "sample", s, u.offset(), v.offset(), sample_ms[static_cast<std::size_t>(s)]);
        sink.add_pair(p, "fluctuation", s, u.offset(), reference->offset(), sample_ms[static_cast<std::size_t>(s)]);
    }
}

void run_symprot(const ExperimentConfig& cfg, const ModelContext& ctx, const GridPoint& pt, RowSink& sink) {
    const auto scheme = symmetry::parse_scheme(pt.scheme);
    const Propagator v = Propagator::exact(ctx.spectrum, pt.t);
    const int samples = scheme == symmetry::Scheme::random_st ? cfg.samples : 1;
    const std::uint64_t seed = cfg.st_seed.value_or(cfg.master_seed.value_or(0));
    for (int s = 0; s < samples; ++s) {
        const auto start = Clock::now();
        symmetry::SymmetrySchedule schedule;
        switch (scheme) {
            case symmetry::Scheme::standard:
                schedule = symmetry::standard_schedule(ctx.model.n, pt.r);
                break;
            case symmetry::Scheme::random_st: {
                RngStream rng(substream_seed(seed, static_cast<std::uint64_t>(pt.index), static_cast<std::uint64_t>(s)));
                schedule = symmetry::random_su2_schedule(ctx.model.n, pt.r, rng);
                break;
            }
            case symmetry::Scheme::optimal_sp:
                schedule = symmetry::hadamard_schedule(ctx.model.n, pt.r);
                break;
        }
        const Propagator u = symmetry::protected_evolution(ctx.model, ctx.bases, schedule, pt.t, pt.r);
        sink.add_pair(1, pt.scheme, s, u.offset(), v.offset(), elapsed_ms(start));
    }
}

std::vector<GridPoint> enumerate_grid(const ExperimentConfig& cfg, std::size_t num_models) {
    std::vector<GridPoint> grid;
    std::vector<int> orders = cfg.p_list;
    if (cfg.method == MethodKind::qdrift || cfg.method == MethodKind::symprot) {
        orders = {1};
    }
    std::vector<std::string> schemes = cfg.schemes;
    if (schemes.empty()) {
        schemes = {""};
    }
    std::int64_t index = 0;
    for (std::size_t m = 0; m < num_models; ++m) {
        for (int p : orders) {
            for (const auto& scheme : schemes) {
                for (std::int64_t r : cfg.r_list) {
                    const auto& inner = cfg.delta_list.empty() ? cfg.t_list : cfg.delta_list;
                    for (double x : inner) {
                        const double t = cfg.delta_list.empty() ? x : x * static_cast<double>(r);
                        grid.push_back({index++, m, p, scheme, r, t});
                    }
                }
            }
        }
    }
    return grid;
}

ModelContext prepare(const std::string& id, const ExperimentConfig& cfg) {
    ModelContext ctx;
    ctx.model = models::build_model(id);
    ctx.bases = formulas::term_bases(ctx.model);
    ctx.spectrum = linalg::eigh(ctx.model.total());
    ctx.steps = std::make_unique<StepCache>(ctx.model.dim());
    if (cfg.Delta) {
        lowenergy::EnergyWindow window;
        window.Delta = *cfg.Delta;
        ctx.low = lowenergy::isometry_below(ctx.spectrum, window);
    }
    return ctx;
}

}  // namespace

std::vector<ErrorRecord> run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    validate_experiment(config);
    if (config.long_only && !options.long_mode) {
        if (options.log != nullptr) {
            *options.log << "skipping experiment " << config.id << " (needs --long)\n";
        }
        return {};
    }
    for (int p : config.p_list) {
        formulas::validate_order(p);
    }

    // Sequential setup; everything shared with workers is read-only after this.
    std::vector<ModelContext> contexts;
    for (const auto& id : config.models) {
        if (models::dimension_for_id(id) > kShortRunMaxDimension && !options.long_mode) {
            if (options.log != nullptr) {
                *options.log << "skipping " << config.id << " / " << id << " (needs --long)\n";
            }
            continue;
        }
        if (options.log != nullptr) {
            *options.log << "preparing " << id << "\n";
        }
        contexts.push_back(prepare(id, config));
        const auto& model = contexts.back().model;
        if (config.method == MethodKind::symprot && model.dim() != (linalg::Index{1} << model.n)) {
            throw InvalidInput("symprot needs a qubit model, got " + id);
        }
    }
    const auto grid = enumerate_grid(config, contexts.size());

    std::vector<std::vector<ErrorRecord>> results(grid.size());
    std::vector<std::exception_ptr> failures(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            try {
                const auto& pt = grid[i];
                const auto& ctx = contexts[pt.model];
                RowSink sink(config, ctx, pt, results[i]);
                switch (config.method) {
                    case MethodKind::pf:
                        run_pf(config, ctx, pt, sink);
                        break;
                    case MethodKind::qdrift:
                    case MethodKind::randperm:
                        run_randomized(config, ctx, pt, sink);
                        break;
                    case MethodKind::symprot:
                        run_symprot(config, ctx, pt, sink);
                        break;
                }
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    const int threads = std::max(1, std::min<int>(options.threads, static_cast<int>(grid.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < threads; ++w) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }
    for (const auto& f : failures) {
        if (f) {
            std::rethrow_exception(f);
        }
    }

    std::vector<ErrorRecord> out;
    for (auto& rows : results) {
        std::stable_sort(rows.begin(), rows.end(),
                         [](const ErrorRecord& a, const ErrorRecord& b) { return a.sample_index < b.sample_index; });
        out.insert(out.end(), std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end()));
    }
    if (options.log != nullptr) {
        *options.log << "experiment " << config.id << ": " << out.size() << " rows\n";
    }
    return out;
}

std::vector<ErrorRecord> run_config(const ConfigFile& config, const RunOptions& options) {
    std::vector<ErrorRecord> out;
    for (const auto& e : config.experiments) {
        auto rows = run_experiment(e, options);
        out.insert(out.end(), std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end()));
    }
    return out;
}

std::string csv_header() {
    return "experiment_id,model,n,L,method,p,scheme,delta_step,r,t,Delta,subspace,seed,sample_index,error,"
           "wall_time_ms";
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<ErrorRecord>& records, bool strip_timing) {
    out << csv_header() << '\n';
    for (const auto& r : records) {
        out << r.experiment_id << ',' << r.model << ',' << r.n << ',' << r.L << ',' << r.method << ',' << r.p << ','
            << r.scheme << ',' << format_number(r.delta_step) << ',' << r.r << ',' << format_number(r.t) << ','
            << (r.Delta ? format_number(*r.Delta) : std::string()) << ',' << r.subspace << ',' << r.seed << ','
            << r.sample_index << ',' << format_number(r.error) << ','
            << (strip_timing ? std::string() : format_number(r.wall_time_ms)) << '\n';
    }
}

void write_csv_file(const std::string& path, const std::vector<ErrorRecord>& records, bool strip_timing) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InvalidInput("cannot write output " + path);
    }
    write_csv(out, records, strip_timing);
    if (!out) {
        throw InvalidInput("write failed for " + path);
    }
}

std::vector<DominanceViolation> check_dominance(const std::vector<ErrorRecord>& records, double tolerance) {
    using Key = std::tuple<std::string, std::int64_t, std::string, int>;
    std::map<Key, const ErrorRecord*> full;
    for (const auto& r : records) {
        if (r.subspace == "full") {
            full[{r.experiment_id, r.grid_index, r.scheme, r.sample_index}] = &r;
        }
    }
    std::vector<DominanceViolation> out;
    for (const auto& r : records) {
        if (r.subspace != "low") {
            continue;
        }
        auto it = full.find({r.experiment_id, r.grid_index, r.scheme, r.sample_index});
        if (it != full.end() && r.error > it->second->error + tolerance) {
            out.push_back({*it->second, r});
        }
    }
    return out;
}

int resolve_threads(std::optional<int> flag) {
    if (flag) {
        if (*flag < 1) {
            throw InvalidInput("--threads must be >= 1");
        }
        return *flag;
    }
    if (const char* env = std::getenv("LOWTROT_THREADS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 1 || v > 1024) {
            throw InvalidInput(std::string("LOWTROT_THREADS must be a positive integer, got '") + env + "'");
        }
        return static_cast<int>(v);
    }
    return 1;
}

void pin_blas_threads() {
    blas::pin_single_thread();
}

}  // namespace lowtrot::harness
