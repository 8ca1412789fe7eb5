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

#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <sstream>

#include "lowtrot/config.hpp"
#include "lowtrot/errors.hpp"
#include "lowtrot/formulas.hpp"
#include "lowtrot/lowenergy.hpp"
#include "lowtrot/models.hpp"
#include "lowtrot/randomized.hpp"
#include "lowtrot/lowerbound.hpp"
#include "lowtrot/runner.hpp"
#include "lowtrot/rng.hpp"
#include "lowtrot/validate.hpp"

using namespace lowtrot;
using namespace lowtrot::harness;

namespace {

const char* kSmall = R"(# two experiments sharing defaults
master_seed = 7
Delta = 6

[experiment]
id = pf_small
model = chain:{3..4}
method = pf
p = 1, 2
t = 1
r = 2, 8

[experiment]
id = qd_small
model = chain:3
method = qdrift
t = 0.5
r = 4, 16
samples = 3
subspace = low
)";

std::string message_of(const std::string& text) {
    try {
        parse_config(text, "cfg");
    } catch (const InvalidInput& e) {
        return e.what();
    }
    return "";
}

std::string csv_of(const std::vector<ErrorRecord>& records) {
    std::ostringstream out;
    write_csv(out, records, true);
    return out.str();
}

}  // namespace

TEST(Config, ParsesSectionsWithDefaults) {
    const auto file = parse_config(kSmall, "cfg");
    ASSERT_EQ(file.experiments.size(), 2u);
    const auto& a = file.experiments[0];
    EXPECT_EQ(a.id, "pf_small");
    EXPECT_EQ(a.models, (std::vector<std::string>{"chain:3", "chain:4"}));
    EXPECT_EQ(a.p_list, (std::vector<int>{1, 2}));
    EXPECT_EQ(a.r_list, (std::vector<std::int64_t>{2, 8}));
    EXPECT_EQ(*a.Delta, 6.0);
    EXPECT_EQ(*a.master_seed, 7u);
    const auto& b = file.experiments[1];
    EXPECT_EQ(b.method, MethodKind::qdrift);
    EXPECT_EQ(b.samples, 3);
    EXPECT_EQ(b.subspace, SubspaceMode::low);
}

TEST(Config, BraceExpansion) {
    EXPECT_EQ(expand_braces("chain:{4..6}"), (std::vector<std::string>{"chain:4", "chain:5", "chain:6"}));
    EXPECT_EQ(expand_braces("parity:{01,110}"), (std::vector<std::string>{"parity:01", "parity:110"}));
    EXPECT_EQ(expand_braces("a{1,2}b{x,y}"), (std::vector<std::string>{"a1bx", "a1by", "a2bx", "a2by"}));
    EXPECT_EQ(expand_braces("plain"), (std::vector<std::string>{"plain"}));
    EXPECT_THROW(expand_braces("chain:{4..6"), InvalidInput);
    EXPECT_THROW(expand_braces("chain:{6..4}"), InvalidInput);
}

TEST(Config, SplitList) {
    EXPECT_EQ(split_list("1, 2 ,3"), (std::vector<std::string>{"1", "2", "3"}));
    EXPECT_EQ(split_list("chain:{4,5}, ladder:2x4"), (std::vector<std::string>{"chain:{4,5}", "ladder:2x4"}));
    EXPECT_THROW(split_list("1,,2"), InvalidInput);
    EXPECT_THROW(split_list("{1,2"), InvalidInput);
}

TEST(Config, ErrorsCarrySourceAndLine) {
    EXPECT_EQ(message_of("[experiment]\nid = a\nbogus = 1\n").rfind("cfg:3:", 0), 0u);
    EXPECT_EQ(message_of("[experiment]\nid = a\nr = x\n").rfind("cfg:3:", 0), 0u);
    EXPECT_EQ(message_of("[other]\n").rfind("cfg:1:", 0), 0u);
    EXPECT_NE(message_of("Delta = 1\n").find("no [experiment]"), std::string::npos);
    const std::string dup = "[experiment]\nid = a\nmodel = chain:3\nt = 1\nr = 1\nsubspace = full\n";
    EXPECT_NE(message_of(dup + dup).find("duplicate"), std::string::npos);
}

TEST(Config, PrepParsing) {
    EXPECT_FALSE(parse_prep("exact").gaussian);
    const auto g = parse_prep("gaussian:sigma=0.5");
    EXPECT_TRUE(g.gaussian);
    EXPECT_EQ(g.sigma, 0.5);
    EXPECT_THROW(parse_prep("gaussian:sigma=-1"), InvalidInput);
    EXPECT_THROW(parse_prep("thermal"), InvalidInput);
}

TEST(Config, ValidationRules) {
    ExperimentConfig e;
    e.id = "x";
    e.models = {"chain:4"};
    e.t_list = {1.0};
    e.r_list = {1};
    e.Delta = 5.0;
    EXPECT_NO_THROW(validate_experiment(e));
    auto broken = [&](auto mutate) {
        ExperimentConfig c = e;
        mutate(c);
        EXPECT_THROW(validate_experiment(c), InvalidInput);
    };
    broken([](ExperimentConfig& c) { c.models.clear(); });
    broken([](ExperimentConfig& c) { c.r_list = {0}; });
    broken([](ExperimentConfig& c) { c.delta_list = {0.1}; });
    broken([](ExperimentConfig& c) { c.Delta.reset(); });
    broken([](ExperimentConfig& c) { c.method = MethodKind::qdrift; c.samples = 5; });
    broken([](ExperimentConfig& c) { c.method = MethodKind::qdrift; c.master_seed = 1; });
    broken([](ExperimentConfig& c) { c.method = MethodKind::symprot; });
    broken([](ExperimentConfig& c) { c.schemes = {"standard"}; });
    broken([](ExperimentConfig& c) { c.models = {"chain:13"}; });
}

TEST(Runner, GridOrderAndColumns) {
    const auto file = parse_config(kSmall, "cfg");
    RunOptions opts;
    const auto rows = run_experiment(file.experiments[0], opts);
    // 2 models x 2 orders x 2 step counts x 2 subspaces.
    ASSERT_EQ(rows.size(), 16u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_LE(rows[i - 1].grid_index, rows[i].grid_index);
    }
    EXPECT_EQ(rows.front().model, "chain:3");
    EXPECT_EQ(rows.back().model, "chain:4");
    for (const auto& r : rows) {
        EXPECT_GE(r.error, 0.0);
        EXPECT_LE(r.error, 2.0);
        EXPECT_NEAR(r.delta_step, r.t / static_cast<double>(r.r), 1e-15);
    }
}

TEST(Runner, ThreadCountDoesNotChangeOutput) {
    const auto file = parse_config(kSmall, "cfg");
    RunOptions one;
    RunOptions three;
    three.threads = 3;
    EXPECT_EQ(csv_of(run_config(file, one)), csv_of(run_config(file, three)));
}

TEST(Runner, SamplesReproduceFromSubstreams) {
    const auto file = parse_config(kSmall, "cfg");
    const auto rows = run_experiment(file.experiments[1], RunOptions{});
    const auto model = models::build_model("chain:3");
    const auto bases = formulas::term_bases(model);
    const auto spectrum = linalg::eigh(model.total());
    const auto q = lowenergy::isometry_below(spectrum, {6.0});
    int samples = 0;
    for (const auto& r : rows) {
        EXPECT_EQ(r.seed, 7u);
        if (r.scheme != "sample") {
            continue;
        }
        ++samples;
        RngStream rng(substream_seed(7, static_cast<std::uint64_t>(r.grid_index),
                                     static_cast<std::uint64_t>(r.sample_index)));
        const auto u = randomized::qdrift_sample(model, bases, r.t, r.r, rng);
        const auto v = linalg::Propagator::exact(spectrum, r.t);
        EXPECT_NEAR(r.error, linalg::projected_distance(u, v, q), 1e-12);
    }
    EXPECT_EQ(samples, 6);
}

TEST(Runner, LongExperimentsSkippedByDefault) {
    ExperimentConfig e = parse_config(kSmall, "cfg").experiments[0];
    e.long_only = true;
    EXPECT_TRUE(run_experiment(e, RunOptions{}).empty());
    e.long_only = false;
    e.models = {"ladder:2x6"};
    std::ostringstream log;
    RunOptions opts;
    opts.log = &log;
    EXPECT_TRUE(run_experiment(e, opts).empty());
    EXPECT_NE(log.str().find("--long"), std::string::npos);
}

TEST(Csv, HeaderAndNumberFormat) {
    EXPECT_EQ(csv_header(),
              "experiment_id,model,n,L,method,p,scheme,delta_step,r,t,Delta,subspace,seed,sample_index,error,"
              "wall_time_ms");
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(2.0), "2");
    EXPECT_EQ(std::stod(format_number(std::numbers::pi)), std::numbers::pi);
    ErrorRecord r;
    r.experiment_id = "e";
    r.wall_time_ms = 12.5;
    std::ostringstream kept;
    write_csv(kept, {r});
    EXPECT_NE(kept.str().find(",12.5\n"), std::string::npos);
    EXPECT_EQ(csv_of({r}).substr(csv_of({r}).size() - 2), ",\n");
}

TEST(Dominance, FlagsOnlyRealViolations) {
    ErrorRecord full;
    full.experiment_id = "e";
    full.model = "chain:4";
    full.method = "pf";
    full.subspace = "full";
    full.error = 0.1;
    ErrorRecord low = full;
    low.subspace = "low";
    low.error = 0.1 + 1e-13;
    EXPECT_TRUE(check_dominance({full, low}).empty());
    low.error = 0.2;
    EXPECT_EQ(check_dominance({full, low}).size(), 1u);
    ErrorRecord other = low;
    other.grid_index = 1;
    EXPECT_TRUE(check_dominance({full, other}).empty());
}

TEST(Threads, FlagAndEnvironment) {
    ::unsetenv("LOWTROT_THREADS");
    EXPECT_EQ(resolve_threads(std::nullopt), 1);
    EXPECT_EQ(resolve_threads(4), 4);
    EXPECT_THROW(resolve_threads(0), InvalidInput);
    ::setenv("LOWTROT_THREADS", "3", 1);
    EXPECT_EQ(resolve_threads(std::nullopt), 3);
    EXPECT_EQ(resolve_threads(2), 2);
    ::setenv("LOWTROT_THREADS", "many", 1);
    EXPECT_THROW(resolve_threads(std::nullopt), InvalidInput);
    ::unsetenv("LOWTROT_THREADS");
}

TEST(LowerBound, OverlapMatchesSineLaw) {
    const auto r = lowerbound_demo(3, std::vector<int>{1, 0, 1}, {std::numbers::pi / 2.0});
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_NEAR(r.rows[0].overlap, 0.353553390593273762, 1e-10);
    EXPECT_NEAR(r.rows[0].predicted, std::pow(std::sin(std::numbers::pi / 4.0), 3), 1e-15);
    const auto zero = lowerbound_demo(2, std::vector<int>{1, 1}, {0.0});
    EXPECT_LT(zero.rows[0].overlap, 1e-14);
}

TEST(LowerBound, FullTransferDecodesEveryString) {
    const auto r = lowerbound_demo(4, std::nullopt, {std::numbers::pi});
    ASSERT_EQ(r.rows.size(), 16u);
    EXPECT_TRUE(r.all_decoded);
    EXPECT_LT(r.max_deviation, 1e-9);
    EXPECT_LT(r.max_wrong_overlap, 1e-12);
    for (const auto& row : r.rows) {
        EXPECT_NEAR(row.overlap, 1.0, 1e-9);
        EXPECT_EQ(row.decoded, row.parity);
    }
    EXPECT_EQ(bits_to_string(parse_bits("0110")), "0110");
    EXPECT_THROW(parse_bits("012"), InvalidInput);
    EXPECT_THROW(lowerbound_demo(3, std::vector<int>{1, 0}), InvalidInput);
}

TEST(Validate, PassesAndDetectsInjectedFault) {
    const auto report = validate();
    EXPECT_TRUE(report.ok());
    EXPECT_FALSE(report.records.empty());
    EXPECT_TRUE(check_dominance(report.records).empty());
    EXPECT_EQ(csv_of(report.records), csv_of(validate().records));
    const auto faulty = validate(Fault::non_hermitian);
    EXPECT_FALSE(faulty.ok());
    EXPECT_THROW(parse_fault("gremlin"), InvalidInput);
}
