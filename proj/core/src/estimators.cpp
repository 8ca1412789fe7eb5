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

#include "lowtrot/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lowtrot/errors.hpp"
#include "lowtrot/formulas.hpp"

namespace lowtrot::estimators {
namespace {

Budget assemble(std::vector<BudgetTerm> terms, double c, int L) {
    Budget b;
    double sum = 0.0;
    const BudgetTerm* top = nullptr;
    for (auto& term : terms) {
        term.value *= c;
        sum += term.value;
        if (top == nullptr || term.value > top->value) {
            top = &term;
        }
    }
    b.r = sum;
    b.gates = static_cast<double>(L) * sum;
    b.dominant_term = top != nullptr ? top->label : "";
    b.terms = std::move(terms);
    return b;
}

double log_inverse_chi(const BudgetQuery& q) {
    return std::log(1.0 / *q.chi);
}

double local_spread(const BudgetQuery& q) {
    return q.Delta + q.d * q.k * q.J;
}

}  // namespace

BudgetQuery query_for_model(const models::HamiltonianModel& model, BudgetQuery base) {
    const auto meta = models::model_meta(model);
    base.L = model.num_terms();
    base.n = model.n;
    base.k = meta.k;
    base.M = meta.M;
    base.d = meta.d;
    base.J = meta.J;
    base.g = meta.g;
    return base;
}

void validate_query(const BudgetQuery& q, bool needs_chi) {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(q.t)) {
        throw InvalidInput("budget: t must be > 0");
    }
    if (!positive(q.eps)) {
        throw InvalidInput("budget: eps must be > 0");
    }
    if (!std::isfinite(q.Delta) || q.Delta < 0.0) {
        throw InvalidInput("budget: Delta must be >= 0");
    }
    if (needs_chi && !q.chi) {
        throw InvalidInput("budget: the probabilistic form needs chi");
    }
    if (q.chi && !(*q.chi > 0.0 && *q.chi < 1.0)) {
        throw InvalidInput("budget: chi must lie in (0, 1)");
    }
    formulas::validate_order(q.p);
    if (!(q.theta >= 0.0 && q.theta <= 1.0)) {
        throw InvalidInput("budget: theta must lie in [0, 1]");
    }
    if (q.L < 1 || q.n < 1 || q.k < 1 || q.M < 1 || q.d < 1) {
        throw InvalidInput("budget: L, n, k, M, d must be >= 1");
    }
    if (!positive(q.J) || !positive(q.g) || !positive(q.c)) {
        throw InvalidInput("budget: J, g and c must be > 0");
    }
}

Budget budget_pf_low(const BudgetQuery& q) {
    validate_query(q);
    const double p = q.p;
    const double stages = formulas::expected_stage_count(q.p, q.L);
    const double qlogq = stages * std::log(stages);
    const double first = std::pow(q.t, 1.0 + 1.0 / p) / std::pow(q.eps, 1.0 / p) *
                         std::pow(q.L * q.Delta + q.L * q.d * q.k * q.J * qlogq, 1.0 + 1.0 / p);
    const double second = std::pow(q.t, 1.0 + 1.0 / (2 * p + 1)) / std::pow(q.eps, 1.0 / (2 * p + 1)) *
                          std::pow(double(q.L) * q.L * q.d * q.M * q.J * q.J, 0.5 + 1.0 / (4 * p + 2));
    return assemble({{"low_energy", first}, {"interaction", second}}, q.c, q.L);
}

Budget budget_pf_full(const BudgetQuery& q) {
    validate_query(q);
    const double p = q.p;
    const double r = std::pow(q.t, 1.0 + 1.0 / p) * std::pow(double(q.n), 1.0 / p) / std::pow(q.eps, 1.0 / p);
    return assemble({{"full_space", r}}, q.c, q.L);
}

Budget budget_qdrift_low(const BudgetQuery& q, Form form) {
    const bool prob = form == Form::probabilistic;
    validate_query(q, prob);
    const double L = q.L;
    const double base_first = L * L * std::pow(local_spread(q), 2) * q.t * q.t;
    const double base_second = std::pow(L * q.M, 2.0 / 3.0) * std::pow(q.J, 4.0 / 3.0) * std::pow(q.t, 4.0 / 3.0);
    double first = 0.0;
    double second = 0.0;
    if (!prob) {
        first = base_first / q.eps;
        second = base_second / std::pow(q.eps, 1.0 / 3.0);
    } else {
        const double conf = q.n + log_inverse_chi(q);
        first = base_first / (q.eps * q.eps) * conf;
        second = base_second / std::pow(q.eps, 2.0 / 3.0) * std::pow(conf, 1.0 / 3.0);
    }
    return assemble({{"low_energy", first}, {"interaction", second}}, q.c, q.L);
}

namespace {

Budget randperm_prob(const BudgetQuery& q) {
    const double p = q.p;
    const double L = q.L;
    const double conf = q.n + log_inverse_chi(q);
    const double first = std::pow(L * q.t * local_spread(q), (2 * p + 2) / (2 * p + 1)) *
                         std::pow(conf, 1.0 / (2 * p + 1)) / std::pow(q.eps, 2.0 / (2 * p + 1));
    const double second = std::pow(L * L * q.t * q.t * q.d * q.k * q.M * q.J * q.J, (2 * p + 2) / (4 * p + 3)) *
                          std::pow(conf, 1.0 / (4 * p + 3)) / std::pow(q.eps, 2.0 / (4 * p + 3));
    return assemble({{"low_energy", first}, {"interaction", second}}, q.c, q.L);
}

}  // namespace

Budget budget_randperm_low(const BudgetQuery& q, Form form) {
    const bool prob = form == Form::probabilistic;
    validate_query(q, prob);
    if (prob) {
        return randperm_prob(q);
    }
    const double p = q.p;
    const double L = q.L;
    const double first =
        L * std::pow(q.t, 1.0 + 1.0 / p) * std::pow(local_spread(q), 1.0 + 1.0 / p) / std::pow(q.eps, 1.0 / p);
    const double second = L * std::pow(q.t, 1.0 + 1.0 / (2 * p + 1)) *
                          std::pow(q.d * q.k * q.M * q.J * q.J, 0.5 + 1.0 / (4 * p + 2)) /
                          std::pow(q.eps, 1.0 / (2 * p + 1));
    return assemble({{"low_energy", first}, {"interaction", second}}, q.c, q.L);
}

Budget budget_doubling_low(const BudgetQuery& q, Form form) {
    const bool prob = form == Form::probabilistic;
    validate_query(q, prob);
    if (prob) {
        return randperm_prob(q);
    }
    const double p = q.p;
    const double Lt = q.L * q.t;
    const double a = 1.0 / (2 * p + 1);
    const double b = 1.0 / (4 * p + 3);
    const double first = std::pow(Lt, 1.0 + a) * std::pow(local_spread(q), 1.0 + a) / std::pow(q.eps, a);
    const double second =
        std::pow(Lt, 1.0 + b) * std::pow(q.d * q.k * q.M * q.J * q.J, (2 * p + 2) * b) / std::pow(q.eps, b);
    return assemble({{"low_energy", first}, {"interaction", second}}, q.c, q.L);
}

Budget budget_symprot_low(const BudgetQuery& q) {
    validate_query(q);
    const double L = q.L;
    const double th = q.theta;
    const double jdk = q.J * q.d * q.k;
    const double spread = q.Delta + jdk * L;
    const double averaged = std::pow(L * spread * q.t * q.t / q.eps, 1.0 / (1.0 + th));
    const double averaged_interaction = std::pow(L * L * q.M * jdk * std::pow(q.t, 3) / q.eps, 1.0 / (2.0 + th));
    const double leakage = L * spread * std::pow(q.t, 1.5) / std::sqrt(q.eps);
    const double leakage_interaction = std::pow(q.t, 1.25) * L * std::sqrt(jdk * q.M) / std::pow(q.eps, 0.25);
    return assemble({{"averaged_low_energy", averaged},
                     {"averaged_interaction", averaged_interaction},
                     {"leakage_low_energy", leakage},
                     {"leakage_interaction", leakage_interaction}},
                    q.c, q.L);
}

Budget budget_powerlaw_low(const BudgetQuery& q) {
    validate_query(q);
    const double p = q.p;
    const double L = q.L;
    const double stages = formulas::expected_stage_count(q.p, q.L);
    const double first = std::pow(q.t, 1.0 + 1.0 / p) * std::pow(L, 1.0 / p) / std::pow(q.eps, 1.0 / p) *
                         std::pow(q.Delta + q.g * stages * std::log(stages), 1.0 + 1.0 / p);
    const double second = std::pow(q.t, 1.0 + 1.0 / (2 * p + 1)) / std::pow(q.eps, 1.0 / (2 * p + 1)) *
                          std::pow(L * q.M * q.g, 0.5 + 1.0 / (4 * p + 2));
    return assemble({{"low_energy", first}, {"interaction", second}}, q.c, q.L);
}

GRegime powerlaw_regime(double alpha, int spatial_dim) {
    if (!(alpha >= 0.0) || spatial_dim < 1) {
        throw InvalidInput("powerlaw_regime: need alpha >= 0 and spatial dimension >= 1");
    }
    if (alpha > spatial_dim) {
        return GRegime::bounded;
    }
    if (alpha == spatial_dim) {
        return GRegime::logarithmic;
    }
    return GRegime::polynomial;
}

double powerlaw_g_scale(double alpha, int spatial_dim, int n) {
    if (n < 1) {
        throw InvalidInput("powerlaw_g_scale: n must be >= 1");
    }
    switch (powerlaw_regime(alpha, spatial_dim)) {
        case GRegime::bounded:
            return 1.0;
        case GRegime::logarithmic:
            return std::log(static_cast<double>(n));
        case GRegime::polynomial:
            return std::pow(static_cast<double>(n), 1.0 - alpha / spatial_dim);
    }
    return 1.0;
}

double calibrate(const BudgetFn& budget, const std::vector<CalibrationRun>& runs) {
    if (runs.size() < 3) {
        throw InvalidInput("calibrate: need at least 3 runs");
    }
    double r_min = runs.front().r;
    double r_max = runs.front().r;
    double sum_log = 0.0;
    for (const auto& run : runs) {
        if (!(run.r > 0.0) || !(run.measured_error > 0.0)) {
            throw InvalidInput("calibrate: runs need r > 0 and a positive measured error");
        }
        r_min = std::min(r_min, run.r);
        r_max = std::max(r_max, run.r);
        BudgetQuery q = run.query;
        q.eps = run.measured_error;
        q.c = 1.0;
        const double predicted = budget(q).r;
        if (!(predicted > 0.0) || !std::isfinite(predicted)) {
            throw NumericalFailure("calibrate: budget returned a non-positive prediction");
        }
        sum_log += std::log(run.r / predicted);
    }
    if (r_max < 10.0 * r_min) {
        throw InvalidInput("calibrate: runs must span at least a decade in r");
    }
    return std::exp(sum_log / static_cast<double>(runs.size()));
}

double lower_bound_queries(double tau, double Delta, double eps) {
    if (!(tau >= 0.0) || !(Delta > 0.0) || !(eps > 0.0)) {
        throw InvalidInput("lower_bound_queries: need tau >= 0, Delta > 0, eps > 0");
    }
    const double ratio = Delta / eps;
    if (!(ratio > std::numbers::e)) {
        throw InvalidInput("lower_bound_queries: Delta/eps must exceed e (iterated log undefined)");
    }
    const double lg = std::log(ratio);
    return std::max(tau, lg / std::log(lg));
}

std::vector<EstimateRow> estimate_table(const BudgetQuery& q) {
    std::vector<EstimateRow> rows;
    auto add = [&](const std::string& name, const Budget& exp, std::optional<Budget> prob) {
        EstimateRow row;
        row.method = name;
        row.r_exp = exp.r;
        if (prob) {
            row.r_prob = prob->r;
        }
        row.gates = exp.gates;
        row.dominant_term = exp.dominant_term;
        rows.push_back(row);
    };
    const bool has_chi = q.chi.has_value();
    add("pf_full", budget_pf_full(q), std::nullopt);
    add("pf", budget_pf_low(q), std::nullopt);
    add("qdrift", budget_qdrift_low(q),
        has_chi ? std::optional<Budget>(budget_qdrift_low(q, Form::probabilistic)) : std::nullopt);
    add("randperm", budget_randperm_low(q),
        has_chi ? std::optional<Budget>(budget_randperm_low(q, Form::probabilistic)) : std::nullopt);
    add("doubling", budget_doubling_low(q),
        has_chi ? std::optional<Budget>(budget_doubling_low(q, Form::probabilistic)) : std::nullopt);
    add("symprot", budget_symprot_low(q), std::nullopt);
    add("powerlaw", budget_powerlaw_low(q), std::nullopt);
    return rows;
}

}  // namespace lowtrot::estimators
