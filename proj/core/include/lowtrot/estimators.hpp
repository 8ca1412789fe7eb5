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

#ifndef LOWTROT_ESTIMATORS_HPP
#define LOWTROT_ESTIMATORS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lowtrot/models.hpp"

namespace lowtrot::estimators {

/// Inputs to the closed-form Trotter-number budgets. Locality parameters
/// come from models::model_meta; g is used only by the power-law budget.
struct BudgetQuery {
    double t = 1.0;
    double eps = 1e-3;
    double Delta = 1.0;
    /// Failure probability; required by the probabilistic forms.
    std::optional<double> chi;
    int p = 2;
    double theta = 0.0;
    int L = 3;
    int n = 1;
    int k = 2;
    int M = 1;
    int d = 1;
    double J = 1.0;
    double g = 1.0;
    /// Multiplies every budget; 1 means the bare big-O expression.
    double c = 1.0;
};

/// Fills L, n, k, M, d, J, g from a model.
BudgetQuery query_for_model(const models::HamiltonianModel& model, BudgetQuery base = {});

/// Throws InvalidInput when the query is outside the valid domain.
void validate_query(const BudgetQuery& q, bool needs_chi = false);

struct BudgetTerm {
    std::string label;
    double value = 0.0;
};

/// r and gates are real-valued; callers round up. Gates count one
/// exponential per term per step (L r).
struct Budget {
    double r = 0.0;
    double gates = 0.0;
    std::string dominant_term;
    std::vector<BudgetTerm> terms;
};

enum class Form { expected, probabilistic };

// Polylog factors hidden in the leading terms are dropped except where the
// expression prints them (q log q); c absorbs the residue.

/// p-th order product formula, low-energy form.
///   r = (t^{1+1/p}/eps^{1/p}) (L Delta + L d k J q log q)^{1+1/p}
///     + (t^{1+1/(2p+1)}/eps^{1/(2p+1)}) (L^2 d M J^2)^{1/2+1/(4p+2)}
/// with q the Suzuki stage count.
Budget budget_pf_low(const BudgetQuery& q);

/// Full-space product-formula reference t^{1+1/p} n^{1/p} / eps^{1/p}.
Budget budget_pf_full(const BudgetQuery& q);

/// qDRIFT. Drops the log factor of the Delta term.
///   exp:  L^2 (Delta + dkJ)^2 t^2 / eps + (LM)^{2/3} J^{4/3} t^{4/3} / eps^{1/3}
///   prob: L^2 (Delta + dkJ)^2 t^2 / eps^2 (n + log 1/chi)
///         + (LM)^{2/3} J^{4/3} t^{4/3} / eps^{2/3} (n + log 1/chi)^{1/3}
Budget budget_qdrift_low(const BudgetQuery& q, Form form = Form::expected);

/// Random permutation of the Suzuki ordering.
///   exp:  L t^{1+1/p} (Delta + dkJ)^{1+1/p} / eps^{1/p}
///         + L t^{1+1/(2p+1)} (dkMJ^2)^{1/2+1/(4p+2)} / eps^{1/(2p+1)}
///   prob: (L t (Delta + dkJ))^{(2p+2)/(2p+1)} (n + log 1/chi)^{1/(2p+1)} / eps^{2/(2p+1)}
///         + (L^2 t^2 dkMJ^2)^{(2p+2)/(4p+3)} (n + log 1/chi)^{1/(4p+3)} / eps^{2/(4p+3)}
Budget budget_randperm_low(const BudgetQuery& q, Form form = Form::expected);

/// Order doubling by randomization.
///   exp:  (L t)^{1+1/(2p+1)} (Delta + dkJ)^{1+1/(2p+1)} / eps^{1/(2p+1)}
///         + (L t)^{1+1/(4p+3)} (dkMJ^2)^{(2p+2)/(4p+3)} / eps^{1/(4p+3)}
///   prob: same as the random permutation probabilistic form.
Budget budget_doubling_low(const BudgetQuery& q, Form form = Form::expected);

/// Symmetry-protected first order with averaging exponent theta.
///   (L (Delta + J d k L) t^2 / eps)^{1/(1+theta)} + (L^2 M J d k t^3 / eps)^{1/(2+theta)}
///   + L (Delta + J d k L) t^{3/2} / eps^{1/2} + t^{5/4} L (J d k M)^{1/2} / eps^{1/4}
/// Only the step count is defined; gates report the L r exponentials of the
/// Trotter core and exclude the cost of the transformations.
Budget budget_symprot_low(const BudgetQuery& q);

/// Power-law interactions with strength parameter g.
///   r = t^{1+1/p} L^{1/p} / eps^{1/p} (Delta + g q log q)^{1+1/p}
///     + t^{1+1/(2p+1)} / eps^{1/(2p+1)} (L M g)^{1/2+1/(4p+2)}
Budget budget_powerlaw_low(const BudgetQuery& q);

enum class GRegime { bounded, logarithmic, polynomial };

/// alpha > D: bounded, alpha = D: log n, alpha < D: n^{1 - alpha/D}.
GRegime powerlaw_regime(double alpha, int spatial_dim);

/// Growth of g with n in the given regime (constant factor 1).
double powerlaw_g_scale(double alpha, int spatial_dim, int n);

using BudgetFn = std::function<Budget(const BudgetQuery&)>;

struct CalibrationRun {
    BudgetQuery query;
    double r = 0.0;
    double measured_error = 0.0;
};

/// Least squares in log space: each run's budget is evaluated at
/// eps = measured_error with c = 1, and c = exp(mean log(r / r_pred)).
/// Needs at least 3 runs whose r span a factor of 10.
double calibrate(const BudgetFn& budget, const std::vector<CalibrationRun>& runs);

/// max(tau, log(Delta/eps) / log log(Delta/eps)); requires Delta/eps > e.
double lower_bound_queries(double tau, double Delta, double eps);

/// One line of the estimate table.
struct EstimateRow {
    std::string method;
    double r_exp = 0.0;
    std::optional<double> r_prob;
    double gates = 0.0;
    std::string dominant_term;
};

/// Every budget evaluated for one query (r_prob only when chi is set).
std::vector<EstimateRow> estimate_table(const BudgetQuery& q);

}  // namespace lowtrot::estimators

#endif  // LOWTROT_ESTIMATORS_HPP
