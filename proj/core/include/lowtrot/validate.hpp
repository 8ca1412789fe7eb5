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

#ifndef LOWTROT_VALIDATE_HPP
#define LOWTROT_VALIDATE_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "lowtrot/runner.hpp"

namespace lowtrot::harness {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    /// Rows of the embedded dominance experiment.
    std::vector<ErrorRecord> records;

    bool ok() const;
};

/// Deliberate defects for exercising the failure path.
enum class Fault { none, non_hermitian };

Fault parse_fault(const std::string& name);

/// Cross-module invariants on small fixed fixtures. Deterministic: two calls
/// give identical reports.
ValidationReport validate(Fault fault = Fault::none);

/// One "PASS|FAIL name: detail" line per check, then a summary line.
void print_report(std::ostream& out, const ValidationReport& report);

/// The experiment whose rows validate() checks for low <= full.
ConfigFile validation_suite();

}  // namespace lowtrot::harness

#endif  // LOWTROT_VALIDATE_HPP
