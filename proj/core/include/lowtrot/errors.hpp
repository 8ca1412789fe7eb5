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

#ifndef LOWTROT_ERRORS_HPP
#define LOWTROT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lowtrot {

/// Caller supplied something outside an operation's domain (bad size, bad id,
/// non-Hermitian matrix, ...). The CLI maps this to exit code 1.
class InvalidInput : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical kernel failed (eigensolver did not converge, non-finite
/// result). The CLI maps this to exit code 2.
class NumericalFailure : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace lowtrot

#endif  // LOWTROT_ERRORS_HPP
