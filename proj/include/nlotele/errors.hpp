// Copyright 2026 The nlotele Authors
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

#ifndef NLOTELE_ERRORS_HPP
#define NLOTELE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nlotele {

/// Operand shapes or subsystem layouts that do not fit together.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A value violates an operation's precondition (index range, probability range, non-Hermitian input...).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed experiment configuration. The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unreadable input or unwritable output. The CLI maps this to exit code 3.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace nlotele

#endif
