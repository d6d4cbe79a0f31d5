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

#include "nlotele/qudit_states.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "nlotele/errors.hpp"

namespace nlotele {

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.empty()) {
        throw DimensionError("PureState: dimension must be positive");
    }
    if (std::abs(norm(amplitudes_) - 1.0) > kNormTolerance) {
        throw DomainError("PureState: amplitudes are not normalized");
    }
}

PureState PureState::normalized(ComplexVector amplitudes) {
    double n = norm(amplitudes);
    if (n == 0.0 || !std::isfinite(n)) {
        throw DomainError("PureState: cannot normalize a zero or non-finite vector");
    }
    for (auto &x : amplitudes) {
        x /= n;
    }
    return PureState(std::move(amplitudes));
}

PureState basis_state(std::size_t d, std::size_t k) {
    if (k >= d) {
        throw DomainError("basis_state: index out of range");
    }
    ComplexVector v(d);
    v[k] = 1.0;
    return PureState(std::move(v));
}

PureState bell_state(std::size_t d, BellLabel label) {
    if (d == 0) {
        throw DimensionError("bell_state: dimension must be positive");
    }
    if (label.phase >= d || label.shift >= d) {
        throw DomainError("bell_state: label out of range");
    }
    ComplexVector v(d * d);
    double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t k = 0; k < d; k++) {
        v[k * d + (k + label.shift) % d] = amp * root_of_unity(d, static_cast<long long>(label.phase * k));
    }
    return PureState(std::move(v));
}

PureState uniform_state(std::size_t d) {
    if (d == 0) {
        throw DimensionError("uniform_state: dimension must be positive");
    }
    return PureState(ComplexVector(d, Complex{1.0 / std::sqrt(static_cast<double>(d)), 0.0}));
}

PureState random_pure_state(std::size_t d, std::uint64_t seed) {
    if (d == 0) {
        throw DimensionError("random_pure_state: dimension must be positive");
    }
    std::mt19937_64 rng(seed);
    auto uniform_open = [&rng] {
        // 53 random bits mapped to (0, 1].
        return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    };
    ComplexVector v(d);
    for (auto &x : v) {
        double radius = std::sqrt(-2.0 * std::log(uniform_open()));
        double angle = 2.0 * std::numbers::pi * uniform_open();
        x = {radius * std::cos(angle), radius * std::sin(angle)};
    }
    return PureState::normalized(std::move(v));
}

PureState parse_state_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    long long d = 0;
    if (!(in >> d) || d <= 0) {
        throw ConfigError("state file: first line must be a positive dimension");
    }
    ComplexVector v(static_cast<std::size_t>(d));
    for (long long k = 0; k < d; k++) {
        double re = 0;
        double im = 0;
        if (!(in >> re >> im)) {
            throw ConfigError("state file: expected " + std::to_string(d) + " lines of 're im', amplitude " +
                              std::to_string(k) + " is missing or malformed");
        }
        v[static_cast<std::size_t>(k)] = {re, im};
    }
    std::string trailing;
    if (in >> trailing) {
        throw ConfigError("state file: unexpected trailing content '" + trailing + "'");
    }
    try {
        return PureState::normalized(std::move(v));
    } catch (const DomainError &) {
        throw ConfigError("state file: amplitudes form a zero vector");
    }
}

PureState load_state_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open state file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_state_text(buf.str());
}

}  // namespace nlotele
