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

#ifndef NLOTELE_QUDIT_STATES_HPP
#define NLOTELE_QUDIT_STATES_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>

#include "nlotele/tensor_core.hpp"

namespace nlotele {

/// Unit-norm state vector. Construction checks the norm to 1e-12.
class PureState {
   public:
    static constexpr double kNormTolerance = 1e-12;

    explicit PureState(ComplexVector amplitudes);

    /// Divides by the Euclidean norm first. Throws DomainError on a zero vector.
    static PureState normalized(ComplexVector amplitudes);

    std::size_t dim() const { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    Complex operator[](std::size_t k) const { return amplitudes_[k]; }

    bool operator==(const PureState &other) const = default;

   private:
    ComplexVector amplitudes_;
};

/// Bell-basis label: `phase` is the l index, `shift` the m index.
struct BellLabel {
    std::size_t phase = 0;
    std::size_t shift = 0;
};

PureState basis_state(std::size_t d, std::size_t k);

/// (1/sqrt d) sum_k w^{l k} |k>|k + m mod d>.
PureState bell_state(std::size_t d, BellLabel label);

PureState uniform_state(std::size_t d);

/// Name of the pseudo-random scheme behind random_pure_state. Bumped whenever
/// the draw sequence changes, since golden outputs depend on it.
inline constexpr std::string_view kRandomStateScheme = "mt19937_64+box-muller/v1";

/// Normalized vector of d complex standard-normal draws. The generator is
/// std::mt19937_64 seeded with `seed`; each amplitude consumes one Box-Muller
/// pair (real part from the cosine branch, imaginary from the sine branch).
PureState random_pure_state(std::size_t d, std::uint64_t seed);

/// Plain-text state: first line d, then d lines of "re im". The result is
/// normalized; zero vectors and malformed text raise ConfigError.
PureState parse_state_text(std::string_view text);
PureState load_state_file(const std::filesystem::path &path);

}  // namespace nlotele

#endif
