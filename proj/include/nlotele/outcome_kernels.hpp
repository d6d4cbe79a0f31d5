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

#ifndef NLOTELE_OUTCOME_KERNELS_HPP
#define NLOTELE_OUTCOME_KERNELS_HPP

#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "nlotele/nlo_measurement.hpp"
#include "nlotele/qudit_states.hpp"
#include "nlotele/tensor_core.hpp"

namespace nlotele {

using ReceiverState = std::variant<PureState, DensityOperator>;

/// One measurement branch (detector i, crystal group m) and Bob's state.
struct OutcomeRecord {
    std::size_t i = 0;
    std::size_t m = 0;
    double probability = 0;
    ReceiverState receiver_state;
    bool corrected = false;
};

/// Nonzero entries of the single live row of M_(i,m), as (column in the
/// A1 (x) A2 space, amplitude).
struct MeasurementRow {
    std::size_t i = 0;
    std::size_t m = 0;
    std::vector<std::pair<std::size_t, Complex>> entries;
};

/// Rows for all d^2 outcomes, in order i * d + m.
std::vector<MeasurementRow> measurement_rows(std::size_t d, CrystalConvention convention);

/// Running sums over branches for every outcome: probability and Bob's
/// unnormalized reduced state sum_b w_b |v_b><v_b|, where v_b is Bob's
/// conditional vector (M_(i,m) (x) I_B) |psi_b>.
class OutcomeAccumulator {
   public:
    OutcomeAccumulator(std::size_t d, std::span<const MeasurementRow> rows);

    /// `state` lives on A1 (x) A2 (x) B and need not be normalized.
    void add(double weight, std::span<const Complex> state);

    /// Adds `other`'s sums after this one's.
    void merge(const OutcomeAccumulator &other);

    /// Receiver states are pure when exactly one branch reached the outcome.
    std::vector<OutcomeRecord> finish() const;

    std::size_t dim() const { return d_; }

   private:
    struct Slot {
        double probability = 0;
        std::size_t contributions = 0;
        ComplexVector single;  // the only contribution, scaled by sqrt(w)
        std::vector<Complex> density;
    };

    std::size_t d_;
    std::span<const MeasurementRow> rows_;
    std::vector<Slot> slots_;
    ComplexVector scratch_;
};

/// Writes the (possibly unnormalized) state of branch `term` into `out` and
/// returns its weight. Must be safe to call concurrently.
using BranchSource = std::function<double(std::size_t term, ComplexVector &out)>;

/// Reference: one accumulator, terms in order.
std::vector<OutcomeRecord> accumulate_outcomes_serial(
    std::size_t d, std::span<const MeasurementRow> rows, std::size_t term_count, const BranchSource &source);

/// OpenMP over a fixed number of contiguous term chunks (a function of d and
/// term_count only). Chunk sums are merged in chunk order, so the result is
/// bit-identical for any thread count.
std::vector<OutcomeRecord> accumulate_outcomes_parallel(
    std::size_t d, std::span<const MeasurementRow> rows, std::size_t term_count, const BranchSource &source);

std::size_t parallel_chunk_count(std::size_t d, std::size_t term_count);

}  // namespace nlotele

#endif
