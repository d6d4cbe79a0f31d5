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

#include "nlotele/outcome_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>

#include "nlotele/errors.hpp"

namespace nlotele {

std::vector<MeasurementRow> measurement_rows(std::size_t d, CrystalConvention convention) {
    const ComplexMatrix f = qft(d);
    std::vector<MeasurementRow> rows;
    rows.reserve(d * d);
    std::vector<CrystalOperator> crystals = crystal_operators(d, convention);
    for (std::size_t i = 0; i < d; i++) {
        for (std::size_t m = 0; m < d; m++) {
            MeasurementRow row{i, m, {}};
            const auto &c = crystals[m].matrix;
            for (std::size_t out = 0; out < d; out++) {
                for (std::size_t col = 0; col < d * d; col++) {
                    if (c(out, col) != Complex{}) {
                        row.entries.emplace_back(col, f(i, out) * c(out, col));
                    }
                }
            }
            std::sort(row.entries.begin(), row.entries.end(), [](const auto &a, const auto &b) {
                return a.first < b.first;
            });
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

OutcomeAccumulator::OutcomeAccumulator(std::size_t d, std::span<const MeasurementRow> rows)
    : d_(d), rows_(rows), slots_(rows.size()), scratch_(d) {
    if (rows.size() != d * d) {
        throw DimensionError("OutcomeAccumulator: expected d^2 measurement rows");
    }
    for (auto &slot : slots_) {
        slot.density.assign(d * d, Complex{});
    }
}

void OutcomeAccumulator::add(double weight, std::span<const Complex> state) {
    const std::size_t d = d_;
    if (state.size() != d * d * d) {
        throw DimensionError("OutcomeAccumulator::add: state is not on A1 (x) A2 (x) B");
    }
    if (weight <= 0.0) {
        return;
    }
    const double amp = std::sqrt(weight);
    for (std::size_t o = 0; o < slots_.size(); o++) {
        std::fill(scratch_.begin(), scratch_.end(), Complex{});
        for (const auto &[col, coeff] : rows_[o].entries) {
            const Complex *src = state.data() + col * d;
            for (std::size_t b = 0; b < d; b++) {
                scratch_[b] += coeff * src[b];
            }
        }
        double p = 0;
        for (std::size_t b = 0; b < d; b++) {
            scratch_[b] *= amp;
            p += std::norm(scratch_[b]);
        }
        if (p == 0.0) {
            continue;
        }
        Slot &slot = slots_[o];
        slot.probability += p;
        if (++slot.contributions == 1) {
            slot.single = scratch_;
        }
        for (std::size_t r = 0; r < d; r++) {
            const Complex x = scratch_[r];
            Complex *dst = slot.density.data() + r * d;
            for (std::size_t c = 0; c < d; c++) {
                dst[c] += x * std::conj(scratch_[c]);
            }
        }
    }
}

void OutcomeAccumulator::merge(const OutcomeAccumulator &other) {
    if (other.d_ != d_ || other.slots_.size() != slots_.size()) {
        throw DimensionError("OutcomeAccumulator::merge: shapes differ");
    }
    for (std::size_t o = 0; o < slots_.size(); o++) {
        Slot &mine = slots_[o];
        const Slot &theirs = other.slots_[o];
        if (theirs.contributions == 0) {
            continue;
        }
        if (mine.contributions == 0) {
            mine.single = theirs.single;
        }
        mine.contributions += theirs.contributions;
        mine.probability += theirs.probability;
        for (std::size_t k = 0; k < mine.density.size(); k++) {
            mine.density[k] += theirs.density[k];
        }
    }
}

std::vector<OutcomeRecord> OutcomeAccumulator::finish() const {
    std::vector<OutcomeRecord> out;
    out.reserve(slots_.size());
    for (std::size_t o = 0; o < slots_.size(); o++) {
        const Slot &slot = slots_[o];
        OutcomeRecord rec{rows_[o].i, rows_[o].m, slot.probability, PureState(ComplexVector{1.0}), false};
        if (slot.contributions == 0) {
            // Unreachable outcome; keep a placeholder so records stay indexed by outcome.
            rec.receiver_state = basis_state(d_, 0);
        } else if (slot.contributions == 1) {
            rec.receiver_state = PureState::normalized(slot.single);
        } else {
            ComplexMatrix rho(d_, d_, slot.density);
            rho *= Complex{1.0 / slot.probability};
            rec.receiver_state = DensityOperator::from_psd(std::move(rho));
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<OutcomeRecord> accumulate_outcomes_serial(
    std::size_t d, std::span<const MeasurementRow> rows, std::size_t term_count, const BranchSource &source) {
    OutcomeAccumulator acc(d, rows);
    ComplexVector state;
    for (std::size_t t = 0; t < term_count; t++) {
        double w = source(t, state);
        acc.add(w, state);
    }
    return acc.finish();
}

std::size_t parallel_chunk_count(std::size_t d, std::size_t term_count) {
    constexpr std::size_t kMaxChunks = 64;
    constexpr std::size_t kMemoryBudget = std::size_t{512} << 20;
    const std::size_t per_chunk = d * d * d * d * sizeof(Complex) + 1;
    std::size_t chunks = std::clamp<std::size_t>(kMemoryBudget / per_chunk, 1, kMaxChunks);
    return std::max<std::size_t>(1, std::min(chunks, term_count));
}

std::vector<OutcomeRecord> accumulate_outcomes_parallel(
    std::size_t d, std::span<const MeasurementRow> rows, std::size_t term_count, const BranchSource &source) {
    const std::size_t chunks = parallel_chunk_count(d, term_count);
    std::vector<std::optional<OutcomeAccumulator>> partial(chunks);
    std::vector<std::exception_ptr> errors(chunks);
    const auto n_chunks = static_cast<long long>(chunks);

#pragma omp parallel for schedule(dynamic, 1)
    for (long long c = 0; c < n_chunks; c++) {
        const auto cu = static_cast<std::size_t>(c);
        const std::size_t lo = term_count * cu / chunks;
        const std::size_t hi = term_count * (cu + 1) / chunks;
        try {
            OutcomeAccumulator acc(d, rows);
            ComplexVector state;
            for (std::size_t t = lo; t < hi; t++) {
                double w = source(t, state);
                acc.add(w, state);
            }
            partial[cu].emplace(std::move(acc));
        } catch (...) {
            errors[cu] = std::current_exception();
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    OutcomeAccumulator total = std::move(*partial[0]);
    for (std::size_t c = 1; c < chunks; c++) {
        total.merge(*partial[c]);
    }
    return total.finish();
}

}  // namespace nlotele
