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

#include "nlotele/teleportation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "nlotele/errors.hpp"

namespace nlotele {

std::string_view to_string(CorrectionScheme scheme) {
    switch (scheme) {
        case CorrectionScheme::PaperWeyl:
            return "paper-weyl";
        case CorrectionScheme::DerivedExact:
            return "derived-exact";
        case CorrectionScheme::Custom:
            return "custom";
    }
    return "?";
}

CorrectionScheme parse_correction_scheme(std::string_view text) {
    if (text == "paper-weyl") {
        return CorrectionScheme::PaperWeyl;
    }
    if (text == "derived-exact") {
        return CorrectionScheme::DerivedExact;
    }
    throw ConfigError("unknown correction scheme '" + std::string(text) + "' (expected paper-weyl|derived-exact)");
}

CorrectionTable::CorrectionTable(std::size_t d, std::vector<ComplexMatrix> by_outcome)
    : d_(d), table_(std::move(by_outcome)) {
    if (table_.size() != d * d) {
        throw DimensionError("CorrectionTable: expected one matrix per outcome");
    }
    for (const auto &u : table_) {
        if (u.rows() != d || u.cols() != d) {
            throw DimensionError("CorrectionTable: entry is not d x d");
        }
        if (unitarity_residual(u) > 1e-10) {
            throw DomainError("CorrectionTable: entry is not unitary");
        }
    }
}

PureState compose_initial(const PureState &input, const PureState &bell) {
    if (bell.dim() != input.dim() * input.dim()) {
        throw DimensionError("compose_initial: Bell state must live on d^2 for a d-dimensional input");
    }
    return PureState::normalized(kron(input.amplitudes(), bell.amplitudes()));
}

std::vector<OutcomeRecord> enumerate_outcomes(
    std::span<const Branch> branches, std::size_t d, CrystalConvention convention) {
    const auto rows = measurement_rows(d, convention);
    return accumulate_outcomes_serial(d, rows, branches.size(), [&](std::size_t t, ComplexVector &out) {
        out = branches[t].state;
        return branches[t].weight;
    });
}

ComplexMatrix paper_weyl_correction(std::size_t d, std::size_t i, std::size_t m) {
    return weyl(d, i, m);
}

namespace {

// Bob's unnormalized conditional vector for outcome (i, m), straight from
// the dense measurement operator.
ComplexVector conditional_receiver_vector(
    const PureState &probe, const MeasurementOperator &op, std::size_t d) {
    PureState joint = compose_initial(probe, bell_state(d, {}));
    ComplexVector out(d);
    auto row = op.matrix.row(op.i);
    for (std::size_t x = 0; x < d * d; x++) {
        if (row[x] == Complex{}) {
            continue;
        }
        for (std::size_t b = 0; b < d; b++) {
            out[b] += row[x] * joint[x * d + b];
        }
    }
    return out;
}

}  // namespace

CorrectionSearchResult find_correction(std::size_t d, std::size_t i, std::size_t m, CrystalConvention convention) {
    const MeasurementOperator op = measurement_operator(d, i, m, convention);
    std::vector<PureState> probes;
    std::vector<ComplexVector> received;
    for (std::size_t k = 0; k < kCorrectionProbeCount; k++) {
        probes.push_back(random_pure_state(d, kCorrectionProbeSeed + k));
        received.push_back(conditional_receiver_vector(probes.back(), op, d));
    }
    const ComplexMatrix inv = index_inversion(d);

    CorrectionSearchResult best;
    best.fidelity = -1;
    for (int uses_inv = 0; uses_inv < 2; uses_inv++) {
        for (std::size_t a = 0; a < d; a++) {
            for (std::size_t s = 0; s < d; s++) {
                ComplexMatrix u = uses_inv ? weyl(d, a, s) * inv : weyl(d, a, s);
                double total = 0;
                for (std::size_t k = 0; k < probes.size(); k++) {
                    double n = norm(received[k]);
                    if (n == 0.0) {
                        continue;
                    }
                    ComplexVector out = u * std::span<const Complex>(received[k]);
                    total += std::abs(inner(probes[k].amplitudes(), out)) / n;
                }
                double mean = total / static_cast<double>(probes.size());
                if (mean > best.fidelity + 1e-12) {
                    best = {std::move(u), mean, uses_inv == 1, a, s};
                }
            }
        }
    }
    return best;
}

ComplexMatrix derived_exact_correction(std::size_t d, std::size_t i, std::size_t m, CrystalConvention convention) {
    if (i >= d || m >= d) {
        throw DomainError("derived_exact_correction: outcome index out of range");
    }
    if (convention == CrystalConvention::General) {
        return weyl(d, (d - i) % d, m) * index_inversion(d);
    }
    auto found = find_correction(d, i, m, convention);
    if (found.fidelity < 1.0 - 1e-10) {
        throw DomainError("derived_exact_correction: no unit-fidelity correction in the Weyl/inversion group");
    }
    return found.matrix;
}

namespace {

void validate(const ProtocolConfig &config) {
    const std::size_t d = config.d;
    if (d == 0) {
        throw DimensionError("protocol: dimension must be positive");
    }
    if (config.input.dim() != d) {
        throw DimensionError("protocol: input state dimension differs from d");
    }
    if (config.bell_label.phase >= d || config.bell_label.shift >= d) {
        throw DomainError("protocol: Bell label out of range");
    }
    if (config.convention == CrystalConvention::QutritListing && d != 3) {
        throw DomainError("protocol: the qutrit listing only exists for d = 3");
    }
    if (config.correction == CorrectionScheme::Custom) {
        if (!config.custom_table || config.custom_table->dim() != d) {
            throw DomainError("protocol: custom correction scheme needs a table of matching dimension");
        }
    }
}

ComplexMatrix correction_for(const ProtocolConfig &config, std::size_t i, std::size_t m) {
    switch (config.correction) {
        case CorrectionScheme::PaperWeyl:
            return paper_weyl_correction(config.d, i, m);
        case CorrectionScheme::DerivedExact:
            return derived_exact_correction(config.d, i, m, config.convention);
        case CorrectionScheme::Custom:
            return config.custom_table->at(i, m);
    }
    throw DomainError("unknown correction scheme");
}

ProtocolResult apply_corrections(std::vector<OutcomeRecord> records, const ProtocolConfig &config) {
    const std::size_t d = config.d;
    // Outside the General convention the derived rule comes from a search; do it once per outcome.
    std::vector<ComplexMatrix> searched;
    if (config.correction == CorrectionScheme::DerivedExact && config.convention != CrystalConvention::General) {
        for (std::size_t o = 0; o < d * d; o++) {
            searched.push_back(correction_for(config, o / d, o % d));
        }
    }

    ProtocolResult result;
    result.min_outcome_fidelity = std::numeric_limits<double>::infinity();
    const auto phi = config.input.amplitudes();
    for (auto &rec : records) {
        const ComplexMatrix u = searched.empty() ? correction_for(config, rec.i, rec.m) : searched[rec.i * d + rec.m];
        double f;
        if (const auto *pure = std::get_if<PureState>(&rec.receiver_state)) {
            auto rotated = PureState::normalized(u * pure->amplitudes());
            f = std::abs(inner(phi, rotated.amplitudes()));
            rec.receiver_state = std::move(rotated);
        } else {
            const auto &sigma = std::get<DensityOperator>(rec.receiver_state);
            ComplexMatrix rotated = u * sigma.matrix() * dagger(u);
            rotated = (rotated + dagger(rotated)) * Complex{0.5};
            auto rotated_state = DensityOperator::from_psd(std::move(rotated));
            f = fidelity(phi, rotated_state);
            rec.receiver_state = std::move(rotated_state);
        }
        rec.corrected = true;
        result.average_fidelity += rec.probability * f;
        if (rec.probability > 0) {
            result.min_outcome_fidelity = std::min(result.min_outcome_fidelity, f);
        }
        result.outcome_fidelity.push_back(f);
    }
    if (!std::isfinite(result.min_outcome_fidelity)) {
        result.min_outcome_fidelity = 0;
    }
    result.records = std::move(records);
    return result;
}

std::optional<KrausChannel> channel_for(const std::optional<ChannelDescriptor> &desc, std::size_t d) {
    if (!desc) {
        return std::nullopt;
    }
    return crosstalk_channel(d, desc->p, desc->variant);
}

// Kraus terms of the two-qudit noise, kept factored: term t applies a_ops[.]
// on A1 and b_ops[.] on A2 (an empty list means identity on that qudit).
struct FactoredNoise {
    std::vector<ComplexMatrix> a_ops;
    std::vector<ComplexMatrix> b_ops;
    bool locked = false;

    std::size_t count() const {
        std::size_t na = std::max<std::size_t>(a_ops.size(), 1);
        std::size_t nb = std::max<std::size_t>(b_ops.size(), 1);
        return locked ? na : na * nb;
    }
    std::pair<const ComplexMatrix *, const ComplexMatrix *> term(std::size_t t) const {
        if (locked) {
            return {&a_ops[t], &b_ops[t]};
        }
        std::size_t nb = std::max<std::size_t>(b_ops.size(), 1);
        std::size_t ia = t / nb;
        std::size_t ib = t % nb;
        return {a_ops.empty() ? nullptr : &a_ops[ia], b_ops.empty() ? nullptr : &b_ops[ib]};
    }
};

FactoredNoise factor_noise(const NoiseModel &noise, std::size_t d) {
    FactoredNoise out;
    auto a = channel_for(noise.a1, d);
    auto b = channel_for(noise.a2, d);
    if (a) {
        out.a_ops = a->operators();
    }
    if (b) {
        out.b_ops = b->operators();
    }
    if (a && b && noise.mode == ProductMode::Correlated) {
        // Validates counts and weights; the rescaled B factors mirror product_channel.
        (void)product_channel(*a, *b, ProductMode::Correlated);
        auto wa = scaled_unitary_weights(*a);
        for (std::size_t k = 0; k < out.b_ops.size(); k++) {
            out.b_ops[k] *= Complex{1.0 / std::sqrt(wa[k])};
        }
        out.locked = true;
    }
    return out;
}

}  // namespace

ProtocolResult run_protocol(const ProtocolConfig &config) {
    validate(config);
    const std::size_t d = config.d;
    const PureState joint = compose_initial(config.input, bell_state(d, config.bell_label));
    const FactoredNoise noise = factor_noise(config.noise, d);
    const std::array<std::size_t, 3> dims{d, d, d};
    const std::array<std::size_t, 1> t_a1{0};
    const std::array<std::size_t, 1> t_a2{1};
    const SubsystemLayout on_a1(dims, t_a1);
    const SubsystemLayout on_a2(dims, t_a2);

    const auto rows = measurement_rows(d, config.convention);
    BranchSource source = [&](std::size_t t, ComplexVector &out) {
        auto [a, b] = noise.term(t);
        if (a && b) {
            out = apply_on_subsystems(*b, apply_on_subsystems(*a, joint.amplitudes(), on_a1), on_a2);
        } else if (a) {
            out = apply_on_subsystems(*a, joint.amplitudes(), on_a1);
        } else if (b) {
            out = apply_on_subsystems(*b, joint.amplitudes(), on_a2);
        } else {
            out.assign(joint.amplitudes().begin(), joint.amplitudes().end());
        }
        return 1.0;
    };
    auto records = accumulate_outcomes_parallel(d, rows, noise.count(), source);
    return apply_corrections(std::move(records), config);
}

ProtocolResult run_protocol_reference(const ProtocolConfig &config) {
    validate(config);
    const std::size_t d = config.d;
    const PureState joint = compose_initial(config.input, bell_state(d, config.bell_label));
    std::vector<Branch> branches{{1.0, ComplexVector(joint.amplitudes().begin(), joint.amplitudes().end())}};

    const std::array<std::size_t, 3> dims{d, d, d};
    auto a = channel_for(config.noise.a1, d);
    auto b = channel_for(config.noise.a2, d);
    if (a && b) {
        const std::array<std::size_t, 2> targets{0, 1};
        branches = apply_channel_to_branches(product_channel(*a, *b, config.noise.mode), branches, {dims, targets});
    } else if (a) {
        const std::array<std::size_t, 1> targets{0};
        branches = apply_channel_to_branches(*a, branches, {dims, targets});
    } else if (b) {
        const std::array<std::size_t, 1> targets{1};
        branches = apply_channel_to_branches(*b, branches, {dims, targets});
    }
    return apply_corrections(enumerate_outcomes(branches, d, config.convention), config);
}

nlohmann::json protocol_result_json(const ProtocolConfig &config, const ProtocolResult &result) {
    auto amplitudes = nlohmann::json::array();
    for (auto x : config.input.amplitudes()) {
        amplitudes.push_back({x.real(), x.imag()});
    }
    nlohmann::json noise = nlohmann::json::object();
    noise["mode"] = std::string(to_string(config.noise.mode));
    noise["a1"] = config.noise.a1 ? channel_descriptor_json(*config.noise.a1, config.noise.mode) : nlohmann::json();
    noise["a2"] = config.noise.a2 ? channel_descriptor_json(*config.noise.a2, config.noise.mode) : nlohmann::json();

    auto outcomes = nlohmann::json::array();
    for (std::size_t o = 0; o < result.records.size(); o++) {
        const auto &rec = result.records[o];
        outcomes.push_back({
            {"i", rec.i},
            {"m", rec.m},
            {"probability", rec.probability},
            {"fidelity", result.outcome_fidelity[o]},
        });
    }
    return {
        {"config",
         {
             {"d", config.d},
             {"input", amplitudes},
             {"bell_label", {config.bell_label.phase, config.bell_label.shift}},
             {"convention", std::string(to_string(config.convention))},
             {"noise", noise},
             {"correction", std::string(to_string(config.correction))},
         }},
        {"outcomes", outcomes},
        {"average_fidelity", result.average_fidelity},
        {"min_outcome_fidelity", result.min_outcome_fidelity},
    };
}

}  // namespace nlotele
