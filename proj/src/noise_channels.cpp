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

#include "nlotele/noise_channels.hpp"

#include <cmath>
#include <sstream>

#include "nlotele/errors.hpp"

namespace nlotele {

ComplexMatrix weyl(std::size_t d, std::size_t i, std::size_t m) {
    if (d == 0) {
        throw DimensionError("weyl: dimension must be positive");
    }
    if (i >= d || m >= d) {
        throw DomainError("weyl: index out of range");
    }
    ComplexMatrix u(d, d);
    for (std::size_t k = 0; k < d; k++) {
        u(k, (k + m) % d) = root_of_unity(d, static_cast<long long>(k * i));
    }
    return u;
}

ComplexMatrix index_inversion(std::size_t d) {
    ComplexMatrix inv(d, d);
    for (std::size_t l = 0; l < d; l++) {
        inv((d - l) % d, l) = 1.0;
    }
    return inv;
}

KrausChannel::KrausChannel(std::size_t dim, std::vector<ComplexMatrix> operators, std::string label)
    : dim_(dim), operators_(std::move(operators)), label_(std::move(label)) {
    if (dim_ == 0 || operators_.empty()) {
        throw DimensionError("KrausChannel: needs a positive dimension and at least one operator");
    }
    for (const auto &op : operators_) {
        if (op.rows() != dim_ || op.cols() != dim_) {
            throw DimensionError("KrausChannel: operator shape does not match channel dimension");
        }
    }
    if (completeness_residual() > kCompletenessTolerance) {
        throw DomainError("KrausChannel '" + label_ + "': sum of C^dagger C is not the identity");
    }
}

KrausChannel KrausChannel::identity(std::size_t dim) {
    return KrausChannel(dim, {ComplexMatrix::identity(dim)}, "identity");
}

double KrausChannel::completeness_residual() const {
    ComplexMatrix sum(dim_, dim_);
    for (const auto &op : operators_) {
        sum += dagger(op) * op;
    }
    return max_abs_diff(sum, ComplexMatrix::identity(dim_));
}

ComplexMatrix KrausChannel::apply(const ComplexMatrix &rho) const {
    if (rho.rows() != dim_ || rho.cols() != dim_) {
        throw DimensionError("KrausChannel::apply: operator dimension mismatch");
    }
    ComplexMatrix out(dim_, dim_);
    for (const auto &op : operators_) {
        out += op * rho * dagger(op);
    }
    return out;
}

std::string_view to_string(CrosstalkVariant v) {
    switch (v) {
        case CrosstalkVariant::Shift:
            return "shift";
        case CrosstalkVariant::Phase:
            return "phase";
        case CrosstalkVariant::Weyl:
            return "weyl";
    }
    return "?";
}

CrosstalkVariant parse_crosstalk_variant(std::string_view text) {
    if (text == "shift") {
        return CrosstalkVariant::Shift;
    }
    if (text == "phase") {
        return CrosstalkVariant::Phase;
    }
    if (text == "weyl") {
        return CrosstalkVariant::Weyl;
    }
    throw ConfigError("unknown noise variant '" + std::string(text) + "' (expected shift|phase|weyl)");
}

std::string_view to_string(ProductMode mode) {
    return mode == ProductMode::Independent ? "independent" : "correlated";
}

ProductMode parse_product_mode(std::string_view text) {
    if (text == "independent") {
        return ProductMode::Independent;
    }
    if (text == "correlated") {
        return ProductMode::Correlated;
    }
    throw ConfigError("unknown noise mode '" + std::string(text) + "' (expected independent|correlated)");
}

KrausChannel crosstalk_channel(std::size_t d, double p, CrosstalkVariant variant) {
    if (d == 0) {
        throw DimensionError("crosstalk_channel: dimension must be positive");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("crosstalk_channel: p must lie in [0, 1]");
    }
    const double dd = static_cast<double>(d);
    const double flips = variant == CrosstalkVariant::Weyl ? dd * dd - 1.0 : dd - 1.0;
    const double flip_weight = p / (flips + 1.0);
    const double stay_weight = 1.0 - flips * flip_weight;

    std::vector<ComplexMatrix> ops;
    if (stay_weight > 0.0) {
        ops.push_back(ComplexMatrix::identity(d) * Complex{std::sqrt(stay_weight)});
    }
    if (flip_weight > 0.0) {
        const Complex amp = std::sqrt(flip_weight);
        switch (variant) {
            case CrosstalkVariant::Shift:
                for (std::size_t k = 1; k < d; k++) {
                    ops.push_back(weyl(d, 0, k) * amp);
                }
                break;
            case CrosstalkVariant::Phase:
                for (std::size_t k = 1; k < d; k++) {
                    ops.push_back(weyl(d, k, 0) * amp);
                }
                break;
            case CrosstalkVariant::Weyl:
                for (std::size_t i = 0; i < d; i++) {
                    for (std::size_t m = 0; m < d; m++) {
                        if (i != 0 || m != 0) {
                            ops.push_back(weyl(d, i, m) * amp);
                        }
                    }
                }
                break;
        }
    }
    if (ops.empty()) {
        // d = 1: every flip set is empty and the identity carries weight 1.
        ops.push_back(ComplexMatrix::identity(d));
    }
    std::ostringstream label;
    label << to_string(variant) << "(p=" << p << ")";
    return KrausChannel(d, std::move(ops), label.str());
}

std::vector<double> scaled_unitary_weights(const KrausChannel &channel) {
    std::vector<double> weights;
    const auto id = ComplexMatrix::identity(channel.dim());
    for (const auto &op : channel.operators()) {
        ComplexMatrix gram = dagger(op) * op;
        double w = gram(0, 0).real();
        if (max_abs_diff(gram, id * Complex{w}) > KrausChannel::kCompletenessTolerance) {
            return {};
        }
        weights.push_back(w);
    }
    return weights;
}

KrausChannel product_channel(const KrausChannel &a, const KrausChannel &b, ProductMode mode) {
    std::vector<ComplexMatrix> ops;
    const std::size_t dim = a.dim() * b.dim();
    if (mode == ProductMode::Independent) {
        ops.reserve(a.operators().size() * b.operators().size());
        for (const auto &x : a.operators()) {
            for (const auto &y : b.operators()) {
                ops.push_back(kron(x, y));
            }
        }
        return KrausChannel(dim, std::move(ops), a.label() + " (x) " + b.label());
    }

    if (a.operators().size() != b.operators().size()) {
        throw DomainError("product_channel: correlated mode needs equal operator counts");
    }
    auto wa = scaled_unitary_weights(a);
    auto wb = scaled_unitary_weights(b);
    if (wa.empty() || wb.empty()) {
        throw DomainError("product_channel: correlated mode needs scaled-unitary Kraus operators");
    }
    for (std::size_t k = 0; k < wa.size(); k++) {
        if (std::abs(wa[k] - wb[k]) > KrausChannel::kCompletenessTolerance) {
            throw DomainError("product_channel: correlated mode needs matching per-index weights");
        }
        ops.push_back(kron(a.operators()[k], b.operators()[k]) * Complex{1.0 / std::sqrt(wa[k])});
    }
    return KrausChannel(dim, std::move(ops), a.label() + " (x)corr " + b.label());
}

std::vector<Branch> apply_channel_to_branches(
    const KrausChannel &channel, std::span<const Branch> branches, const SubsystemLayout &layout) {
    if (layout.target_dim() != channel.dim()) {
        throw DimensionError("apply_channel_to_branches: channel dimension does not match the target subsystems");
    }
    std::vector<Branch> out;
    out.reserve(branches.size() * channel.operators().size());
    for (const auto &branch : branches) {
        if (branch.state.size() != layout.total_dim()) {
            throw DimensionError("apply_channel_to_branches: branch state does not match the subsystem layout");
        }
        for (const auto &op : channel.operators()) {
            ComplexVector next = apply_on_subsystems(op, branch.state, layout);
            double n = norm(next);
            if (n == 0.0) {
                continue;
            }
            for (auto &x : next) {
                x /= n;
            }
            out.push_back({branch.weight * n * n, std::move(next)});
        }
    }
    return out;
}

ChannelDescriptorJson parse_channel_descriptor(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw ConfigError("channel descriptor must be a JSON object");
    }
    ChannelDescriptorJson out;
    for (const auto &[key, value] : j.items()) {
        if (key == "variant") {
            if (!value.is_string()) {
                throw ConfigError("channel descriptor: 'variant' must be a string");
            }
            out.channel.variant = parse_crosstalk_variant(value.get<std::string>());
        } else if (key == "p") {
            if (!value.is_number()) {
                throw ConfigError("channel descriptor: 'p' must be a number");
            }
            out.channel.p = value.get<double>();
            if (!(out.channel.p >= 0.0 && out.channel.p <= 1.0)) {
                throw ConfigError("channel descriptor: 'p' must lie in [0, 1]");
            }
        } else if (key == "mode") {
            if (!value.is_string()) {
                throw ConfigError("channel descriptor: 'mode' must be a string");
            }
            out.mode = parse_product_mode(value.get<std::string>());
        } else {
            throw ConfigError("channel descriptor: unknown key '" + key + "'");
        }
    }
    return out;
}

nlohmann::json channel_descriptor_json(const ChannelDescriptor &channel, ProductMode mode) {
    return {
        {"variant", std::string(to_string(channel.variant))},
        {"p", channel.p},
        {"mode", std::string(to_string(mode))},
    };
}

}  // namespace nlotele
