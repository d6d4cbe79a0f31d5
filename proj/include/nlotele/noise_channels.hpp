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

#ifndef NLOTELE_NOISE_CHANNELS_HPP
#define NLOTELE_NOISE_CHANNELS_HPP

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nlotele/tensor_core.hpp"

namespace nlotele {

/// Generalized Pauli operator U_im = sum_k w^{k i} |k><k + m|, i.e. Z^i X^m.
ComplexMatrix weyl(std::size_t d, std::size_t i, std::size_t m);

/// |l> -> |-l mod d>. Identity for d <= 2.
ComplexMatrix index_inversion(std::size_t d);

/// Completely positive trace-preserving map in Kraus form.
class KrausChannel {
   public:
    static constexpr double kCompletenessTolerance = 1e-12;

    /// Throws DomainError when sum_k C_k^dagger C_k differs from I by more
    /// than kCompletenessTolerance, DimensionError on shape problems.
    KrausChannel(std::size_t dim, std::vector<ComplexMatrix> operators, std::string label);

    static KrausChannel identity(std::size_t dim);

    std::size_t dim() const { return dim_; }
    const std::vector<ComplexMatrix> &operators() const { return operators_; }
    const std::string &label() const { return label_; }

    double completeness_residual() const;

    /// sum_k C_k rho C_k^dagger.
    ComplexMatrix apply(const ComplexMatrix &rho) const;

   private:
    std::size_t dim_;
    std::vector<ComplexMatrix> operators_;
    std::string label_;
};

/// Shift uses cyclic shifts U_0k, Phase uses clock phases U_k0, Weyl uses all
/// d^2 - 1 non-identity U_im.
enum class CrosstalkVariant { Shift, Phase, Weyl };

std::string_view to_string(CrosstalkVariant v);
CrosstalkVariant parse_crosstalk_variant(std::string_view text);

/// d-flip crosstalk channel with total flip probability p.
///
///   Shift/Phase: sqrt(1 - (d-1)p/d) I,       sqrt(p/d) U   for d - 1 flips
///   Weyl:        sqrt(1 - (d^2-1)p/d^2) I,   sqrt(p/d^2) U for d^2 - 1 flips
///
/// Operators whose weight is exactly zero are dropped.
KrausChannel crosstalk_channel(std::size_t d, double p, CrosstalkVariant variant);

enum class ProductMode { Independent, Correlated };

std::string_view to_string(ProductMode mode);
ProductMode parse_product_mode(std::string_view text);

/// Channel on a (x) b.
///
/// Independent: every pair A_i (x) B_j.
/// Correlated:  index-locked A_i (x) B_i / sqrt(a_i), where A_i^dagger A_i = a_i I
///              and B_i^dagger B_i = b_i I. Requires equal operator counts,
///              scaled-unitary operators, and a_i == b_i; otherwise DomainError.
KrausChannel product_channel(const KrausChannel &a, const KrausChannel &b, ProductMode mode);

/// If every Kraus operator of `channel` is a scaled unitary, its weights a_k
/// (with C_k^dagger C_k = a_k I); otherwise an empty vector.
std::vector<double> scaled_unitary_weights(const KrausChannel &channel);

struct Branch {
    double weight = 0;
    ComplexVector state;  // normalized
};

/// Branch-form channel application on the subsystems selected by `layout`.
/// Each input branch spawns one output branch per Kraus operator with nonzero
/// norm, (w ||C psi||^2, C psi / ||C psi||), in input-major order.
std::vector<Branch> apply_channel_to_branches(
    const KrausChannel &channel, std::span<const Branch> branches, const SubsystemLayout &layout);

/// Descriptor used by experiment configs:
/// {"variant": "shift|phase|weyl", "p": 0.3, "mode": "independent|correlated"}.
struct ChannelDescriptor {
    CrosstalkVariant variant = CrosstalkVariant::Weyl;
    double p = 0;
};

struct ChannelDescriptorJson {
    ChannelDescriptor channel;
    ProductMode mode = ProductMode::Independent;
};

ChannelDescriptorJson parse_channel_descriptor(const nlohmann::json &j);
nlohmann::json channel_descriptor_json(const ChannelDescriptor &channel, ProductMode mode);

}  // namespace nlotele

#endif
