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

#ifndef NLOTELE_TELEPORTATION_HPP
#define NLOTELE_TELEPORTATION_HPP

#include <optional>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nlotele/nlo_measurement.hpp"
#include "nlotele/noise_channels.hpp"
#include "nlotele/outcome_kernels.hpp"
#include "nlotele/qudit_states.hpp"

namespace nlotele {

enum class CorrectionScheme { PaperWeyl, DerivedExact, Custom };

std::string_view to_string(CorrectionScheme scheme);
CorrectionScheme parse_correction_scheme(std::string_view text);

/// Bob's rotation for every outcome, stored in outcome order i * d + m.
/// Every entry must be unitary to 1e-10.
class CorrectionTable {
   public:
    CorrectionTable(std::size_t d, std::vector<ComplexMatrix> by_outcome);

    std::size_t dim() const { return d_; }
    const ComplexMatrix &at(std::size_t i, std::size_t m) const { return table_[i * d_ + m]; }

   private:
    std::size_t d_;
    std::vector<ComplexMatrix> table_;
};

/// Crosstalk on Alice's qudits. Bob's qudit is never noisy.
struct NoiseModel {
    std::optional<ChannelDescriptor> a1;
    std::optional<ChannelDescriptor> a2;
    ProductMode mode = ProductMode::Independent;

    bool noiseless() const { return !a1 && !a2; }
};

struct ProtocolConfig {
    std::size_t d = 2;
    PureState input = uniform_state(2);
    BellLabel bell_label{};
    CrystalConvention convention = CrystalConvention::General;
    NoiseModel noise;
    CorrectionScheme correction = CorrectionScheme::DerivedExact;
    std::optional<CorrectionTable> custom_table;
};

struct ProtocolResult {
    std::vector<OutcomeRecord> records;    // outcome order i * d + m, corrected
    std::vector<double> outcome_fidelity;  // parallel to records
    double average_fidelity = 0;           // sum_o p_o F_o
    double min_outcome_fidelity = 0;       // over outcomes with p > 0
};

/// input (x) bell on A1 (x) A2 (x) B.
PureState compose_initial(const PureState &input, const PureState &bell);

/// Serial enumeration of all d^2 outcomes of the crystal + QFT + detector
/// measurement on A1 A2, for weighted branches over A1 (x) A2 (x) B.
/// Records are uncorrected.
std::vector<OutcomeRecord> enumerate_outcomes(
    std::span<const Branch> branches, std::size_t d, CrystalConvention convention);

/// U_im applied unchanged as Bob's rotation.
ComplexMatrix paper_weyl_correction(std::size_t d, std::size_t i, std::size_t m);

/// A rotation that gives unit fidelity for outcome (i, m) in the noiseless
/// protocol. For the General convention this is U_{-i mod d, m} . INV;
/// other conventions are searched. Throws DomainError if nothing reaches
/// fidelity 1 - 1e-10.
ComplexMatrix derived_exact_correction(std::size_t d, std::size_t i, std::size_t m, CrystalConvention convention);

struct CorrectionSearchResult {
    ComplexMatrix matrix;
    double fidelity = 0;  // mean over the probe states
    bool uses_inversion = false;
    std::size_t phase = 0;  // i' of U_{i'm'}
    std::size_t shift = 0;  // m' of U_{i'm'}
};

inline constexpr std::size_t kCorrectionProbeCount = 20;
inline constexpr std::uint64_t kCorrectionProbeSeed = 0x9E3779B9;

/// Brute force over {U_{i'm'}} and {U_{i'm'} . INV}: mean noiseless fidelity
/// over kCorrectionProbeCount seeded probes. Ties keep the lexicographically
/// smallest (uses_inversion, i', m').
CorrectionSearchResult find_correction(std::size_t d, std::size_t i, std::size_t m, CrystalConvention convention);

/// Noise in branch form, exact enumeration of outcomes on the OpenMP kernel,
/// correction, and per-outcome fidelity against the input.
ProtocolResult run_protocol(const ProtocolConfig &config);

/// Same pipeline through materialized branch lists and the serial kernel.
ProtocolResult run_protocol_reference(const ProtocolConfig &config);

nlohmann::json protocol_result_json(const ProtocolConfig &config, const ProtocolResult &result);

}  // namespace nlotele

#endif
