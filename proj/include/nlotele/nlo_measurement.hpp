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

#ifndef NLOTELE_NLO_MEASUREMENT_HPP
#define NLOTELE_NLO_MEASUREMENT_HPP

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nlotele/tensor_core.hpp"

namespace nlotele {

/// Which table of crystal maps to use.
///
/// General: M_0 = sum_k |k+1><k|<-k|, M_1 = sum_k |k><k|<-(k+1)|,
///          M_j = sum_k |k+j><k|<-(k+j)| for j >= 2 (all indices mod d).
/// QutritListing: the three explicit d = 3 maps of the qutrit hardware
///          proposal. Agrees with General for m = 0 only.
enum class CrystalConvention { General, QutritListing };

std::string_view to_string(CrystalConvention c);
CrystalConvention parse_crystal_convention(std::string_view text);

/// Crystal-group map from the A1 (x) A2 pair space (d^2) onto the
/// up-converted photon (d). Entries are 0/1; built by crystal_operator(), but
/// the matrix is not locked so corrupted sets can be certified.
struct CrystalOperator {
    std::size_t d = 0;
    std::size_t m = 0;
    ComplexMatrix matrix;  // d x d^2
};

CrystalOperator crystal_operator(std::size_t d, std::size_t m, CrystalConvention convention);
std::vector<CrystalOperator> crystal_operators(std::size_t d, CrystalConvention convention);

/// Discrete Fourier matrix, entry (y, x) = w^{x y} / sqrt(d).
ComplexMatrix qft(std::size_t d);

/// |i><i| QFT_d M_m: detector i fired after crystal group m.
struct MeasurementOperator {
    std::size_t d = 0;
    std::size_t i = 0;
    std::size_t m = 0;
    ComplexMatrix matrix;  // d x d^2, only row i nonzero
};

MeasurementOperator measurement_operator(std::size_t d, std::size_t i, std::size_t m, CrystalConvention convention);

/// Pi_(i,m) = M_(i,m)^dagger M_(i,m), listed in outcome order i * d + m.
std::vector<ComplexMatrix> povm_elements(std::size_t d, CrystalConvention convention);

struct OperatorCertificate {
    std::size_t m = 0;
    std::size_t nonzero_count = 0;
    double row_orthonormality_residual = 0;  // max-norm of M M^dagger - I_d
};

struct CertificationReport {
    std::size_t dimension = 0;
    std::string convention;
    double completeness_residual = 0;  // max-norm of sum_m M_m^dagger M_m - I_{d^2}
    bool partition_valid = false;
    std::vector<OperatorCertificate> per_operator;
};

/// Checks that a crystal set is a complete, partitioning family of 0/1
/// isometries. Failures are reported, never thrown (except for mixed dims).
CertificationReport certify_measurement_set(
    std::span<const CrystalOperator> operators, std::string_view convention_label = "custom");

void to_json(nlohmann::json &j, const CertificationReport &report);

}  // namespace nlotele

#endif
