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

#include "nlotele/nlo_measurement.hpp"

#include <array>
#include <cmath>

#include "nlotele/errors.hpp"

namespace nlotele {

std::string_view to_string(CrystalConvention c) {
    switch (c) {
        case CrystalConvention::General:
            return "general";
        case CrystalConvention::QutritListing:
            return "qutrit-listing";
    }
    return "?";
}

CrystalConvention parse_crystal_convention(std::string_view text) {
    if (text == "general") {
        return CrystalConvention::General;
    }
    if (text == "qutrit-listing") {
        return CrystalConvention::QutritListing;
    }
    throw ConfigError("unknown crystal convention '" + std::string(text) + "'");
}

namespace {

// (output, a1, a2) triples of the explicit qutrit listing.
constexpr std::array<std::array<std::array<std::size_t, 3>, 3>, 3> kQutritListing{{
    {{{0, 2, 1}, {1, 0, 0}, {2, 1, 2}}},
    {{{0, 0, 1}, {1, 1, 0}, {2, 2, 2}}},
    {{{0, 2, 0}, {1, 1, 1}, {2, 0, 2}}},
}};

}  // namespace

CrystalOperator crystal_operator(std::size_t d, std::size_t m, CrystalConvention convention) {
    if (d == 0) {
        throw DimensionError("crystal_operator: dimension must be positive");
    }
    if (m >= d) {
        throw DomainError("crystal_operator: crystal index out of range");
    }
    CrystalOperator op{d, m, ComplexMatrix(d, d * d)};
    if (convention == CrystalConvention::QutritListing) {
        if (d != 3) {
            throw DomainError("crystal_operator: the qutrit listing only exists for d = 3");
        }
        for (auto [out, a1, a2] : kQutritListing[m]) {
            op.matrix(out, a1 * 3 + a2) = 1.0;
        }
        return op;
    }
    for (std::size_t k = 0; k < d; k++) {
        std::size_t out;
        std::size_t a2;
        if (m == 0) {
            out = (k + 1) % d;
            a2 = (d - k) % d;
        } else if (m == 1) {
            out = k;
            a2 = (2 * d - k - 1) % d;
        } else {
            out = (k + m) % d;
            a2 = (2 * d - k - m) % d;
        }
        op.matrix(out, k * d + a2) = 1.0;
    }
    return op;
}

std::vector<CrystalOperator> crystal_operators(std::size_t d, CrystalConvention convention) {
    std::vector<CrystalOperator> out;
    out.reserve(d);
    for (std::size_t m = 0; m < d; m++) {
        out.push_back(crystal_operator(d, m, convention));
    }
    return out;
}

ComplexMatrix qft(std::size_t d) {
    if (d == 0) {
        throw DimensionError("qft: dimension must be positive");
    }
    ComplexMatrix f(d, d);
    double amp = 1.0 / std::sqrt(static_cast<double>(d));
    for (std::size_t y = 0; y < d; y++) {
        for (std::size_t x = 0; x < d; x++) {
            f(y, x) = amp * root_of_unity(d, static_cast<long long>(x * y));
        }
    }
    return f;
}

MeasurementOperator measurement_operator(std::size_t d, std::size_t i, std::size_t m, CrystalConvention convention) {
    if (i >= d) {
        throw DomainError("measurement_operator: detector index out of range");
    }
    CrystalOperator crystal = crystal_operator(d, m, convention);
    ComplexMatrix projector(d, d);
    projector(i, i) = 1.0;
    MeasurementOperator op{d, i, m, projector * qft(d) * crystal.matrix};
    for (std::size_t r = 0; r < d; r++) {
        if (r == i) {
            continue;
        }
        for (auto x : op.matrix.row(r)) {
            if (x != Complex{}) {
                throw DomainError("measurement_operator: product has support outside the detector row");
            }
        }
    }
    return op;
}

std::vector<ComplexMatrix> povm_elements(std::size_t d, CrystalConvention convention) {
    std::vector<ComplexMatrix> out;
    out.reserve(d * d);
    for (std::size_t i = 0; i < d; i++) {
        for (std::size_t m = 0; m < d; m++) {
            const auto op = measurement_operator(d, i, m, convention);
            out.push_back(dagger(op.matrix) * op.matrix);
        }
    }
    return out;
}

CertificationReport certify_measurement_set(std::span<const CrystalOperator> operators, std::string_view convention_label) {
    CertificationReport report;
    report.convention = std::string(convention_label);
    if (operators.empty()) {
        return report;
    }
    const std::size_t d = operators.front().d;
    report.dimension = d;
    for (const auto &op : operators) {
        if (op.d != d || op.matrix.rows() != d || op.matrix.cols() != d * d) {
            throw DimensionError("certify_measurement_set: operators do not share one dimension");
        }
    }

    ComplexMatrix sum(d * d, d * d);
    std::vector<int> hits(d * d, 0);
    bool partition = operators.size() == d;
    for (const auto &op : operators) {
        sum += dagger(op.matrix) * op.matrix;
        OperatorCertificate cert{op.m};
        for (std::size_t r = 0; r < d; r++) {
            for (std::size_t c = 0; c < d * d; c++) {
                Complex x = op.matrix(r, c);
                if (x == Complex{}) {
                    continue;
                }
                cert.nonzero_count++;
                hits[c]++;
                if (x != Complex{1.0}) {
                    partition = false;
                }
            }
        }
        if (cert.nonzero_count != d) {
            partition = false;
        }
        cert.row_orthonormality_residual =
            max_abs_diff(op.matrix * dagger(op.matrix), ComplexMatrix::identity(d));
        report.per_operator.push_back(cert);
    }
    for (int h : hits) {
        if (h != 1) {
            partition = false;
        }
    }
    report.partition_valid = partition;
    report.completeness_residual = max_abs_diff(sum, ComplexMatrix::identity(d * d));
    return report;
}

void to_json(nlohmann::json &j, const CertificationReport &report) {
    auto per = nlohmann::json::array();
    for (const auto &cert : report.per_operator) {
        per.push_back({
            {"m", cert.m},
            {"nonzero_count", cert.nonzero_count},
            {"row_orthonormality_residual", cert.row_orthonormality_residual},
        });
    }
    j = {
        {"dimension", report.dimension},
        {"convention", report.convention},
        {"completeness_residual", report.completeness_residual},
        {"partition_valid", report.partition_valid},
        {"per_operator", per},
    };
}

}  // namespace nlotele
