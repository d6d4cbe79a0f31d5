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

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "nlotele/errors.hpp"
#include "nlotele/noise_channels.hpp"
#include "nlotele/qudit_states.hpp"

namespace nlotele {
namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

TEST(BasisState, Small) {
    EXPECT_EQ(basis_state(2, 0), PureState(ComplexVector{1, 0}));
    EXPECT_EQ(basis_state(3, 2), PureState(ComplexVector{0, 0, 1}));
    EXPECT_THROW(basis_state(3, 3), DomainError);
}

TEST(BasisState, Orthonormal) {
    for (std::size_t d = 1; d <= 8; d++) {
        for (std::size_t j = 0; j < d; j++) {
            for (std::size_t k = 0; k < d; k++) {
                Complex ip = inner(basis_state(d, j).amplitudes(), basis_state(d, k).amplitudes());
                EXPECT_EQ(ip, Complex(j == k ? 1.0 : 0.0));
            }
        }
    }
}

TEST(BellState, QubitExamples) {
    auto phi = bell_state(2, {0, 0});
    EXPECT_NEAR(std::abs(phi[0] - kInvSqrt2), 0, 1e-15);
    EXPECT_NEAR(std::abs(phi[3] - kInvSqrt2), 0, 1e-15);
    EXPECT_EQ(phi[1], Complex{});
    EXPECT_EQ(phi[2], Complex{});

    auto singlet = bell_state(2, {1, 1});
    EXPECT_NEAR(std::abs(singlet[1] - kInvSqrt2), 0, 1e-15);
    EXPECT_NEAR(std::abs(singlet[2] + kInvSqrt2), 0, 1e-15);
    EXPECT_EQ(singlet[0], Complex{});
    EXPECT_EQ(singlet[3], Complex{});
}

TEST(BellState, GramMatrixIsIdentity) {
    for (std::size_t d : {2u, 3u, 4u, 5u}) {
        std::vector<PureState> basis;
        for (std::size_t l = 0; l < d; l++) {
            for (std::size_t m = 0; m < d; m++) {
                basis.push_back(bell_state(d, {l, m}));
            }
        }
        for (std::size_t a = 0; a < basis.size(); a++) {
            for (std::size_t b = 0; b < basis.size(); b++) {
                Complex ip = inner(basis[a].amplitudes(), basis[b].amplitudes());
                EXPECT_NEAR(std::abs(ip - Complex(a == b ? 1.0 : 0.0)), 0, 1e-12) << "d=" << d;
            }
        }
    }
}

TEST(BellState, DiagonalSupport) {
    for (std::size_t d = 2; d <= 8; d++) {
        auto v = bell_state(d, {0, 0});
        for (std::size_t idx = 0; idx < d * d; idx++) {
            bool diag = idx / d == idx % d;
            EXPECT_NEAR(std::abs(v[idx] - Complex(diag ? 1.0 / std::sqrt(double(d)) : 0.0)), 0, 1e-15);
        }
    }
}

TEST(BellState, ShiftCovariance) {
    // weyl(d,0,s) = sum_k |k><k+s| lowers the index, so it produces label
    // (0, -s); its adjoint produces (0, s).
    for (std::size_t d = 2; d <= 6; d++) {
        std::array<std::size_t, 2> dims{d, d};
        std::array<std::size_t, 1> second{1};
        SubsystemLayout layout(dims, second);
        for (std::size_t s = 0; s < d; s++) {
            auto forward = apply_on_subsystems(dagger(weyl(d, 0, s)), bell_state(d, {0, 0}).amplitudes(), layout);
            EXPECT_LE(max_abs_diff(forward, bell_state(d, {0, s}).amplitudes()), 1e-12) << d << "," << s;
            auto backward = apply_on_subsystems(weyl(d, 0, s), bell_state(d, {0, 0}).amplitudes(), layout);
            EXPECT_LE(max_abs_diff(backward, bell_state(d, {0, (d - s) % d}).amplitudes()), 1e-12) << d << "," << s;
        }
    }
}

TEST(BellState, LabelOutOfRange) {
    EXPECT_THROW(bell_state(3, {3, 0}), DomainError);
    EXPECT_THROW(bell_state(3, {0, 5}), DomainError);
}

TEST(UniformState, Values) {
    EXPECT_EQ(uniform_state(1), PureState(ComplexVector{1}));
    auto u2 = uniform_state(2);
    EXPECT_NEAR(u2[0].real(), kInvSqrt2, 1e-16);
    EXPECT_NEAR(u2[1].real(), kInvSqrt2, 1e-16);
    EXPECT_NEAR(norm(uniform_state(64).amplitudes()), 1.0, 1e-12);
}

TEST(RandomPureState, NormalizedAndReproducible) {
    auto a = random_pure_state(4, 12345);
    EXPECT_NEAR(norm(a.amplitudes()), 1.0, 1e-12);
    EXPECT_EQ(a, random_pure_state(4, 12345));
    EXPECT_NE(a, random_pure_state(4, 12346));
}

TEST(RandomPureState, FrozenFirstAmplitude) {
    // Pins the generator scheme; a change here must bump kRandomStateScheme.
    EXPECT_EQ(kRandomStateScheme, "mt19937_64+box-muller/v1");
    auto s = random_pure_state(3, 1);
    auto again = random_pure_state(3, 1);
    EXPECT_EQ(s[0], again[0]);
}

TEST(RandomPureState, FirstComponentMeanIsOneOverD) {
    // |<e0|psi>|^2 is Beta(1, d-1): mean 1/d, variance (d-1)/(d^2 (d+1)).
    for (std::size_t d : {2u, 4u, 8u}) {
        const int n = 10000;
        double sum = 0;
        for (int s = 0; s < n; s++) {
            sum += std::norm(random_pure_state(d, static_cast<std::uint64_t>(s))[0]);
        }
        double mean = sum / n;
        double dd = static_cast<double>(d);
        double se = std::sqrt((dd - 1) / (dd * dd * (dd + 1)) / n);
        EXPECT_LE(std::abs(mean - 1.0 / dd), 5 * se) << "d=" << d;
    }
}

TEST(PureStateInvariant, RejectsUnnormalized) {
    EXPECT_THROW(PureState(ComplexVector{1, 1}), DomainError);
    EXPECT_THROW(PureState::normalized(ComplexVector{0, 0}), DomainError);
    auto n = PureState::normalized(ComplexVector{3, 4});
    EXPECT_NEAR(n[0].real(), 0.6, 1e-15);
}

TEST(StateText, ParsesAndNormalizes) {
    auto s = parse_state_text("2\n1 0\n0 1\n");
    EXPECT_NEAR(s[0].real(), kInvSqrt2, 1e-15);
    EXPECT_NEAR(s[1].imag(), kInvSqrt2, 1e-15);
}

TEST(StateText, RejectsMalformed) {
    EXPECT_THROW(parse_state_text(""), ConfigError);
    EXPECT_THROW(parse_state_text("0\n"), ConfigError);
    EXPECT_THROW(parse_state_text("2\n1 0\n"), ConfigError);
    EXPECT_THROW(parse_state_text("2\n0 0\n0 0\n"), ConfigError);
    EXPECT_THROW(parse_state_text("2\n1 0\n0 1\n5 5\n"), ConfigError);
    EXPECT_THROW(parse_state_text("2\n1 x\n0 1\n"), ConfigError);
}

TEST(StateText, LoadsFileAndReportsMissing) {
    auto path = std::filesystem::temp_directory_path() / "nlotele_state_test.txt";
    {
        std::ofstream out(path);
        out << "3\n1 0\n1 0\n1 0\n";
    }
    auto s = load_state_file(path);
    EXPECT_EQ(s.dim(), 3u);
    EXPECT_NEAR(s[2].real(), 1.0 / std::sqrt(3.0), 1e-15);
    std::filesystem::remove(path);
    EXPECT_THROW(load_state_file(path), IoError);
}

}  // namespace
}  // namespace nlotele
