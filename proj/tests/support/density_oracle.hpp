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

// Test-only reference: the whole protocol as literal density-matrix algebra
// on Eigen types. Shares nothing with the library except the public enums,
// so agreement between the two is meaningful.

#ifndef NLOTELE_TESTS_DENSITY_ORACLE_HPP
#define NLOTELE_TESTS_DENSITY_ORACLE_HPP

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "nlotele/noise_channels.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using cd = std::complex<double>;

Mat weyl(int d, int i, int m);
Mat inversion(int d);
Mat qft(int d);
/// d x d^2 crystal operator, general convention.
Mat crystal(int d, int m);
Vec bell(int d, int l, int s);

/// Kraus operators of the crosstalk channel, built straight from the weights.
std::vector<Mat> crosstalk(int d, double p, nlotele::CrosstalkVariant variant);

struct Noise {
    std::optional<std::pair<nlotele::CrosstalkVariant, double>> a1;
    std::optional<std::pair<nlotele::CrosstalkVariant, double>> a2;
    nlotele::ProductMode mode = nlotele::ProductMode::Independent;
};

enum class Correction { DerivedExact, PaperWeyl };

struct Result {
    std::vector<double> probability;  // outcome order i * d + m
    std::vector<double> fidelity;
    double average_fidelity = 0;
};

/// rho = |phi><phi| (x) |bell><bell|; noise as sum_K (K (x) I_B) rho (K (x) I_B)^dagger;
/// p = Tr((Pi (x) I) rho); Bob's state by partial trace of (M (x) I) rho (M (x) I)^dagger;
/// fidelity as the trace norm of sqrt(rho) sqrt(sigma), both roots by eigendecomposition.
Result run(int d, const Vec &input, const Noise &noise, Correction correction = Correction::DerivedExact,
           int bell_phase = 0, int bell_shift = 0);

/// Full-path fidelity between two density matrices.
double fidelity(const Mat &rho, const Mat &sigma);

}  // namespace oracle

#endif
