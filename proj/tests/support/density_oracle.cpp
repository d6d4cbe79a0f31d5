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

#include "density_oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace oracle {

namespace {

int mod(int a, int d) {
    return ((a % d) + d) % d;
}

cd omega(int d, int k) {
    double angle = 2.0 * std::numbers::pi * mod(k, d) / d;
    return {std::cos(angle), std::sin(angle)};
}

Mat kron(const Mat &a, const Mat &b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

// Eigenvalues below the solver's resolution (n eps lambda_max) are zero; taking
// their square root would turn 1e-17 of round-off into 3e-9 of signal.
Mat psd_sqrt(const Mat &a) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    Eigen::VectorXd ev = es.eigenvalues();
    const double floor = double(a.rows()) * std::numeric_limits<double>::epsilon() * ev.cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < ev.size(); k++) {
        ev(k) = ev(k) > floor ? std::sqrt(ev(k)) : 0.0;
    }
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

// Trace over the first factor of a (dc * db)-dimensional operator.
Mat trace_first(const Mat &rho, int dc, int db) {
    Mat out = Mat::Zero(db, db);
    for (int c = 0; c < dc; c++) {
        out += rho.block(c * db, c * db, db, db);
    }
    return out;
}

}  // namespace

Mat weyl(int d, int i, int m) {
    Mat u = Mat::Zero(d, d);
    for (int k = 0; k < d; k++) {
        u(k, mod(k + m, d)) = omega(d, k * i);
    }
    return u;
}

Mat inversion(int d) {
    Mat u = Mat::Zero(d, d);
    for (int l = 0; l < d; l++) {
        u(mod(-l, d), l) = 1.0;
    }
    return u;
}

Mat qft(int d) {
    Mat f(d, d);
    for (int y = 0; y < d; y++) {
        for (int x = 0; x < d; x++) {
            f(y, x) = omega(d, x * y) / std::sqrt(static_cast<double>(d));
        }
    }
    return f;
}

Mat crystal(int d, int m) {
    Mat c = Mat::Zero(d, d * d);
    for (int k = 0; k < d; k++) {
        int out, a2;
        if (m == 0) {
            out = k + 1;
            a2 = -k;
        } else if (m == 1) {
            out = k;
            a2 = -(k + 1);
        } else {
            out = k + m;
            a2 = -(k + m);
        }
        c(mod(out, d), k * d + mod(a2, d)) = 1.0;
    }
    return c;
}

Vec bell(int d, int l, int s) {
    Vec v = Vec::Zero(d * d);
    for (int k = 0; k < d; k++) {
        v(k * d + mod(k + s, d)) = omega(d, l * k) / std::sqrt(static_cast<double>(d));
    }
    return v;
}

std::vector<Mat> crosstalk(int d, double p, nlotele::CrosstalkVariant variant) {
    std::vector<Mat> ops;
    const Mat id = Mat::Identity(d, d);
    if (variant == nlotele::CrosstalkVariant::Weyl) {
        double n = static_cast<double>(d) * d;
        ops.push_back(std::sqrt(1.0 - (n - 1.0) * p / n) * id);
        for (int i = 0; i < d; i++) {
            for (int m = 0; m < d; m++) {
                if (i != 0 || m != 0) {
                    ops.push_back(std::sqrt(p / n) * weyl(d, i, m));
                }
            }
        }
    } else {
        ops.push_back(std::sqrt(1.0 - (d - 1.0) * p / d) * id);
        for (int k = 1; k < d; k++) {
            Mat u = variant == nlotele::CrosstalkVariant::Shift ? weyl(d, 0, k) : weyl(d, k, 0);
            ops.push_back(std::sqrt(p / d) * u);
        }
    }
    return ops;
}

// Tr sqrt(sqrt(rho) sigma sqrt(rho)) = || sqrt(rho) sqrt(sigma) ||_1, evaluated as
// a sum of singular values, which stays accurate for rank-deficient arguments.
double fidelity(const Mat &rho, const Mat &sigma) {
    Eigen::JacobiSVD<Mat> svd(psd_sqrt(rho) * psd_sqrt(sigma));
    return svd.singularValues().sum();
}

Result run(int d, const Vec &input, const Noise &noise, Correction correction, int bell_phase, int bell_shift) {
    const Vec psi = Eigen::kroneckerProduct(input, bell(d, bell_phase, bell_shift)).eval();
    const Mat rho = psi * psi.adjoint();
    const Mat id = Mat::Identity(d, d);

    std::vector<Mat> a_ops{id}, b_ops{id};
    if (noise.a1) {
        a_ops = crosstalk(d, noise.a1->second, noise.a1->first);
    }
    if (noise.a2) {
        b_ops = crosstalk(d, noise.a2->second, noise.a2->first);
    }
    std::vector<Mat> kraus;
    if (noise.mode == nlotele::ProductMode::Correlated && noise.a1 && noise.a2) {
        if (a_ops.size() != b_ops.size()) {
            throw std::invalid_argument("oracle: correlated mode needs equal counts");
        }
        for (std::size_t k = 0; k < a_ops.size(); k++) {
            // A_k = sqrt(w_k) U_k, B_k = sqrt(w_k) V_k  ->  sqrt(w_k) U_k (x) V_k.
            double w = (a_ops[k].adjoint() * a_ops[k])(0, 0).real();
            kraus.push_back(kron(a_ops[k], b_ops[k]) / std::sqrt(w));
        }
    } else {
        for (const auto &a : a_ops) {
            for (const auto &b : b_ops) {
                kraus.push_back(kron(a, b));
            }
        }
    }

    Mat noisy = Mat::Zero(rho.rows(), rho.cols());
    for (const auto &k : kraus) {
        Mat full = kron(k, id);
        noisy += full * rho * full.adjoint();
    }

    const Mat phi = input * input.adjoint();
    const Mat f = qft(d);
    Result result;
    for (int i = 0; i < d; i++) {
        for (int m = 0; m < d; m++) {
            Mat proj = Mat::Zero(d, d);
            proj(i, i) = 1.0;
            const Mat meas = proj * f * crystal(d, m);
            const Mat povm = meas.adjoint() * meas;
            double p = (kron(povm, id) * noisy).trace().real();
            result.probability.push_back(p);
            if (p <= 1e-300) {
                result.fidelity.push_back(0.0);
                continue;
            }
            const Mat big = kron(meas, id);
            Mat bob = trace_first(big * noisy * big.adjoint(), d, d) / p;

            Mat u = correction == Correction::PaperWeyl ? weyl(d, i, m) : weyl(d, mod(-i, d), m) * inversion(d);
            Mat corrected = u * bob * u.adjoint();
            double fid = fidelity(phi, corrected);
            result.fidelity.push_back(fid);
            result.average_fidelity += p * fid;
        }
    }
    return result;
}

}  // namespace oracle
