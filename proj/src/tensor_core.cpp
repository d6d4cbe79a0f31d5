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

#include "nlotele/tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "nlotele/errors.hpp"

namespace nlotele {

namespace {

void require_same_shape(const ComplexMatrix &a, const ComplexMatrix &b, const char *what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream ss;
        ss << what << ": shape " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x" << b.cols();
        throw DimensionError(ss.str());
    }
}

}  // namespace

Complex root_of_unity(std::size_t d, long long k) {
    auto dd = static_cast<long long>(d);
    long long r = ((k % dd) + dd) % dd;
    if (r == 0) {
        return {1.0, 0.0};
    }
    if (2 * r == dd) {
        return {-1.0, 0.0};
    }
    if (4 * r == dd) {
        return {0.0, 1.0};
    }
    if (4 * r == 3 * dd) {
        return {0.0, -1.0};
    }
    double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(dd);
    return {std::cos(angle), std::sin(angle)};
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("ComplexMatrix: entry count does not equal rows * cols");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t k = 0; k < n; k++) {
        m(k, k) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t k = 0; k < values.size(); k++) {
        m(k, k) = values[k];
    }
    return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> ket, std::span<const Complex> bra) {
    ComplexMatrix m(ket.size(), bra.size());
    for (std::size_t r = 0; r < ket.size(); r++) {
        for (std::size_t c = 0; c < bra.size(); c++) {
            m(r, c) = ket[r] * std::conj(bra[c]);
        }
    }
    return m;
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &other) {
    require_same_shape(*this, other, "matrix +=");
    for (std::size_t k = 0; k < data_.size(); k++) {
        data_[k] += other.data_[k];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &other) {
    require_same_shape(*this, other, "matrix -=");
    for (std::size_t k = 0; k < data_.size(); k++) {
        data_[k] -= other.data_[k];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(Complex scale) {
    for (auto &x : data_) {
        x *= scale;
    }
    return *this;
}

Complex ComplexMatrix::trace() const {
    if (!is_square()) {
        throw DimensionError("trace of a non-square matrix");
    }
    Complex t = 0;
    for (std::size_t k = 0; k < rows_; k++) {
        t += (*this)(k, k);
    }
    return t;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) {
    a += b;
    return a;
}

ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) {
    a -= b;
    return a;
}

ComplexMatrix operator*(ComplexMatrix a, Complex scale) {
    a *= scale;
    return a;
}

ComplexMatrix operator*(Complex scale, ComplexMatrix a) {
    a *= scale;
    return a;
}

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matrix product: inner dimensions differ");
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); r++) {
        for (std::size_t k = 0; k < a.cols(); k++) {
            Complex x = a(r, k);
            if (x == Complex{}) {
                continue;
            }
            for (std::size_t c = 0; c < b.cols(); c++) {
                out(r, c) += x * b(k, c);
            }
        }
    }
    return out;
}

ComplexVector operator*(const ComplexMatrix &a, std::span<const Complex> v) {
    if (a.cols() != v.size()) {
        throw DimensionError("matrix-vector product: dimensions differ");
    }
    ComplexVector out(a.rows());
    for (std::size_t r = 0; r < a.rows(); r++) {
        Complex acc = 0;
        for (std::size_t c = 0; c < a.cols(); c++) {
            acc += a(r, c) * v[c];
        }
        out[r] = acc;
    }
    return out;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); i++) {
        for (std::size_t j = 0; j < a.cols(); j++) {
            Complex x = a(i, j);
            for (std::size_t k = 0; k < b.rows(); k++) {
                for (std::size_t l = 0; l < b.cols(); l++) {
                    out(i * b.rows() + k, j * b.cols() + l) = x * b(k, l);
                }
            }
        }
    }
    return out;
}

ComplexVector kron(std::span<const Complex> a, std::span<const Complex> b) {
    ComplexVector out;
    out.reserve(a.size() * b.size());
    for (auto x : a) {
        for (auto y : b) {
            out.push_back(x * y);
        }
    }
    return out;
}

ComplexMatrix dagger(const ComplexMatrix &a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); r++) {
        for (std::size_t c = 0; c < a.cols(); c++) {
            out(c, r) = std::conj(a(r, c));
        }
    }
    return out;
}

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_shape(a, b, "max_abs_diff");
    return max_abs_diff(a.data(), b.data());
}

double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw DimensionError("max_abs_diff: vector lengths differ");
    }
    double m = 0;
    for (std::size_t k = 0; k < a.size(); k++) {
        m = std::max(m, std::abs(a[k] - b[k]));
    }
    return m;
}

double frobenius_norm(const ComplexMatrix &a) {
    double s = 0;
    for (auto x : a.data()) {
        s += std::norm(x);
    }
    return std::sqrt(s);
}

double hermiticity_residual(const ComplexMatrix &a) {
    if (!a.is_square()) {
        throw DimensionError("hermiticity_residual: matrix is not square");
    }
    double m = 0;
    for (std::size_t r = 0; r < a.rows(); r++) {
        for (std::size_t c = r; c < a.cols(); c++) {
            m = std::max(m, std::abs(a(r, c) - std::conj(a(c, r))));
        }
    }
    return m;
}

double unitarity_residual(const ComplexMatrix &a) {
    if (!a.is_square()) {
        throw DimensionError("unitarity_residual: matrix is not square");
    }
    return max_abs_diff(dagger(a) * a, ComplexMatrix::identity(a.rows()));
}

Complex inner(std::span<const Complex> bra, std::span<const Complex> ket) {
    if (bra.size() != ket.size()) {
        throw DimensionError("inner product: vector lengths differ");
    }
    Complex acc = 0;
    for (std::size_t k = 0; k < bra.size(); k++) {
        acc += std::conj(bra[k]) * ket[k];
    }
    return acc;
}

double norm(std::span<const Complex> v) {
    double s = 0;
    for (auto x : v) {
        s += std::norm(x);
    }
    return std::sqrt(s);
}

SubsystemLayout::SubsystemLayout(std::span<const std::size_t> dims, std::span<const std::size_t> targets) {
    if (dims.empty()) {
        throw DimensionError("SubsystemLayout: no subsystems");
    }
    for (std::size_t k = 0; k < targets.size(); k++) {
        if (targets[k] >= dims.size() || (k > 0 && targets[k] <= targets[k - 1])) {
            throw DimensionError("SubsystemLayout: targets must be ascending subsystem indices in range");
        }
    }
    std::vector<std::size_t> strides(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        if (dims[k] == 0) {
            throw DimensionError("SubsystemLayout: zero-dimensional subsystem");
        }
        strides[k] = total_dim_;
        total_dim_ *= dims[k];
    }

    // Offsets enumerate each group's digits lexicographically, leftmost factor most significant.
    auto offsets_for = [&](const std::vector<std::size_t> &group) {
        std::vector<std::size_t> out{0};
        for (auto s : group) {
            std::vector<std::size_t> next;
            next.reserve(out.size() * dims[s]);
            for (auto base : out) {
                for (std::size_t digit = 0; digit < dims[s]; digit++) {
                    next.push_back(base + digit * strides[s]);
                }
            }
            out = std::move(next);
        }
        return out;
    };
    std::vector<std::size_t> target_group(targets.begin(), targets.end());
    std::vector<std::size_t> rest_group;
    for (std::size_t s = 0; s < dims.size(); s++) {
        if (!std::binary_search(target_group.begin(), target_group.end(), s)) {
            rest_group.push_back(s);
        }
    }
    target_offsets_ = offsets_for(target_group);
    rest_offsets_ = offsets_for(rest_group);
}

ComplexVector apply_on_subsystems(const ComplexMatrix &op, std::span<const Complex> state, const SubsystemLayout &layout) {
    if (!op.is_square() || op.rows() != layout.target_dim()) {
        throw DimensionError("apply_on_subsystems: operator does not match the targeted subsystems");
    }
    if (state.size() != layout.total_dim()) {
        throw DimensionError("apply_on_subsystems: state dimension does not match the layout");
    }
    std::size_t n = layout.target_dim();
    ComplexVector out(state.size());
    for (std::size_t r = 0; r < layout.rest_dim(); r++) {
        for (std::size_t row = 0; row < n; row++) {
            Complex acc = 0;
            for (std::size_t col = 0; col < n; col++) {
                Complex x = op(row, col);
                if (x != Complex{}) {
                    acc += x * state[layout.index(col, r)];
                }
            }
            out[layout.index(row, r)] = acc;
        }
    }
    return out;
}

DensityOperator::DensityOperator(ComplexMatrix matrix, Trusted) : matrix_(std::move(matrix)) {
    if (!matrix_.is_square() || matrix_.rows() == 0) {
        throw DimensionError("density operator must be a non-empty square matrix");
    }
    if (hermiticity_residual(matrix_) > kHermitianTolerance) {
        throw DomainError("density operator is not Hermitian");
    }
    if (std::abs(matrix_.trace() - 1.0) > kTraceTolerance) {
        throw DomainError("density operator does not have unit trace");
    }
}

DensityOperator::DensityOperator(ComplexMatrix matrix) : DensityOperator(std::move(matrix), Trusted{}) {
    auto eig = hermitian_eig(matrix_);
    if (eig.values.front() < kEigenvalueFloor) {
        throw DomainError("density operator has a negative eigenvalue");
    }
}

DensityOperator DensityOperator::from_pure(std::span<const Complex> ket) {
    return DensityOperator(ComplexMatrix::outer(ket, ket), Trusted{});
}

DensityOperator DensityOperator::from_psd(ComplexMatrix matrix) {
    return DensityOperator(std::move(matrix), Trusted{});
}

DensityOperator partial_trace(
    const DensityOperator &rho, std::span<const std::size_t> dims, std::span<const std::size_t> keep) {
    std::size_t product = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
    if (dims.empty() || product != rho.dim()) {
        throw DimensionError("partial_trace: product of subsystem dims does not equal the operator dimension");
    }
    if (keep.empty()) {
        throw DimensionError("partial_trace: keep set is empty");
    }
    std::vector<std::size_t> sorted(keep.begin(), keep.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw DimensionError("partial_trace: repeated subsystem in keep set");
    }
    SubsystemLayout layout(dims, sorted);
    const auto &m = rho.matrix();
    std::size_t n = layout.target_dim();
    ComplexMatrix out(n, n);
    for (std::size_t a = 0; a < n; a++) {
        for (std::size_t b = 0; b < n; b++) {
            Complex acc = 0;
            for (std::size_t r = 0; r < layout.rest_dim(); r++) {
                acc += m(layout.index(a, r), layout.index(b, r));
            }
            out(a, b) = acc;
        }
    }
    return DensityOperator::from_psd(std::move(out));
}

EigenDecomposition hermitian_eig(const ComplexMatrix &input) {
    if (!input.is_square()) {
        throw DimensionError("hermitian_eig: matrix is not square");
    }
    if (hermiticity_residual(input) > 1e-10) {
        throw DomainError("hermitian_eig: matrix is not Hermitian");
    }
    const std::size_t n = input.rows();
    ComplexMatrix a = input;
    ComplexMatrix v = ComplexMatrix::identity(n);
    for (std::size_t k = 0; k < n; k++) {
        a(k, k) = a(k, k).real();
    }

    const double scale = frobenius_norm(a);
    auto off_norm = [&] {
        double s = 0;
        for (std::size_t r = 0; r < n; r++) {
            for (std::size_t c = 0; c < n; c++) {
                if (r != c) {
                    s += std::norm(a(r, c));
                }
            }
        }
        return std::sqrt(s);
    };

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps && off_norm() > 1e-12 * scale; sweep++) {
        for (std::size_t p = 0; p + 1 < n; p++) {
            for (std::size_t q = p + 1; q < n; q++) {
                Complex g = a(p, q);
                double mag = std::abs(g);
                if (mag == 0.0) {
                    continue;
                }
                // Phase-rotate q so the pivot is real, then a real Jacobi rotation.
                Complex phase = std::conj(g / mag);
                double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                }
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                const Complex vpp = c;
                const Complex vqp = -s * phase;
                const Complex vpq = s;
                const Complex vqq = c * phase;

                for (std::size_t r = 0; r < n; r++) {
                    Complex arp = a(r, p);
                    Complex arq = a(r, q);
                    a(r, p) = arp * vpp + arq * vqp;
                    a(r, q) = arp * vpq + arq * vqq;
                }
                for (std::size_t col = 0; col < n; col++) {
                    Complex apc = a(p, col);
                    Complex aqc = a(q, col);
                    a(p, col) = std::conj(vpp) * apc + std::conj(vqp) * aqc;
                    a(q, col) = std::conj(vpq) * apc + std::conj(vqq) * aqc;
                }
                a(p, q) = 0;
                a(q, p) = 0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t r = 0; r < n; r++) {
                    Complex wrp = v(r, p);
                    Complex wrq = v(r, q);
                    v(r, p) = wrp * vpp + wrq * vqp;
                    v(r, q) = wrp * vpq + wrq * vqq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() < a(y, y).real();
    });
    EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t k = 0; k < n; k++) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; r++) {
            out.vectors(r, k) = v(r, order[k]);
        }
    }
    return out;
}

namespace {

double clamp_eigenvalue(double lambda) {
    if (lambda < DensityOperator::kEigenvalueFloor) {
        throw DomainError("matrix square root of an operator with a negative eigenvalue");
    }
    return std::max(lambda, 0.0);
}

// Eigenvalues within n * eps * max|lambda| of zero are below what the solver can
// resolve. Square roots amplify them (1e-17 -> 3e-9), so they count as zero.
double resolved_root(double lambda, double resolution) {
    double v = clamp_eigenvalue(lambda);
    return v <= resolution ? 0.0 : std::sqrt(v);
}

double resolution_of(const std::vector<double> &values) {
    double largest = 0;
    for (double v : values) {
        largest = std::max(largest, std::abs(v));
    }
    return static_cast<double>(values.size()) * std::numeric_limits<double>::epsilon() * largest;
}

}  // namespace

ComplexMatrix psd_sqrt(const ComplexMatrix &a) {
    auto eig = hermitian_eig(a);
    const std::size_t n = a.rows();
    const double resolution = resolution_of(eig.values);
    ComplexMatrix out(n, n);
    for (std::size_t k = 0; k < n; k++) {
        double root = resolved_root(eig.values[k], resolution);
        if (root == 0.0) {
            continue;
        }
        for (std::size_t r = 0; r < n; r++) {
            Complex x = root * eig.vectors(r, k);
            for (std::size_t c = 0; c < n; c++) {
                out(r, c) += x * std::conj(eig.vectors(c, k));
            }
        }
    }
    return out;
}

double fidelity(const DensityOperator &rho, const DensityOperator &sigma) {
    if (rho.dim() != sigma.dim()) {
        throw DimensionError("fidelity: operator dimensions differ");
    }
    ComplexMatrix root = psd_sqrt(rho.matrix());
    ComplexMatrix inner_op = root * sigma.matrix() * root;
    // Symmetrize away round-off before the second decomposition.
    inner_op = (inner_op + dagger(inner_op)) * Complex{0.5};
    const auto values = hermitian_eig(inner_op).values;
    const double resolution = resolution_of(values);
    double total = 0;
    for (double lambda : values) {
        total += resolved_root(lambda, resolution);
    }
    return total;
}

double fidelity(std::span<const Complex> phi, const DensityOperator &sigma) {
    if (phi.size() != sigma.dim()) {
        throw DimensionError("fidelity: state and operator dimensions differ");
    }
    ComplexVector s_phi = sigma.matrix() * phi;
    double overlap = inner(phi, s_phi).real();
    return std::sqrt(clamp_eigenvalue(overlap));
}

std::string to_string(const ComplexMatrix &a) {
    std::ostringstream ss;
    for (std::size_t r = 0; r < a.rows(); r++) {
        ss << (r == 0 ? "[" : " ");
        for (std::size_t c = 0; c < a.cols(); c++) {
            ss << (c == 0 ? "[" : ", ") << a(r, c).real() << (a(r, c).imag() < 0 ? "-" : "+")
               << std::abs(a(r, c).imag()) << "i";
        }
        ss << "]" << (r + 1 == a.rows() ? "]" : "\n");
    }
    return ss.str();
}

}  // namespace nlotele
