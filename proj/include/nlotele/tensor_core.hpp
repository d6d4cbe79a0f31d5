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

#ifndef NLOTELE_TENSOR_CORE_HPP
#define NLOTELE_TENSOR_CORE_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nlotele {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// e^{2 pi i k / d}, with the exponent reduced mod d before evaluation so that
/// large products of indices do not lose precision.
Complex root_of_unity(std::size_t d, long long k);

/// Dense row-major complex matrix.
///
/// Tensor products use lexicographic ordering with the left factor as the
/// most significant index: |a>|b> sits at a * dim(b) + b.
class ComplexMatrix {
   public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const double> values);
    static ComplexMatrix outer(std::span<const Complex> ket, std::span<const Complex> bra);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const Complex> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<const Complex> data() const { return data_; }
    std::span<Complex> data() { return data_; }

    ComplexMatrix &operator+=(const ComplexMatrix &other);
    ComplexMatrix &operator-=(const ComplexMatrix &other);
    ComplexMatrix &operator*=(Complex scale);

    Complex trace() const;

    bool operator==(const ComplexMatrix &other) const = default;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator*(ComplexMatrix a, Complex scale);
ComplexMatrix operator*(Complex scale, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexVector operator*(const ComplexMatrix &a, std::span<const Complex> v);

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexVector kron(std::span<const Complex> a, std::span<const Complex> b);
ComplexMatrix dagger(const ComplexMatrix &a);

/// max_{r,c} |a(r,c) - b(r,c)|. Shapes must match.
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);
double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b);
double frobenius_norm(const ComplexMatrix &a);
/// max_{r,c} |a(r,c) - conj(a(c,r))|.
double hermiticity_residual(const ComplexMatrix &a);
/// max-norm of a^dagger a - I.
double unitarity_residual(const ComplexMatrix &a);

Complex inner(std::span<const Complex> bra, std::span<const Complex> ket);
double norm(std::span<const Complex> v);

/// Index bookkeeping for acting on a subset of the factors of a multipartite
/// space. Targets are subsystem indices in ascending order; the operator's
/// basis is the lexicographic product of the targeted factors.
class SubsystemLayout {
   public:
    SubsystemLayout(std::span<const std::size_t> dims, std::span<const std::size_t> targets);

    std::size_t total_dim() const { return total_dim_; }
    std::size_t target_dim() const { return target_offsets_.size(); }
    std::size_t rest_dim() const { return rest_offsets_.size(); }

    /// Full-space index of (target basis index t, spectator basis index r).
    std::size_t index(std::size_t t, std::size_t r) const { return target_offsets_[t] + rest_offsets_[r]; }

   private:
    std::size_t total_dim_ = 1;
    std::vector<std::size_t> target_offsets_;
    std::vector<std::size_t> rest_offsets_;
};

/// (op on targeted factors) tensor (identity elsewhere), applied to `state`.
ComplexVector apply_on_subsystems(const ComplexMatrix &op, std::span<const Complex> state, const SubsystemLayout &layout);

/// Density operator: Hermitian, unit trace, positive semidefinite.
class DensityOperator {
   public:
    static constexpr double kHermitianTolerance = 1e-12;
    static constexpr double kTraceTolerance = 1e-12;
    static constexpr double kEigenvalueFloor = -1e-10;

    /// Validates all three invariants; throws DomainError otherwise.
    explicit DensityOperator(ComplexMatrix matrix);

    static DensityOperator from_pure(std::span<const Complex> ket);

    /// Skips the eigenvalue check. For operators that are PSD by construction
    /// (weighted sums of projectors); Hermiticity and trace are still checked.
    static DensityOperator from_psd(ComplexMatrix matrix);

    std::size_t dim() const { return matrix_.rows(); }
    const ComplexMatrix &matrix() const { return matrix_; }

   private:
    struct Trusted {};
    DensityOperator(ComplexMatrix matrix, Trusted);
    ComplexMatrix matrix_;
};

/// Reduces `rho` over the subsystems not listed in `keep`.
/// `dims` gives each subsystem's dimension; `keep` holds 0-based indices.
DensityOperator partial_trace(
    const DensityOperator &rho, std::span<const std::size_t> dims, std::span<const std::size_t> keep);

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // column k pairs with values[k]
};

/// Cyclic complex Jacobi for Hermitian matrices.
/// Stops when the off-diagonal Frobenius norm drops to 1e-12 * ||a||_F (max 100 sweeps).
EigenDecomposition hermitian_eig(const ComplexMatrix &a);

/// Principal square root of a PSD Hermitian matrix. Eigenvalues in [-1e-10, 0)
/// are clamped to zero; anything lower is a DomainError.
ComplexMatrix psd_sqrt(const ComplexMatrix &a);

/// Tr sqrt(sqrt(rho) sigma sqrt(rho)), through two eigendecompositions.
double fidelity(const DensityOperator &rho, const DensityOperator &sigma);

/// sqrt(<phi|sigma|phi>), valid when the reference state is pure.
double fidelity(std::span<const Complex> phi, const DensityOperator &sigma);

std::string to_string(const ComplexMatrix &a);

}  // namespace nlotele

#endif
