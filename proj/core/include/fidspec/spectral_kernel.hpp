/* Copyright 2026 The fidspec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/** @file spectral_kernel.hpp
 *  @brief Dense Hermitian eigensystems, PSD square roots, the canonical form
 *  of real antisymmetric matrices and the fidelity-operator spectrum.
 *
 *  Everything in here is a pure function of its arguments.
 */

#ifndef FIDSPEC_SPECTRAL_KERNEL_HPP
#define FIDSPEC_SPECTRAL_KERNEL_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace fidspec {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Violated precondition of a public operation (bad shape, symmetry, range).
class ContractError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A matrix expected to be positive semidefinite has an eigenvalue below the
/// clamp tolerance.
class NotPsdError : public ContractError {
public:
    NotPsdError(const std::string &what, double most_negative)
        : ContractError(what), most_negative_(most_negative) {}
    double most_negative() const noexcept { return most_negative_; }

private:
    double most_negative_;
};

/// Eigen-decomposition of a Hermitian matrix; values ascending, vectors in
/// the matching columns.
template <typename Matrix>
struct EigenSystem {
    RealVector values;
    Matrix vectors;
};

/// Largest |a_ij|.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived> &a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

/// Throws ContractError naming the worst (i, j) pair if `a` is not square or
/// not Hermitian to within tol * max|a|.
void require_hermitian(const RealMatrix &a, double tol = 1e-12);
void require_hermitian(const ComplexMatrix &a, double tol = 1e-12);

/// Eigenvalues ascending. Each eigenvector has its first non-negligible
/// component made real and positive, so output does not depend on the
/// solver's arbitrary phase choice.
EigenSystem<RealMatrix> sym_eig(const RealMatrix &a);
EigenSystem<ComplexMatrix> sym_eig(const ComplexMatrix &a);

/// Default clamp tolerance for PSD operations: 1e-10 times the spectral
/// norm.
double default_clamp_tol(const RealVector &eigenvalues);

/// Square root of a PSD matrix. Eigenvalues in [-clamp_tol, 0) are set to
/// zero; anything lower raises NotPsdError. A negative clamp_tol selects the
/// default. Eigenvalues within a few ulps of zero are also rooted to zero.
RealMatrix psd_sqrt(const RealMatrix &a, double clamp_tol = -1.0);
ComplexMatrix psd_sqrt(const ComplexMatrix &a, double clamp_tol = -1.0);

/// Real antisymmetric 2L x 2L matrix.
class AntisymmetricMatrix {
public:
    /// Validates shape, even dimension and antisymmetry (1e-12 relative).
    explicit AntisymmetricMatrix(RealMatrix entries);

    const RealMatrix &matrix() const noexcept { return entries_; }
    Eigen::Index dim() const noexcept { return entries_.rows(); }
    Eigen::Index modes() const noexcept { return entries_.rows() / 2; }

private:
    RealMatrix entries_;
};

/// Orthogonal reduction V B V^T = (+)_l nu_l J2 with J2 = [[0,1],[-1,0]].
struct CanonicalModes {
    std::vector<double> nu;  ///< descending, each >= 0
    RealMatrix V;            ///< rows 2l, 2l+1 span the l-th block
};

/// Canonical form of a real antisymmetric matrix, computed from the
/// eigenvectors of the Hermitian matrix iB. nu is sorted descending.
CanonicalModes antisym_canonical(const AntisymmetricMatrix &b);

/// Returns (+)_l nu_l J2 as a dense 2L x 2L matrix.
RealMatrix canonical_block(const std::vector<double> &nu);

/// Hermitian, unit-trace, positive semidefinite matrix. The eigensystem is
/// computed once at construction and cached.
class DensityMatrix {
public:
    /// Throws ContractError if the trace differs from 1 by more than
    /// trace_tol or if the matrix is not Hermitian, NotPsdError if an
    /// eigenvalue is below -psd_tol.
    explicit DensityMatrix(ComplexMatrix rho, double trace_tol = 1e-12,
                           double psd_tol = 1e-10);
    explicit DensityMatrix(const RealMatrix &rho, double trace_tol = 1e-12,
                           double psd_tol = 1e-10);

    /// Diagonal density matrix from a probability vector.
    static DensityMatrix diagonal(const std::vector<double> &p);

    const ComplexMatrix &matrix() const noexcept { return rho_; }
    Eigen::Index dim() const noexcept { return rho_.rows(); }

    /// Eigenvalues ascending, negatives from round-off clamped to zero.
    const RealVector &eigenvalues() const noexcept { return eig_.values; }
    const ComplexMatrix &eigenvectors() const noexcept { return eig_.vectors; }

    ComplexMatrix sqrt() const;

private:
    ComplexMatrix rho_;
    EigenSystem<ComplexMatrix> eig_;
};

/// Eigenvalues of sqrt(sqrt(rho1) rho2 sqrt(rho1)), descending, clamped to
/// be non-negative. They are computed as the singular values of
/// sqrt(rho2) sqrt(rho1), which is exact in exact arithmetic and keeps the
/// absolute error of tiny eigenvalues at machine precision.
std::vector<double> fidelity_op_spectrum(const DensityMatrix &rho1,
                                         const DensityMatrix &rho2);

/// Same construction for two PSD blocks of equal size that need not have
/// unit trace (e.g. the charge or spin block of a 4x4 state).
std::vector<double> block_fidelity_spectrum(const RealMatrix &a, const RealMatrix &b);

}  // namespace fidspec

#endif  // FIDSPEC_SPECTRAL_KERNEL_HPP
