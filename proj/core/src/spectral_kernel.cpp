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

#include "fidspec/spectral_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fidspec {

namespace {

template <typename Matrix>
void require_hermitian_impl(const Matrix &a, double tol) {
    if (a.rows() != a.cols()) {
        std::ostringstream msg;
        msg << "matrix is not square (" << a.rows() << "x" << a.cols() << ")";
        throw ContractError(msg.str());
    }
    const double scale = max_abs(a);
    double worst = 0.0;
    Eigen::Index wi = 0, wj = 0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i <= j; ++i) {
            const double d = std::abs(a(i, j) - std::conj(a(j, i)));
            if (d > worst) {
                worst = d;
                wi = i;
                wj = j;
            }
        }
    }
    if (worst > tol * scale) {
        std::ostringstream msg;
        msg << "matrix is not Hermitian: |A(" << wi << "," << wj << ") - conj(A(" << wj
            << "," << wi << "))| = " << worst << " exceeds " << tol << " * max|A| = "
            << tol * scale;
        throw ContractError(msg.str());
    }
}

// First component whose magnitude is non-negligible gets a zero phase.
template <typename Matrix>
void fix_phases(Matrix &vectors) {
    using Scalar = typename Matrix::Scalar;
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        auto col = vectors.col(c);
        const double big = col.cwiseAbs().maxCoeff();
        for (Eigen::Index r = 0; r < col.size(); ++r) {
            const double mag = std::abs(col(r));
            if (mag > 1e-8 * big) {
                const Scalar phase = col(r) / mag;
                col /= phase;
                break;
            }
        }
    }
}

template <typename Matrix>
EigenSystem<Matrix> sym_eig_impl(const Matrix &a) {
    require_hermitian(a);
    if (a.rows() == 0) return {RealVector(), Matrix()};
    const Matrix sym = (a + a.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("sym_eig: eigensolver failed to converge");
    }
    EigenSystem<Matrix> out{solver.eigenvalues(), solver.eigenvectors()};
    fix_phases(out.vectors);
    return out;
}

template <typename Matrix>
Matrix psd_sqrt_impl(const Matrix &a, double clamp_tol) {
    auto eig = sym_eig(a);
    if (clamp_tol < 0) clamp_tol = default_clamp_tol(eig.values);
    // eigenvalues at the solver's round-off level are exact zeros
    const double noise = 4.0 * static_cast<double>(eig.values.size()) *
                         std::numeric_limits<double>::epsilon() *
                         (eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0);
    RealVector roots(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        const double e = eig.values(i);
        if (e < -clamp_tol) {
            std::ostringstream msg;
            msg << "psd_sqrt: matrix is not positive semidefinite, most negative "
                   "eigenvalue "
                << eig.values.minCoeff() << " is below -" << clamp_tol;
            throw NotPsdError(msg.str(), eig.values.minCoeff());
        }
        roots(i) = e > noise ? std::sqrt(e) : 0.0;
    }
    Matrix root = eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
    return (root + root.adjoint()) / 2.0;
}

// Modified Gram-Schmidt, applied twice. Returns false when v is (numerically)
// inside the span of `basis`.
bool orthonormalize_against(const std::vector<RealVector> &basis, RealVector &v,
                            double accept) {
    const double start = v.norm();
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto &b : basis) v -= b.dot(v) * b;
    }
    const double n = v.norm();
    if (n <= accept * start || n == 0.0) return false;
    v /= n;
    return true;
}

}  // namespace

void require_hermitian(const RealMatrix &a, double tol) {
    require_hermitian_impl(a, tol);
}

void require_hermitian(const ComplexMatrix &a, double tol) {
    require_hermitian_impl(a, tol);
}

EigenSystem<RealMatrix> sym_eig(const RealMatrix &a) { return sym_eig_impl(a); }

EigenSystem<ComplexMatrix> sym_eig(const ComplexMatrix &a) { return sym_eig_impl(a); }

double default_clamp_tol(const RealVector &eigenvalues) {
    if (eigenvalues.size() == 0) return 0.0;
    return 1e-10 * eigenvalues.cwiseAbs().maxCoeff();
}

RealMatrix psd_sqrt(const RealMatrix &a, double clamp_tol) {
    return psd_sqrt_impl(a, clamp_tol);
}

ComplexMatrix psd_sqrt(const ComplexMatrix &a, double clamp_tol) {
    return psd_sqrt_impl(a, clamp_tol);
}

AntisymmetricMatrix::AntisymmetricMatrix(RealMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
        throw ContractError("antisymmetric matrix must be square");
    }
    if (entries_.rows() == 0 || entries_.rows() % 2 != 0) {
        std::ostringstream msg;
        msg << "antisymmetric matrix must have even positive dimension, got "
            << entries_.rows();
        throw ContractError(msg.str());
    }
    const double scale = max_abs(entries_);
    for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
        for (Eigen::Index i = 0; i <= j; ++i) {
            const double d = std::abs(entries_(i, j) + entries_(j, i));
            if (d > 1e-12 * scale) {
                std::ostringstream msg;
                msg << "matrix is not antisymmetric: |B(" << i << "," << j << ") + B(" << j
                    << "," << i << ")| = " << d;
                throw ContractError(msg.str());
            }
        }
    }
    entries_ = (entries_ - entries_.transpose()) / 2.0;
}

CanonicalModes antisym_canonical(const AntisymmetricMatrix &b) {
    const Eigen::Index n = b.dim();
    const Eigen::Index modes = b.modes();
    const ComplexMatrix ib = Complex(0.0, 1.0) * b.matrix().cast<Complex>();
    const auto eig = sym_eig(ib);
    const double tol = 1e-10 * max_abs(b.matrix());

    std::vector<double> nu;
    std::vector<RealVector> rows;
    nu.reserve(static_cast<std::size_t>(modes));
    rows.reserve(static_cast<std::size_t>(n));

    // Eigenvalues of iB come in +-nu pairs; the top half carries the modes.
    for (Eigen::Index k = n - 1; k >= modes; --k) {
        const double value = eig.values(k);
        if (value <= tol) break;
        const auto w = eig.vectors.col(k);
        // iB w = nu w with w = a + ib gives B a = nu b and B b = -nu a
        RealVector first = std::sqrt(2.0) * w.real();
        RealVector second = -std::sqrt(2.0) * w.imag();
        if (!orthonormalize_against(rows, first, 1e-6)) break;
        rows.push_back(first);
        if (!orthonormalize_against(rows, second, 1e-6)) {
            rows.pop_back();
            break;
        }
        rows.push_back(second);
        nu.push_back(value);
    }

    // Null space of B: complete the basis with unit vectors, paired with nu = 0.
    for (Eigen::Index j = 0; j < n && static_cast<Eigen::Index>(rows.size()) < n; ++j) {
        RealVector e = RealVector::Unit(n, j);
        if (orthonormalize_against(rows, e, 1e-3)) rows.push_back(e);
    }
    while (static_cast<Eigen::Index>(nu.size()) < modes) nu.push_back(0.0);

    CanonicalModes out;
    out.nu = std::move(nu);
    out.V.resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r) out.V.row(r) = rows[static_cast<std::size_t>(r)];
    return out;
}

RealMatrix canonical_block(const std::vector<double> &nu) {
    const auto n = static_cast<Eigen::Index>(2 * nu.size());
    RealMatrix out = RealMatrix::Zero(n, n);
    for (std::size_t l = 0; l < nu.size(); ++l) {
        const auto r = static_cast<Eigen::Index>(2 * l);
        out(r, r + 1) = nu[l];
        out(r + 1, r) = -nu[l];
    }
    return out;
}

DensityMatrix::DensityMatrix(ComplexMatrix rho, double trace_tol, double psd_tol) {
    require_hermitian(rho);
    if (rho.rows() == 0) throw ContractError("density matrix must have positive dimension");
    rho_ = (rho + rho.adjoint()) / 2.0;
    const double trace = rho_.trace().real();
    if (std::abs(trace - 1.0) > trace_tol) {
        std::ostringstream msg;
        msg << "density matrix trace " << trace << " differs from 1 by more than "
            << trace_tol;
        throw ContractError(msg.str());
    }
    eig_ = sym_eig(rho_);
    const double lowest = eig_.values.minCoeff();
    if (lowest < -psd_tol) {
        std::ostringstream msg;
        msg << "density matrix is not positive semidefinite, most negative eigenvalue "
            << lowest;
        throw NotPsdError(msg.str(), lowest);
    }
    eig_.values = eig_.values.cwiseMax(0.0);
}

DensityMatrix::DensityMatrix(const RealMatrix &rho, double trace_tol, double psd_tol)
    : DensityMatrix(ComplexMatrix(rho.cast<Complex>()), trace_tol, psd_tol) {}

DensityMatrix DensityMatrix::diagonal(const std::vector<double> &p) {
    RealVector d(static_cast<Eigen::Index>(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i) d(static_cast<Eigen::Index>(i)) = p[i];
    return DensityMatrix(RealMatrix(d.asDiagonal()));
}

ComplexMatrix DensityMatrix::sqrt() const {
    const RealVector roots = eig_.values.cwiseSqrt();
    ComplexMatrix root = eig_.vectors * roots.asDiagonal() * eig_.vectors.adjoint();
    return (root + root.adjoint()) / 2.0;
}

namespace {

// sqrt(rho2) sqrt(rho1) = U2 [D2 (U2^H U1) D1] U1^H; the bracket has the
// same singular values and never forms a square root of a product.
template <typename Matrix>
std::vector<double> product_singular_values(const RealVector &p1, const Matrix &u1,
                                            const RealVector &p2, const Matrix &u2) {
    const RealVector d1 = p1.cwiseMax(0.0).cwiseSqrt();
    const RealVector d2 = p2.cwiseMax(0.0).cwiseSqrt();
    const Matrix core = d2.asDiagonal() * (u2.adjoint() * u1) * d1.asDiagonal();
    Eigen::JacobiSVD<Matrix> svd(core);
    const RealVector s = svd.singularValues();
    std::vector<double> lambda(s.data(), s.data() + s.size());
    for (double &x : lambda) x = std::max(x, 0.0);
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    return lambda;
}

}  // namespace

std::vector<double> fidelity_op_spectrum(const DensityMatrix &rho1, const DensityMatrix &rho2) {
    if (rho1.dim() != rho2.dim()) {
        std::ostringstream msg;
        msg << "fidelity_op_spectrum: dimension mismatch " << rho1.dim() << " vs "
            << rho2.dim();
        throw ContractError(msg.str());
    }
    return product_singular_values(rho1.eigenvalues(), rho1.eigenvectors(),
                                   rho2.eigenvalues(), rho2.eigenvectors());
}

std::vector<double> block_fidelity_spectrum(const RealMatrix &a, const RealMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ContractError("block_fidelity_spectrum: block shapes differ");
    }
    const auto ea = sym_eig(a);
    const auto eb = sym_eig(b);
    for (const auto *e : {&ea, &eb}) {
        const double tol = default_clamp_tol(e->values);
        if (e->values.size() > 0 && e->values.minCoeff() < -tol) {
            throw NotPsdError("block_fidelity_spectrum: block is not positive semidefinite",
                              e->values.minCoeff());
        }
    }
    return product_singular_values(ea.values, ea.vectors, eb.values, eb.vectors);
}

}  // namespace fidspec
