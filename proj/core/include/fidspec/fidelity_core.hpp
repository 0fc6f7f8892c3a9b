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

/** @file fidelity_core.hpp
 *  @brief Quantities derived from a fidelity-operator spectrum: fidelity,
 *  log spectrum, moments, von Neumann / Renyi entropies and the
 *  finite-difference fidelity susceptibility.
 */

#ifndef FIDSPEC_FIDELITY_CORE_HPP
#define FIDSPEC_FIDELITY_CORE_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace fidspec {

/// Eigenvalues below this are treated as zero inside logarithms.
inline constexpr double kLambdaFloor = 1e-300;
inline constexpr int kMaxMoment = 16;
inline constexpr double kDefaultDeltaH = 0.01;

struct SpectrumResult {
    std::vector<double> lambda;        ///< descending
    double fidelity = 0.0;             ///< sum of lambda
    std::vector<double> log_spectrum;  ///< -ln(max(lambda_i, floor))
    std::size_t saturated = 0;         ///< entries that hit the floor
};

struct SpectrumStats {
    std::vector<double> moments;  ///< moments[n-1] = M_n
    std::vector<double> renyi;    ///< renyi[n-1] = S_n, renyi[0] = S_1
    double von_neumann = 0.0;
};

struct SusceptibilityPoint {
    double h = 0.0;
    double delta = 0.0;
    double chi_total = 0.0;
    std::vector<double> chi_per_eigenvalue;
    double chi_abs = 0.0;
};

/// -ln(max(lambda_i, kLambdaFloor)); order preserved. Throws on negative input.
std::vector<double> log_spectrum(std::span<const double> lambda);

/// Wraps a spectrum (re-sorted descending) with its fidelity and log values.
SpectrumResult make_spectrum_result(std::vector<double> lambda);

/// M_n = sum_i lambda_i^n for n = 1..n_max, summed largest term first.
std::vector<double> moments(std::span<const double> lambda, int n_max);

/// S_1 = -sum lambda ln lambda, S_n = ln(M_n)/(1-n).
SpectrumStats entropies(std::span<const double> lambda, int n_max);

/// Second central difference per rank-matched eigenvalue. Spectra must have
/// equal length; delta > 0.
SusceptibilityPoint susceptibility(std::span<const double> lambda_minus,
                                   std::span<const double> lambda_zero,
                                   std::span<const double> lambda_plus, double delta,
                                   double h = 0.0);

}  // namespace fidspec

#endif  // FIDSPEC_FIDELITY_CORE_HPP
