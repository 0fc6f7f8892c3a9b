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

/** @file bcs_thermal.hpp
 *  @brief Thermal states of a mean-field s-wave BCS superconductor, one
 *  4x4 block per momentum pair (k, -k), and their k-resolved fidelity
 *  operators.
 *
 *  Block basis: {|0>, |up dn>, |up>, |dn>}. The charge block is
 *  [[0, -delta], [-delta, 2 eps_bar]], both spin states sit at eps_bar.
 *  Energies are in units of the hopping t = 1 and k_B = 1.
 */

#ifndef FIDSPEC_BCS_THERMAL_HPP
#define FIDSPEC_BCS_THERMAL_HPP

#include "fidspec/spectral_kernel.hpp"
#include "fidspec/table.hpp"

#include <array>
#include <optional>
#include <vector>

namespace fidspec::bcs {

/// Square-lattice dispersion -2t (cos kx + cos ky).
double dispersion(double kx, double ky, double t = 1.0);

/// k_j = -pi + 2 pi j / n, j = 0..n-1.
double grid_momentum(int j, int n);

struct GapSolution {
    double delta = 0.0;
    bool normal_phase = false;
};

/// Solves 1 = (v/N) sum'_k tanh(E_k / 2T) / (2 E_k) for delta by bisection on
/// [0, v]; the primed sum runs over |eps_bar_k| < cutoff on the n x n grid.
/// Returns delta = 0 with normal_phase set when the bracket holds no root.
GapSolution gap_solve(double T, double v, double cutoff, int grid_n, double mu = -1.0);

struct BCSParams {
    double T = 0.1;
    double delta = 0.0;  ///< used unless self_consistent
    double mu = -1.0;
    int grid_n = 64;
    bool self_consistent = false;
    double v = 0.0;       ///< pairing strength for the self-consistent gap
    double cutoff = 0.0;  ///< shell half-width around the Fermi level
};

/// Throws ContractError on T <= 0, delta < 0, grid_n < 2 or a bad
/// self-consistent setup.
void validate(const BCSParams &p);

/// Gap amplitude: p.delta, or gap_solve(...) in self-consistent mode.
GapSolution resolve_gap(const BCSParams &p);

struct KModeState {
    double eps_bar = 0.0;
    double delta = 0.0;
    double T = 0.0;
    double E = 0.0;
    DensityMatrix rho;
};

/// exp(-H_k / T) / Tr, built from the eigensystem of the 4x4 block.
KModeState k_mode_rho(double eps_bar, double delta, double T);

struct KFidelityResult {
    std::array<double, 4> lambda{};  ///< descending
    double charge_hi = 0.0;
    double charge_lo = 0.0;
    double spin = 0.0;  ///< each of the two degenerate spin eigenvalues
    double fidelity_k = 0.0;
};

/// Fidelity operator of two k-blocks, charge and spin parts separately.
KFidelityResult k_fidelity(const KModeState &a, const KModeState &b);

/// Printed closed-form charge-block expressions, evaluated verbatim, used
/// only as a comparator against k_fidelity.
struct ClosedFormEta {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double D = 0.0;
    double eta_plus = 0.0;
    double eta_minus = 0.0;
    /// max deviation of {sqrt(eta_pm)/sqrt(D)} from the numeric charge pair
    double deviation_sqrt = 0.0;
    /// max deviation of {eta_pm/sqrt(D)} from the numeric charge pair
    double deviation_plain = 0.0;
    /// |1/sqrt(D) - numeric spin eigenvalue|
    double deviation_spin = 0.0;
};

struct ModeParams {
    double eps_bar = 0.0;
    double delta = 0.0;
    double T = 1.0;
};

ClosedFormEta closed_form_eta(const ModeParams &a, const ModeParams &b);

struct ComparatorStats {
    std::size_t evaluated = 0;  ///< k-points with finite closed-form values
    double max_deviation_sqrt = 0.0;
    double max_deviation_plain = 0.0;
    double max_deviation_spin = 0.0;
};

struct BrillouinMap {
    /// kx, ky, index, lambda_charge_hi, lambda_charge_lo, lambda_spin, fidelity
    Table table;
    GapSolution gap_a;
    GapSolution gap_b;
    ComparatorStats comparator;
    double log_fidelity = 0.0;  ///< sum_k ln fidelity_k
};

/// One row per k in row-major order (kx fastest). Grids must match.
BrillouinMap brillouin_map(const BCSParams &pa, const BCSParams &pb);

}  // namespace fidspec::bcs

#endif  // FIDSPEC_BCS_THERMAL_HPP
