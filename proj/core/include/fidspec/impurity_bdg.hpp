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

/** @file impurity_bdg.hpp
 *  @brief Self-consistent Bogoliubov-de Gennes solution of a 2-D s-wave
 *  superconductor with a classical spin impurity at the lattice center,
 *  one-site reduced density matrices and their fidelity spectra.
 *
 *  The Hamiltonian splits into two decoupled sectors,
 *  (c_up, c_dn^dagger) and (c_dn, c_up^dagger), each a 2N x 2N real
 *  symmetric matrix. The ground state fills every negative quasiparticle
 *  level of the first sector; the second is its particle-hole mirror.
 *
 *  Sites are numbered row by row: index = y * nx + x.
 */

#ifndef FIDSPEC_IMPURITY_BDG_HPP
#define FIDSPEC_IMPURITY_BDG_HPP

#include "fidspec/spectral_kernel.hpp"
#include "fidspec/table.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fidspec::impurity {

struct LatticeParams {
    int nx = 15;
    int ny = 15;
    double t = 1.0;
    double eps_f = -1.0;
    double v_pair = 2.0;
    double tolerance = 1e-6;  ///< self-consistency tolerance, in units of t
    int max_iterations = 500;
    double mixing = 0.5;      ///< weight of the new gap field per iteration
    double initial_delta = 0.5;
};

struct Site {
    int x = 0;
    int y = 0;
    bool operator==(const Site &) const = default;
};

/// Throws ContractError on non-positive extents, t <= 0 or bad solver knobs.
void validate(const LatticeParams &p);

int site_count(const LatticeParams &p);
int site_index(const LatticeParams &p, Site s);
Site site_at(const LatticeParams &p, int index);
/// Lattice center; requires odd extents.
Site impurity_site(const LatticeParams &p);
Site corner_site(const LatticeParams &p);

/// Raised when the gap iteration exhausts max_iterations.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string &what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

struct SectorMatrices {
    RealMatrix up;    ///< basis (c_{i up}, c_{i dn}^dagger)
    RealMatrix down;  ///< basis (c_{i dn}, c_{i up}^dagger)
};

/// Nearest-neighbour hopping -t (open boundaries), on-site -eps_f, pairing
/// delta_i, and -J sigma^z at the impurity. J != 0 requires odd extents so
/// the impurity sits at the center.
SectorMatrices build_bdg_hamiltonian(const LatticeParams &p, double J,
                                     std::span<const double> delta);

struct BdGSolution {
    LatticeParams params;
    double J = 0.0;
    RealVector energies_up;    ///< ascending
    RealVector energies_down;  ///< ascending
    /// Eigenvectors of the up sector; rows [0, N) are u_n(i), [N, 2N) v_n(i).
    RealMatrix amplitudes;
    std::vector<double> delta;
    int iterations = 0;
    double residual = 0.0;

    // per-site ground-state averages
    std::vector<double> n_up;
    std::vector<double> n_dn;
    std::vector<double> pair;  ///< <c_up^dagger c_dn^dagger> = <c_dn c_up> (real gauge)

    double electron_number() const;
};

/// Diagonalizes both sectors at a fixed gap field; no iteration.
BdGSolution solve_fixed(const LatticeParams &p, double J, std::span<const double> delta);

/// Iterates delta_i <- -v_pair <c_{i dn} c_{i up}> with linear mixing until
/// max_i |delta_out - delta_in| <= tolerance * t. An empty `start` means a
/// uniform initial_delta.
BdGSolution solve_selfconsistent(const LatticeParams &p, double J,
                                 std::span<const double> start = {});

struct SiteState {
    Site site;
    double n_up = 0.0;
    double n_dn = 0.0;
    double double_occ = 0.0;  ///< <n_up n_dn> from Wick's theorem
    double pair = 0.0;        ///< <c_up^dagger c_dn^dagger>
    DensityMatrix rho;        ///< basis {|0>, |up dn>, |up>, |dn>}
};

SiteState one_site_rho(const BdGSolution &sol, Site site);

/// Four eigenvalues of the one-site fidelity operator, computed blockwise.
/// Charge eigenvalues are labelled by the dominant component of their
/// eigenvector (empty vs doubly occupied).
struct SiteFidelity {
    double charge_empty = 0.0;
    double charge_double = 0.0;
    double spin_up = 0.0;
    double spin_dn = 0.0;
    double fidelity = 0.0;
};

SiteFidelity site_fidelity_spectrum(const SiteState &a, const SiteState &b);

/// Solves at every J of `couplings` (ascending order required), warm-starting
/// each point from the previous one.
std::vector<BdGSolution> scan_solutions(const LatticeParams &p,
                                        std::span<const double> couplings);

struct JScanResult {
    Table table;  ///< J, lambda_charge1, lambda_charge2, lambda_spin_up, lambda_spin_dn, fidelity
    /// max_i |delta_warm - delta_cold| at the cross-check couplings
    std::vector<std::pair<double, double>> cold_start_checks;
};

struct JScanSpec {
    std::vector<double> J_grid;
    double delta_J = 0.05;
    Site site;
};

void validate(const LatticeParams &p, const JScanSpec &spec);

/// rho_1 at J, rho_2 at J + delta_J, both at `site`.
JScanResult impurity_jscan(const LatticeParams &p, const JScanSpec &spec);

/// Same table from precomputed solutions; `solutions` must cover every J and
/// J + delta_J (matched within 1e-9).
Table jscan_table(std::span<const BdGSolution> solutions, const JScanSpec &spec);

struct SpatialMapSpec {
    std::vector<double> J_grid;
    Site anchor;
};

void validate(const LatticeParams &p, const SpatialMapSpec &spec);

/// For each J: rho_1 at the anchor, rho_2 at every site in row-major order.
/// Columns: J, index, x, y, the four eigenvalues, fidelity.
Table impurity_spatial_map(const LatticeParams &p, const SpatialMapSpec &spec);

}  // namespace fidspec::impurity

#endif  // FIDSPEC_IMPURITY_BDG_HPP
