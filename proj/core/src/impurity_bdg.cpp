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

#include "fidspec/impurity_bdg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fidspec::impurity {

namespace {

// Single-particle block: hopping -t to nearest neighbours, on-site -eps_f.
RealMatrix hopping_matrix(const LatticeParams &p) {
    const int n = site_count(p);
    RealMatrix h = RealMatrix::Zero(n, n);
    for (int y = 0; y < p.ny; ++y) {
        for (int x = 0; x < p.nx; ++x) {
            const int i = site_index(p, {x, y});
            h(i, i) = -p.eps_f;
            if (x + 1 < p.nx) {
                const int j = site_index(p, {x + 1, y});
                h(i, j) = h(j, i) = -p.t;
            }
            if (y + 1 < p.ny) {
                const int j = site_index(p, {x, y + 1});
                h(i, j) = h(j, i) = -p.t;
            }
        }
    }
    return h;
}

void require_site(const LatticeParams &p, Site s) {
    if (s.x < 0 || s.x >= p.nx || s.y < 0 || s.y >= p.ny) {
        std::ostringstream msg;
        msg << "site (" << s.x << ", " << s.y << ") is off the " << p.nx << "x" << p.ny
            << " lattice";
        throw ContractError(msg.str());
    }
}

// Fills the ground-state averages of `sol` from its up-sector eigensystem.
void fill_averages(BdGSolution &sol) {
    const int n = site_count(sol.params);
    Eigen::Index occupied = 0;
    while (occupied < sol.energies_up.size() && sol.energies_up(occupied) < 0.0) ++occupied;
    const auto u_occ = sol.amplitudes.topLeftCorner(n, occupied);
    const auto v_occ = sol.amplitudes.bottomLeftCorner(n, occupied);
    const auto v_empty = sol.amplitudes.bottomRightCorner(n, 2 * n - occupied);
    sol.n_up.resize(static_cast<std::size_t>(n));
    sol.n_dn.resize(static_cast<std::size_t>(n));
    sol.pair.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        sol.n_up[k] = u_occ.row(i).squaredNorm();
        sol.n_dn[k] = v_empty.row(i).squaredNorm();
        sol.pair[k] = u_occ.row(i).dot(v_occ.row(i));
    }
}

BdGSolution diagonalize(const LatticeParams &p, double J, std::span<const double> delta,
                        bool both_sectors) {
    const auto sectors = build_bdg_hamiltonian(p, J, delta);
    BdGSolution sol;
    sol.params = p;
    sol.J = J;
    sol.delta.assign(delta.begin(), delta.end());
    Eigen::SelfAdjointEigenSolver<RealMatrix> up(sectors.up);
    if (up.info() != Eigen::Success) throw std::runtime_error("BdG eigensolver failed");
    sol.energies_up = up.eigenvalues();
    sol.amplitudes = up.eigenvectors();
    if (both_sectors) {
        Eigen::SelfAdjointEigenSolver<RealMatrix> down(sectors.down, Eigen::EigenvaluesOnly);
        if (down.info() != Eigen::Success) throw std::runtime_error("BdG eigensolver failed");
        sol.energies_down = down.eigenvalues();
    }
    fill_averages(sol);
    return sol;
}

std::vector<double> merged_couplings(const JScanSpec &spec) {
    std::vector<double> all = spec.J_grid;
    for (double J : spec.J_grid) all.push_back(J + spec.delta_J);
    std::sort(all.begin(), all.end());
    std::vector<double> out;
    for (double J : all) {
        if (out.empty() || std::abs(J - out.back()) > 1e-9) out.push_back(J);
    }
    return out;
}

const BdGSolution &find_solution(std::span<const BdGSolution> solutions, double J) {
    for (const auto &s : solutions) {
        if (std::abs(s.J - J) <= 1e-9) return s;
    }
    std::ostringstream msg;
    msg << "no solution computed at J = " << J;
    throw ContractError(msg.str());
}

double max_difference(const std::vector<double> &a, const std::vector<double> &b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

void validate(const LatticeParams &p) {
    if (p.nx < 1 || p.ny < 1) throw ContractError("lattice extents must be positive");
    if (!(p.t > 0.0)) throw ContractError("hopping t must be positive");
    if (!(p.tolerance > 0.0)) throw ContractError("tolerance must be positive");
    if (p.max_iterations < 1) throw ContractError("max_iterations must be >= 1");
    if (!(p.mixing > 0.0 && p.mixing <= 1.0)) throw ContractError("mixing must lie in (0, 1]");
}

int site_count(const LatticeParams &p) { return p.nx * p.ny; }

int site_index(const LatticeParams &p, Site s) { return s.y * p.nx + s.x; }

Site site_at(const LatticeParams &p, int index) { return {index % p.nx, index / p.nx}; }

Site impurity_site(const LatticeParams &p) {
    if (p.nx % 2 == 0 || p.ny % 2 == 0) {
        std::ostringstream msg;
        msg << "impurity cannot be centered on a " << p.nx << "x" << p.ny
            << " lattice; extents must be odd";
        throw ContractError(msg.str());
    }
    return {p.nx / 2, p.ny / 2};
}

Site corner_site(const LatticeParams &) { return {0, 0}; }

SectorMatrices build_bdg_hamiltonian(const LatticeParams &p, double J,
                                     std::span<const double> delta) {
    validate(p);
    const int n = site_count(p);
    if (static_cast<int>(delta.size()) != n) {
        std::ostringstream msg;
        msg << "gap field has " << delta.size() << " entries, lattice has " << n << " sites";
        throw ContractError(msg.str());
    }
    const RealMatrix h = hopping_matrix(p);
    RealMatrix h_up = h;
    RealMatrix h_dn = h;
    if (J != 0.0) {
        const int c = site_index(p, impurity_site(p));
        h_up(c, c) -= J;
        h_dn(c, c) += J;
    }
    SectorMatrices out{RealMatrix::Zero(2 * n, 2 * n), RealMatrix::Zero(2 * n, 2 * n)};
    out.up.topLeftCorner(n, n) = h_up;
    out.up.bottomRightCorner(n, n) = -h_dn;
    out.down.topLeftCorner(n, n) = h_dn;
    out.down.bottomRightCorner(n, n) = -h_up;
    for (int i = 0; i < n; ++i) {
        const double d = delta[static_cast<std::size_t>(i)];
        out.up(i, n + i) = out.up(n + i, i) = d;
        out.down(i, n + i) = out.down(n + i, i) = -d;
    }
    return out;
}

double BdGSolution::electron_number() const {
    double total = 0.0;
    for (std::size_t i = 0; i < n_up.size(); ++i) total += n_up[i] + n_dn[i];
    return total;
}

BdGSolution solve_fixed(const LatticeParams &p, double J, std::span<const double> delta) {
    return diagonalize(p, J, delta, true);
}

BdGSolution solve_selfconsistent(const LatticeParams &p, double J,
                                 std::span<const double> start) {
    validate(p);
    if (!(p.v_pair > 0.0)) throw ContractError("v_pair must be positive");
    const int n = site_count(p);
    std::vector<double> delta_in;
    if (start.empty()) {
        delta_in.assign(static_cast<std::size_t>(n), p.initial_delta * p.t);
    } else if (static_cast<int>(start.size()) == n) {
        delta_in.assign(start.begin(), start.end());
    } else {
        throw ContractError("initial gap field does not match the lattice");
    }

    double residual = 0.0;
    std::vector<double> delta_out(static_cast<std::size_t>(n));
    for (int it = 1; it <= p.max_iterations; ++it) {
        BdGSolution sol = diagonalize(p, J, delta_in, false);
        residual = 0.0;
        for (std::size_t i = 0; i < delta_out.size(); ++i) {
            delta_out[i] = -p.v_pair * sol.pair[i];
            residual = std::max(residual, std::abs(delta_out[i] - delta_in[i]));
        }
        if (residual <= p.tolerance * p.t) {
            sol = diagonalize(p, J, delta_in, true);
            sol.iterations = it;
            sol.residual = residual;
            return sol;
        }
        for (std::size_t i = 0; i < delta_in.size(); ++i) {
            delta_in[i] = (1.0 - p.mixing) * delta_in[i] + p.mixing * delta_out[i];
        }
    }
    std::ostringstream msg;
    msg << "gap iteration did not converge at J = " << J << " after " << p.max_iterations
        << " iterations (residual " << residual << ")";
    throw ConvergenceError(msg.str(), residual);
}

SiteState one_site_rho(const BdGSolution &sol, Site site) {
    require_site(sol.params, site);
    const auto i = static_cast<std::size_t>(site_index(sol.params, site));
    const double nu = sol.n_up[i];
    const double nd = sol.n_dn[i];
    const double f = sol.pair[i];
    // Wick: <n_up n_dn> = <n_up><n_dn> + <c_up^+ c_dn^+><c_dn c_up>
    const double d = nu * nd + f * f;
    RealMatrix rho = RealMatrix::Zero(4, 4);
    rho(0, 0) = 1.0 - nu - nd + d;
    rho(0, 1) = rho(1, 0) = f;
    rho(1, 1) = d;
    rho(2, 2) = nu - d;
    rho(3, 3) = nd - d;
    return {site, nu, nd, d, f, DensityMatrix(rho)};
}

SiteFidelity site_fidelity_spectrum(const SiteState &a, const SiteState &b) {
    const RealMatrix ra = a.rho.matrix().real();
    const RealMatrix rb = b.rho.matrix().real();
    const RealMatrix ca = ra.topLeftCorner(2, 2);
    const RealMatrix cb = rb.topLeftCorner(2, 2);
    const RealMatrix root_a = psd_sqrt(ca, 1e-12);
    const RealMatrix inner = root_a * cb * root_a;
    const auto fop = sym_eig(psd_sqrt(RealMatrix((inner + inner.transpose()) / 2.0), 1e-12));

    SiteFidelity out;
    // eigenvector weight on |0> decides the label
    const bool first_is_empty = std::abs(fop.vectors(0, 0)) >= std::abs(fop.vectors(0, 1));
    const double l0 = std::max(fop.values(0), 0.0);
    const double l1 = std::max(fop.values(1), 0.0);
    out.charge_empty = first_is_empty ? l0 : l1;
    out.charge_double = first_is_empty ? l1 : l0;
    out.spin_up = std::sqrt(std::max(ra(2, 2), 0.0) * std::max(rb(2, 2), 0.0));
    out.spin_dn = std::sqrt(std::max(ra(3, 3), 0.0) * std::max(rb(3, 3), 0.0));
    out.fidelity = out.charge_empty + out.charge_double + out.spin_up + out.spin_dn;
    return out;
}

std::vector<BdGSolution> scan_solutions(const LatticeParams &p,
                                        std::span<const double> couplings) {
    std::vector<BdGSolution> out;
    out.reserve(couplings.size());
    for (std::size_t k = 0; k < couplings.size(); ++k) {
        if (k > 0 && !(couplings[k] > couplings[k - 1])) {
            throw ContractError("coupling scan must be strictly ascending");
        }
        std::span<const double> start;
        if (!out.empty()) start = out.back().delta;
        out.push_back(solve_selfconsistent(p, couplings[k], start));
    }
    return out;
}

void validate(const LatticeParams &p, const JScanSpec &spec) {
    validate(p);
    if (!(p.v_pair > 0.0)) throw ContractError("v_pair must be positive");
    impurity_site(p);
    require_site(p, spec.site);
    if (spec.J_grid.empty()) throw ContractError("J_grid is empty");
    if (!(spec.delta_J > 0.0)) throw ContractError("delta_J must be positive");
    for (std::size_t k = 0; k < spec.J_grid.size(); ++k) {
        if (!(spec.J_grid[k] >= 0.0) || !std::isfinite(spec.J_grid[k])) {
            throw ContractError("J_grid entries must be finite and non-negative");
        }
        if (k > 0 && !(spec.J_grid[k] > spec.J_grid[k - 1])) {
            throw ContractError("J_grid must be strictly ascending");
        }
    }
}

Table jscan_table(std::span<const BdGSolution> solutions, const JScanSpec &spec) {
    Table table({"J", "lambda_charge1", "lambda_charge2", "lambda_spin_up", "lambda_spin_dn",
                 "fidelity"});
    for (double J : spec.J_grid) {
        const auto a = one_site_rho(find_solution(solutions, J), spec.site);
        const auto b = one_site_rho(find_solution(solutions, J + spec.delta_J), spec.site);
        const auto f = site_fidelity_spectrum(a, b);
        table.add_row({J, f.charge_empty, f.charge_double, f.spin_up, f.spin_dn, f.fidelity});
    }
    return table;
}

JScanResult impurity_jscan(const LatticeParams &p, const JScanSpec &spec) {
    validate(p, spec);
    const auto couplings = merged_couplings(spec);
    const auto solutions = scan_solutions(p, couplings);
    JScanResult result{jscan_table(solutions, spec), {}};
    if (couplings.size() >= 4) {
        for (std::size_t k : {couplings.size() / 4, (3 * couplings.size()) / 4}) {
            const auto cold = solve_selfconsistent(p, couplings[k]);
            result.cold_start_checks.emplace_back(couplings[k],
                                                  max_difference(cold.delta, solutions[k].delta));
        }
    }
    return result;
}

void validate(const LatticeParams &p, const SpatialMapSpec &spec) {
    validate(p);
    if (!(p.v_pair > 0.0)) throw ContractError("v_pair must be positive");
    impurity_site(p);
    require_site(p, spec.anchor);
    if (spec.J_grid.empty()) throw ContractError("J_grid is empty");
    for (double J : spec.J_grid) {
        if (!(J >= 0.0) || !std::isfinite(J)) {
            throw ContractError("J_grid entries must be finite and non-negative");
        }
    }
}

Table impurity_spatial_map(const LatticeParams &p, const SpatialMapSpec &spec) {
    validate(p, spec);
    Table table({"J", "index", "x", "y", "lambda_charge1", "lambda_charge2", "lambda_spin_up",
                 "lambda_spin_dn", "fidelity"});
    for (double J : spec.J_grid) {
        const auto sol = solve_selfconsistent(p, J);
        const auto anchor = one_site_rho(sol, spec.anchor);
        for (int idx = 0; idx < site_count(p); ++idx) {
            const Site s = site_at(p, idx);
            const auto f = site_fidelity_spectrum(anchor, one_site_rho(sol, s));
            table.add_row({J, static_cast<double>(idx), static_cast<double>(s.x),
                           static_cast<double>(s.y), f.charge_empty, f.charge_double, f.spin_up,
                           f.spin_dn, f.fidelity});
        }
    }
    return table;
}

}  // namespace fidspec::impurity
