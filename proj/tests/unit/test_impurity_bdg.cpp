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
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace fidspec;
using namespace fidspec::impurity;

namespace {

LatticeParams lattice(int nx, int ny, double eps_f = -1.0) {
    LatticeParams p;
    p.nx = nx;
    p.ny = ny;
    p.eps_f = eps_f;
    return p;
}

oracle::LatticeModel model(const LatticeParams &p, double J, double delta) {
    oracle::LatticeModel m;
    m.nx = p.nx;
    m.ny = p.ny;
    m.t = p.t;
    m.eps_f = p.eps_f;
    m.J = J;
    m.impurity = J != 0.0 ? site_index(p, impurity_site(p)) : -1;
    m.delta.assign(static_cast<std::size_t>(site_count(p)), delta);
    return m;
}

std::vector<double> as_vector(const RealVector &v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

TEST_CASE("lattice helpers") {
    const auto p = lattice(15, 15);
    CHECK(impurity_site(p) == Site{7, 7});
    CHECK(site_index(p, {3, 2}) == 33);
    CHECK(site_at(p, 33) == Site{3, 2});
    CHECK(corner_site(p) == Site{0, 0});
    CHECK_THROWS_AS(impurity_site(lattice(4, 5)), ContractError);
    const std::vector<double> d(16, 0.1);
    CHECK_THROWS_AS(build_bdg_hamiltonian(lattice(4, 4), 1.0, d), ContractError);
    CHECK_NOTHROW(build_bdg_hamiltonian(lattice(4, 4), 0.0, d));
    CHECK_THROWS_AS(build_bdg_hamiltonian(lattice(3, 3), 0.0, d), ContractError);
}

TEST_CASE("uniform gap at J = 0: +-sqrt(xi^2 + delta^2) over open-boundary modes") {
    const auto p = lattice(5, 3);
    const double delta = 0.4;
    const std::vector<double> d(15, delta);
    const auto h = build_bdg_hamiltonian(p, 0.0, d);
    CHECK(max_abs(RealMatrix(h.up - h.up.transpose())) == 0.0);

    // single-particle levels of the open lattice
    RealMatrix t = h.up.topLeftCorner(15, 15);
    const auto xi = sym_eig(t).values;
    std::vector<double> want;
    for (Eigen::Index i = 0; i < xi.size(); ++i) {
        const double e = std::hypot(xi(i), delta);
        want.push_back(e);
        want.push_back(-e);
    }
    std::sort(want.begin(), want.end());
    const auto sol = solve_fixed(p, 0.0, d);
    const auto up = as_vector(sol.energies_up);
    const auto dn = as_vector(sol.energies_down);
    for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(std::abs(up[i] - want[i]) < 1e-12);
        CHECK(std::abs(dn[i] - up[i]) < 1e-12);
    }
}

TEST_CASE("sector spectra are particle-hole mirrors") {
    const auto p = lattice(5, 5);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> gap(0.1, 0.6);
    std::vector<double> d(25);
    for (auto &x : d) x = gap(rng);
    const auto sol = solve_fixed(p, 1.7, d);
    const auto n = sol.energies_up.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        CHECK(std::abs(sol.energies_down(i) + sol.energies_up(n - 1 - i)) < 1e-9);
    }
}

TEST_CASE("2x2 lattice spectrum matches the full Nambu matrix") {
    const auto p = lattice(2, 2, 0.0);
    const auto m = model(p, 0.0, 0.5);
    const auto nambu = oracle::nambu_solve(m);
    const auto sol = solve_fixed(p, 0.0, m.delta);
    std::vector<double> both = as_vector(sol.energies_up);
    const auto dn = as_vector(sol.energies_down);
    both.insert(both.end(), dn.begin(), dn.end());
    std::sort(both.begin(), both.end());
    REQUIRE(both.size() == nambu.spectrum.size());
    for (std::size_t i = 0; i < both.size(); ++i) CHECK(std::abs(both[i] - nambu.spectrum[i]) < 1e-12);
}

TEST_CASE("fixed-gap correlators and one-site states match the Nambu oracle") {
    for (double J : {0.0, 0.7, 2.5}) {
        const auto p = lattice(3, 3);
        const auto m = model(p, J, 0.5);
        const auto nambu = oracle::nambu_solve(m);
        const auto sol = solve_fixed(p, J, m.delta);
        for (int i = 0; i < 9; ++i) {
            const auto &o = nambu.sites[static_cast<std::size_t>(i)];
            const auto k = static_cast<std::size_t>(i);
            CHECK(std::abs(sol.n_up[k] - o.n_up) < 1e-9);
            CHECK(std::abs(sol.n_dn[k] - o.n_dn) < 1e-9);
            CHECK(std::abs(sol.pair[k] - o.pair) < 1e-9);
            CHECK(o.spin_flip < 1e-12);
            const auto s = one_site_rho(sol, site_at(p, i));
            CHECK(max_abs(RealMatrix(s.rho.matrix().real() - o.rho)) < 1e-8);
            CHECK(std::abs(s.rho.matrix().trace().real() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("one-site states match a many-body exact diagonalization") {
    struct Case {
        int nx, ny;
        double J;
    };
    for (const Case c : {Case{2, 2, 0.0}, Case{3, 1, 0.8}, Case{5, 1, 1.5}, Case{5, 1, 3.0}}) {
        const auto p = lattice(c.nx, c.ny);
        const auto m = model(p, c.J, 0.5);
        const auto sol = solve_fixed(p, c.J, m.delta);
        for (int i = 0; i < site_count(p); ++i) {
            const auto mb = oracle::many_body_site(m, i);
            const auto s = one_site_rho(sol, site_at(p, i));
            CHECK(std::abs(s.double_occ - mb.double_occ) < 1e-9);
            CHECK(max_abs(RealMatrix(s.rho.matrix().real() - mb.rho)) < 1e-9);
        }
    }
}

TEST_CASE("fill rule: total magnetization counts the negative levels") {
    const auto p = lattice(7, 7);
    const std::vector<double> d(49, 0.5);
    int last = 0;
    bool crossed = false;
    for (double J = 0.0; J <= 6.0; J += 0.25) {
        const auto sol = solve_fixed(p, J, d);
        double sz = 0.0;
        for (std::size_t i = 0; i < sol.n_up.size(); ++i) sz += sol.n_up[i] - sol.n_dn[i];
        const int negative = static_cast<int>((sol.energies_up.array() < 0.0).count());
        CHECK(std::abs(sz - (negative - 49)) < 1e-9);
        if (J > 0.0 && negative - 49 != last) crossed = true;
        last = negative - 49;

        // the down sector yields the same densities
        const auto h = build_bdg_hamiltonian(p, J, d);
        const auto dn = sym_eig(h.down);
        for (int i = 0; i < 49; ++i) {
            double n_dn = 0.0;
            for (Eigen::Index k = 0; k < dn.values.size(); ++k) {
                if (dn.values(k) < 0.0) n_dn += dn.vectors(i, k) * dn.vectors(i, k);
            }
            CHECK(std::abs(n_dn - sol.n_dn[static_cast<std::size_t>(i)]) < 1e-6);
        }
    }
    CHECK(crossed);
    CHECK(last == 1);
}

TEST_CASE("self-consistent solution at J = 0") {
    const auto p = lattice(9, 9);
    const auto sol = solve_selfconsistent(p, 0.0);
    CHECK(sol.residual <= 1e-6);
    CHECK(sol.iterations >= 1);
    for (double d : sol.delta) CHECK(d > 0.0);
    const double centre = sol.delta[static_cast<std::size_t>(site_index(p, {4, 4}))];
    const double near = sol.delta[static_cast<std::size_t>(site_index(p, {5, 4}))];
    CHECK(std::abs(centre - near) < 0.1 * centre);
    // fixed point of delta = -v <c_dn c_up>
    const auto check = solve_fixed(p, 0.0, sol.delta);
    for (std::size_t i = 0; i < sol.delta.size(); ++i) {
        CHECK(std::abs(-p.v_pair * check.pair[i] - sol.delta[i]) < 1e-5);
    }
    const auto again = solve_selfconsistent(p, 0.0);
    CHECK(again.delta == sol.delta);

    const auto s = one_site_rho(sol, {4, 4});
    CHECK(std::abs(s.n_up - s.n_dn) < 1e-12);
    const auto f = site_fidelity_spectrum(one_site_rho(sol, {2, 4}), one_site_rho(sol, {6, 4}));
    CHECK(std::abs(f.fidelity - 1.0) < 1e-6);
    const auto self = site_fidelity_spectrum(s, s);
    CHECK(std::abs(self.fidelity - 1.0) < 1e-12);
}

TEST_CASE("strong coupling suppresses the gap at the impurity") {
    const auto p = lattice(11, 11);
    const auto c = static_cast<std::size_t>(site_index(p, impurity_site(p)));
    const auto weak = solve_selfconsistent(p, 0.0);
    const auto strong = solve_selfconsistent(p, 10.0);
    CHECK(strong.delta[c] < 0.5 * weak.delta[c]);
}

TEST_CASE("non-convergence carries the residual") {
    auto p = lattice(5, 5);
    p.max_iterations = 2;
    p.initial_delta = 2.0;
    try {
        solve_selfconsistent(p, 0.0);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError &e) {
        CHECK(e.residual() > p.tolerance);
    }
    auto q = lattice(5, 5);
    q.v_pair = 0.0;
    CHECK_THROWS_AS(solve_selfconsistent(q, 0.0), ContractError);
}

TEST_CASE("blockwise site fidelity equals the dense route") {
    const auto p = lattice(3, 3);
    const auto a = solve_fixed(p, 0.4, std::vector<double>(9, 0.5));
    const auto b = solve_fixed(p, 0.4, std::vector<double>(9, 0.8));
    for (int i = 0; i < 9; ++i) {
        const auto sa = one_site_rho(a, site_at(p, i));
        const auto sb = one_site_rho(b, site_at(p, i));
        const auto block = site_fidelity_spectrum(sa, sb);
        auto dense = fidelity_op_spectrum(sa.rho, sb.rho);
        std::vector<double> mine{block.charge_empty, block.charge_double, block.spin_up, block.spin_dn};
        std::sort(mine.begin(), mine.end(), std::greater<>());
        for (int k = 0; k < 4; ++k) CHECK(std::abs(mine[k] - dense[k]) < 1e-10);
        // labels: the empty-dominated eigenvalue is the larger one at low filling
        CHECK(block.charge_empty > block.charge_double);
    }
    CHECK_THROWS_AS(one_site_rho(a, {3, 0}), ContractError);
}

TEST_CASE("scan tables") {
    const auto p = lattice(5, 5);
    JScanSpec spec;
    spec.J_grid = {0.0, 0.5, 1.0};
    spec.delta_J = 0.25;
    spec.site = impurity_site(p);
    const auto r = impurity_jscan(p, spec);
    CHECK(r.table.size() == 3);
    CHECK(r.table.columns() == std::vector<std::string>{"J", "lambda_charge1", "lambda_charge2",
                                                        "lambda_spin_up", "lambda_spin_dn", "fidelity"});
    for (std::size_t i = 0; i < r.table.size(); ++i) {
        CHECK(r.table.at(i, "fidelity") <= 1.0 + 1e-9);
        CHECK(r.table.at(i, "fidelity") > 0.9);
    }
    REQUIRE(r.cold_start_checks.size() == 2);
    for (const auto &[J, diff] : r.cold_start_checks) CHECK(diff < 1e-4);

    JScanSpec bad = spec;
    bad.J_grid = {1.0, 0.5};
    CHECK_THROWS_AS(impurity_jscan(p, bad), ContractError);
    bad.J_grid = {-1.0};
    CHECK_THROWS_AS(impurity_jscan(p, bad), ContractError);
    bad = spec;
    bad.site = {9, 9};
    CHECK_THROWS_AS(impurity_jscan(p, bad), ContractError);

    SpatialMapSpec map;
    map.J_grid = {0.5};
    map.anchor = impurity_site(p);
    const auto t = impurity_spatial_map(p, map);
    CHECK(t.size() == 25);
    const auto c = static_cast<std::size_t>(site_index(p, map.anchor));
    CHECK(std::abs(t.at(c, "fidelity") - 1.0) < 1e-12);
    CHECK(t.at(c, "x") == 2.0);
    CHECK(t.at(7, "index") == 7.0);
    CHECK(t.at(7, "x") == 2.0);
    CHECK(t.at(7, "y") == 1.0);
}
