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

#include "fidspec/xx_chain.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace fidspec;
using namespace fidspec::xx;

namespace {

std::vector<double> sorted_eigenvalues(const DensityMatrix &rho) {
    const auto &e = rho.eigenvalues();
    std::vector<double> v(e.data(), e.data() + e.size());
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

double max_diff(const std::vector<double> &a, const std::vector<double> &b) {
    REQUIRE(a.size() == b.size());
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

RealMatrix rotation(double theta) {
    return RealMatrix{{std::cos(theta), -std::sin(theta)}, {std::sin(theta), std::cos(theta)}};
}

}  // namespace

TEST_CASE("correlation_matrix values") {
    const auto at0 = correlation_matrix({0.0, 3});
    CHECK(std::abs(at0.g[0]) < 1e-15);
    CHECK(at0.g[1] == doctest::Approx(2.0 / std::numbers::pi));
    CHECK(at0.g[1] == doctest::Approx(0.63662).epsilon(1e-5));
    CHECK(std::abs(at0.g[2]) < 1e-15);

    const auto half = correlation_matrix({0.5, 3});
    CHECK(half.g[0] == doctest::Approx(-1.0 / 3.0));
    CHECK(half.g[1] == doctest::Approx(std::sqrt(3.0) / std::numbers::pi));
    CHECK(half.g[1] == doctest::Approx(0.55133).epsilon(1e-5));
    CHECK(half.g[2] == doctest::Approx(std::sqrt(3.0) / (2.0 * std::numbers::pi)));
    CHECK(half.g[2] == doctest::Approx(0.27567).epsilon(1e-5));

    const auto edge = correlation_matrix({1.0 - 1e-10, 4});
    CHECK(edge.g[0] == doctest::Approx(-1.0).epsilon(1e-4));
    for (int l = 1; l < 4; ++l) CHECK(std::abs(edge.g[static_cast<std::size_t>(l)]) < 1e-4);

    for (double h : {0.0, 0.3, 0.9}) {
        const auto tc = correlation_matrix({h, 6});
        for (double g : tc.g) CHECK(std::abs(g) <= 1.0);
        CHECK(max_abs(RealMatrix(tc.G - tc.G.transpose())) == 0.0);
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) {
                CHECK(tc.B.matrix()(2 * i, 2 * j + 1) == tc.G(i, j));
                CHECK(tc.B.matrix()(2 * i + 1, 2 * j) == -tc.G(i, j));
                CHECK(tc.B.matrix()(2 * i, 2 * j) == 0.0);
            }
        }
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(correlation_matrix({1.0, 2}), ContractError);
    CHECK_THROWS_AS(correlation_matrix({-0.1, 2}), ContractError);
    CHECK_THROWS_AS(correlation_matrix({0.5, 0}), ContractError);
    CHECK_THROWS_AS(correlation_matrix({0.5, 9}), ContractError);
    CHECK_THROWS_AS(MajoranaRep(9), ContractError);
}

TEST_CASE("Majorana representation") {
    const MajoranaRep one(1);
    const ComplexMatrix sx{{0.0, 1.0}, {1.0, 0.0}};
    const ComplexMatrix sy{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}};
    CHECK(one.op(0) == sx);
    CHECK(one.op(1) == sy);

    const MajoranaRep two(2);
    ComplexMatrix zx = ComplexMatrix::Zero(4, 4);
    zx.block(0, 0, 2, 2) = sx;
    zx.block(2, 2, 2, 2) = -sx;
    CHECK(two.op(2) == zx);

    for (int L = 1; L <= 5; ++L) {
        const MajoranaRep rep(L);
        const ComplexMatrix id = ComplexMatrix::Identity(rep.dim(), rep.dim());
        for (std::size_t m = 0; m < rep.ops().size(); ++m) {
            CHECK(rep.op(m) == rep.op(m).adjoint());
            for (std::size_t n = 0; n < rep.ops().size(); ++n) {
                const ComplexMatrix ac = rep.op(m) * rep.op(n) + rep.op(n) * rep.op(m);
                CHECK(ac == (m == n ? ComplexMatrix(2.0 * id) : ComplexMatrix::Zero(rep.dim(), rep.dim())));
            }
        }
    }
}

TEST_CASE("single-mode block states") {
    const auto s = block_density_matrix(correlation_matrix({0.5, 1}), MajoranaRep(1));
    const auto ev = sorted_eigenvalues(s.rho);
    CHECK(ev[0] == doctest::Approx(2.0 / 3.0));
    CHECK(ev[1] == doctest::Approx(1.0 / 3.0));

    const auto free = block_density_matrix(correlation_matrix({0.0, 1}), MajoranaRep(1));
    CHECK(free.rho.matrix() == ComplexMatrix(0.5 * ComplexMatrix::Identity(2, 2)));
}

TEST_CASE("mode_spectrum") {
    CHECK(max_diff(mode_spectrum(std::vector<double>{1.0}), {1.0, 0.0}) < 1e-15);
    CHECK(max_diff(mode_spectrum(std::vector<double>{1.0 / 3.0}), {2.0 / 3.0, 1.0 / 3.0}) < 1e-15);
    CHECK(max_diff(mode_spectrum(std::vector<double>{0.9, 0.2}), {0.57, 0.38, 0.03, 0.02}) < 1e-15);
}

TEST_CASE("block state reproduces its correlation matrix") {
    for (double h : {0.1, 0.5, 0.8}) {
        const int L = 3;
        const auto tc = correlation_matrix({h, L});
        const MajoranaRep rep(L);
        const auto s = block_density_matrix(tc, rep);
        for (int m = 0; m < 2 * L; ++m) {
            for (int n = 0; n < 2 * L; ++n) {
                const Complex c = (s.rho.matrix() * rep.op(m) * rep.op(n)).trace();
                const Complex want = Complex(m == n ? 1.0 : 0.0, tc.B.matrix()(m, n));
                CHECK(std::abs(c - want) < 1e-12);
            }
        }
    }
}

TEST_CASE("spectrum factorization and the entropy fast path") {
    for (double h : {0.0, 0.25, 0.5, 0.75, 0.95}) {
        for (int L = 1; L <= 6; ++L) {
            const auto s = block_density_matrix(correlation_matrix({h, L}), MajoranaRep(L));
            const auto fact = mode_spectrum(s.modes);
            CHECK(max_diff(sorted_eigenvalues(s.rho), fact) <= 1e-10);
            for (double nu : s.modes.nu) {
                CHECK(nu >= 0.0);
                CHECK(nu <= 1.0 + 1e-10);
            }
            const auto stats = entropies(fact, 2);
            CHECK(std::abs(stats.von_neumann - mode_entropy(s.modes.nu)) <= 1e-10);
        }
    }
}

TEST_CASE("block state equals the exact partial trace of a finite chain") {
    for (double h : {0.3, 0.5}) {
        const auto ed = oracle::xx_open_chain_block(10, h, 3);
        REQUIRE(ed.gap > 1e-6);
        const auto s = block_density_matrix(AntisymmetricMatrix(ed.B), MajoranaRep(3));
        CHECK(max_abs(ComplexMatrix(s.rho.matrix() - ed.rho)) < 1e-8);
    }
}

TEST_CASE("xx_fidelity_spectrum examples") {
    const auto same = xx_fidelity_spectrum(0.5, 0.5, 1);
    CHECK(same.lambda[0] == doctest::Approx(2.0 / 3.0));
    CHECK(same.lambda[1] == doctest::Approx(1.0 / 3.0));

    const auto cross = xx_fidelity_spectrum(0.0, 0.5, 1);
    CHECK(std::abs(cross.fidelity - (std::sqrt(1.0 / 3.0) + std::sqrt(1.0 / 6.0))) < 1e-12);
    CHECK(cross.fidelity == doctest::Approx(0.98560).epsilon(1e-5));

    // dense second route: sqrt(sqrt(r1) r2 sqrt(r1)) from explicit matrices
    const MajoranaRep rep(3);
    const auto r1 = block_density_matrix(correlation_matrix({0.5, 3}), rep).rho.matrix();
    const auto r2 = block_density_matrix(correlation_matrix({0.9, 3}), rep).rho.matrix();
    const ComplexMatrix root = psd_sqrt(r1);
    const ComplexMatrix inner = root * r2 * root;
    const auto e = sym_eig(ComplexMatrix(psd_sqrt(ComplexMatrix((inner + inner.adjoint()) / 2.0))));
    std::vector<double> dense(e.values.data(), e.values.data() + 8);
    std::sort(dense.begin(), dense.end(), std::greater<>());
    const auto lib = xx_fidelity_spectrum(0.5, 0.9, 3);
    REQUIRE(lib.lambda.size() == 8);
    CHECK(max_diff(lib.lambda, dense) < 1e-7);

    for (int L = 1; L <= 5; ++L) {
        const auto self = xx_fidelity_spectrum(0.7, 0.7, L);
        const auto modes = antisym_canonical(correlation_matrix({0.7, L}).B);
        CHECK(max_diff(self.lambda, mode_spectrum(modes)) < 1e-10);
    }
}

TEST_CASE("fidelity spectrum does not depend on the canonical gauge") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (int L : {2, 3, 4}) {
        const MajoranaRep rep(L);
        const auto base = antisym_canonical(correlation_matrix({0.6, L}).B);
        const auto other = block_density_matrix(correlation_matrix({0.8, L}), rep);
        const auto ref = fidelity_op_spectrum(gaussian_state(base, rep), other.rho);

        for (int trial = 0; trial < 5; ++trial) {
            // rotate inside every block and shuffle the block order
            std::vector<int> order(static_cast<std::size_t>(L));
            for (int l = 0; l < L; ++l) order[static_cast<std::size_t>(l)] = l;
            std::shuffle(order.begin(), order.end(), rng);
            CanonicalModes g;
            g.V = RealMatrix::Zero(2 * L, 2 * L);
            for (int l = 0; l < L; ++l) {
                const int src = order[static_cast<std::size_t>(l)];
                g.nu.push_back(base.nu[static_cast<std::size_t>(src)]);
                g.V.middleRows(2 * l, 2) = rotation(angle(rng)) * base.V.middleRows(2 * src, 2);
            }
            const auto rho = gaussian_state(g, rep);
            CHECK(max_abs(ComplexMatrix(rho.matrix() - gaussian_state(base, rep).matrix())) < 1e-12);
            CHECK(max_diff(fidelity_op_spectrum(rho, other.rho), ref) < 1e-9);
        }
    }

    // exactly degenerate modes: mixing the two blocks is a symmetry
    std::normal_distribution<double> normal;
    RealMatrix Q(4, 4);
    for (Eigen::Index i = 0; i < Q.size(); ++i) Q(i) = normal(rng);
    const RealMatrix O = Eigen::HouseholderQR<RealMatrix>(Q).householderQ();
    const RealMatrix b = 0.8 * O * canonical_block({0.5, 0.5}) * O.transpose();
    const MajoranaRep rep(2);
    const auto modes = antisym_canonical(AntisymmetricMatrix(b));
    const auto other = gaussian_state(antisym_canonical(AntisymmetricMatrix(O * canonical_block({0.7, 0.1}) * O.transpose())), rep);
    const auto ref = fidelity_op_spectrum(gaussian_state(modes, rep), other);
    for (int trial = 0; trial < 5; ++trial) {
        const double t = angle(rng);
        RealMatrix R = RealMatrix::Zero(4, 4);
        R.block(0, 0, 2, 2) = std::cos(t) * RealMatrix::Identity(2, 2);
        R.block(0, 2, 2, 2) = -std::sin(t) * RealMatrix::Identity(2, 2);
        R.block(2, 0, 2, 2) = std::sin(t) * RealMatrix::Identity(2, 2);
        R.block(2, 2, 2, 2) = std::cos(t) * RealMatrix::Identity(2, 2);
        CanonicalModes g{modes.nu, R * modes.V};
        CHECK(max_diff(fidelity_op_spectrum(gaussian_state(g, rep), other), ref) < 1e-9);
    }
}

TEST_CASE("fidelity spectrum approaches the entanglement spectrum") {
    for (int L : {2, 4}) {
        const auto ent = xx_fidelity_spectrum(0.4, 0.4, L).lambda;
        double previous = 1.0;
        for (double d : {1e-2, 1e-3, 1e-4}) {
            const double diff = max_diff(xx_fidelity_spectrum(0.4, 0.4 + d, L).lambda, ent);
            CHECK(diff < previous);
            previous = diff;
        }
        CHECK(previous < 1e-3);
    }
}

TEST_CASE("entropies drop close to the critical field") {
    const auto low = entropies(xx_fidelity_spectrum(0.6, 0.6, 6).lambda, 5);
    const auto high = entropies(xx_fidelity_spectrum(0.99, 0.99, 6).lambda, 5);
    for (int n = 2; n <= 5; ++n) {
        CHECK(high.renyi[static_cast<std::size_t>(n - 1)] < low.renyi[static_cast<std::size_t>(n - 1)]);
    }
}

TEST_CASE("xx_sweep tables") {
    SweepSpec ent;
    ent.kind = SweepKind::entanglement;
    ent.L = {6};
    ent.h_grid = {0.6, 0.7, 0.8, 0.9, 0.95, 0.99};
    const auto t = xx_sweep(ent);
    CHECK(t.size() == 6);
    CHECK(t.columns().size() == 2 + 64 + 64 + 5 + 5);
    CHECK(t.columns()[2] == "lambda_1");
    CHECK(t.columns().back() == "S_5");
    for (std::size_t r = 0; r < t.size(); ++r) CHECK(t.at(r, "M_1") == doctest::Approx(1.0).epsilon(1e-12));

    SweepSpec fid;
    fid.kind = SweepKind::fidelity;
    fid.L = {3};
    for (double h2 : {0.5, 0.6, 0.7, 0.8, 0.9}) fid.pairs.emplace_back(0.5, h2);
    const auto f = xx_sweep(fid);
    CHECK(f.size() == 5);
    CHECK(f.at(0, "fidelity") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.at(0, "M_1") == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t r = 1; r < f.size(); ++r) CHECK(f.at(r, "fidelity") < f.at(r - 1, "fidelity"));

    SweepSpec chi;
    chi.kind = SweepKind::susceptibility;
    chi.L = {1, 2};
    chi.h_grid = {0.5, 0.95};
    const auto c = xx_sweep(chi);
    CHECK(c.size() == 4);
    CHECK(c.at(0, "L") == 1.0);
    CHECK(c.at(2, "L") == 2.0);
    CHECK(c.at(1, "chi_abs") > c.at(0, "chi_abs"));
    CHECK(c.at(3, "chi_abs") > c.at(2, "chi_abs"));
    CHECK(c.at(0, "chi_F") <= 0.0);
}

TEST_CASE("xx_sweep validation happens before any work") {
    SweepSpec bad;
    bad.kind = SweepKind::entanglement;
    bad.L = {2, 3};
    bad.h_grid = {0.5};
    CHECK_THROWS_AS(xx_sweep(bad), ContractError);
    bad.L = {2};
    bad.h_grid = {0.5, 1.2};
    CHECK_THROWS_AS(xx_sweep(bad), ContractError);

    SweepSpec chi;
    chi.kind = SweepKind::susceptibility;
    chi.L = {1};
    chi.h_grid = {0.995};
    CHECK_THROWS_AS(xx_sweep(chi), ContractError);
}
