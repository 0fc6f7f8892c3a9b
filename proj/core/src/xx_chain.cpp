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

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace fidspec::xx {

namespace {

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

struct Pauli {
    ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    ComplexMatrix x{{0.0, 1.0}, {1.0, 0.0}};
    ComplexMatrix y{{0.0, Complex(0.0, -1.0)}, {Complex(0.0, 1.0), 0.0}};
    ComplexMatrix z{{1.0, 0.0}, {0.0, -1.0}};
};

void require_field(double h, const char *what) {
    if (!(h >= 0.0 && h < 1.0)) {
        std::ostringstream msg;
        msg << what << " = " << h << " outside [0, 1)";
        throw ContractError(msg.str());
    }
}

void require_block(int L) {
    if (L < 1 || L > kMaxBlock) {
        std::ostringstream msg;
        msg << "block length L = " << L << " outside [1, " << kMaxBlock << "]";
        throw ContractError(msg.str());
    }
}

void append(std::vector<double> &row, std::span<const double> values) {
    row.insert(row.end(), values.begin(), values.end());
}

std::vector<double> spectrum_row_tail(const SpectrumResult &r, int moments_max) {
    const auto stats = entropies(r.lambda, moments_max);
    std::vector<double> tail;
    append(tail, r.lambda);
    append(tail, r.log_spectrum);
    append(tail, stats.moments);
    append(tail, stats.renyi);
    return tail;
}

}  // namespace

void validate(const ChainParams &p) {
    require_field(p.h, "transverse field h");
    require_block(p.L);
}

ToeplitzCorrelation correlation_matrix(const ChainParams &p) {
    validate(p);
    const double phi = std::acos(p.h);
    std::vector<double> g(static_cast<std::size_t>(p.L));
    g[0] = 2.0 * phi / std::numbers::pi - 1.0;
    for (int l = 1; l < p.L; ++l) {
        g[static_cast<std::size_t>(l)] = 2.0 / (l * std::numbers::pi) * std::sin(l * phi);
    }
    RealMatrix G(p.L, p.L);
    for (int i = 0; i < p.L; ++i) {
        for (int j = 0; j < p.L; ++j) G(i, j) = g[static_cast<std::size_t>(std::abs(i - j))];
    }
    RealMatrix B = RealMatrix::Zero(2 * p.L, 2 * p.L);
    for (int i = 0; i < p.L; ++i) {
        for (int j = 0; j < p.L; ++j) {
            B(2 * i, 2 * j + 1) = G(i, j);
            B(2 * i + 1, 2 * j) = -G(i, j);
        }
    }
    return {std::move(g), std::move(G), AntisymmetricMatrix(std::move(B))};
}

MajoranaRep::MajoranaRep(int L) : sites_(L) {
    require_block(L);
    const Pauli s;
    ops_.reserve(static_cast<std::size_t>(2 * L));
    for (int l = 0; l < L; ++l) {
        for (const ComplexMatrix *local : {&s.x, &s.y}) {
            ComplexMatrix op = ComplexMatrix::Identity(1, 1);
            for (int n = 0; n < L; ++n) {
                const ComplexMatrix &factor = n < l ? s.z : (n == l ? *local : s.id);
                op = kron(op, factor);
            }
            ops_.push_back(std::move(op));
        }
    }
}

MajoranaRep majorana_reps(int L) { return MajoranaRep(L); }

DensityMatrix gaussian_state(const CanonicalModes &modes, const MajoranaRep &rep) {
    const auto n = static_cast<Eigen::Index>(rep.ops().size());
    if (modes.V.rows() != n || modes.V.cols() != n ||
        static_cast<Eigen::Index>(2 * modes.nu.size()) != n) {
        throw ContractError("gaussian_state: canonical modes do not match the block length");
    }
    const Eigen::Index dim = rep.dim();
    std::vector<ComplexMatrix> d(static_cast<std::size_t>(n), ComplexMatrix::Zero(dim, dim));
    for (Eigen::Index m = 0; m < n; ++m) {
        auto &dm = d[static_cast<std::size_t>(m)];
        for (Eigen::Index k = 0; k < n; ++k) {
            const double v = modes.V(m, k);
            if (v != 0.0) dm += v * rep.op(static_cast<std::size_t>(k));
        }
    }
    const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
    ComplexMatrix rho = id;
    for (std::size_t l = 0; l < modes.nu.size(); ++l) {
        const ComplexMatrix pair = d[2 * l] * d[2 * l + 1];
        const ComplexMatrix factor = 0.5 * (id - Complex(0.0, modes.nu[l]) * pair);
        rho = (rho * factor).eval();
    }
    rho = (rho + rho.adjoint()) / 2.0;
    rho /= rho.trace().real();
    return DensityMatrix(std::move(rho));
}

BlockState block_density_matrix(const AntisymmetricMatrix &b, const MajoranaRep &rep) {
    if (b.modes() != rep.sites()) {
        std::ostringstream msg;
        msg << "block_density_matrix: correlation matrix has " << b.modes()
            << " modes but the Majorana representation has " << rep.sites() << " sites";
        throw ContractError(msg.str());
    }
    auto modes = antisym_canonical(b);
    auto rho = gaussian_state(modes, rep);
    return {std::move(rho), std::move(modes)};
}

BlockState block_density_matrix(const ToeplitzCorrelation &tc, const MajoranaRep &rep) {
    return block_density_matrix(tc.B, rep);
}

std::vector<double> mode_spectrum(std::span<const double> nu) {
    if (nu.size() > static_cast<std::size_t>(kMaxBlock)) {
        throw ContractError("mode_spectrum: more than 8 modes");
    }
    std::vector<double> out{1.0};
    for (double v : nu) {
        std::vector<double> next;
        next.reserve(out.size() * 2);
        for (double x : out) {
            next.push_back(x * (1.0 + v) / 2.0);
            next.push_back(x * (1.0 - v) / 2.0);
        }
        out = std::move(next);
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

double mode_entropy(std::span<const double> nu) {
    double s = 0.0;
    for (double v : nu) {
        for (double p : {(1.0 + v) / 2.0, (1.0 - v) / 2.0}) {
            if (p > kLambdaFloor) s -= p * std::log(p);
        }
    }
    return s;
}

SpectrumResult xx_fidelity_spectrum(double h1, double h2, const MajoranaRep &rep) {
    require_field(h1, "h1");
    require_field(h2, "h2");
    const auto s1 = block_density_matrix(correlation_matrix({h1, rep.sites()}), rep);
    if (h1 == h2) return make_spectrum_result(fidelity_op_spectrum(s1.rho, s1.rho));
    const auto s2 = block_density_matrix(correlation_matrix({h2, rep.sites()}), rep);
    return make_spectrum_result(fidelity_op_spectrum(s1.rho, s2.rho));
}

SpectrumResult xx_fidelity_spectrum(double h1, double h2, int L) {
    return xx_fidelity_spectrum(h1, h2, MajoranaRep(L));
}

void validate(const SweepSpec &spec) {
    if (spec.L.empty()) throw ContractError("sweep: no block length given");
    for (int L : spec.L) require_block(L);
    if (spec.moments_max < 1 || spec.moments_max > kMaxMoment) {
        throw ContractError("sweep: moments_max must lie in [1, 16]");
    }
    switch (spec.kind) {
    case SweepKind::entanglement:
        if (spec.L.size() != 1) throw ContractError("entanglement sweep takes a single L");
        if (spec.h_grid.empty()) throw ContractError("entanglement sweep: empty h grid");
        for (double h : spec.h_grid) require_field(h, "h");
        break;
    case SweepKind::fidelity:
        if (spec.L.size() != 1) throw ContractError("fidelity sweep takes a single L");
        if (spec.pairs.empty()) throw ContractError("fidelity sweep: no (h1, h2) pairs");
        for (const auto &[h1, h2] : spec.pairs) {
            require_field(h1, "h1");
            require_field(h2, "h2");
        }
        break;
    case SweepKind::susceptibility:
        if (!(spec.delta_h > 0.0)) throw ContractError("susceptibility sweep: delta_h <= 0");
        if (spec.h_grid.empty()) throw ContractError("susceptibility sweep: empty h grid");
        for (double h : spec.h_grid) {
            require_field(h, "h");
            require_field(h - spec.delta_h, "h - delta_h");
            require_field(h + spec.delta_h, "h + delta_h");
        }
        break;
    }
}

std::vector<std::string> sweep_columns(const SweepSpec &spec) {
    std::vector<std::string> cols;
    if (spec.kind == SweepKind::susceptibility) {
        return {"h", "L", "delta_h", "fidelity_minus", "fidelity_plus", "chi_F", "chi_abs"};
    }
    if (spec.kind == SweepKind::entanglement) {
        cols = {"h", "L"};
    } else {
        cols = {"h1", "h2", "L", "fidelity"};
    }
    const int L = spec.L.empty() ? 1 : spec.L.front();
    const int n = 1 << L;
    for (int i = 1; i <= n; ++i) cols.push_back("lambda_" + std::to_string(i));
    for (int i = 1; i <= n; ++i) cols.push_back("neglog_" + std::to_string(i));
    for (int k = 1; k <= spec.moments_max; ++k) cols.push_back("M_" + std::to_string(k));
    for (int k = 1; k <= spec.moments_max; ++k) cols.push_back("S_" + std::to_string(k));
    return cols;
}

Table xx_sweep(const SweepSpec &spec) {
    validate(spec);
    Table table(sweep_columns(spec));
    switch (spec.kind) {
    case SweepKind::entanglement: {
        const int L = spec.L.front();
        const MajoranaRep rep(L);
        for (double h : spec.h_grid) {
            std::vector<double> row{h, static_cast<double>(L)};
            append(row, spectrum_row_tail(xx_fidelity_spectrum(h, h, rep), spec.moments_max));
            table.add_row(std::move(row));
        }
        break;
    }
    case SweepKind::fidelity: {
        const int L = spec.L.front();
        const MajoranaRep rep(L);
        for (const auto &[h1, h2] : spec.pairs) {
            const auto r = xx_fidelity_spectrum(h1, h2, rep);
            std::vector<double> row{h1, h2, static_cast<double>(L), r.fidelity};
            append(row, spectrum_row_tail(r, spec.moments_max));
            table.add_row(std::move(row));
        }
        break;
    }
    case SweepKind::susceptibility:
        for (int L : spec.L) {
            const MajoranaRep rep(L);
            for (double h : spec.h_grid) {
                const auto minus = xx_fidelity_spectrum(h, h - spec.delta_h, rep);
                const auto zero = xx_fidelity_spectrum(h, h, rep);
                const auto plus = xx_fidelity_spectrum(h, h + spec.delta_h, rep);
                const auto chi =
                    susceptibility(minus.lambda, zero.lambda, plus.lambda, spec.delta_h, h);
                table.add_row({h, static_cast<double>(L), spec.delta_h, minus.fidelity,
                               plus.fidelity, chi.chi_total, chi.chi_abs});
            }
        }
        break;
    }
    return table;
}

}  // namespace fidspec::xx
