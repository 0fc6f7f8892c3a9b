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

#include "fidspec/bcs_thermal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace fidspec::bcs {

namespace {

// sum'_k tanh(E/2T)/(2E) / N for a given gap
double gap_kernel(const std::vector<double> &shell, double delta, double T, double norm) {
    double sum = 0.0;
    for (double eps : shell) {
        const double E = std::hypot(eps, delta);
        sum += E > 0.0 ? std::tanh(E / (2.0 * T)) / (2.0 * E) : 1.0 / (4.0 * T);
    }
    return sum / norm;
}

double safe_ratio(double x, double E) { return E > 0.0 ? x / E : 0.0; }

}  // namespace

double dispersion(double kx, double ky, double t) { return -2.0 * t * (std::cos(kx) + std::cos(ky)); }

double grid_momentum(int j, int n) {
    return -std::numbers::pi + 2.0 * std::numbers::pi * j / n;
}

GapSolution gap_solve(double T, double v, double cutoff, int grid_n, double mu) {
    if (!(T > 0.0)) throw ContractError("gap_solve: temperature must be positive");
    if (!(v > 0.0)) throw ContractError("gap_solve: coupling v must be positive");
    if (!(cutoff > 0.0)) throw ContractError("gap_solve: cutoff must be positive");
    if (grid_n < 2) throw ContractError("gap_solve: grid_n must be >= 2");

    std::vector<double> shell;
    for (int iy = 0; iy < grid_n; ++iy) {
        for (int ix = 0; ix < grid_n; ++ix) {
            const double eps =
                dispersion(grid_momentum(ix, grid_n), grid_momentum(iy, grid_n)) - mu;
            if (std::abs(eps) < cutoff) shell.push_back(eps);
        }
    }
    const double norm = static_cast<double>(grid_n) * grid_n;
    // f(delta) = 1 - v K(delta) increases with delta
    auto f = [&](double delta) { return 1.0 - v * gap_kernel(shell, delta, T, norm); };

    double lo = 0.0;
    double hi = v;
    if (f(lo) >= 0.0 || f(hi) <= 0.0) return {0.0, true};
    for (int it = 0; it < 200 && hi - lo > 1e-14 * v; ++it) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return {0.5 * (lo + hi), false};
}

void validate(const BCSParams &p) {
    if (!(p.T > 0.0) || !std::isfinite(p.T)) throw ContractError("temperature T must be positive");
    if (p.grid_n < 2) throw ContractError("grid_n must be >= 2");
    if (!std::isfinite(p.mu)) throw ContractError("mu must be finite");
    if (p.self_consistent) {
        if (!(p.v > 0.0)) throw ContractError("self-consistent gap needs v > 0");
        if (!(p.cutoff > 0.0)) throw ContractError("self-consistent gap needs cutoff > 0");
    } else if (!(p.delta >= 0.0) || !std::isfinite(p.delta)) {
        throw ContractError("gap delta must be finite and non-negative");
    }
}

GapSolution resolve_gap(const BCSParams &p) {
    validate(p);
    if (p.self_consistent) return gap_solve(p.T, p.v, p.cutoff, p.grid_n, p.mu);
    return {p.delta, p.delta == 0.0};
}

KModeState k_mode_rho(double eps_bar, double delta, double T) {
    if (!(T > 0.0)) throw ContractError("k_mode_rho: temperature must be positive");
    RealMatrix h = RealMatrix::Zero(4, 4);
    h(0, 1) = h(1, 0) = -delta;
    h(1, 1) = 2.0 * eps_bar;
    h(2, 2) = h(3, 3) = eps_bar;
    const auto eig = sym_eig(h);
    const double ground = eig.values.minCoeff();
    RealVector weights(4);
    for (int i = 0; i < 4; ++i) weights(i) = std::exp(-(eig.values(i) - ground) / T);
    RealMatrix rho = eig.vectors * weights.asDiagonal() * eig.vectors.transpose();
    rho = (rho + rho.transpose()) / 2.0;
    rho /= rho.trace();
    return {eps_bar, delta, T, std::hypot(eps_bar, delta), DensityMatrix(rho)};
}

KFidelityResult k_fidelity(const KModeState &a, const KModeState &b) {
    const RealMatrix ra = a.rho.matrix().real();
    const RealMatrix rb = b.rho.matrix().real();
    const auto charge = block_fidelity_spectrum(ra.topLeftCorner(2, 2), rb.topLeftCorner(2, 2));
    KFidelityResult out;
    out.charge_hi = charge[0];
    out.charge_lo = charge[1];
    // spin block is proportional to the identity in both states
    out.spin = std::sqrt(std::max(ra(2, 2), 0.0) * std::max(rb(2, 2), 0.0));
    out.lambda = {out.charge_hi, out.charge_lo, out.spin, out.spin};
    std::sort(out.lambda.begin(), out.lambda.end(), std::greater<>());
    out.fidelity_k = out.lambda[0] + out.lambda[1] + out.lambda[2] + out.lambda[3];
    return out;
}

ClosedFormEta closed_form_eta(const ModeParams &a, const ModeParams &b) {
    const double Ea = std::hypot(a.eps_bar, a.delta);
    const double Eb = std::hypot(b.eps_bar, b.delta);
    const double xa = Ea / a.T;
    const double xb = Eb / b.T;
    const double cha = std::cosh(xa), sha = std::sinh(xa);
    const double chb = std::cosh(xb), shb = std::sinh(xb);
    const double overlap = safe_ratio(safe_ratio(a.delta * b.delta + a.eps_bar * b.eps_bar, Ea), Eb);
    const double ea = safe_ratio(a.eps_bar, Ea);
    const double eb = safe_ratio(b.eps_bar, Eb);
    const double da = safe_ratio(a.delta, Ea);
    const double db = safe_ratio(b.delta, Eb);

    ClosedFormEta c;
    const double common = cha * chb + sha * shb * overlap;
    const double odd = sha * chb * ea + shb * eb + (cha - 1.0) * shb * overlap * ea;
    c.alpha = common + odd;
    c.gamma = common - odd;
    c.beta = sha * chb * da + shb * db + (cha - 1.0) * shb * overlap * da;
    c.D = 2.0 * (1.0 + cha) * 2.0 * (1.0 + chb);
    const double disc =
        std::sqrt((c.alpha - c.gamma) * (c.alpha - c.gamma) + 4.0 * c.beta * c.beta);
    c.eta_plus = 0.5 * ((c.alpha + c.gamma) + disc);
    c.eta_minus = 0.5 * ((c.alpha + c.gamma) - disc);

    const auto numeric = k_fidelity(k_mode_rho(a.eps_bar, a.delta, a.T),
                                    k_mode_rho(b.eps_bar, b.delta, b.T));
    const double root_d = std::sqrt(c.D);
    const double sp = std::sqrt(std::max(c.eta_plus, 0.0)) / root_d;
    const double sm = std::sqrt(std::max(c.eta_minus, 0.0)) / root_d;
    c.deviation_sqrt = std::max(std::abs(std::max(sp, sm) - numeric.charge_hi),
                                std::abs(std::min(sp, sm) - numeric.charge_lo));
    const double pp = c.eta_plus / root_d;
    const double pm = c.eta_minus / root_d;
    c.deviation_plain = std::max(std::abs(std::max(pp, pm) - numeric.charge_hi),
                                 std::abs(std::min(pp, pm) - numeric.charge_lo));
    c.deviation_spin = std::abs(1.0 / root_d - numeric.spin);
    return c;
}

BrillouinMap brillouin_map(const BCSParams &pa, const BCSParams &pb) {
    validate(pa);
    validate(pb);
    if (pa.grid_n != pb.grid_n) {
        std::ostringstream msg;
        msg << "brillouin_map: grids differ (" << pa.grid_n << " vs " << pb.grid_n << ")";
        throw ContractError(msg.str());
    }
    BrillouinMap map;
    map.gap_a = resolve_gap(pa);
    map.gap_b = resolve_gap(pb);
    map.table = Table({"kx", "ky", "index", "lambda_charge_hi", "lambda_charge_lo",
                       "lambda_spin", "fidelity"});
    const int n = pa.grid_n;
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const double kx = grid_momentum(ix, n);
            const double ky = grid_momentum(iy, n);
            const double eps = dispersion(kx, ky);
            const ModeParams ma{eps - pa.mu, map.gap_a.delta, pa.T};
            const ModeParams mb{eps - pb.mu, map.gap_b.delta, pb.T};
            const auto r = k_fidelity(k_mode_rho(ma.eps_bar, ma.delta, ma.T),
                                      k_mode_rho(mb.eps_bar, mb.delta, mb.T));
            map.table.add_row({kx, ky, static_cast<double>(iy * n + ix), r.charge_hi,
                               r.charge_lo, r.spin, r.fidelity_k});
            map.log_fidelity += std::log(std::max(r.fidelity_k, 1e-300));

            const double xa = std::hypot(ma.eps_bar, ma.delta) / ma.T;
            const double xb = std::hypot(mb.eps_bar, mb.delta) / mb.T;
            if (xa < 300.0 && xb < 300.0) {
                const auto c = closed_form_eta(ma, mb);
                auto &s = map.comparator;
                ++s.evaluated;
                s.max_deviation_sqrt = std::max(s.max_deviation_sqrt, c.deviation_sqrt);
                s.max_deviation_plain = std::max(s.max_deviation_plain, c.deviation_plain);
                s.max_deviation_spin = std::max(s.max_deviation_spin, c.deviation_spin);
            }
        }
    }
    return map;
}

}  // namespace fidspec::bcs
