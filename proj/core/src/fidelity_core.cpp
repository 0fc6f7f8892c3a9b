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

#include "fidspec/fidelity_core.hpp"

#include "fidspec/spectral_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace fidspec {

namespace {

void require_non_negative(std::span<const double> lambda, const char *op) {
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (!(lambda[i] >= 0.0)) {
            std::ostringstream msg;
            msg << op << ": eigenvalue " << i << " is negative (" << lambda[i] << ")";
            throw ContractError(msg.str());
        }
    }
}

void require_moment_order(int n_max, const char *op) {
    if (n_max < 1 || n_max > kMaxMoment) {
        std::ostringstream msg;
        msg << op << ": n_max must lie in [1, " << kMaxMoment << "], got " << n_max;
        throw ContractError(msg.str());
    }
}

std::vector<double> sorted_descending(std::span<const double> lambda) {
    std::vector<double> v(lambda.begin(), lambda.end());
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

}  // namespace

std::vector<double> log_spectrum(std::span<const double> lambda) {
    require_non_negative(lambda, "log_spectrum");
    std::vector<double> out;
    out.reserve(lambda.size());
    for (double x : lambda) out.push_back(-std::log(std::max(x, kLambdaFloor)));
    return out;
}

SpectrumResult make_spectrum_result(std::vector<double> lambda) {
    require_non_negative(lambda, "make_spectrum_result");
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    SpectrumResult r;
    r.log_spectrum = log_spectrum(lambda);
    r.fidelity = 0.0;
    for (double x : lambda) {
        r.fidelity += x;
        if (x <= kLambdaFloor) ++r.saturated;
    }
    r.lambda = std::move(lambda);
    return r;
}

std::vector<double> moments(std::span<const double> lambda, int n_max) {
    require_moment_order(n_max, "moments");
    require_non_negative(lambda, "moments");
    const auto sorted = sorted_descending(lambda);
    std::vector<double> m(static_cast<std::size_t>(n_max), 0.0);
    for (int n = 1; n <= n_max; ++n) {
        double sum = 0.0;
        for (double x : sorted) sum += n == 1 ? x : std::pow(x, n);
        m[static_cast<std::size_t>(n - 1)] = sum;
    }
    return m;
}

SpectrumStats entropies(std::span<const double> lambda, int n_max) {
    SpectrumStats s;
    s.moments = moments(lambda, n_max);
    const auto sorted = sorted_descending(lambda);
    double vn = 0.0;
    for (double x : sorted) {
        if (x > kLambdaFloor) vn -= x * std::log(x);
    }
    s.von_neumann = vn;
    s.renyi.resize(static_cast<std::size_t>(n_max));
    s.renyi[0] = vn;
    for (int n = 2; n <= n_max; ++n) {
        const double mn = std::max(s.moments[static_cast<std::size_t>(n - 1)], kLambdaFloor);
        s.renyi[static_cast<std::size_t>(n - 1)] = std::log(mn) / (1.0 - n);
    }
    return s;
}

SusceptibilityPoint susceptibility(std::span<const double> lambda_minus,
                                   std::span<const double> lambda_zero,
                                   std::span<const double> lambda_plus, double delta,
                                   double h) {
    if (lambda_minus.size() != lambda_zero.size() || lambda_plus.size() != lambda_zero.size()) {
        std::ostringstream msg;
        msg << "susceptibility: spectrum lengths differ (" << lambda_minus.size() << ", "
            << lambda_zero.size() << ", " << lambda_plus.size() << ")";
        throw ContractError(msg.str());
    }
    if (!(delta > 0.0)) throw ContractError("susceptibility: delta must be positive");

    // rank matching: each spectrum is sorted on its own
    const auto m = sorted_descending(lambda_minus);
    const auto z = sorted_descending(lambda_zero);
    const auto p = sorted_descending(lambda_plus);

    SusceptibilityPoint out;
    out.h = h;
    out.delta = delta;
    out.chi_per_eigenvalue.resize(z.size());
    const double inv = 1.0 / (delta * delta);
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double chi = (p[i] - 2.0 * z[i] + m[i]) * inv;
        out.chi_per_eigenvalue[i] = chi;
        out.chi_total += chi;
    }
    out.chi_abs = std::abs(out.chi_total);
    return out;
}

}  // namespace fidspec
