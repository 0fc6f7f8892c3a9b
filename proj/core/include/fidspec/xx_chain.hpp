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

/** @file xx_chain.hpp
 *  @brief Reduced density matrices of L contiguous spins of the infinite XX
 *  chain in a transverse field, and their entanglement / fidelity spectra.
 *
 *  Block states are Gaussian in the Jordan-Wigner Majorana operators
 *  c_{2l-1} = (prod_{n<l} sz_n) sx_l,  c_{2l} = (prod_{n<l} sz_n) sy_l,
 *  with <c_m c_n> = delta_mn + i B_mn. Both states of a fidelity evaluation
 *  are materialized in the same 2^L-dimensional spin basis.
 */

#ifndef FIDSPEC_XX_CHAIN_HPP
#define FIDSPEC_XX_CHAIN_HPP

#include "fidspec/fidelity_core.hpp"
#include "fidspec/spectral_kernel.hpp"
#include "fidspec/table.hpp"

#include <span>
#include <utility>
#include <vector>

namespace fidspec::xx {

inline constexpr int kMaxBlock = 8;

struct ChainParams {
    double h = 0.0;  ///< transverse field, 0 <= h < 1
    int L = 1;       ///< block length, 1..kMaxBlock
};

/// Throws ContractError if h is outside [0, 1) or L outside [1, kMaxBlock].
void validate(const ChainParams &p);

struct ToeplitzCorrelation {
    std::vector<double> g;  ///< g_0 .. g_{L-1}
    RealMatrix G;           ///< G(i, j) = g_{|i-j|}
    AntisymmetricMatrix B;  ///< G (x) J2
};

/// g_0 = 2 phi/pi - 1, g_l = 2 sin(l phi)/(l pi), phi = arccos(h).
ToeplitzCorrelation correlation_matrix(const ChainParams &p);

/// Explicit 2^L x 2^L Jordan-Wigner Majorana matrices; site 1 is the most
/// significant tensor factor. Entries are exactly 0, +-1 or +-i.
class MajoranaRep {
public:
    explicit MajoranaRep(int L);

    int sites() const noexcept { return sites_; }
    Eigen::Index dim() const noexcept { return Eigen::Index{1} << sites_; }
    /// Zero-based: op(0) = c_1, op(1) = c_2, ...
    const ComplexMatrix &op(std::size_t m) const { return ops_.at(m); }
    const std::vector<ComplexMatrix> &ops() const noexcept { return ops_; }

private:
    int sites_;
    std::vector<ComplexMatrix> ops_;
};

MajoranaRep majorana_reps(int L);

struct BlockState {
    DensityMatrix rho;
    CanonicalModes modes;
};

/// rho = prod_l (I - i nu_l d_{2l-1} d_{2l}) / 2 with d = V c, so that
/// <c_m c_n> = delta_mn + i B_mn holds for the returned state.
DensityMatrix gaussian_state(const CanonicalModes &modes, const MajoranaRep &rep);

/// Block state from an arbitrary Majorana correlation matrix B.
BlockState block_density_matrix(const AntisymmetricMatrix &b, const MajoranaRep &rep);
BlockState block_density_matrix(const ToeplitzCorrelation &tc, const MajoranaRep &rep);

/// All 2^L products prod_l (1 +- nu_l)/2, descending.
std::vector<double> mode_spectrum(std::span<const double> nu);
inline std::vector<double> mode_spectrum(const CanonicalModes &m) { return mode_spectrum(m.nu); }

/// Binary entropy sum over modes; equals S_1 of the block.
double mode_entropy(std::span<const double> nu);

/// Fidelity-operator spectrum between the L-blocks at fields h1 and h2.
SpectrumResult xx_fidelity_spectrum(double h1, double h2, int L);
SpectrumResult xx_fidelity_spectrum(double h1, double h2, const MajoranaRep &rep);

enum class SweepKind { entanglement, fidelity, susceptibility };

/// Evaluation grid for xx_sweep.
///  - entanglement: one row per h in h_grid (h1 = h2 = h), single L.
///  - fidelity: one row per (h1, h2) pair, single L.
///  - susceptibility: rows ordered by L then h; stencil h1 = h, h2 = h, h +- delta_h.
struct SweepSpec {
    SweepKind kind = SweepKind::entanglement;
    std::vector<int> L;
    std::vector<double> h_grid;
    std::vector<std::pair<double, double>> pairs;
    double delta_h = kDefaultDeltaH;
    int moments_max = 5;
};

/// Throws ContractError describing the first invalid entry.
void validate(const SweepSpec &spec);

/// Column schema of the table produced for `spec`.
std::vector<std::string> sweep_columns(const SweepSpec &spec);

/// Validates, then evaluates every grid point in order.
Table xx_sweep(const SweepSpec &spec);

}  // namespace fidspec::xx

#endif  // FIDSPEC_XX_CHAIN_HPP
