// Copyright 2026 The quench authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "quench/couplings.hpp"
#include "quench/rng.hpp"
#include "quench/state.hpp"

// Independent symmetric bit-flip errors at measurement time: each read-out
// bit flips with probability p. Analytically an n-site Pauli-string
// expectation scales by (1-2p)^n; for single-shot records the flips are
// sampled. The per-ion flip probability from off-resonant mode coupling is
// p_i = sum_m (eta_im * Omega / delta_m)^2 with eta_im = b_im sqrt(nu_R/nu_m)
// and delta_m = mu - nu_m.

namespace quench {

/// Symmetric readout bit-flip channel; either one probability for every
/// ion or a per-ion list.
struct BitFlipModel {
    double p = 0.0;
    std::vector<double> per_ion;  // optional; overrides p when non-empty
};

/// Per-ion flip probability of the off-resonant mode-coupling error.
inline std::vector<double> estimate_flip_probability(const ModeSpectrum& modes,
                                                     const DriveParams& drive) {
    check_mode_spectrum(modes);
    detail::check_off_resonant(modes, drive.beatnote);
    std::vector<double> p(modes.sites, 0.0);
    for (int i = 1; i <= modes.sites; ++i) {
        double sum = 0.0;
        for (int m = 1; m <= modes.sites; ++m) {
            const double nu = modes.freq[m - 1];
            const double eta = modes.participation(i, m) * std::sqrt(drive.recoil / nu);
            const double ratio = eta * drive.rabi / (drive.beatnote - nu);
            sum += ratio * ratio;
        }
        p[i - 1] = sum;
    }
    return p;
}

/// Expectation of an n-site Pauli string after the channel: value*(1-2p)^n.
inline double degrade_correlator(double value, int sites_involved, double p) {
    if (!(p >= 0.0 && p <= 0.5))
        throw std::invalid_argument("degrade_correlator: p must lie in [0, 1/2]");
    if (sites_involved < 0) throw std::invalid_argument("degrade_correlator: negative site count");
    return value * std::pow(1.0 - 2.0 * p, sites_involved);
}

/// Computational-basis samples of the state measured along `axis`, each bit
/// then flipped independently with probability p. Bit (i-1) of a word is
/// site i; bit value 1 means spin-up along the measured axis. Identical
/// seeds give bit-identical records: the seed feeds a std::mt19937_64 and
/// each shot draws one uniform for the basis sample followed by one uniform
/// per site (site 1 first) for the flips.
inline std::vector<std::uint64_t> sample_shots(const StateVector& psi, Axis axis, int shots,
                                               double p, std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("sample_shots: need at least one shot");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sample_shots: p must lie in [0, 1]");

    const StateVector measured = (axis == Axis::Z) ? psi : global_rotation(psi, axis, Axis::Z);
    std::vector<double> cdf(measured.dim());
    double acc = 0.0;
    for (std::size_t b = 0; b < measured.dim(); ++b) {
        acc += std::norm(measured.amp[b]);
        cdf[b] = acc;
    }
    cdf.back() = 1.0;  // guard against roundoff at the top

    std::mt19937_64 rng(splitmix64(seed));
    std::vector<std::uint64_t> words;
    words.reserve(shots);
    for (int s = 0; s < shots; ++s) {
        const double u = uniform_double(rng);
        const std::size_t b =
            std::lower_bound(cdf.begin(), cdf.end(), u, [](double c, double x) { return c <= x; }) -
            cdf.begin();
        std::uint64_t word = static_cast<std::uint64_t>(b);
        for (int site = 1; site <= psi.sites; ++site)
            if (uniform_double(rng) < p) word ^= site_bit(site);
        words.push_back(word);
    }
    return words;
}

/// Wall count of a single outcome word: bonds whose two bits differ.
inline int shot_wall_count(std::uint64_t word, int sites) {
    int walls = 0;
    for (int j = 1; j < sites; ++j)
        if (((word >> (j - 1)) & 1) != ((word >> j) & 1)) ++walls;
    return walls;
}

/// One outcome as '0'/'1' characters, ion 1 leftmost.
inline std::string format_shot(std::uint64_t word, int sites) {
    std::string s(sites, '0');
    for (int i = 1; i <= sites; ++i)
        if (word & site_bit(i)) s[i - 1] = '1';
    return s;
}

/// One word per line.
inline void write_shots(std::ostream& out, const std::vector<std::uint64_t>& words, int sites) {
    for (std::uint64_t w : words) out << format_shot(w, sites) << '\n';
}

}  // namespace quench
