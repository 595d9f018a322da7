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
#include <complex>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "quench/errors.hpp"

// Basis conventions, frozen for the whole library:
//
//   * Sites are numbered 1..L.
//   * A basis state of L spins is a computational-basis index
//     b in [0, 2^L); bit (i-1) of b belongs to site i, so site 1 is the
//     least significant bit.
//   * Bit value 1 means the site is spin-up along z, bit value 0 spin-down.
//
// Every array of amplitudes in this library is ordered by that index.
// Global phase is never part of any contract.

namespace quench {

using Complex = std::complex<double>;

/// Measurement / polarization axis of a single-site Pauli operator.
enum class Axis { X, Y, Z };

inline char axis_label(Axis a) {
    switch (a) {
        case Axis::X: return 'x';
        case Axis::Y: return 'y';
        case Axis::Z: return 'z';
    }
    return '?';
}

/// Exact state vectors are kept to at most this many sites.
inline constexpr int kMaxSites = 24;

/// Pure state of L spins: 2^L complex amplitudes in the basis order above.
/// Unit norm is an invariant of everything this library returns.
struct StateVector {
    int sites = 0;
    std::vector<Complex> amp;

    StateVector() = default;
    explicit StateVector(int n_sites) : sites(n_sites) {
        if (n_sites < 1) throw std::invalid_argument("StateVector: need at least one site");
        if (n_sites > kMaxSites)
            throw capability_error("StateVector: limited to " + std::to_string(kMaxSites) + " sites");
        amp.assign(std::size_t{1} << n_sites, Complex{0.0, 0.0});
    }

    std::size_t dim() const { return amp.size(); }

    double norm() const {
        double s = 0.0;
        for (const Complex& a : amp) s += std::norm(a);
        return std::sqrt(s);
    }
};

inline void check_site(const StateVector& psi, int site) {
    if (site < 1 || site > psi.sites)
        throw std::out_of_range("site index " + std::to_string(site) + " outside 1.." +
                                std::to_string(psi.sites));
}

inline std::uint64_t site_bit(int site) { return std::uint64_t{1} << (site - 1); }

/// <a|b>.
inline Complex inner_product(const StateVector& a, const StateVector& b) {
    if (a.sites != b.sites) throw std::invalid_argument("inner_product: size mismatch");
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < a.amp.size(); ++i) s += std::conj(a.amp[i]) * b.amp[i];
    return s;
}

/// |<a|b>|^2 — phase-insensitive overlap.
inline double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(inner_product(a, b));
}

namespace detail {

// Single-site eigenvector of sigma^axis with the given eigenvalue, as the
// (down, up) component pair in the z basis.
inline void single_spin_eigenstate(Axis axis, int sign, Complex& down, Complex& up) {
    const double r = 1.0 / std::sqrt(2.0);
    switch (axis) {
        case Axis::Z:
            down = (sign > 0) ? 0.0 : 1.0;
            up = (sign > 0) ? 1.0 : 0.0;
            break;
        case Axis::X:
            down = r;
            up = sign * r;
            break;
        case Axis::Y:
            down = r;
            up = Complex{0.0, -1.0} * (sign * r);
            break;
    }
}

// Applies a 2x2 unitary (row/column order: down, up) to one site of the
// register. u[r][c] with r,c in {down=0, up=1}.
inline void apply_single_site(StateVector& psi, int site, const Complex u[2][2]) {
    const std::uint64_t mask = site_bit(site);
    const std::size_t n = psi.dim();
    for (std::size_t b = 0; b < n; ++b) {
        if (b & mask) continue;  // visit each (down, up) pair once
        const std::size_t b1 = b | mask;
        const Complex a0 = psi.amp[b];
        const Complex a1 = psi.amp[b1];
        psi.amp[b] = u[0][0] * a0 + u[0][1] * a1;
        psi.amp[b1] = u[1][0] * a0 + u[1][1] * a1;
    }
}

}  // namespace detail

/// Tensor product of single-spin eigenstates of sigma^axis with eigenvalue
/// `sign`; every site listed in `flips` carries eigenvalue -sign instead.
inline StateVector build_product_state(int sites, Axis axis, int sign,
                                       const std::set<int>& flips = {}) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
    StateVector psi(sites);
    for (int f : flips)
        if (f < 1 || f > sites)
            throw std::out_of_range("flip site " + std::to_string(f) + " outside 1.." +
                                    std::to_string(sites));

    psi.amp.assign(psi.dim(), Complex{0.0, 0.0});
    psi.amp[0] = 1.0;
    std::size_t filled = 1;  // amplitudes of the first `i` sites occupy [0, filled)
    for (int i = 1; i <= sites; ++i) {
        Complex down, up;
        const int s = flips.count(i) ? -sign : sign;
        detail::single_spin_eigenstate(axis, s, down, up);
        for (std::size_t b = 0; b < filled; ++b) {
            const Complex a = psi.amp[b];
            psi.amp[b] = a * down;
            psi.amp[b + filled] = a * up;
        }
        filled <<= 1;
    }
    return psi;
}

/// sigma_site^axis |psi>. Norm preserving.
inline StateVector apply_pauli(const StateVector& psi, int site, Axis axis) {
    check_site(psi, site);
    const std::uint64_t mask = site_bit(site);
    StateVector out(psi.sites);
    const std::size_t n = psi.dim();
    switch (axis) {
        case Axis::X:
            for (std::size_t b = 0; b < n; ++b) out.amp[b] = psi.amp[b ^ mask];
            break;
        case Axis::Y:
            // In (down, up) ordering sigma^y = [[0, i], [-i, 0]].
            for (std::size_t b = 0; b < n; ++b)
                out.amp[b] = (b & mask) ? Complex{0.0, -1.0} * psi.amp[b ^ mask]
                                        : Complex{0.0, 1.0} * psi.amp[b ^ mask];
            break;
        case Axis::Z:
            for (std::size_t b = 0; b < n; ++b)
                out.amp[b] = (b & mask) ? psi.amp[b] : -psi.amp[b];
            break;
    }
    return out;
}

/// Same single-site unitary on every site, chosen so that sigma^from
/// eigenstates map to sigma^to eigenstates of equal eigenvalue.
inline StateVector global_rotation(const StateVector& psi, Axis from, Axis to) {
    if (from == to) throw std::invalid_argument("global_rotation: axes must differ");

    // U = V_to * V_from^dagger, columns of V_a being the (+1, -1) eigenvectors.
    Complex vf[2][2], vt[2][2];
    detail::single_spin_eigenstate(from, +1, vf[0][0], vf[1][0]);
    detail::single_spin_eigenstate(from, -1, vf[0][1], vf[1][1]);
    detail::single_spin_eigenstate(to, +1, vt[0][0], vt[1][0]);
    detail::single_spin_eigenstate(to, -1, vt[0][1], vt[1][1]);
    Complex u[2][2];
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            u[r][c] = vt[r][0] * std::conj(vf[c][0]) + vt[r][1] * std::conj(vf[c][1]);

    StateVector out = psi;
    for (int i = 1; i <= psi.sites; ++i) detail::apply_single_site(out, i, u);
    return out;
}

}  // namespace quench
