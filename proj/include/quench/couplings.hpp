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
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "quench/errors.hpp"

// Ising coupling matrices J_ij, either from an ideal power law or from a
// drive acting on the transverse motional modes of an ion chain. All
// frequencies in this library are angular (rad/s); plain frequencies in
// kHz appear only at file/config boundaries and are converted on ingestion.

namespace quench {

inline double kilohertz_to_angular(double f_khz) { return 2.0 * std::numbers::pi * 1e3 * f_khz; }
inline double angular_to_kilohertz(double w) { return w / (2.0 * std::numbers::pi * 1e3); }

/// Symmetric L x L coupling matrix with zero diagonal, angular-frequency
/// units. Entries are addressed with 1-based site indices.
struct CouplingMatrix {
    int sites = 0;
    std::vector<double> j;  // row-major L x L

    CouplingMatrix() = default;
    explicit CouplingMatrix(int n_sites) : sites(n_sites) {
        if (n_sites < 1) throw std::invalid_argument("CouplingMatrix: need at least one site");
        j.assign(static_cast<std::size_t>(n_sites) * n_sites, 0.0);
    }

    double at(int a, int b) const {
        check_pair(a, b);
        return j[idx(a, b)];
    }

    /// Sets J_ab = J_ba = value. The diagonal stays zero.
    void set(int a, int b, double value) {
        check_pair(a, b);
        if (a == b) throw std::invalid_argument("CouplingMatrix: diagonal is fixed to zero");
        j[idx(a, b)] = value;
        j[idx(b, a)] = value;
    }

    std::size_t idx(int a, int b) const {
        return static_cast<std::size_t>(a - 1) * sites + (b - 1);
    }

    void check_pair(int a, int b) const {
        if (a < 1 || a > sites || b < 1 || b > sites)
            throw std::out_of_range("CouplingMatrix: site index outside 1.." + std::to_string(sites));
    }
};

/// Throws unless the matrix is finite, symmetric, and zero on the diagonal.
inline void check_coupling_matrix(const CouplingMatrix& J) {
    for (int a = 1; a <= J.sites; ++a) {
        if (J.j[J.idx(a, a)] != 0.0)
            throw std::invalid_argument("coupling matrix has a nonzero diagonal entry");
        for (int b = 1; b <= J.sites; ++b) {
            const double v = J.j[J.idx(a, b)];
            if (!std::isfinite(v)) throw std::invalid_argument("coupling matrix has a non-finite entry");
            if (v != J.j[J.idx(b, a)]) throw std::invalid_argument("coupling matrix is not symmetric");
        }
    }
}

/// J_ab = J0 / |a-b|^alpha.
inline CouplingMatrix power_law_couplings(int sites, double j0, double alpha) {
    if (sites < 2) throw std::invalid_argument("power_law_couplings: need at least two sites");
    if (!(j0 > 0.0)) throw std::invalid_argument("power_law_couplings: J0 must be positive");
    if (!(alpha >= 0.0)) throw std::invalid_argument("power_law_couplings: alpha must be >= 0");
    CouplingMatrix J(sites);
    for (int a = 1; a <= sites; ++a)
        for (int b = a + 1; b <= sites; ++b)
            J.set(a, b, j0 / std::pow(static_cast<double>(b - a), alpha));
    return J;
}

/// Transverse motional modes of an ion chain: angular frequencies nu_m and
/// the participation matrix b_im (rows = ions, columns = modes). Both the
/// rows and the columns of b have unit Euclidean norm.
struct ModeSpectrum {
    int sites = 0;
    std::vector<double> freq;  // size L, angular
    std::vector<double> b;     // row-major L x L

    double participation(int ion, int mode) const {
        return b[static_cast<std::size_t>(ion - 1) * sites + (mode - 1)];
    }
};

inline void check_mode_spectrum(const ModeSpectrum& m) {
    if (m.sites < 1) throw std::invalid_argument("mode spectrum: need at least one ion");
    if (static_cast<int>(m.freq.size()) != m.sites)
        throw std::invalid_argument("mode spectrum: mode count must equal ion count");
    if (m.b.size() != static_cast<std::size_t>(m.sites) * m.sites)
        throw std::invalid_argument("mode spectrum: participation matrix must be L x L");
    for (double f : m.freq)
        if (!(f > 0.0) || !std::isfinite(f))
            throw std::invalid_argument("mode spectrum: mode frequencies must be positive");
    const double tol = 1e-10;
    for (int i = 1; i <= m.sites; ++i) {
        double row = 0.0, col = 0.0;
        for (int k = 1; k <= m.sites; ++k) {
            row += m.participation(i, k) * m.participation(i, k);
            col += m.participation(k, i) * m.participation(k, i);
        }
        if (std::abs(row - 1.0) > tol || std::abs(col - 1.0) > tol)
            throw std::invalid_argument("mode spectrum: participation rows/columns must be unit norm");
    }
}

/// Global drive parameters: Rabi frequency, beatnote detuning frequency,
/// and recoil frequency (all angular).
struct DriveParams {
    double rabi = 0.0;
    double beatnote = 0.0;
    double recoil = 0.0;
};

namespace detail {

inline void check_off_resonant(const ModeSpectrum& modes, double beatnote) {
    for (int m = 1; m <= modes.sites; ++m) {
        const double nu = modes.freq[m - 1];
        if (std::abs(beatnote - nu) <= 1e-12 * std::max(std::abs(beatnote), nu))
            throw resonance_error("beatnote is resonant with motional mode " + std::to_string(m), m);
    }
}

}  // namespace detail

/// Mode-sum coupling of a single drive axis:
/// J_ab = Omega^2 nu_R sum_m b_am b_bm / (mu^2 - nu_m^2).
inline CouplingMatrix ms_couplings(const ModeSpectrum& modes, const DriveParams& drive) {
    check_mode_spectrum(modes);
    detail::check_off_resonant(modes, drive.beatnote);
    CouplingMatrix J(modes.sites);
    const double mu2 = drive.beatnote * drive.beatnote;
    const double scale = drive.rabi * drive.rabi * drive.recoil;
    for (int a = 1; a <= modes.sites; ++a) {
        for (int b = a + 1; b <= modes.sites; ++b) {
            double sum = 0.0;
            for (int m = 1; m <= modes.sites; ++m) {
                const double nu = modes.freq[m - 1];
                sum += modes.participation(a, m) * modes.participation(b, m) / (mu2 - nu * nu);
            }
            J.set(a, b, scale * sum);
        }
    }
    return J;
}

/// Drive coupling to both sets of transverse modes: elementwise sum of the
/// per-axis mode sums.
inline CouplingMatrix ms_couplings_two_axes(const ModeSpectrum& modes_x, const ModeSpectrum& modes_y,
                                            const DriveParams& drive_x, const DriveParams& drive_y) {
    if (modes_x.sites != modes_y.sites)
        throw std::invalid_argument("ms_couplings_two_axes: mode spectra differ in ion count");
    CouplingMatrix jx = ms_couplings(modes_x, drive_x);
    const CouplingMatrix jy = ms_couplings(modes_y, drive_y);
    for (std::size_t i = 0; i < jx.j.size(); ++i) jx.j[i] += jy.j[i];
    return jx;
}

/// Effective power-law parameters of a coupling matrix: unweighted least
/// squares of log J_ab against log |a-b|, pooled over all pairs.
struct PowerLawFit {
    double j0 = 0.0;
    double alpha = 0.0;
};

inline PowerLawFit fit_power_law(const CouplingMatrix& J) {
    if (J.sites < 3) throw std::invalid_argument("fit_power_law: need at least three sites");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    double n = 0.0;
    for (int a = 1; a <= J.sites; ++a) {
        for (int b = a + 1; b <= J.sites; ++b) {
            const double v = J.at(a, b);
            if (!(v > 0.0)) throw std::domain_error("fit_power_law: all couplings must be positive");
            const double x = std::log(static_cast<double>(b - a));
            const double y = std::log(v);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            n += 1.0;
        }
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    return {std::exp(intercept), -slope};
}

/// Translationally invariant coupling vector J(d), d = 1..floor(L/2), read
/// from row `center` of the open-chain matrix. Defines the couplings of a
/// periodic chain of the same length.
inline std::vector<double> ring_embedding(const CouplingMatrix& J, int center) {
    if (center < 1 || center > J.sites)
        throw std::out_of_range("ring_embedding: center outside 1.." + std::to_string(J.sites));
    const int n_dist = J.sites / 2;
    std::vector<double> jring(n_dist);
    for (int d = 1; d <= n_dist; ++d) {
        if (center + d <= J.sites)
            jring[d - 1] = J.at(center, center + d);
        else if (center - d >= 1)
            jring[d - 1] = J.at(center - d, center);
        else
            throw std::out_of_range("ring_embedding: no pair at distance " + std::to_string(d) +
                                    " from center " + std::to_string(center));
    }
    return jring;
}

/// Default ring-embedding center: the center ion, ceil(L/2).
inline int ring_center(int sites) { return (sites + 1) / 2; }

/// Ring distance between 1-based sites on a periodic chain of length L.
inline int ring_distance(int a, int b, int sites) {
    int d = std::abs(a - b);
    return std::min(d, sites - d);
}

/// Materializes a ring coupling vector as a full (periodic) coupling matrix.
inline CouplingMatrix ring_coupling_matrix(const std::vector<double>& jring, int sites) {
    if (static_cast<int>(jring.size()) != sites / 2)
        throw std::invalid_argument("ring_coupling_matrix: expected floor(L/2) coupling distances");
    CouplingMatrix J(sites);
    for (int a = 1; a <= sites; ++a)
        for (int b = a + 1; b <= sites; ++b)
            J.set(a, b, jring[ring_distance(a, b, sites) - 1]);
    return J;
}

/// Reads a mode spectrum from a plain-text matrix: first row holds the L
/// mode frequencies in kHz, the next L rows hold the participation matrix
/// (rows = ions, columns = modes). Whitespace separated.
inline ModeSpectrum load_mode_spectrum(std::istream& in) {
    std::string line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<double> row;
        double v;
        while (ls >> v) row.push_back(v);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("mode file: empty");
    const int L = static_cast<int>(rows[0].size());
    if (static_cast<int>(rows.size()) != L + 1)
        throw std::invalid_argument("mode file: expected one frequency row plus " + std::to_string(L) +
                                    " participation rows");
    ModeSpectrum m;
    m.sites = L;
    for (double f : rows[0]) m.freq.push_back(kilohertz_to_angular(f));
    m.b.reserve(static_cast<std::size_t>(L) * L);
    for (int i = 1; i <= L; ++i) {
        if (static_cast<int>(rows[i].size()) != L)
            throw std::invalid_argument("mode file: participation row " + std::to_string(i) +
                                        " does not have L entries");
        for (double v : rows[i]) m.b.push_back(v);
    }
    check_mode_spectrum(m);
    return m;
}

inline ModeSpectrum load_mode_spectrum(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open mode file: " + path);
    return load_mode_spectrum(f);
}

}  // namespace quench
