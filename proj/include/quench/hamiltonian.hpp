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

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

#include "quench/couplings.hpp"
#include "quench/errors.hpp"
#include "quench/state.hpp"

// H = -sum_{a<b} J_ab sigma^x_a sigma^x_b - B sum_a sigma^z_a   (hbar = 1).
//
// In the z basis the field term is diagonal with entry -B * (#up - #down)
// and each sigma^x_a sigma^x_b term flips bits a and b. The matrix is real
// symmetric in this basis. The matrix-free action is the primary
// representation; dense forms exist as oracles and for small-system spectra.

namespace quench {

struct HamiltonianSpec {
    CouplingMatrix couplings;
    double field = 0.0;  // B, angular frequency

    int sites() const { return couplings.sites; }
};

/// Validated constructor. By convention B >= 0 (the builders and config
/// layer enforce it); a signed field is admitted here because observables
/// of (J, B) and (-J, -B) coincide and the sign-equivalence checks need
/// both members of the pair.
inline HamiltonianSpec make_hamiltonian(CouplingMatrix couplings, double field) {
    check_coupling_matrix(couplings);
    if (!std::isfinite(field)) throw std::invalid_argument("make_hamiltonian: field must be finite");
    return HamiltonianSpec{std::move(couplings), field};
}

/// (-J, -B): same observable dynamics for real initial product states.
inline HamiltonianSpec negated(const HamiltonianSpec& spec) {
    HamiltonianSpec out = spec;
    for (double& v : out.couplings.j) v = -v;
    out.field = -spec.field;
    return out;
}

namespace detail {

struct PairTerm {
    std::uint64_t mask;
    double weight;  // -J_ab
};

inline std::vector<PairTerm> pair_terms(const HamiltonianSpec& spec) {
    std::vector<PairTerm> terms;
    for (int a = 1; a <= spec.sites(); ++a)
        for (int b = a + 1; b <= spec.sites(); ++b) {
            const double j = spec.couplings.at(a, b);
            if (j != 0.0) terms.push_back({site_bit(a) | site_bit(b), -j});
        }
    return terms;
}

// out = H * in for any scalar type (real vectors stay real: H is real
// symmetric in the z basis).
template <class Scalar>
void apply_hamiltonian_raw(const HamiltonianSpec& spec, const Scalar* in, Scalar* out) {
    const int L = spec.sites();
    const std::size_t n = std::size_t{1} << L;
    const double B = spec.field;
    for (std::size_t b = 0; b < n; ++b) {
        const int z_sum = 2 * std::popcount(b) - L;  // #up - #down
        out[b] = (-B * z_sum) * in[b];
    }
    for (const PairTerm& t : pair_terms(spec))
        for (std::size_t b = 0; b < n; ++b) out[b] += t.weight * in[b ^ t.mask];
}

}  // namespace detail

/// H|psi> as a raw (unnormalized) amplitude array.
inline std::vector<Complex> apply_hamiltonian(const HamiltonianSpec& spec, const StateVector& psi) {
    if (psi.sites != spec.sites())
        throw std::invalid_argument("apply_hamiltonian: state and Hamiltonian size mismatch");
    std::vector<Complex> out(psi.dim());
    detail::apply_hamiltonian_raw(spec, psi.amp.data(), out.data());
    return out;
}

/// <psi|H|psi>. Real for any state since H is Hermitian.
inline double energy_expectation(const HamiltonianSpec& spec, const StateVector& psi) {
    const std::vector<Complex> h_psi = apply_hamiltonian(spec, psi);
    Complex e{0.0, 0.0};
    for (std::size_t b = 0; b < psi.dim(); ++b) e += std::conj(psi.amp[b]) * h_psi[b];
    return e.real();
}

/// Largest size for which dense materialization is allowed.
inline constexpr int kMaxDenseSites = 14;

/// Full 2^L x 2^L matrix of H (real symmetric in the z basis).
inline Eigen::MatrixXd materialize_dense(const HamiltonianSpec& spec) {
    const int L = spec.sites();
    if (L > kMaxDenseSites)
        throw capability_error("materialize_dense: " + std::to_string(L) + " sites exceeds the dense limit of " +
                               std::to_string(kMaxDenseSites));
    const std::size_t n = std::size_t{1} << L;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t b = 0; b < n; ++b)
        H(b, b) = -spec.field * (2 * std::popcount(b) - L);
    for (const detail::PairTerm& t : detail::pair_terms(spec))
        for (std::size_t b = 0; b < n; ++b) H(b ^ t.mask, b) += t.weight;
    return H;
}

/// The n smallest eigenvalues of H, ascending, by dense symmetric
/// diagonalization (L <= 14). For larger systems see lanczos_spectrum.
inline std::vector<double> low_spectrum(const HamiltonianSpec& spec, int n) {
    const std::size_t dim = std::size_t{1} << spec.sites();
    if (n < 1 || static_cast<std::size_t>(n) > dim)
        throw std::invalid_argument("low_spectrum: count outside 1..2^L");
    const Eigen::MatrixXd H = materialize_dense(spec);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H, Eigen::EigenvaluesOnly);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = solver.eigenvalues()(i);
    return out;
}

/// Iterative extension of low_spectrum: the n smallest numerically distinct
/// eigenvalues via matrix-free Lanczos with full reorthogonalization.
/// Members of a (near-)degenerate multiplet appear once. Throws
/// accuracy_error if the requested values do not converge.
inline std::vector<double> lanczos_spectrum(const HamiltonianSpec& spec, int n, int max_iter = 400,
                                            double tol = 1e-9) {
    const int L = spec.sites();
    const std::size_t dim = std::size_t{1} << L;
    if (n < 1 || static_cast<std::size_t>(n) > dim)
        throw std::invalid_argument("lanczos_spectrum: count outside 1..2^L");
    const int m_max = static_cast<int>(std::min<std::size_t>(dim, max_iter));

    // Deterministic pseudo-random start vector.
    Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
    std::uint64_t s = 0x2545F4914F6CDD1DULL;
    for (std::size_t i = 0; i < dim; ++i) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        v(i) = (static_cast<double>(s >> 11) * 0x1.0p-53) - 0.5;
    }
    v.normalize();

    std::vector<Eigen::VectorXd> basis;
    std::vector<double> alpha, beta;
    Eigen::VectorXd w(dim);
    basis.push_back(v);
    double h_scale = 0.0;  // running estimate of ||H||
    for (int it = 0; it < m_max; ++it) {
        detail::apply_hamiltonian_raw(spec, basis[it].data(), w.data());
        if (it > 0) w -= beta[it - 1] * basis[it - 1];
        const double a = basis[it].dot(w);
        alpha.push_back(a);
        w -= a * basis[it];
        for (int pass = 0; pass < 2; ++pass)
            for (const Eigen::VectorXd& u : basis) w -= u.dot(w) * u;
        const double b = w.norm();
        h_scale = std::max({h_scale, std::abs(a), b});

        const int m = it + 1;
        const bool breakdown = b <= 1e-13 * std::max(h_scale, 1.0);
        if (m >= n && (breakdown || m % 10 == 0 || it == m_max - 1)) {
            Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
            Eigen::VectorXd off = beta.empty()
                                      ? Eigen::VectorXd()
                                      : Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
            es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
            const double scale =
                std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(m - 1)));
            bool ok = true;
            for (int i = 0; i < n && ok; ++i) {
                const double resid = breakdown ? 0.0 : b * std::abs(es.eigenvectors()(m - 1, i));
                ok = resid <= tol * std::max(scale, 1.0);
            }
            if (ok) {
                std::vector<double> out(n);
                for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()(i);
                return out;
            }
        }
        if (breakdown)
            throw accuracy_error("lanczos_spectrum: invariant subspace smaller than requested count");
        beta.push_back(b);
        basis.push_back(w / b);
    }
    throw accuracy_error("lanczos_spectrum: not converged within iteration limit");
}

/// Collapses quasi-degenerate eigenvalues: consecutive values closer than
/// `tol` join one level; each level is reported as the cluster mean.
inline std::vector<double> distinct_levels(const std::vector<double>& ascending, double tol) {
    std::vector<double> out;
    std::size_t i = 0;
    while (i < ascending.size()) {
        double sum = ascending[i];
        std::size_t j = i + 1;
        while (j < ascending.size() && ascending[j] - ascending[j - 1] <= tol) sum += ascending[j++];
        out.push_back(sum / static_cast<double>(j - i));
        i = j;
    }
    return out;
}

/// Stable identity of a Hamiltonian for run manifests: FNV-1a over the
/// size, field, and coupling entries.
inline std::uint64_t fingerprint(const HamiltonianSpec& spec) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](const void* p, std::size_t n) {
        const unsigned char* c = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= c[i];
            h *= 1099511628211ULL;
        }
    };
    const int L = spec.sites();
    mix(&L, sizeof L);
    mix(&spec.field, sizeof spec.field);
    mix(spec.couplings.j.data(), spec.couplings.j.size() * sizeof(double));
    return h;
}

}  // namespace quench
