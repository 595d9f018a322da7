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
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "quench/errors.hpp"
#include "quench/hamiltonian.hpp"
#include "quench/state.hpp"

// |psi(t)> = exp(-i H t) |psi(0)> on a grid of sample times, by short-iterate
// Lanczos (Krylov) stepping with adaptive substeps. The Krylov basis depends
// only on (H, psi), not on the step size, so step-size control reuses one
// basis per substep and bisects the step in the small space until the local
// error estimate fits the budget. Times are seconds; callers that think in
// units of J0*t divide by the angular J0 at the boundary.

namespace quench {

struct TimeGrid {
    std::vector<double> times;

    std::size_t size() const { return times.size(); }
};

inline TimeGrid make_time_grid(std::vector<double> times) {
    if (times.empty()) throw std::invalid_argument("time grid: need at least one sample");
    if (times.front() < 0.0) throw std::invalid_argument("time grid: times must be >= 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1])
            throw std::invalid_argument("time grid: times must be strictly increasing");
    return TimeGrid{std::move(times)};
}

/// n_points equally spaced samples on [0, t_max] (a single point means t=0).
inline TimeGrid uniform_time_grid(double t_max, int n_points) {
    if (n_points < 1) throw std::invalid_argument("time grid: need at least one sample");
    if (n_points > 1 && !(t_max > 0.0))
        throw std::invalid_argument("time grid: t_max must be positive");
    std::vector<double> t(n_points);
    for (int k = 0; k < n_points; ++k)
        t[k] = (n_points == 1) ? 0.0 : t_max * static_cast<double>(k) / (n_points - 1);
    return make_time_grid(std::move(t));
}

/// Sampled evolution: one state per grid time, each unit-norm.
struct Trajectory {
    TimeGrid grid;
    std::vector<StateVector> states;
    double tolerance = 0.0;
    std::uint64_t spec_fingerprint = 0;
};

namespace detail {

// Lanczos decomposition of H started from a unit vector: orthonormal basis
// V, tridiagonal coefficients (alpha, beta), and whether the basis spans an
// invariant subspace (exact propagation).
struct KrylovBasis {
    std::vector<std::vector<Complex>> v;
    Eigen::VectorXd alpha;
    Eigen::VectorXd beta;
    bool invariant = false;
};

inline KrylovBasis build_krylov_basis(const HamiltonianSpec& spec, const StateVector& psi, int m_max) {
    const std::size_t dim = psi.dim();
    KrylovBasis k;
    k.v.push_back(psi.amp);
    std::vector<double> alpha, beta;
    std::vector<Complex> w(dim);
    double h_scale = 0.0;
    for (int j = 0; j < m_max; ++j) {
        apply_hamiltonian_raw(spec, k.v[j].data(), w.data());
        if (j > 0)
            for (std::size_t i = 0; i < dim; ++i) w[i] -= beta[j - 1] * k.v[j - 1][i];
        Complex a{0.0, 0.0};
        for (std::size_t i = 0; i < dim; ++i) a += std::conj(k.v[j][i]) * w[i];
        alpha.push_back(a.real());
        for (std::size_t i = 0; i < dim; ++i) w[i] -= alpha[j] * k.v[j][i];
        for (int pass = 0; pass < 2; ++pass) {
            for (const std::vector<Complex>& u : k.v) {
                Complex c{0.0, 0.0};
                for (std::size_t i = 0; i < dim; ++i) c += std::conj(u[i]) * w[i];
                for (std::size_t i = 0; i < dim; ++i) w[i] -= c * u[i];
            }
        }
        double b = 0.0;
        for (const Complex& x : w) b += std::norm(x);
        b = std::sqrt(b);
        h_scale = std::max({h_scale, std::abs(alpha[j]), b});
        if (b <= 1e-12 * std::max(h_scale, 1.0) || j == m_max - 1 ||
            k.v.size() == dim) {
            if (b <= 1e-12 * std::max(h_scale, 1.0)) k.invariant = true;
            break;
        }
        beta.push_back(b);
        std::vector<Complex> next(dim);
        for (std::size_t i = 0; i < dim; ++i) next[i] = w[i] / b;
        k.v.push_back(std::move(next));
    }
    const int m = static_cast<int>(k.v.size());
    if (m == static_cast<int>(dim)) k.invariant = true;
    k.alpha = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    k.beta = (m > 1) ? Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1) : Eigen::VectorXd();
    return k;
}

// exp(-i dt T) e1 in the Krylov coefficient space, from a precomputed
// eigendecomposition of the tridiagonal T.
struct SmallPropagator {
    Eigen::MatrixXd q;
    Eigen::VectorXd lambda;

    explicit SmallPropagator(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(alpha, beta, Eigen::ComputeEigenvectors);
        q = es.eigenvectors();
        lambda = es.eigenvalues();
    }

    Eigen::VectorXcd coefficients(double dt) const {
        const int m = static_cast<int>(lambda.size());
        Eigen::VectorXcd phases(m);
        for (int i = 0; i < m; ++i)
            phases(i) = std::exp(Complex{0.0, -dt * lambda(i)}) * q(0, i);
        return q.cast<Complex>() * phases;
    }
};

// One adaptive substep starting from unit psi: advances by some h <= dt and
// returns h. `err_rate` is the allowed error per unit time.
inline double krylov_substep(const HamiltonianSpec& spec, StateVector& psi, double dt,
                             double err_rate, int m_max) {
    const KrylovBasis basis = build_krylov_basis(spec, psi, m_max);
    const int m = static_cast<int>(basis.v.size());
    const SmallPropagator full(basis.alpha, basis.beta);

    // Reference with two fewer Krylov vectors; the difference estimates the
    // local truncation error. An invariant basis is exact.
    const bool exact = basis.invariant || m < 4;
    SmallPropagator* reduced = nullptr;
    SmallPropagator reduced_storage =
        exact ? full
              : SmallPropagator(basis.alpha.head(m - 2), basis.beta.head(m - 3));
    if (!exact) reduced = &reduced_storage;

    double h = dt;
    Eigen::VectorXcd y;
    for (;;) {
        y = full.coefficients(h);
        if (exact) break;
        const Eigen::VectorXcd y2 = reduced->coefficients(h);
        double err2 = 0.0;
        for (int i = 0; i < m; ++i) {
            const Complex d = (i < m - 2) ? y(i) - y2(i) : y(i);
            err2 += std::norm(d);
        }
        if (std::sqrt(err2) <= 0.5 * err_rate * h) break;
        h *= 0.5;
        if (h < dt * 1e-12 || h < 1e-300)
            throw accuracy_error("evolve: step size underflow while meeting the error target");
    }

    const std::size_t dim = psi.dim();
    std::vector<Complex> out(dim, Complex{0.0, 0.0});
    for (int j = 0; j < m; ++j) {
        const Complex c = y(j);
        const std::vector<Complex>& u = basis.v[j];
        for (std::size_t i = 0; i < dim; ++i) out[i] += c * u[i];
    }
    double nrm = 0.0;
    for (const Complex& x : out) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    for (Complex& x : out) x /= nrm;  // Lanczos preserves norm; scrub roundoff
    psi.amp = std::move(out);
    return h;
}

inline void krylov_advance(const HamiltonianSpec& spec, StateVector& psi, double dt,
                           double err_rate, int m_max = 30) {
    double remaining = dt;
    while (remaining > 0.0) {
        const double taken = krylov_substep(spec, psi, remaining, err_rate, m_max);
        remaining -= taken;
        if (remaining < dt * 1e-14) break;  // absorb roundoff of the subtraction
    }
}

}  // namespace detail

/// Streams exp(-i H t_k)|psi0> through `sink` for every grid time without
/// storing the full trajectory. Error per returned state is at most `tol`
/// in Euclidean norm.
inline void evolve_stream(const HamiltonianSpec& spec, const StateVector& psi0, const TimeGrid& grid,
                          double tol,
                          const std::function<void(std::size_t, double, const StateVector&)>& sink) {
    if (psi0.sites != spec.sites())
        throw std::invalid_argument("evolve: state and Hamiltonian size mismatch");
    if (!(tol > 0.0)) throw std::invalid_argument("evolve: tolerance must be positive");
    if (std::abs(psi0.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("evolve: initial state must be unit norm");

    const double t_final = grid.times.back();
    const double err_rate = tol / std::max(t_final, 1e-300);

    StateVector psi = psi0;
    double t = 0.0;
    for (std::size_t k = 0; k < grid.times.size(); ++k) {
        const double target = grid.times[k];
        if (target > t) {
            detail::krylov_advance(spec, psi, target - t, err_rate);
            t = target;
        }
        sink(k, target, psi);
    }
}

/// Stored-state variant of evolve_stream.
inline Trajectory evolve(const HamiltonianSpec& spec, const StateVector& psi0, const TimeGrid& grid,
                         double tol = 1e-8) {
    Trajectory traj;
    traj.grid = grid;
    traj.tolerance = tol;
    traj.spec_fingerprint = fingerprint(spec);
    traj.states.reserve(grid.size());
    evolve_stream(spec, psi0, grid, tol,
                  [&traj](std::size_t, double, const StateVector& s) { traj.states.push_back(s); });
    return traj;
}

/// Largest size for which the dense propagator oracle is allowed.
inline constexpr int kMaxPropagatorSites = 10;

/// exp(-i H t) as a dense unitary, via spectral decomposition. Oracle for
/// the Krylov path; L <= 10.
inline Eigen::MatrixXcd dense_propagator(const HamiltonianSpec& spec, double t) {
    if (spec.sites() > kMaxPropagatorSites)
        throw capability_error("dense_propagator: " + std::to_string(spec.sites()) +
                               " sites exceeds the limit of " + std::to_string(kMaxPropagatorSites));
    const Eigen::MatrixXd H = materialize_dense(spec);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const std::size_t n = H.rows();
    Eigen::VectorXcd phases(n);
    for (std::size_t i = 0; i < n; ++i)
        phases(i) = std::exp(Complex{0.0, -t * es.eigenvalues()(i)});
    return es.eigenvectors().cast<Complex>() * phases.asDiagonal() *
           es.eigenvectors().transpose().cast<Complex>();
}

/// Applies the dense propagator to a state (oracle-side convenience).
inline StateVector dense_evolve(const HamiltonianSpec& spec, const StateVector& psi0, double t) {
    const Eigen::MatrixXcd U = dense_propagator(spec, t);
    StateVector out(psi0.sites);
    Eigen::Map<Eigen::VectorXcd> target(out.amp.data(), out.amp.size());
    target = U * Eigen::Map<const Eigen::VectorXcd>(psi0.amp.data(), psi0.amp.size());
    return out;
}

}  // namespace quench
