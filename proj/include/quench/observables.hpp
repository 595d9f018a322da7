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
#include <numbers>
#include <optional>
#include <vector>

#include "quench/evolve.hpp"
#include "quench/state.hpp"

// Measured quantities: single-site magnetizations, connected correlations
// C_ij = <s_i s_j> - <s_i><s_j>, domain-wall counts and per-bond profiles
// N_j = <1 - sx_j sx_{j+1}>/2, window time averages, and the
// single-frequency sinusoidal fit used to turn magnetization oscillations
// into energy gaps.

namespace quench {

/// <sigma_site^axis>.
inline double magnetization(const StateVector& psi, int site, Axis axis) {
    const StateVector sp = apply_pauli(psi, site, axis);
    return inner_product(psi, sp).real();
}

/// <sigma_i^axis sigma_j^axis>; the operator square is the identity at i=j.
inline double two_point(const StateVector& psi, int i, int j, Axis axis) {
    check_site(psi, i);
    check_site(psi, j);
    if (i == j) return 1.0;
    const StateVector sp = apply_pauli(apply_pauli(psi, j, axis), i, axis);
    return inner_product(psi, sp).real();
}

/// Connected correlation <s_i s_j> - <s_i><s_j> along one axis.
inline double connected_correlation(const StateVector& psi, int i, int j, Axis axis) {
    return two_point(psi, i, j, axis) - magnetization(psi, i, axis) * magnetization(psi, j, axis);
}

/// Total domain-wall number sum_j <1 - sx_j sx_{j+1}>/2 over the L-1 bonds.
inline double domain_wall_count(const StateVector& psi) {
    if (psi.sites < 2) throw std::invalid_argument("domain_wall_count: need at least two sites");
    double n = 0.0;
    for (int j = 1; j < psi.sites; ++j) n += 0.5 * (1.0 - two_point(psi, j, j + 1, Axis::X));
    return n;
}

/// Per-bond wall expectations N_j, j = 1..L-1 (bond j sits between sites j
/// and j+1). Values lie in [0, 1] and sum to domain_wall_count.
struct WallProfile {
    std::vector<double> bond;
};

inline WallProfile wall_profile(const StateVector& psi) {
    if (psi.sites < 2) throw std::invalid_argument("wall_profile: need at least two sites");
    WallProfile p;
    p.bond.reserve(psi.sites - 1);
    for (int j = 1; j < psi.sites; ++j)
        p.bond.push_back(0.5 * (1.0 - two_point(psi, j, j + 1, Axis::X)));
    return p;
}

/// Time average of a sampled series over [t1, t2] by the trapezoidal rule
/// on the piecewise-linear interpolant (window endpoints may fall between
/// samples).
inline double time_average(const std::vector<double>& times, const std::vector<double>& values,
                           double t1, double t2) {
    if (times.size() != values.size() || times.size() < 2)
        throw std::invalid_argument("time_average: need matching series with >= 2 samples");
    if (!(t2 > t1)) throw std::invalid_argument("time_average: window must have t2 > t1");
    if (t1 < times.front() - 1e-12 * std::abs(times.back()) || t2 > times.back() + 1e-12 * std::abs(times.back()))
        throw std::out_of_range("time_average: window outside the sampled range");

    auto value_at = [&](double t) {
        auto it = std::lower_bound(times.begin(), times.end(), t);
        if (it == times.begin()) return values.front();
        if (it == times.end()) return values.back();
        const std::size_t hi = it - times.begin();
        const std::size_t lo = hi - 1;
        const double f = (t - times[lo]) / (times[hi] - times[lo]);
        return values[lo] + f * (values[hi] - values[lo]);
    };

    double integral = 0.0;
    double t_prev = t1, v_prev = value_at(t1);
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] <= t1) continue;
        const double t_k = std::min(times[k], t2);
        integral += 0.5 * (v_prev + value_at(t_k)) * (t_k - t_prev);
        t_prev = t_k;
        v_prev = value_at(t_k);
        if (times[k] >= t2) break;
    }
    if (t_prev < t2) {
        integral += 0.5 * (v_prev + value_at(t2)) * (t2 - t_prev);
    }
    return integral / (t2 - t1);
}

/// Cumulative time average of the total domain-wall number over [t1, t2].
inline double time_averaged_walls(const Trajectory& traj, double t1, double t2) {
    std::vector<double> walls;
    walls.reserve(traj.states.size());
    for (const StateVector& s : traj.states) walls.push_back(domain_wall_count(s));
    return time_average(traj.grid.times, walls, t1, t2);
}

/// Connected correlations against one reference site across a trajectory.
/// value[k][i-1] = C_{i,ref}(t_k).
struct CorrelationMap {
    int ref_site = 0;
    Axis axis = Axis::X;
    std::vector<double> times;
    std::vector<std::vector<double>> value;
};

inline CorrelationMap correlation_map(const Trajectory& traj, int ref_site, Axis axis = Axis::X) {
    CorrelationMap map;
    map.ref_site = ref_site;
    map.axis = axis;
    map.times = traj.grid.times;
    map.value.reserve(traj.states.size());
    for (const StateVector& s : traj.states) {
        check_site(s, ref_site);
        std::vector<double> row(s.sites);
        for (int i = 1; i <= s.sites; ++i) row[i - 1] = connected_correlation(s, i, ref_site, axis);
        map.value.push_back(std::move(row));
    }
    return map;
}

/// Result of fitting A*cos(omega*t + phi) + C. `residual` is the Euclidean
/// norm of the misfit; `omega_init` the spectral-peak initializer. A fit
/// that could not converge reports converged = false and keeps omega_init.
/// A (near-)constant series reports degenerate = true with omega = 0.
struct SinusoidFit {
    double amplitude = 0.0;
    double omega = 0.0;
    double phase = 0.0;
    double offset = 0.0;
    double residual = 0.0;
    double omega_init = 0.0;
    bool converged = false;
    bool degenerate = false;
};

namespace detail {

// Least-squares a*cos(w t) + b*sin(w t) + c at fixed frequency; returns the
// squared residual and the coefficients.
inline double sinusoid_projection(const std::vector<double>& t, const std::vector<double>& v,
                                  double omega, double coef[3]) {
    const int n = static_cast<int>(t.size());
    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd y(n);
    for (int k = 0; k < n; ++k) {
        X(k, 0) = std::cos(omega * t[k]);
        X(k, 1) = std::sin(omega * t[k]);
        X(k, 2) = 1.0;
        y(k) = v[k];
    }
    const Eigen::Vector3d beta = X.colPivHouseholderQr().solve(y);
    coef[0] = beta(0);
    coef[1] = beta(1);
    coef[2] = beta(2);
    return (y - X * beta).squaredNorm();
}

}  // namespace detail

/// Single-frequency sinusoidal fit. The frequency is initialized from the
/// peak of the discrete spectrum of the detrended series (ties broken
/// toward the lowest frequency), then refined by nonlinear least squares.
inline SinusoidFit fit_sinusoid(const std::vector<double>& times, const std::vector<double>& values) {
    const std::size_t n = times.size();
    if (n != values.size()) throw std::invalid_argument("fit_sinusoid: size mismatch");
    if (n < 8) throw std::invalid_argument("fit_sinusoid: need at least 8 samples");
    for (std::size_t k = 1; k < n; ++k)
        if (!(times[k] > times[k - 1]))
            throw std::invalid_argument("fit_sinusoid: times must be strictly increasing");

    SinusoidFit fit;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double rms = 0.0;
    for (double v : values) rms += (v - mean) * (v - mean);
    rms = std::sqrt(rms / static_cast<double>(n));

    if (rms <= 1e-12 * (1.0 + std::abs(mean))) {
        fit.offset = mean;
        fit.residual = rms * std::sqrt(static_cast<double>(n));
        fit.converged = true;
        fit.degenerate = true;
        return fit;
    }

    // Spectral-peak initializer on the detrended series.
    const double span = times.back() - times.front();
    const double dt_med = span / static_cast<double>(n - 1);
    const double d_omega = 2.0 * std::numbers::pi / (8.0 * span);  // 8x oversampled bins
    const double omega_max = std::numbers::pi / dt_med;
    double best_power = -1.0;
    double omega0 = d_omega;
    for (double w = d_omega; w <= omega_max; w += d_omega) {
        Complex acc{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k)
            acc += (values[k] - mean) * std::exp(Complex{0.0, -w * times[k]});
        const double p = std::norm(acc);
        if (p > best_power) {  // strict: ties keep the lowest-frequency bin
            best_power = p;
            omega0 = w;
        }
    }
    fit.omega_init = omega0;

    double coef[3];
    if (omega0 * span < 2.0 * std::numbers::pi) {
        // Less than one period in view: report failure with the initializer
        // and the best-effort linear solve at that frequency.
        const double r2 = detail::sinusoid_projection(times, values, omega0, coef);
        fit.amplitude = std::hypot(coef[0], coef[1]);
        fit.omega = omega0;
        fit.phase = std::atan2(-coef[1], coef[0]);
        fit.offset = coef[2];
        fit.residual = std::sqrt(r2);
        fit.converged = false;
        return fit;
    }

    // Golden-section refinement of the projected residual around the peak.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = std::max(omega0 - d_omega, 0.25 * d_omega);
    double hi = omega0 + d_omega;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = detail::sinusoid_projection(times, values, x1, coef);
    double f2 = detail::sinusoid_projection(times, values, x2, coef);
    for (int it = 0; it < 90; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = detail::sinusoid_projection(times, values, x1, coef);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = detail::sinusoid_projection(times, values, x2, coef);
        }
    }
    const double omega = 0.5 * (lo + hi);
    const double r2 = detail::sinusoid_projection(times, values, omega, coef);
    fit.amplitude = std::hypot(coef[0], coef[1]);
    fit.omega = omega;
    fit.phase = std::atan2(-coef[1], coef[0]);
    fit.offset = coef[2];
    fit.residual = std::sqrt(r2);
    fit.converged = true;
    return fit;
}

/// Gap extracted from one site's transverse-magnetization oscillation.
struct GapExtraction {
    int site = 0;
    double window_t0 = 0.0;
    double window_t1 = 0.0;
    SinusoidFit fit;
    double omega_over_j0 = 0.0;
};

/// Fits <sigma^z_site(t)> over a short window (default two oscillation
/// periods of the spectral-peak initializer, before significant damping)
/// and reports the frequency in units of the angular coupling scale j0.
/// The window actually used is recorded in the result.
inline GapExtraction extract_gap(const Trajectory& traj, int site, double j0,
                                 std::optional<std::pair<double, double>> window = std::nullopt) {
    if (!(j0 > 0.0)) throw std::invalid_argument("extract_gap: j0 must be positive");
    std::vector<double> series;
    series.reserve(traj.states.size());
    for (const StateVector& s : traj.states) series.push_back(magnetization(s, site, Axis::Z));

    GapExtraction out;
    out.site = site;

    double t0 = traj.grid.times.front();
    double t1 = traj.grid.times.back();
    if (window) {
        t0 = window->first;
        t1 = window->second;
    } else {
        // Initializer pass on the full series fixes the default window.
        const SinusoidFit probe_all = fit_sinusoid(traj.grid.times, series);
        if (probe_all.degenerate) {
            out.fit = probe_all;
            out.window_t0 = t0;
            out.window_t1 = t1;
            return out;
        }
        t1 = std::min(t1, t0 + 4.0 * std::numbers::pi / probe_all.omega_init);
    }

    std::vector<double> wt, wv;
    for (std::size_t k = 0; k < traj.grid.times.size(); ++k) {
        const double t = traj.grid.times[k];
        if (t >= t0 - 1e-15 && (t <= t1 + 1e-15 || wt.size() < 8)) {
            wt.push_back(t);
            wv.push_back(series[k]);
        }
    }
    out.window_t0 = wt.empty() ? t0 : wt.front();
    out.window_t1 = wt.empty() ? t1 : wt.back();
    out.fit = fit_sinusoid(wt, wv);
    out.omega_over_j0 = out.fit.degenerate ? 0.0 : out.fit.omega / j0;
    return out;
}

}  // namespace quench
