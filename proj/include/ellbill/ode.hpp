#pragma once

// Gragg-Bulirsch-Stoer integrator for smooth non-stiff systems
// y' = f(x, y), with Eigen fixed-size state vectors.

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cmath>

#include "ellbill/error.hpp"

namespace ellbill::ode {

struct Tolerance {
    double rtol = 1e-12;
    double atol = 1e-12;
};

struct Stats {
    int accepted = 0;
    int rejected = 0;
    long evaluations = 0;
};

namespace detail {

template <typename State, typename Rhs>
State modified_midpoint(Rhs& f, double x, const State& y, const State& dy, double big_h, int n, long& evals) {
    const double h = big_h / n;
    State z0 = y;
    State z1 = y + h * dy;
    for (int i = 1; i < n; ++i) {
        State z2 = z0 + 2.0 * h * f(x + i * h, z1);
        z0 = z1;
        z1 = z2;
    }
    evals += n;
    return 0.5 * (z0 + z1 + h * f(x + big_h, z1));
}

}  // namespace detail

/// Integrate from x0 to x1 (either direction). `h` is the initial step guess
/// and is updated to the last successful step size.
template <typename State, typename Rhs>
State integrate(Rhs&& f, double x0, double x1, State y, double& h, Tolerance tol = {}, Stats* stats = nullptr) {
    constexpr int kMaxLevel = 9;
    static constexpr std::array<int, kMaxLevel> seq = {2, 4, 6, 8, 10, 12, 14, 16, 18};
    const double span = x1 - x0;
    if (span == 0) return y;
    const double dir = span > 0 ? 1.0 : -1.0;
    h = std::min(std::abs(h > 0 ? h : span), std::abs(span));
    double x = x0;
    Stats local;
    int guard = 0;
    while (dir * (x1 - x) > 0) {
        if (++guard > 2'000'000) fail(ErrorCode::SolverStagnated, "ode::integrate: too many steps");
        double step = std::min(h, std::abs(x1 - x));
        const double big_h = dir * step;
        const State dy = f(x, y);
        ++local.evaluations;
        std::array<State, kMaxLevel> table;
        bool ok = false;
        int level = 0;
        double err = 0;
        for (level = 0; level < kMaxLevel; ++level) {
            table[level] = detail::modified_midpoint(f, x, y, dy, big_h, seq[level], local.evaluations);
            // Aitken-Neville extrapolation in h^2.
            for (int j = level - 1; j >= 0; --j) {
                const double ratio = static_cast<double>(seq[level]) / seq[j];
                table[j] = table[j + 1] + (table[j + 1] - table[j]) / (ratio * ratio - 1.0);
            }
            if (level >= 2) {
                // table[0] is the most extrapolated value, table[1] one order lower.
                err = 0;
                for (int i = 0; i < y.size(); ++i) {
                    const double sc = tol.atol + tol.rtol * std::max(std::abs(y[i]), std::abs(table[0][i]));
                    err = std::max(err, std::abs(table[0][i] - table[1][i]) / sc);
                }
                if (err <= 1.0) {
                    ok = true;
                    break;
                }
            }
        }
        if (!ok) {
            ++local.rejected;
            h = step / 3.0;
            if (h < 1e-14 * std::max(1.0, std::abs(x))) fail(ErrorCode::SolverStagnated, "ode::integrate: step underflow");
            continue;
        }
        ++local.accepted;
        x = (std::abs(x1 - x) <= step) ? x1 : x + big_h;
        y = table[0];
        if (level <= 4) h = step * 1.6;
        else if (level >= 7) h = step * 0.7;
        else h = step;
    }
    if (stats) {
        stats->accepted += local.accepted;
        stats->rejected += local.rejected;
        stats->evaluations += local.evaluations;
    }
    return y;
}

}  // namespace ellbill::ode
