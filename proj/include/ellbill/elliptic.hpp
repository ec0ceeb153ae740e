#pragma once

// Complete and incomplete elliptic integrals of the first kind by the
// arithmetic-geometric mean. Modulus convention: F(phi, k) = int_0^phi
// dt / sqrt(1 - k^2 sin^2 t), 0 <= k < 1.

#include <cmath>
#include <limits>
#include <numbers>

#include "ellbill/error.hpp"

namespace ellbill {

template <typename Scalar>
Scalar agm(Scalar a, Scalar b) {
    const Scalar tol = Scalar(16) * std::numeric_limits<Scalar>::epsilon();
    for (int it = 0; it < 64 && std::abs(a - b) > tol * a; ++it) {
        const Scalar next = (a + b) / 2;
        b = std::sqrt(a * b);
        a = next;
    }
    return (a + b) / 2;
}

/// K(k) = F(pi/2, k).
template <typename Scalar>
Scalar elliptic_k(Scalar k) {
    if (!(std::abs(k) < 1)) fail(ErrorCode::OutOfRange, "elliptic_k requires |k| < 1");
    const Scalar kp = std::sqrt((1 - k) * (1 + k));
    return std::numbers::pi_v<Scalar> / (2 * agm(Scalar(1), kp));
}

/// Incomplete F(phi, k) for arbitrary real phi via the descending Gauss
/// (Landen) transformation; quasi-periodic: F(phi + pi, k) = F(phi, k) + 2K(k).
template <typename Scalar>
Scalar elliptic_f(Scalar phi, Scalar k) {
    if (!(std::abs(k) < 1)) fail(ErrorCode::OutOfRange, "elliptic_f requires |k| < 1");
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    // Reduce to phi in [-pi/2, pi/2].
    const Scalar turns = std::round(phi / pi);
    const Scalar reduced = phi - turns * pi;
    Scalar result = turns == 0 ? Scalar(0) : 2 * turns * elliptic_k(k);
    if (reduced == 0) return result;

    Scalar a = 1;
    Scalar g = std::sqrt((1 - k) * (1 + k));
    Scalar angle = reduced;
    Scalar scale = 1;
    const Scalar tol = Scalar(16) * std::numeric_limits<Scalar>::epsilon();
    for (int it = 0; it < 64; ++it) {
        const Scalar t = std::atan((g / a) * std::tan(angle));
        // Choose the branch of arctan that keeps angle_{n+1} close to 2*angle_n.
        const Scalar next = angle + t + pi * std::round((angle - t) / pi);
        angle = next;
        scale *= 2;
        const Scalar a_next = (a + g) / 2;
        const bool done = std::abs(a - g) <= tol * a;
        g = std::sqrt(a * g);
        a = a_next;
        if (done) break;
    }
    return result + angle / (scale * a);
}

}  // namespace ellbill
