#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "ellbill/error.hpp"

namespace ellbill {

template <typename Scalar>
struct Root {
    Scalar x{};
    Scalar fx{};
    int iterations{0};
};

/// Brent's bracketed root finder (bisection safeguarding secant / inverse
/// quadratic steps). Requires f(lo) and f(hi) of opposite sign.
template <typename Scalar, typename F>
Root<Scalar> brent(F&& f, Scalar lo, Scalar hi, Scalar flo, Scalar fhi, Scalar xtol, int max_iter = 200) {
    if (flo == 0) return {lo, flo, 0};
    if (fhi == 0) return {hi, fhi, 0};
    if ((flo > 0) == (fhi > 0)) fail(ErrorCode::NoBracket, "brent: endpoints do not bracket a root");
    Scalar a = lo, b = hi, fa = flo, fb = fhi;
    Scalar c = a, fc = fa, d = b - a, e = d;
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    for (int it = 1; it <= max_iter; ++it) {
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const Scalar tol = 2 * eps * std::abs(b) + xtol / 2;
        const Scalar m = (c - b) / 2;
        if (std::abs(m) <= tol || fb == 0) return {b, fb, it};
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            Scalar p, q, r;
            const Scalar s = fb / fa;
            if (a == c) {
                p = 2 * m * s;
                q = 1 - s;
            } else {
                q = fa / fc;
                r = fb / fc;
                p = s * (2 * m * q * (q - r) - (b - a) * (r - 1));
                q = (q - 1) * (r - 1) * (s - 1);
            }
            if (p > 0) q = -q; else p = -p;
            if (2 * p < std::min(3 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol ? d : (m > 0 ? tol : -tol);
        fb = f(b);
    }
    return {b, fb, max_iter};
}

template <typename Scalar, typename F>
Root<Scalar> brent(F&& f, Scalar lo, Scalar hi, Scalar xtol, int max_iter = 200) {
    const Scalar flo = f(lo);
    const Scalar fhi = f(hi);
    return brent(f, lo, hi, flo, fhi, xtol, max_iter);
}

}  // namespace ellbill
