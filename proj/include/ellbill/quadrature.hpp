#pragma once

// Adaptive and fixed quadrature rules. Everything here is templated on the
// scalar type so the rules can be reused with long double in tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

namespace ellbill::quad {

template <typename Scalar>
struct Result {
    Scalar value{0};
    Scalar error{0};
    std::size_t evaluations{0};
    bool converged{true};
};

namespace detail {

// Kronrod abscissae / weights and embedded 7-point Gauss weights (QUADPACK qk15).
inline constexpr std::array<long double, 8> kXgk = {
    0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
    0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
    0.586087235467691130294144845693013L, 0.405845151377397166906606412076961L,
    0.207784955007898467600689403773245L, 0.000000000000000000000000000000000L};
inline constexpr std::array<long double, 8> kWgk = {
    0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
    0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
    0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
    0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
inline constexpr std::array<long double, 4> kWg = {
    0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
    0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};

template <typename Scalar>
struct Panel {
    Scalar a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <typename Scalar, typename F>
Panel<Scalar> gk15(F& f, Scalar a, Scalar b) {
    const Scalar center = (a + b) / 2;
    const Scalar half = (b - a) / 2;
    const Scalar fc = f(center);
    Scalar kronrod = fc * Scalar(kWgk[7]);
    Scalar gauss = fc * Scalar(kWg[3]);
    Scalar abs_sum = std::abs(kronrod);
    for (int j = 0; j < 7; ++j) {
        const Scalar dx = half * Scalar(kXgk[j]);
        const Scalar f1 = f(center - dx);
        const Scalar f2 = f(center + dx);
        kronrod += Scalar(kWgk[j]) * (f1 + f2);
        abs_sum += Scalar(kWgk[j]) * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += Scalar(kWg[j / 2]) * (f1 + f2);
    }
    const Scalar value = kronrod * half;
    Scalar err = std::abs((kronrod - gauss) * half);
    if (err != Scalar(0)) {
        const Scalar scale = std::pow(Scalar(200) * err / std::max(std::abs(half) * abs_sum, std::numeric_limits<Scalar>::min()), Scalar(1.5));
        err = std::abs(half) * abs_sum * std::min(Scalar(1), scale);
    }
    err = std::max(err, Scalar(50) * std::numeric_limits<Scalar>::epsilon() * std::abs(half) * abs_sum);
    return {a, b, value, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// Stops when the summed error estimate is below max(abs_tol, rel_tol*|I|).
template <typename Scalar, typename F>
Result<Scalar> gauss_kronrod(F&& f, Scalar a, Scalar b, Scalar abs_tol = Scalar(1e-12),
                             Scalar rel_tol = Scalar(1e-12), std::size_t max_panels = 4000) {
    Result<Scalar> out;
    if (a == b) return out;
    std::priority_queue<detail::Panel<Scalar>> heap;
    auto first = detail::gk15(f, a, b);
    heap.push(first);
    out.evaluations = 15;
    Scalar total = first.value;
    Scalar error = first.error;
    while (error > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (heap.size() >= max_panels) {
            out.converged = false;
            break;
        }
        auto worst = heap.top();
        heap.pop();
        const Scalar mid = (worst.a + worst.b) / 2;
        if (mid <= std::min(worst.a, worst.b) || mid >= std::max(worst.a, worst.b)) {
            heap.push(worst);
            out.converged = false;
            break;
        }
        auto left = detail::gk15(f, worst.a, mid);
        auto right = detail::gk15(f, mid, worst.b);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to drop accumulated cancellation from the running update.
    total = 0;
    error = 0;
    while (!heap.empty()) {
        total += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    out.value = total;
    out.error = error;
    return out;
}

/// Double-exponential (tanh-sinh) rule on [a, b]. Tolerates integrable endpoint
/// singularities since f is never evaluated at the endpoints themselves.
template <typename Scalar, typename F>
Result<Scalar> tanh_sinh(F&& f, Scalar a, Scalar b, Scalar tol = Scalar(1e-12), int max_levels = 12) {
    using std::cosh;
    using std::exp;
    using std::sinh;
    constexpr Scalar half_pi = std::numbers::pi_v<Scalar> / 2;
    const Scalar center = (a + b) / 2;
    const Scalar half = (b - a) / 2;
    const Scalar t_max = Scalar(4);
    Result<Scalar> out;

    // Node at parameter t: x = center + half*tanh(u), u = (pi/2) sinh t; the
    // distance to the nearer endpoint is evaluated without cancellation.
    auto eval = [&](Scalar t) -> Scalar {
        const Scalar u = half_pi * sinh(t);
        const Scalar w = half_pi * cosh(t) / (cosh(u) * cosh(u));
        if (w < std::numeric_limits<Scalar>::min()) return Scalar(0);
        const Scalar gap = half * Scalar(2) / (exp(Scalar(2) * std::abs(u)) + Scalar(1));  // half*(1-tanh|u|)
        const Scalar x = (u >= 0) ? b - gap : a + gap;
        if (!(x > std::min(a, b)) || !(x < std::max(a, b))) return Scalar(0);
        ++out.evaluations;
        return w * f(x);
    };

    Scalar h = Scalar(1) / 2;
    Scalar sum = eval(Scalar(0));
    for (Scalar t = h; t <= t_max; t += h) sum += eval(t) + eval(-t);
    Scalar estimate = sum * h * half;
    for (int level = 1; level <= max_levels; ++level) {
        h /= 2;
        Scalar fresh = 0;
        for (Scalar t = h; t <= t_max; t += 2 * h) fresh += eval(t) + eval(-t);
        sum += fresh;
        const Scalar next = sum * h * half;
        out.error = std::abs(next - estimate);
        estimate = next;
        if (level >= 3 && out.error <= tol * std::max(Scalar(1), std::abs(estimate))) {
            out.value = estimate;
            return out;
        }
    }
    out.value = estimate;
    out.converged = false;
    return out;
}

/// Composite trapezoid rule over one period [x0, x0 + period) with n samples.
/// Spectrally accurate for smooth periodic integrands.
template <typename Scalar, typename F>
Scalar periodic_trapezoid(F&& f, Scalar x0, Scalar period, std::size_t n) {
    Scalar sum = 0;
    for (std::size_t k = 0; k < n; ++k) sum += f(x0 + period * Scalar(k) / Scalar(n));
    return sum * period / Scalar(n);
}

/// Trapezoid weights on already-sampled periodic data.
template <typename Scalar>
Scalar periodic_trapezoid_samples(const std::vector<Scalar>& values, Scalar period) {
    Scalar sum = 0;
    for (Scalar v : values) sum += v;
    return sum * period / Scalar(values.size());
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
template <typename Scalar>
std::pair<std::vector<Scalar>, std::vector<Scalar>> gauss_legendre(std::size_t n) {
    std::vector<Scalar> x(n), w(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        Scalar z = std::cos(std::numbers::pi_v<Scalar> * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
        Scalar dp = 0;
        for (int it = 0; it < 100; ++it) {
            Scalar p0 = 1, p1 = z;
            for (std::size_t k = 2; k <= n; ++k) {
                const Scalar p2 = ((2 * Scalar(k) - 1) * z * p1 - (Scalar(k) - 1) * p0) / Scalar(k);
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) { p1 = z; p0 = 1; }
            dp = Scalar(n) * (z * p1 - p0) / (z * z - 1);
            const Scalar dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 4 * std::numeric_limits<Scalar>::epsilon()) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = Scalar(2) / ((1 - z * z) * dp * dp);
    }
    return {x, w};
}

}  // namespace ellbill::quad
