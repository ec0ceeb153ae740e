#pragma once

#include <cmath>
#include <numbers>
#include <utility>

#include "ellbill/error.hpp"
#include "ellbill/quadrature.hpp"

namespace ellbill {

/// An ellipse x^2/a^2 + y^2/b^2 <= 1 with a > b > 0, together with the
/// elliptical-coordinate data (x, y) = (c cosh rho cos theta, c sinh rho sin theta).
template <typename Scalar>
class BasicEllipse {
public:
    BasicEllipse(Scalar a, Scalar b) : a_(a), b_(b) {
        if (!(b > 0) || !(a > b)) fail(ErrorCode::DegenerateEllipse, "require a > b > 0");
        c_ = std::sqrt((a - b) * (a + b));
        rho_max_ = std::atanh(b / a);  // tanh(rho_max) = b/a
    }

    Scalar a() const { return a_; }
    Scalar b() const { return b_; }
    Scalar c() const { return c_; }
    Scalar rho_max() const { return rho_max_; }
    Scalar eccentricity() const { return c_ / a_; }
    /// cosh^2(rho_max) = a^2/c^2, the top of the action interval.
    Scalar cosh2_rho_max() const { return (a_ * a_) / (c_ * c_); }
    Scalar tanh_rho_max() const { return b_ / a_; }

private:
    Scalar a_, b_, c_, rho_max_;
};

using EllipseGeometry = BasicEllipse<double>;

template <typename Scalar>
BasicEllipse<Scalar> make_ellipse(Scalar a, Scalar b) {
    return BasicEllipse<Scalar>(a, b);
}

inline EllipseGeometry make_ellipse(double a, double b) { return EllipseGeometry(a, b); }

/// Wrap an angle into [0, 2pi).
template <typename Scalar>
Scalar wrap_angle(Scalar theta) {
    constexpr Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
    Scalar r = std::fmod(theta, two_pi);
    if (r < 0) r += two_pi;
    if (r >= two_pi) r -= two_pi;
    return r;
}

template <typename Scalar>
std::pair<Scalar, Scalar> elliptical_to_cartesian(const BasicEllipse<Scalar>& g, Scalar rho, Scalar theta) {
    if (!(rho >= 0) || rho > g.rho_max() * (1 + Scalar(1e-14)))
        fail(ErrorCode::OutOfRange, "rho outside [0, rho_max]");
    const Scalar c = g.c();
    return {c * std::cosh(rho) * std::cos(theta), c * std::sinh(rho) * std::sin(theta)};
}

/// Boundary point for angle theta; uses (a cos, b sin) so the vertex values are exact.
template <typename Scalar>
std::pair<Scalar, Scalar> boundary_point(const BasicEllipse<Scalar>& g, Scalar theta) {
    return {g.a() * std::cos(theta), g.b() * std::sin(theta)};
}

/// ds/dtheta on the boundary: c sqrt(cosh^2 rho_max - cos^2 theta).
template <typename Scalar>
Scalar boundary_speed(const BasicEllipse<Scalar>& g, Scalar theta) {
    const Scalar s = std::sin(theta);
    const Scalar cth = std::cos(theta);
    // a^2 sin^2 + b^2 cos^2 equals c^2 (cosh^2 rho_max - cos^2 theta) without cancellation.
    return std::sqrt(g.a() * g.a() * s * s + g.b() * g.b() * cth * cth);
}

/// Arclength from theta = 0 to theta (theta may exceed 2pi or be negative).
template <typename Scalar>
Scalar arclength(const BasicEllipse<Scalar>& g, Scalar theta, Scalar tol = Scalar(1e-13)) {
    auto speed = [&](Scalar t) { return boundary_speed(g, t); };
    return quad::gauss_kronrod(speed, Scalar(0), theta, tol, tol).value;
}

template <typename Scalar>
Scalar perimeter(const BasicEllipse<Scalar>& g) {
    constexpr Scalar half_pi = std::numbers::pi_v<Scalar> / 2;
    auto speed = [&](Scalar t) { return boundary_speed(g, t); };
    return 4 * quad::gauss_kronrod(speed, Scalar(0), half_pi, Scalar(1e-14), Scalar(1e-14)).value;
}

}  // namespace ellbill
