#include "ellbill/actions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ellbill/quadrature.hpp"
#include "ellbill/roots.hpp"

namespace ellbill {

namespace {
constexpr double kPi = std::numbers::pi;
}

double action_angular(const EllipseGeometry& g, double alpha, double tol) {
    if (alpha < 0 || alpha > g.cosh2_rho_max() * (1 + 1e-14))
        fail(ErrorCode::OutOfActionInterval, "alpha outside [0, cosh^2 rho_max]");
    if (alpha == 0) return 0;
    double integral = 0;
    if (alpha >= 1) {
        auto f = [&](double th) {
            const double co = std::cos(th);
            return std::sqrt(std::max(alpha - co * co, 0.0));
        };
        integral = quad::gauss_kronrod(f, 0.0, kPi, tol, tol).value;
    } else {
        // cos theta = sqrt(alpha) sin t removes the square-root endpoints.
        auto f = [&](double t) {
            const double st = std::sin(t), ct = std::cos(t);
            return alpha * ct * ct / std::sqrt(1 - alpha * st * st);
        };
        integral = quad::gauss_kronrod(f, -kPi / 2, kPi / 2, tol, tol).value;
    }
    return g.c() / kPi * integral;
}

double action_radial(const EllipseGeometry& g, double alpha, double tol) {
    const double top = g.cosh2_rho_max();
    if (alpha < 0 || alpha > top * (1 + 1e-14)) fail(ErrorCode::OutOfActionInterval, "alpha outside [0, cosh^2 rho_max]");
    if (alpha >= top) return 0;
    double integral = 0;
    if (alpha <= 1) {
        auto f = [&](double rho) {
            const double ch = std::cosh(rho);
            return std::sqrt(ch * ch - alpha);
        };
        integral = quad::gauss_kronrod(f, 0.0, g.rho_max(), tol, tol).value;
    } else {
        // cosh rho = sqrt(alpha) cosh tau moves the turning point to tau = 0.
        const double root = std::sqrt(alpha);
        const double tau_max = std::acosh(std::cosh(g.rho_max()) / root);
        auto f = [&](double tau) {
            const double sh = std::sinh(tau), ch = std::cosh(tau);
            return alpha * sh * sh / std::sqrt(alpha * ch * ch - 1);
        };
        integral = quad::gauss_kronrod(f, 0.0, tau_max, tol, tol).value;
    }
    return g.c() / kPi * integral;
}

ActionValue actions_at(const EllipseGeometry& g, double alpha) {
    return {alpha, action_radial(g, alpha), action_angular(g, alpha), alpha < 1 ? Branch::Inside : Branch::Outside};
}

double action_ratio_A0(const EllipseGeometry& g, double alpha) {
    const double it = action_angular(g, alpha);
    if (!(it > 1e-12 * g.c())) fail(ErrorCode::DivisionDegenerate, "I_theta vanishes near alpha = 0");
    return action_radial(g, alpha) / it;
}

AlphaInterval branch_interval(const EllipseGeometry& g, Branch branch, double eps_sep) {
    if (branch == Branch::Inside) return {eps_sep, 1 - eps_sep};
    return {1 + eps_sep, g.cosh2_rho_max() - eps_sep};
}

Sector eligible_sector(const EllipseGeometry& g, Branch branch, double eps_sep) {
    const auto iv = branch_interval(g, branch, eps_sep);
    const double lo = action_ratio_A0(g, iv.lo);
    const double hi = action_ratio_A0(g, iv.hi);
    return {std::min(lo, hi), std::max(lo, hi)};
}

double invert_A0(const EllipseGeometry& g, double r, Branch branch, double eps_sep, double alpha_tol) {
    const auto iv = branch_interval(g, branch, eps_sep);
    const double f_lo = action_ratio_A0(g, iv.lo) - r;
    const double f_hi = action_ratio_A0(g, iv.hi) - r;
    if (f_lo == 0) return iv.lo;
    if (f_hi == 0) return iv.hi;
    if ((f_lo > 0) == (f_hi > 0)) fail(ErrorCode::OutOfSector, "ratio outside the eligible sector of the branch");
    auto residual = [&](double alpha) { return action_ratio_A0(g, alpha) - r; };
    return brent(residual, iv.lo, iv.hi, f_lo, f_hi, alpha_tol).x;
}

MonotonicityReport scan_A0(const EllipseGeometry& g, Branch branch, std::size_t n, double eps_sep) {
    MonotonicityReport rep;
    const auto iv = branch_interval(g, branch, eps_sep);
    for (std::size_t i = 0; i < n; ++i) {
        const double alpha = iv.lo + (iv.hi - iv.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        rep.alpha.push_back(alpha);
        rep.a0.push_back(action_ratio_A0(g, alpha));
        if (i > 0) {
            if (!(rep.a0[i] < rep.a0[i - 1])) rep.strictly_decreasing = false;
            if (!(rep.a0[i] > rep.a0[i - 1])) rep.strictly_increasing = false;
        }
    }
    return rep;
}

}  // namespace ellbill
