#include "ellbill/billiard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ellbill/elliptic.hpp"
#include "ellbill/quadrature.hpp"

namespace ellbill {

namespace {

constexpr double kPi = std::numbers::pi;

struct Vec2 {
    double x, y;
};

double dot(Vec2 u, Vec2 v) { return u.x * v.x + u.y * v.y; }

struct Frame {
    Vec2 point, tangent, normal;  // unit tangent (ccw), unit inward normal
    double speed;
};

Frame boundary_frame(const EllipseGeometry& g, double theta) {
    const double s = std::sin(theta), co = std::cos(theta);
    const double speed = boundary_speed(g, theta);
    Vec2 t{-g.a() * s / speed, g.b() * co / speed};
    return {{g.a() * co, g.b() * s}, t, {-t.y, t.x}, speed};
}

}  // namespace

std::string_view caustic_name(CausticClass c) {
    switch (c) {
        case CausticClass::HyperbolicCaustic: return "HyperbolicCaustic";
        case CausticClass::Separatrix: return "Separatrix";
        case CausticClass::EllipticCaustic: return "EllipticCaustic";
        case CausticClass::MinorAxis: return "MinorAxis";
        case CausticClass::BoundaryGlide: return "BoundaryGlide";
    }
    return "Unknown";
}

std::string_view branch_name(Branch b) { return b == Branch::Inside ? "inside" : "outside"; }

double eta(const EllipseGeometry& g, const BoundaryPhasePoint& p) { return p.p_theta / boundary_speed(g, p.theta); }

double action_I(const EllipseGeometry& g, const BoundaryPhasePoint& p) {
    const double co = std::cos(p.theta);
    return p.p_theta * p.p_theta / (g.c() * g.c()) + co * co;
}

BoundaryPhasePoint from_eta(const EllipseGeometry& g, double theta, double eta_value) {
    if (std::abs(eta_value) > 1) fail(ErrorCode::OutOfRange, "|eta| > 1");
    return {wrap_angle(theta), eta_value * boundary_speed(g, theta)};
}

BoundaryPhasePoint on_level(const EllipseGeometry& g, double alpha, double theta, int sign) {
    const double co = std::cos(theta);
    const double gap = alpha - co * co;
    if (gap < -1e-14) fail(ErrorCode::OutOfRange, "theta not in the support of the level");
    const double p = g.c() * std::sqrt(std::max(gap, 0.0));
    return {wrap_angle(theta), sign >= 0 ? p : -p};
}

CausticClass classify_level(const EllipseGeometry& g, double alpha, double eps_sep) {
    const double top = g.cosh2_rho_max();
    if (alpha >= top - eps_sep) return CausticClass::BoundaryGlide;
    if (std::abs(alpha - 1) <= eps_sep) return CausticClass::Separatrix;
    if (alpha <= eps_sep) return CausticClass::MinorAxis;
    return alpha < 1 ? CausticClass::HyperbolicCaustic : CausticClass::EllipticCaustic;
}

Branch level_branch(const EllipseGeometry& g, double alpha, double eps_sep) {
    switch (classify_level(g, alpha, eps_sep)) {
        case CausticClass::HyperbolicCaustic: return Branch::Inside;
        case CausticClass::EllipticCaustic: return Branch::Outside;
        case CausticClass::Separatrix: fail(ErrorCode::SeparatrixLevel, "level within eps_sep of the separatrix");
        default: fail(ErrorCode::OutOfActionInterval, "level outside the truncated action interval");
    }
}

BoundaryPhasePoint billiard_step(const EllipseGeometry& g, const BoundaryPhasePoint& p, double eps_glance) {
    const Frame f = boundary_frame(g, p.theta);
    const double e = p.p_theta / f.speed;
    if (!(std::abs(e) < 1 - eps_glance)) fail(ErrorCode::GlancingRay, "|eta| >= 1 - eps_glance");
    const double normal_part = std::sqrt((1 - e) * (1 + e));
    const Vec2 d{e * f.tangent.x + normal_part * f.normal.x, e * f.tangent.y + normal_part * f.normal.y};

    // Line X + s d meets the ellipse at s = 0 and at the root below.
    const double ia2 = 1 / (g.a() * g.a()), ib2 = 1 / (g.b() * g.b());
    const double quad_a = d.x * d.x * ia2 + d.y * d.y * ib2;
    const double quad_b = 2 * (f.point.x * d.x * ia2 + f.point.y * d.y * ib2);
    const double s = -quad_b / quad_a;
    const Vec2 hit{f.point.x + s * d.x, f.point.y + s * d.y};
    const double theta_next = wrap_angle(std::atan2(hit.y / g.b(), hit.x / g.a()));

    const Frame h = boundary_frame(g, theta_next);
    const double dn = dot(d, h.normal);
    const Vec2 reflected{d.x - 2 * dn * h.normal.x, d.y - 2 * dn * h.normal.y};
    const double eta_next = std::clamp(dot(reflected, h.tangent), -1.0, 1.0);
    return {theta_next, eta_next * h.speed};
}

Orbit iterate_billiard(const EllipseGeometry& g, const BoundaryPhasePoint& start, std::size_t n_steps) {
    Orbit orbit;
    orbit.points.reserve(n_steps + 1);
    orbit.points.push_back(start);
    BoundaryPhasePoint cur = start;
    for (std::size_t k = 0; k < n_steps; ++k) {
        cur = billiard_step(g, cur);
        orbit.points.push_back(cur);
    }
    orbit.n_steps = n_steps;
    return orbit;
}

BoundaryPhasePoint reflect_y(const BoundaryPhasePoint& p) { return {wrap_angle(-p.theta), -p.p_theta}; }
BoundaryPhasePoint reflect_x(const BoundaryPhasePoint& p) { return {wrap_angle(kPi - p.theta), -p.p_theta}; }
BoundaryPhasePoint flip_momentum(const BoundaryPhasePoint& p) { return {p.theta, -p.p_theta}; }

LerayDensity leray_density(const EllipseGeometry& g, double alpha, double theta) {
    const double co = std::cos(theta);
    const double gap = alpha - co * co;
    const double scale = std::max(1.0, std::abs(alpha));
    if (std::abs(gap) <= 1e-14 * scale) return {std::numeric_limits<double>::infinity(), true};
    if (gap < 0) return {0.0, false};
    return {0.5 * g.c() / std::sqrt(gap), false};
}

double level_integral(const EllipseGeometry& g, double alpha, const std::function<double(double)>& f, double tol) {
    if (alpha < 0) fail(ErrorCode::OutOfActionInterval, "negative level");
    const double c = g.c();
    if (alpha > 1) {
        auto integrand = [&](double th) {
            const double co = std::cos(th);
            return f(th) / std::sqrt(alpha - co * co);
        };
        // Two sheets, each carrying (c/2) dtheta / sqrt(alpha - cos^2).
        return c * quad::gauss_kronrod(integrand, 0.0, 2 * kPi, tol, tol).value;
    }
    if (alpha == 1) fail(ErrorCode::SeparatrixLevel, "Leray measure is singular on the separatrix");
    const double root = std::sqrt(alpha);
    auto integrand = [&](double t) {
        const double st = std::sin(t);
        const double upper = std::acos(std::clamp(root * st, -1.0, 1.0));
        const double w = 1 / std::sqrt(1 - alpha * st * st);
        return (f(upper) + f(2 * kPi - upper)) * w;
    };
    return c * quad::gauss_kronrod(integrand, -kPi / 2, kPi / 2, tol, tol).value;
}

double leray_mass(const EllipseGeometry& g, double alpha) {
    if (alpha < 0 || alpha > g.cosh2_rho_max()) fail(ErrorCode::OutOfActionInterval, "level outside the action interval");
    if (alpha == 1) fail(ErrorCode::SeparatrixLevel, "infinite mass on the separatrix");
    if (alpha < 1) return 4 * g.c() * elliptic_k(std::sqrt(alpha));
    return 4 * g.c() * elliptic_k(1 / std::sqrt(alpha)) / std::sqrt(alpha);
}

double rotation_number(const EllipseGeometry& g, double alpha, double eps_sep) {
    const Branch branch = level_branch(g, alpha, eps_sep);
    const double top = g.cosh2_rho_max();
    const double th = g.tanh_rho_max();
    const double a_part = top - alpha;
    const double b_part = alpha * th * th;
    // The sine of the elliptic amplitude is the published arcsin argument; its
    // cosine is an exact square, which fixes the branch on [0, pi].
    if (branch == Branch::Outside) {
        const double k = 1 / std::sqrt(alpha);
        const double psi = std::atan2(2 * std::sqrt(a_part * b_part), b_part - a_part);
        return kPi / (2 * elliptic_k(k)) * elliptic_f(psi, k);
    }
    const double k = std::sqrt(alpha);
    const double psi = std::atan2(2 * th * std::sqrt(a_part), top - 2 + alpha / top);
    return kPi / (2 * elliptic_k(k)) * elliptic_f(psi, k);
}

double uniformizing_angle(const EllipseGeometry& g, double alpha, const BoundaryPhasePoint& p) {
    (void)g;
    if (alpha > 1) {
        const double k = 1 / std::sqrt(alpha);
        const double quarter = elliptic_k(k);
        // int_0^theta dtheta / sqrt(alpha - cos^2) = (F(theta - pi/2, k) + K) / sqrt(alpha)
        const double th = wrap_angle(p.theta);
        const double iota = (elliptic_f(th - kPi / 2, k) + quarter) / (4 * quarter);
        const double unit = std::clamp(iota, 0.0, 1.0);
        const double oriented = p.p_theta >= 0 ? unit : 1 - unit;
        return oriented >= 1 ? oriented - 1 : oriented;
    }
    const double k = std::sqrt(alpha);
    const double quarter = elliptic_k(k);
    double th = wrap_angle(p.theta);
    if (th > kPi) th -= kPi;  // quotient by theta -> theta + pi
    const double t = std::asin(std::clamp(std::cos(th) / k, -1.0, 1.0));
    // Measure from the left turning point theta_1 = arccos(sqrt alpha), normalized by 2K.
    const double along = (quarter - elliptic_f(t, k)) / (2 * quarter);
    const double iota = p.p_theta >= 0 ? along / 2 : 1 - along / 2;
    return iota >= 1 ? iota - 1 : iota;
}

EmpiricalRotation empirical_rotation(const EllipseGeometry& g, double alpha, std::size_t n_steps, double eps_sep) {
    const Branch branch = level_branch(g, alpha, eps_sep);
    const double theta0 = branch == Branch::Outside ? 0.3 : kPi / 2 + 0.01;
    BoundaryPhasePoint cur = on_level(g, alpha, theta0, +1);
    EmpiricalRotation out;
    out.alpha = alpha;
    out.steps = n_steps;
    double iota = uniformizing_angle(g, alpha, cur);
    double sum = 0, sum_sq = 0;
    std::vector<double> advances;
    advances.reserve(n_steps);
    for (std::size_t k = 0; k < n_steps; ++k) {
        cur = billiard_step(g, cur);
        out.max_action_drift = std::max(out.max_action_drift, std::abs(action_I(g, cur) - alpha));
        const double next = uniformizing_angle(g, alpha, cur);
        double delta = next - iota;
        delta -= std::floor(delta);
        delta = std::min(delta, 1 - delta);
        advances.push_back(delta);
        sum += delta;
        iota = next;
    }
    out.mean_advance = sum / static_cast<double>(n_steps);
    for (double d : advances) sum_sq += (d - out.mean_advance) * (d - out.mean_advance);
    out.std_advance = std::sqrt(sum_sq / static_cast<double>(n_steps));
    return out;
}

RotationCalibration calibrate_rotation(const EllipseGeometry& g, std::size_t n_steps, double eps_sep) {
    RotationCalibration cal;
    cal.steps = n_steps;
    cal.reference_outside = 0.5 * (1 + g.cosh2_rho_max());
    cal.reference_inside = 0.5;
    cal.kappa_outside = rotation_number(g, cal.reference_outside, eps_sep) /
                        empirical_rotation(g, cal.reference_outside, n_steps, eps_sep).mean_advance;
    cal.kappa_inside = rotation_number(g, cal.reference_inside, eps_sep) /
                       empirical_rotation(g, cal.reference_inside, n_steps, eps_sep).mean_advance;
    return cal;
}

}  // namespace ellbill
