#include "ellbill/mathieu.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "ellbill/ode.hpp"
#include "ellbill/roots.hpp"

namespace ellbill {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxBasis = 1 << 14;

// Tridiagonal form of  d * K^2 + e * I + t * C  in an orthonormal trigonometric
// subspace, where K^2 is -d^2/dtheta^2 and C multiplication by cos 2theta.
struct Tridiagonal {
    Eigen::VectorXd diag;
    Eigen::VectorXd off;
};

Tridiagonal build(TrigBasis basis, int size, double d, double e, double t) {
    Tridiagonal m{Eigen::VectorXd(size), Eigen::VectorXd(std::max(size - 1, 0))};
    for (int j = 0; j < size; ++j) {
        const double f = basis_frequency(basis, j);
        m.diag[j] = d * f * f + e;
    }
    if (basis == TrigBasis::CosOdd) m.diag[0] += 0.5 * t;
    if (basis == TrigBasis::SinOdd) m.diag[0] -= 0.5 * t;
    for (int j = 0; j + 1 < size; ++j) m.off[j] = 0.5 * t;
    if (basis == TrigBasis::CosEven && size > 1) m.off[0] = t / std::numbers::sqrt2;
    return m;
}

struct Eigenpair {
    double value = 0;
    Eigen::VectorXd vector;
    TruncationInfo info;
};

Eigenpair solve_truncated(TrigBasis basis, int k, int start, double d, double e, double t, double tol, bool vectors) {
    int size = std::max(start, k + 8);
    double previous = 0;
    bool have_previous = false;
    while (size <= kMaxBasis) {
        const Tridiagonal m = build(basis, size, d, e, t);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(m.diag, m.off, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) fail(ErrorCode::TruncationNotConverged, "tridiagonal eigensolver failed");
        const double value = es.eigenvalues()[k];
        if (have_previous && std::abs(value - previous) < tol * std::max(1.0, std::abs(value))) {
            Eigenpair out;
            out.value = value;
            out.info = {size, std::abs(value - previous)};
            if (vectors) out.vector = es.eigenvectors().col(k);
            return out;
        }
        previous = value;
        have_previous = true;
        size *= 2;
    }
    fail(ErrorCode::TruncationNotConverged, "angular basis did not stabilize the characteristic value");
}

double standard(TrigBasis basis, int k, double q) {
    const int start = 16 + k + static_cast<int>(std::ceil(4 * std::sqrt(std::abs(q))));
    return solve_truncated(basis, k, start, 1.0, 0.0, 2 * q, 1e-13, false).value;
}

int angular_start(const EllipseGeometry& g, double hbar, int k) {
    return 16 + k + static_cast<int>(std::min(4.0 * kMaxBasis, std::ceil(2 * g.c() / hbar)));
}

}  // namespace

std::string_view parity_name(Parity p) { return p == Parity::Even ? "even" : "odd"; }
std::string_view bc_name(BoundaryCondition bc) { return bc == BoundaryCondition::Dirichlet ? "dirichlet" : "neumann"; }

BasisSlot basis_slot(const AngularMode& mode) {
    const int n = mode.n;
    if (mode.parity_y == Parity::Even) {
        if (n < 0) fail(ErrorCode::InvalidArgument, "even angular index must be >= 0");
        return n % 2 == 0 ? BasisSlot{TrigBasis::CosEven, n / 2} : BasisSlot{TrigBasis::CosOdd, n / 2};
    }
    if (n < 1) fail(ErrorCode::InvalidArgument, "odd angular index must be >= 1");
    return n % 2 == 1 ? BasisSlot{TrigBasis::SinOdd, n / 2} : BasisSlot{TrigBasis::SinEven, n / 2 - 1};
}

int basis_frequency(TrigBasis basis, int j) {
    switch (basis) {
        case TrigBasis::CosEven: return 2 * j;
        case TrigBasis::CosOdd:
        case TrigBasis::SinOdd: return 2 * j + 1;
        case TrigBasis::SinEven: return 2 * j + 2;
    }
    return 0;
}

double mathieu_a(int n, double q) {
    const auto slot = basis_slot({Parity::Even, n});
    return standard(slot.basis, slot.k, q);
}

double mathieu_b(int n, double q) {
    const auto slot = basis_slot({Parity::Odd, n});
    return standard(slot.basis, slot.k, q);
}

double angular_characteristic(const EllipseGeometry& g, double hbar, const AngularMode& mode, TruncationInfo* info) {
    if (!(hbar > 0)) fail(ErrorCode::InvalidArgument, "hbar must be positive");
    const auto slot = basis_slot(mode);
    const double h2 = hbar * hbar / (g.c() * g.c());
    const auto pair = solve_truncated(slot.basis, slot.k, angular_start(g, hbar, slot.k), h2, 0.5, 0.5, 1e-12, false);
    if (info) *info = pair.info;
    return pair.value;
}

AngularFunction::AngularFunction(AngularMode mode, TrigBasis basis, double hbar, double alpha, Eigen::VectorXd coeffs)
    : mode_(mode), basis_(basis), hbar_(hbar), alpha_(alpha), coeffs_(std::move(coeffs)) {}

double AngularFunction::eval(double theta, int order) const {
    const bool cosine = basis_ == TrigBasis::CosEven || basis_ == TrigBasis::CosOdd;
    const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
    double sum = 0;
    for (int j = 0; j < coeffs_.size(); ++j) {
        const double f = basis_frequency(basis_, j);
        const double norm = (f == 0) ? 1.0 / std::sqrt(2 * kPi) : inv_sqrt_pi;
        const double ph = f * theta;
        double term = 0;
        switch (order) {
            case 0: term = cosine ? std::cos(ph) : std::sin(ph); break;
            case 1: term = cosine ? -f * std::sin(ph) : f * std::cos(ph); break;
            default: term = cosine ? -f * f * std::cos(ph) : -f * f * std::sin(ph); break;
        }
        sum += coeffs_[j] * norm * term;
    }
    return sum;
}

double AngularFunction::value(double theta) const { return eval(theta, 0); }
double AngularFunction::derivative(double theta) const { return eval(theta, 1); }
double AngularFunction::second_derivative(double theta) const { return eval(theta, 2); }

AngularFunction angular_function(const EllipseGeometry& g, double hbar, const AngularMode& mode) {
    if (!(hbar > 0)) fail(ErrorCode::InvalidArgument, "hbar must be positive");
    const auto slot = basis_slot(mode);
    const double h2 = hbar * hbar / (g.c() * g.c());
    auto pair = solve_truncated(slot.basis, slot.k, angular_start(g, hbar, slot.k), h2, 0.5, 0.5, 1e-12, true);
    Eigen::Index big = 0;
    pair.vector.cwiseAbs().maxCoeff(&big);
    if (pair.vector[big] < 0) pair.vector = -pair.vector;
    return AngularFunction(mode, slot.basis, hbar, pair.value, std::move(pair.vector));
}

Eigen::VectorXd angular_eigenfunction(const EllipseGeometry& g, double hbar, const AngularMode& mode,
                                      const std::vector<double>& grid) {
    if (grid.size() < static_cast<std::size_t>(20 * (mode.n + 1)))
        fail(ErrorCode::GridTooCoarse, "angular grid needs at least 20 (n + 1) samples");
    const auto fn = angular_function(g, hbar, mode);
    Eigen::VectorXd out(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) out[static_cast<Eigen::Index>(i)] = fn.value(grid[i]);
    return out;
}

namespace {

struct RadialScale {
    double k2;  // (c/hbar)^2
    double s;   // Prufer scale
};

RadialScale radial_scale(const EllipseGeometry& g, double hbar, double alpha) {
    const double k2 = g.c() * g.c() / (hbar * hbar);
    const double spread = std::max({std::abs(1 - alpha), std::abs(g.cosh2_rho_max() - alpha), 1e-3});
    return {k2, std::sqrt(k2 * spread)};
}

}  // namespace

double radial_end_phase(const EllipseGeometry& g, double hbar, Parity parity, double alpha) {
    if (!(hbar > 0)) fail(ErrorCode::InvalidArgument, "hbar must be positive");
    const auto sc = radial_scale(g, hbar, alpha);
    using V = Eigen::Matrix<double, 1, 1>;
    auto rhs = [&](double rho, const V& y) {
        const double ch = std::cosh(rho);
        const double q = sc.k2 * (ch * ch - alpha);
        const double cp = std::cos(y[0]), sp = std::sin(y[0]);
        return V(sc.s * cp * cp + q / sc.s * sp * sp);
    };
    V y(parity == Parity::Even ? kPi / 2 : 0.0);
    double h = 0.05 / std::max(1.0, sc.s);
    y = ode::integrate(rhs, 0.0, g.rho_max(), y, h, ode::Tolerance{1e-13, 1e-13});
    return y[0];
}

double radial_target_phase(const RadialMode& mode) {
    int interior = 0;
    if (mode.parity == Parity::Even) {
        if (mode.m < 0) fail(ErrorCode::InvalidArgument, "even radial index must be >= 0");
        interior = mode.m;
    } else {
        if (mode.m < 1) fail(ErrorCode::InvalidArgument, "odd radial index must be >= 1");
        interior = mode.m - 1;
    }
    return mode.bc == BoundaryCondition::Dirichlet ? (interior + 1) * kPi : interior * kPi + kPi / 2;
}

double radial_characteristic(const EllipseGeometry& g, double hbar, const RadialMode& mode, double alpha_tol) {
    const double target = radial_target_phase(mode);
    auto f = [&](double alpha) { return radial_end_phase(g, hbar, mode.parity, alpha) - target; };
    const double hi = g.cosh2_rho_max() + 1.0;
    const double f_hi = f(hi);
    if (!(f_hi < 0)) fail(ErrorCode::ShootingBracketFailed, "upper alpha does not undershoot the target phase");
    double lo = g.cosh2_rho_max() - 1.0;
    double f_lo = f(lo);
    double span = 1.0;
    int guard = 0;
    while (f_lo < 0) {
        if (++guard > 80) fail(ErrorCode::ShootingBracketFailed, "could not bracket the radial characteristic value");
        span *= 2;
        lo = g.cosh2_rho_max() - span;
        f_lo = f(lo);
    }
    // Tighten the upper end to the previous trial so the bracket stays narrow.
    double top = hi, f_top = f_hi;
    if (span > 1.0) {
        top = g.cosh2_rho_max() - span / 2;
        f_top = f(top);
    }
    return brent(f, lo, top, f_lo, f_top, alpha_tol).x;
}

RadialFunction radial_eigenfunction(const EllipseGeometry& g, double hbar, const RadialMode& mode, double alpha,
                                    const std::vector<double>& grid, double bc_tol) {
    const auto sc = radial_scale(g, hbar, alpha);
    using V = Eigen::Matrix<double, 3, 1>;
    auto rhs = [&](double rho, const V& y) {
        const double ch = std::cosh(rho);
        return V(y[1], -sc.k2 * (ch * ch - alpha) * y[0], y[0] * y[0]);
    };
    V y = mode.parity == Parity::Even ? V(1.0, 0.0, 0.0) : V(0.0, sc.s, 0.0);
    const ode::Tolerance tol{1e-13, 1e-300};
    RadialFunction out;
    out.grid = grid;
    out.values.reserve(grid.size());
    double x = 0, h = 0.05 / std::max(1.0, sc.s);
    for (double r : grid) {
        if (r < x - 1e-15 || r > g.rho_max() * (1 + 1e-14))
            fail(ErrorCode::OutOfRange, "radial grid must be ascending within [0, rho_max]");
        y = ode::integrate(rhs, x, r, y, h, tol);
        x = r;
        out.values.push_back(y[0]);
    }
    y = ode::integrate(rhs, x, g.rho_max(), y, h, tol);
    const double norm = std::sqrt(y[2]);
    for (double& v : out.values) v /= norm;
    out.F_end = y[0] / norm;
    out.dF_end = y[1] / norm;
    // Residual in amplitude-phase form, scale free.
    const double amp = std::hypot(y[0], y[1] / sc.s);
    out.boundary_residual =
        mode.bc == BoundaryCondition::Dirichlet ? std::abs(y[0]) / amp : std::abs(y[1] / sc.s) / amp;
    out.inner_residual = 0;  // the initial data satisfy the inner condition exactly
    if (out.boundary_residual > bc_tol)
        fail(ErrorCode::NotACharacteristicValue, "outer boundary condition not satisfied at this alpha");
    return out;
}

namespace {

// Integrates an even solution (1, 0) at alpha_a and an odd one (0, s) at
// alpha_b of y'' = k2 (V(x) - alpha) y over [0, x1], returning int y_a y_b.
template <typename Potential>
double cross_integral(Potential V, double k2, double s, double alpha_a, double alpha_b, double x1) {
    using S = Eigen::Matrix<double, 5, 1>;
    auto rhs = [&](double x, const S& y) {
        const double v = V(x);
        return S(y[1], k2 * (v - alpha_a) * y[0], y[3], k2 * (v - alpha_b) * y[2], y[0] * y[2]);
    };
    S y;
    y << 1.0, 0.0, 0.0, s, 0.0;
    double h = 0.05 / std::max(1.0, s);
    y = ode::integrate(rhs, 0.0, x1, y, h, ode::Tolerance{1e-13, 1e-300});
    return y[4];
}

}  // namespace

double angular_pair_gap(const EllipseGeometry& g, double hbar, int n) {
    if (n < 0) fail(ErrorCode::InvalidArgument, "pair index must be >= 0");
    const double alpha_a = angular_characteristic(g, hbar, {Parity::Even, n});
    const double alpha_b = angular_characteristic(g, hbar, {Parity::Odd, n + 1});
    const double k2 = g.c() * g.c() / (hbar * hbar);
    const double s = std::sqrt(k2);
    // Angular equation: G'' = k2 (cos^2 - alpha) G.
    const double cross = cross_integral([](double t) { return std::cos(t) * std::cos(t); }, k2, s, alpha_a, alpha_b, kPi / 2);
    return s / (k2 * cross);
}

double radial_pair_gap(const EllipseGeometry& g, double hbar, int m, BoundaryCondition bc) {
    if (m < 0) fail(ErrorCode::InvalidArgument, "pair index must be >= 0");
    const double alpha_a = radial_characteristic(g, hbar, {Parity::Even, m, bc});
    const double alpha_b = radial_characteristic(g, hbar, {Parity::Odd, m + 1, bc});
    const auto sc = radial_scale(g, hbar, alpha_a);
    // Radial equation: F'' = k2 (alpha - cosh^2) F, i.e. potential -cosh^2 and energy -alpha.
    const double cross = cross_integral([](double r) { return -std::cosh(r) * std::cosh(r); }, sc.k2, sc.s, -alpha_a,
                                        -alpha_b, g.rho_max());
    return -sc.s / (sc.k2 * cross);
}

int count_sign_changes(const std::vector<double>& v) {
    int count = 0;
    double last = 0;
    for (double x : v) {
        if (x == 0) continue;
        if (last != 0 && ((x > 0) != (last > 0))) ++count;
        last = x;
    }
    return count;
}

}  // namespace ellbill
