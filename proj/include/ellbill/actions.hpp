#pragma once

#include <vector>

#include "ellbill/billiard.hpp"
#include "ellbill/geometry.hpp"

namespace ellbill {

/// Classical actions on the energy shell H = 1 at separation constant alpha.
struct ActionValue {
    double alpha = 0;
    double I_rho = 0;
    double I_theta = 0;
    Branch branch = Branch::Outside;
};

/// I_theta(alpha) = (c/pi) int_{cos^2 <= alpha, 0 <= theta <= pi} sqrt(alpha - cos^2 theta) dtheta.
double action_angular(const EllipseGeometry& g, double alpha, double tol = 1e-13);

/// I_rho(alpha) = (c/pi) int_{cosh^2 rho >= alpha, 0 <= rho <= rho_max} sqrt(cosh^2 rho - alpha) drho.
double action_radial(const EllipseGeometry& g, double alpha, double tol = 1e-13);

ActionValue actions_at(const EllipseGeometry& g, double alpha);

/// A0 = I_rho / I_theta. Throws DivisionDegenerate when I_theta vanishes.
double action_ratio_A0(const EllipseGeometry& g, double alpha);

/// Truncated alpha interval of a branch: [eps, 1-eps] or [1+eps, cosh^2 rho_max - eps].
struct AlphaInterval {
    double lo = 0;
    double hi = 0;
};

AlphaInterval branch_interval(const EllipseGeometry& g, Branch branch, double eps_sep = kDefaultEpsSep);

/// Eligible sector K1 <= m/n <= K2: the range of A0 over the truncated branch interval.
struct Sector {
    double k1 = 0;
    double k2 = 0;
    bool contains(double r) const { return r >= k1 && r <= k2; }
};

Sector eligible_sector(const EllipseGeometry& g, Branch branch, double eps_sep = kDefaultEpsSep);

/// Inverse of A0 on a branch: alpha with A0(alpha) = r. Throws OutOfSector.
double invert_A0(const EllipseGeometry& g, double r, Branch branch, double eps_sep = kDefaultEpsSep,
                 double alpha_tol = 1e-13);

/// Samples of A0 on a grid, used to report monotonicity per branch.
struct MonotonicityReport {
    std::vector<double> alpha;
    std::vector<double> a0;
    bool strictly_decreasing = true;
    bool strictly_increasing = true;
};

MonotonicityReport scan_A0(const EllipseGeometry& g, Branch branch, std::size_t n, double eps_sep = kDefaultEpsSep);

}  // namespace ellbill
