#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "ellbill/geometry.hpp"

namespace ellbill {

inline constexpr double kDefaultEpsSep = 1e-3;
inline constexpr double kDefaultEpsGlance = 1e-9;

/// A point (theta, p_theta) of the coball bundle of the boundary.
struct BoundaryPhasePoint {
    double theta = 0;
    double p_theta = 0;
};

enum class CausticClass { HyperbolicCaustic, Separatrix, EllipticCaustic, MinorAxis, BoundaryGlide };

std::string_view caustic_name(CausticClass c);

enum class Branch { Inside, Outside };

std::string_view branch_name(Branch b);

struct Orbit {
    std::vector<BoundaryPhasePoint> points;
    std::size_t n_steps = 0;
};

/// eta = p_theta / boundary_speed, the tangential component of the unit direction.
double eta(const EllipseGeometry& g, const BoundaryPhasePoint& p);

/// I = p_theta^2/c^2 + cos^2 theta.
double action_I(const EllipseGeometry& g, const BoundaryPhasePoint& p);

BoundaryPhasePoint from_eta(const EllipseGeometry& g, double theta, double eta);

/// Point on the level I = alpha above theta; sign selects the momentum sheet.
/// Throws OutOfRange when cos^2 theta > alpha.
BoundaryPhasePoint on_level(const EllipseGeometry& g, double alpha, double theta, int sign = +1);

CausticClass classify_level(const EllipseGeometry& g, double alpha, double eps_sep = kDefaultEpsSep);

/// Branch of a level away from the separatrix band; throws SeparatrixLevel inside the band
/// and OutOfActionInterval outside (eps_sep, cosh^2 rho_max - eps_sep).
Branch level_branch(const EllipseGeometry& g, double alpha, double eps_sep = kDefaultEpsSep);

/// One application of the billiard map: follow the chord, reflect at the wall.
BoundaryPhasePoint billiard_step(const EllipseGeometry& g, const BoundaryPhasePoint& p,
                                 double eps_glance = kDefaultEpsGlance);

Orbit iterate_billiard(const EllipseGeometry& g, const BoundaryPhasePoint& start, std::size_t n_steps);

/// (theta, p) -> (-theta, -p): reflection y -> -y.
BoundaryPhasePoint reflect_y(const BoundaryPhasePoint& p);
/// (theta, p) -> (pi - theta, -p): reflection x -> -x.
BoundaryPhasePoint reflect_x(const BoundaryPhasePoint& p);
/// (theta, p) -> (theta, -p).
BoundaryPhasePoint flip_momentum(const BoundaryPhasePoint& p);

struct LerayDensity {
    double value = 0;  ///< +infinity at a turning point
    bool turning_point = false;
};

/// dmu_alpha / dtheta = (c/2) (alpha - cos^2 theta)_+^{-1/2} on one momentum sheet.
LerayDensity leray_density(const EllipseGeometry& g, double alpha, double theta);

/// Integral of f(theta) against the Leray measure over the whole level set
/// I = alpha (both momentum sheets). Endpoint singularities are removed by
/// cos theta = sqrt(alpha) sin t inside the separatrix; outside the integrand
/// is smooth and periodic.
double level_integral(const EllipseGeometry& g, double alpha, const std::function<double(double)>& f,
                      double tol = 1e-13);

/// Total Leray mass of the level set, closed form 4cK(sqrt alpha) inside and
/// 4cK(1/sqrt alpha)/sqrt(alpha) outside.
double leray_mass(const EllipseGeometry& g, double alpha);

/// Rotation number from the elliptic-integral formula, on the angle scale
/// (values in (0, pi]).
double rotation_number(const EllipseGeometry& g, double alpha, double eps_sep = kDefaultEpsSep);

/// Uniformizing angle in [0, 1) on the invariant curve through p, built from
/// the normalized cumulative Leray measure. For alpha < 1 it lives on the
/// quotient by (theta, p) -> (theta + pi, p), which commutes with the map.
double uniformizing_angle(const EllipseGeometry& g, double alpha, const BoundaryPhasePoint& p);

struct EmpiricalRotation {
    double alpha = 0;
    std::size_t steps = 0;
    double mean_advance = 0;  ///< mean folded advance of the uniformizing angle, in (0, 1/2]
    double std_advance = 0;
    double max_action_drift = 0;
};

/// Iterates the map from a point on the level and measures the per-step
/// advance of the uniformizing angle (folded to the orientation-free range (0, 1/2]).
EmpiricalRotation empirical_rotation(const EllipseGeometry& g, double alpha, std::size_t n_steps,
                                     double eps_sep = kDefaultEpsSep);

/// Constant relating the formula to the measured advance: r_formula = kappa * advance.
struct RotationCalibration {
    double kappa_outside = 0;
    double kappa_inside = 0;
    double reference_outside = 0;
    double reference_inside = 0;
    std::size_t steps = 0;
};

RotationCalibration calibrate_rotation(const EllipseGeometry& g, std::size_t n_steps = 2000,
                                       double eps_sep = kDefaultEpsSep);

}  // namespace ellbill
