#pragma once

#include <Eigen/Core>
#include <string_view>
#include <vector>

#include "ellbill/geometry.hpp"

namespace ellbill {

enum class Parity { Even, Odd };
enum class BoundaryCondition { Dirichlet, Neumann };

std::string_view parity_name(Parity p);
std::string_view bc_name(BoundaryCondition bc);

/// The four trigonometric subspaces the angular problem splits into.
enum class TrigBasis { CosEven, CosOdd, SinOdd, SinEven };

/// Angular mode: parity in theta (equivalently y) and index n = number of
/// zeros on [0, pi). Even modes have n >= 0, odd modes n >= 1.
struct AngularMode {
    Parity parity_y = Parity::Even;
    int n = 0;
};

/// Radial mode: parity at the focal segment, index m and the outer condition.
/// The index counts zeros on [0, rho_max), the origin included for odd modes,
/// so even modes have m >= 0 and odd modes m >= 1.
struct RadialMode {
    Parity parity = Parity::Even;
    int m = 0;
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
};

/// Basis subspace and position within it for an angular mode.
struct BasisSlot {
    TrigBasis basis;
    int k;
};
BasisSlot basis_slot(const AngularMode& mode);

/// Angular frequency of basis element j in a subspace (0, 2, 4.. / 1, 3, 5.. / 2, 4, ..).
int basis_frequency(TrigBasis basis, int j);

/// Classical Mathieu characteristic numbers a_n(q), b_n(q) of the standard
/// form y'' + (a - 2q cos 2x) y = 0.
double mathieu_a(int n, double q);
double mathieu_b(int n, double q);

struct TruncationInfo {
    int size = 0;
    double last_change = 0;
};

/// alpha with -(hbar^2/c^2) G'' + cos^2(theta) G = alpha G and G of the given mode.
double angular_characteristic(const EllipseGeometry& g, double hbar, const AngularMode& mode,
                              TruncationInfo* info = nullptr);

/// Trigonometric-series eigenfunction, unit L2 norm on [0, 2pi].
class AngularFunction {
public:
    AngularFunction() = default;
    AngularFunction(AngularMode mode, TrigBasis basis, double hbar, double alpha, Eigen::VectorXd coeffs);

    const AngularMode& mode() const { return mode_; }
    TrigBasis basis() const { return basis_; }
    double hbar() const { return hbar_; }
    double alpha() const { return alpha_; }
    const Eigen::VectorXd& coefficients() const { return coeffs_; }

    double value(double theta) const;
    double derivative(double theta) const;
    double second_derivative(double theta) const;

private:
    double eval(double theta, int order) const;
    AngularMode mode_{};
    TrigBasis basis_ = TrigBasis::CosEven;
    double hbar_ = 0;
    double alpha_ = 0;
    Eigen::VectorXd coeffs_;
};

AngularFunction angular_function(const EllipseGeometry& g, double hbar, const AngularMode& mode);

/// Samples of G on a theta grid; throws GridTooCoarse below 20 (n + 1) samples.
Eigen::VectorXd angular_eigenfunction(const EllipseGeometry& g, double hbar, const AngularMode& mode,
                                      const std::vector<double>& grid);

/// Prufer phase of the radial solution at rho_max for a trial alpha.
/// y = r sin(phi), y'/s = r cos(phi) with the family's inner condition at 0.
double radial_end_phase(const EllipseGeometry& g, double hbar, Parity parity, double alpha);

/// Target end phase of a radial mode.
double radial_target_phase(const RadialMode& mode);

/// alpha with (hbar^2/c^2) F'' + cosh^2(rho) F = alpha F, the inner parity
/// condition at rho = 0 and the mode's condition at rho_max.
double radial_characteristic(const EllipseGeometry& g, double hbar, const RadialMode& mode, double alpha_tol = 1e-14);

struct RadialFunction {
    std::vector<double> grid;
    std::vector<double> values;
    double F_end = 0;   ///< F(rho_max)
    double dF_end = 0;  ///< F'(rho_max)
    double boundary_residual = 0;
    double inner_residual = 0;
};

/// Integrates the radial equation at alpha, normalizes int_0^rho_max F^2 = 1.
/// Throws NotACharacteristicValue when the outer condition fails by more than bc_tol.
RadialFunction radial_eigenfunction(const EllipseGeometry& g, double hbar, const RadialMode& mode, double alpha,
                                    const std::vector<double>& grid, double bc_tol = 1e-8);

/// b'_{n+1} - a'_n from the Wronskian identity on [0, pi/2]:
/// (hbar/c)^2 G_a(0) G_b'(0) / int_0^{pi/2} G_a G_b, with both solutions
/// started at the barrier theta = 0. Resolves gaps far below the rounding
/// level of the characteristic values themselves.
double angular_pair_gap(const EllipseGeometry& g, double hbar, int n);

/// B'_{m+1} - A'_m by the same identity on [0, rho_max].
double radial_pair_gap(const EllipseGeometry& g, double hbar, int m, BoundaryCondition bc);

/// Sign changes of a sampled function, ignoring exact zeros.
int count_sign_changes(const std::vector<double>& v);

}  // namespace ellbill
