#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "ellbill/spectrum.hpp"

namespace ellbill {

using Symbol = std::function<double(double)>;

/// Cauchy data of a separable eigenfunction sampled on a uniform periodic
/// theta grid. `modified` is u = F(rho_max) G (Neumann) or hbar F'(rho_max) G
/// (Dirichlet); `values` is u^b, equal to u for Neumann and -u / speed for
/// Dirichlet. Both are scaled so that int |u^b|^2 ds = 1.
struct BoundaryTrace {
    EigenvalueRecord record;
    BoundaryCondition kind = BoundaryCondition::Dirichlet;
    std::vector<double> grid;
    Eigen::VectorXd values;
    Eigen::VectorXd modified;
    Eigen::VectorXd speed;
    double F_end = 0;
    double dF_end = 0;
    double scale = 0;  ///< factor applied to F G to reach unit boundary norm
};

/// Smallest power-of-two grid that resolves the angular series of the record.
std::size_t default_trace_grid(const EllipseGeometry& g, const EigenvalueRecord& rec);

/// Throws GridTooCoarse below 20 (n + 1) points.
BoundaryTrace boundary_trace(const EllipseGeometry& g, const EigenvalueRecord& rec, std::size_t n_grid = 0);

/// Spectral derivative of order k of periodic samples on [0, 2pi).
Eigen::VectorXd spectral_derivative(const Eigen::VectorXd& samples, int order);

/// int a |u^b|^2 ds / int |u^b|^2 ds by the periodic trapezoid rule.
double matrix_element(const BoundaryTrace& trace, const Symbol& a);

/// Applies -(hbar^2/c^2) d^2/dtheta^2 + cos^2 theta spectrally.
Eigen::VectorXd apply_op_I(const EllipseGeometry& g, double hbar, const std::vector<double>& grid,
                           const Eigen::VectorXd& u);

/// <Op(I)^k u, u> / <u, u> on the modified trace.
double op_I_moment(const EllipseGeometry& g, const BoundaryTrace& trace, int k);

/// <Op(I) u, u> / <u, u>.
double op_I_expectation(const BoundaryTrace& trace, const EllipseGeometry& g, double hbar);

/// int a dnu / int dnu over the level I = alpha, with dnu = dmu / speed
/// (Dirichlet) or speed dmu (Neumann). Throws SeparatrixLevel near alpha = 1.
double limit_measure_integral(const EllipseGeometry& g, double alpha, const Symbol& a, BoundaryCondition bc,
                              double eps_sep = kDefaultEpsSep);

struct EtaProfile {
    std::vector<double> theta;
    std::vector<double> eta;            ///< nonnegative sheet, 0 where cos^2 > alpha
    std::vector<double> one_minus_eta2;
    std::vector<double> identity_residual;  ///< 1 - eta^2 - (C - alpha)/(C - cos^2) on the support
};

EtaProfile eta_profile(const EllipseGeometry& g, double alpha, const std::vector<double>& grid);

struct QuantumLimitRow {
    int n = 0;
    int m = 0;
    double lambda = 0;
    double alpha = 0;
    double matrix_element = 0;
    double limit = 0;
    double rel_error = 0;
};

struct QuantumLimitReport {
    double alpha = 0;
    std::string symbol;
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
    std::vector<QuantumLimitRow> rows;
    TrendFit fit{};  ///< slope of log(rel_error) against log(n)
    bool decreasing = false;
};

QuantumLimitReport convergence_study(const EllipseGeometry& g, double alpha_target, const Symbol& a,
                                     const std::string& symbol_text, const SymmetryClass& cls, BoundaryCondition bc,
                                     const std::vector<int>& n_list, const SolveOptions& opt = {});

QuantumLimitReport convergence_study(const EllipseGeometry& g, const Ladder& ladder, const Symbol& a,
                                     const std::string& symbol_text);

}  // namespace ellbill
