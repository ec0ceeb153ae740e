#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "ellbill/cauchy.hpp"

namespace ellbill {

/// Normal variation rhodot(theta) = sum_k coeffs[k] cos(2k theta). Invariant
/// under theta -> -theta and theta -> pi - theta by construction.
class SymmetricVariation {
public:
    SymmetricVariation() = default;
    explicit SymmetricVariation(std::vector<double> coeffs);

    /// Projects f onto cos(2k theta), k < K. Throws NotSymmetric when f is not
    /// invariant under the two reflections to within sym_tol (relative).
    static SymmetricVariation from_function(const std::function<double(double)>& f, int K, double sym_tol = 1e-10);

    /// rhodot = P(cos^2 theta) sqrt(cosh^2 rho_max - cos^2 theta), projected onto K terms.
    static SymmetricVariation from_profile(const EllipseGeometry& g, const std::function<double(double)>& P, int K);

    double operator()(double theta) const;
    /// P(u) = rhodot(arccos sqrt u) / sqrt(cosh^2 rho_max - u), u in [0, 1].
    double profile(const EllipseGeometry& g, double u) const;

    const std::vector<double>& coefficients() const { return coeffs_; }
    int size() const { return static_cast<int>(coeffs_.size()); }

private:
    std::vector<double> coeffs_;
};

/// lambda^2 int rhodot |u^b|^2 ds. Throws KindMismatch for a Neumann trace.
double hadamard_dirichlet(const BoundaryTrace& trace, const SymmetricVariation& rhodot);

/// int (|tangential grad phi|^2 - lambda^2 phi^2) rhodot ds with the tangential
/// derivative taken spectrally. Throws KindMismatch for a Dirichlet trace.
double hadamard_neumann(const BoundaryTrace& trace, const SymmetricVariation& rhodot);

/// int_{I = alpha} rhodot / sqrt(cosh^2 rho_max - cos^2 theta) dmu_alpha.
double radon_leray(const EllipseGeometry& g, double alpha, const std::function<double(double)>& rhodot,
                   double eps_sep = kDefaultEpsSep);
double radon_leray(const EllipseGeometry& g, double alpha, const SymmetricVariation& rhodot,
                   double eps_sep = kDefaultEpsSep);

/// Limit of hadamard_neumann / lambda^2 along a ladder at level alpha:
/// c (alpha - cosh^2 rho_max) radon_leray(alpha) / int speed dmu_alpha.
double neumann_reduction_limit(const EllipseGeometry& g, double alpha, const SymmetricVariation& rhodot,
                               double eps_sep = kDefaultEpsSep);

/// A f(x) = int_0^x f(u) / sqrt(x^2 - u^2) du, through u = x sin t.
double abel_forward(const std::function<double(double)>& f, double x, double tol = 1e-13);

/// (2/pi) d/du int_0^u x g(x) / sqrt(u^2 - x^2) dx with a central difference
/// of step tol^(1/3) u (one-sided when u + step exceeds 1).
double abel_inverse(const std::function<double(double)>& g, double u, double tol = 1e-12);

/// int_v^u x dx / (sqrt(u^2 - x^2) sqrt(x^2 - v^2)), computed by splitting at
/// the midpoint and removing each endpoint singularity by a square substitution.
double abel_identity(double u, double v, double tol = 1e-13);

struct KernelReport {
    Branch branch = Branch::Inside;
    int K = 0;
    std::vector<double> alphas;
    Eigen::MatrixXd T;
    Eigen::VectorXd singular_values;  ///< of the column-normalized matrix, descending
    double sigma_min = 0;
    double condition = 0;
    std::vector<double> planted;    ///< projected planted coefficients
    std::vector<double> recovered;  ///< least-squares coefficients
    double reconstruction_error = 0;  ///< sup over u in [0, 1] of |P_rec - P_planted|
    double assembly_mismatch = 0;     ///< matrix product vs direct transform of the planted variation
};

/// Builds T[i][j] = radon_leray(alpha_i, cos 2 j theta), j < K, and recovers a
/// planted variation with profile P from its transform values.
KernelReport kernel_test(const EllipseGeometry& g, int K, const std::vector<double>& alphas, Branch branch,
                         const std::function<double(double)>& planted_profile, double eps_sep = kDefaultEpsSep);

/// Equally spaced levels strictly inside the truncated branch interval.
std::vector<double> level_grid(const EllipseGeometry& g, Branch branch, int M, double eps_sep = kDefaultEpsSep);

struct AbelReconstruction {
    std::vector<double> u;
    std::vector<double> recovered;  ///< P(u^2) from the inverse Abel transform
    std::vector<double> planted;
    double sup_error = 0;
};

/// Inside-branch route: g(x) = radon_leray(x^2) / (4c) = A f(x) with
/// f(u) = P(u^2)/sqrt(1 - u^2); inverting A recovers P.
AbelReconstruction abel_reconstruction(const EllipseGeometry& g, const std::function<double(double)>& planted_profile,
                                       const std::vector<double>& u_grid, double eps_sep = kDefaultEpsSep);

struct Moment {
    int n = 0;
    double value = 0;
    double error = 0;
};

/// int_0^1 f(u) (cosh^2 rho_max - u)^(-n - 1/2) du for n = 0..N_max, through u = sin^2 t
/// so that f may carry u^(-1/2) and (1 - u)^(-1/2) endpoint factors.
std::vector<Moment> moment_test_outside(const EllipseGeometry& g, const std::function<double(double)>& f, int N_max);

}  // namespace ellbill
