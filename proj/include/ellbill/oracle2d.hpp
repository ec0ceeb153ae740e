#pragma once

#include <Eigen/Sparse>
#include <memory>
#include <vector>

#include "ellbill/geometry.hpp"

namespace ellbill {

/// A planar domain sampled on the lattice origin + h (i, j).
class Domain {
public:
    virtual ~Domain() = default;
    virtual bool inside(double x, double y) const = 0;
    /// Distance from an interior point to the boundary along direction (dx, dy), a unit axis vector.
    virtual double boundary_distance(double x, double y, int dx, int dy) const = 0;
    /// Lattice index range covering the domain for spacing h, and the lattice origin.
    virtual void lattice(double h, int& i0, int& i1, int& j0, int& j1, double& ox, double& oy) const = 0;
    /// Whether reflections x -> -x and y -> -y map the lattice to itself.
    virtual bool symmetric_lattice() const { return false; }
};

class EllipseDomain : public Domain {
public:
    explicit EllipseDomain(const EllipseGeometry& g) : a_(g.a()), b_(g.b()) {}
    bool inside(double x, double y) const override;
    double boundary_distance(double x, double y, int dx, int dy) const override;
    void lattice(double h, int& i0, int& i1, int& j0, int& j1, double& ox, double& oy) const override;
    bool symmetric_lattice() const override { return true; }

private:
    double a_, b_;
};

class RectangleDomain : public Domain {
public:
    RectangleDomain(double width, double height) : w_(width), h_(height) {}
    bool inside(double x, double y) const override;
    double boundary_distance(double x, double y, int dx, int dy) const override;
    void lattice(double h, int& i0, int& i1, int& j0, int& j1, double& ox, double& oy) const override;

private:
    double w_, h_;
};

/// Shortley-Weller discretization of -Laplace with zero Dirichlet data. The
/// unequal-arm stencil makes the matrix nonsymmetric near the boundary.
struct GridOperator {
    double h = 0;
    std::vector<int> node_i, node_j;
    double origin_x = 0, origin_y = 0;
    Eigen::SparseMatrix<double> A;
    int min_i = 0, max_i = 0, min_j = 0, max_j = 0;
    std::vector<int> index_of;  ///< dense (i, j) -> node index or -1
    int lookup(int i, int j) const;
};

GridOperator shortley_weller(const Domain& domain, double h);

struct FdEigenpair {
    double lambda2 = 0;
    double residual = 0;   ///< ||A x - lambda2 x|| / (lambda2 ||x||)
    int parity_x = 0;      ///< +1 even, -1 odd, 0 undetermined
    int parity_y = 0;
};

struct FdResult {
    double h = 0;
    int unknowns = 0;
    int iterations = 0;
    std::vector<FdEigenpair> pairs;
};

struct FdOptions {
    int extra = 6;            ///< additional subspace vectors
    double residual_tol = 1e-8;
    int max_iter = 400;
};

/// k smallest eigenvalues by shift-invert subspace iteration with Rayleigh-Ritz.
FdResult fd_eigenvalues(const Domain& domain, double h, int k, const FdOptions& opt = {});

/// Ellipse interior; requires h <= b/50 and k <= 20.
FdResult fd_eigenvalues(const EllipseGeometry& g, double h, int k, const FdOptions& opt = {});

struct Extrapolated {
    std::vector<double> lambda2;
    std::vector<double> error_estimate;  ///< |extrapolated - fine|
};

/// (4 fine - coarse) / 3 for second-order schemes with h_fine = h_coarse / 2.
Extrapolated richardson(const FdResult& coarse, const FdResult& fine);

/// log2 of successive difference ratio for three grids with halving spacing.
double convergence_order(double coarse, double mid, double fine);

}  // namespace ellbill
