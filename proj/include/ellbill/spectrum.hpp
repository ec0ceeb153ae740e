#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ellbill/actions.hpp"
#include "ellbill/billiard.hpp"
#include "ellbill/mathieu.hpp"

namespace ellbill {

/// Parities under x -> -x and y -> -y. The x parity is fixed by the angular
/// index together with the y parity: cos n theta picks up (-1)^n under
/// theta -> pi - theta and sin n theta picks up -(-1)^n.
struct SymmetryClass {
    Parity parity_x = Parity::Even;
    Parity parity_y = Parity::Even;

    bool operator==(const SymmetryClass&) const = default;
};

/// x parity of the angular mode with index n and the given y parity.
Parity x_parity(int n, Parity parity_y);

/// "ee", "eo", "oe", "oo" with the x parity first.
std::string class_name(const SymmetryClass& cls);
SymmetryClass parse_class(std::string_view s);
inline const SymmetryClass kAllClasses[4] = {
    {Parity::Even, Parity::Even}, {Parity::Even, Parity::Odd}, {Parity::Odd, Parity::Even}, {Parity::Odd, Parity::Odd}};

/// Half-integer offsets of the leading quantization rules, in the index
/// conventions of the characteristic-value solvers:
/// I_rho = (m + rho) hbar, I_theta = (n + theta) hbar.
struct MaslovShift {
    double rho = 0;
    double theta = 0;
};

MaslovShift maslov_shift(Parity parity_y, Branch branch, BoundaryCondition bc);

struct EigenvalueRecord {
    int m = 0;
    int n = 0;
    SymmetryClass cls{};
    BoundaryCondition bc = BoundaryCondition::Dirichlet;
    double hbar = 0;
    double lambda = 0;
    double alpha = 0;
    Branch branch = Branch::Outside;
    double gap = 0;          ///< angular minus radial value at the solved hbar
    double hbar_error = 0;   ///< final bracket half-width
    double hbar_seed = 0;
    int bracket_expansions = 0;
};

struct SolveOptions {
    double hbar_rel_tol = 1e-13;
    double eps_sep = kDefaultEpsSep;
    int max_expansions = 8;
    int uniqueness_samples = 8;
};

/// Gap function angular(hbar) - radial(hbar) for a lattice point.
double intersection_gap(const EllipseGeometry& g, int m, int n, const SymmetryClass& cls, BoundaryCondition bc,
                        double hbar);

/// Leading-order seed I_theta(alpha_0(m~/n~)) / n~ on a branch; throws OutOfSector.
double bs_seed(const EllipseGeometry& g, int m, int n, const SymmetryClass& cls, Branch branch, BoundaryCondition bc,
               double eps_sep = kDefaultEpsSep);

/// Seed on whichever branch admits the shifted ratio, if any.
std::optional<std::pair<double, Branch>> seed_any_branch(const EllipseGeometry& g, int m, int n,
                                                         const SymmetryClass& cls, BoundaryCondition bc,
                                                         double eps_sep = kDefaultEpsSep);

/// Solves a'_n(hbar) = A'_m(hbar) (or the b'/B' pair) for the unique hbar.
EigenvalueRecord solve_intersection(const EllipseGeometry& g, int m, int n, const SymmetryClass& cls,
                                    BoundaryCondition bc, const SolveOptions& opt = {});

/// Fixed-point iteration hbar <- hbar - gap(hbar)/D with D the gap slope at
/// the starting point. Returns the limit.
double fixed_point_refine(const EllipseGeometry& g, int m, int n, const SymmetryClass& cls, BoundaryCondition bc,
                          double hbar0, double tol = 1e-13, int max_iter = 100);

struct Ladder {
    double alpha_target = 0;
    double r0 = 0;
    Branch branch = Branch::Outside;
    Sector sector{};
    std::vector<EigenvalueRecord> entries;
};

/// How the radial index is picked for each n of a ladder.
/// Round: m = round(r0 n). Shifted: m = round(r0 (n + theta shift) - rho shift),
/// the lattice point whose leading-order level is nearest the target.
enum class LadderRule { Round, Shifted };

/// Lattice points (m, n) along the ray of the level alpha_target.
/// n values with the wrong parity for the class are moved up by one.
Ladder build_ladder(const EllipseGeometry& g, double alpha_target, const SymmetryClass& cls, BoundaryCondition bc,
                    const std::vector<int>& n_list, const SolveOptions& opt = {}, LadderRule rule = LadderRule::Round);

struct TrendFit {
    double slope = 0;
    double slope_stderr = 0;
    double ci_halfwidth = 0;  ///< 95% two-sided
    bool no_growth = true;    ///< slope - ci_halfwidth <= 0
};

/// Least-squares slope of y against x with a Student-t interval.
TrendFit trend_fit(const std::vector<double>& x, const std::vector<double>& y);

struct AsymptoticReport {
    std::vector<int> n;
    std::vector<double> e;           ///< n |lambda - n / I_theta(alpha_0(m/n))|
    std::vector<double> e_shifted;   ///< same with the shifted indices (m~, n~)
    TrendFit fit{};
    TrendFit fit_shifted{};
    bool bounded = true;
};

AsymptoticReport asymptotic_check(const EllipseGeometry& g, const Ladder& ladder, double eps_sep = kDefaultEpsSep);

/// All records of one class and boundary condition with lambda <= lambda_max.
std::vector<EigenvalueRecord> enumerate_class(const EllipseGeometry& g, const SymmetryClass& cls, BoundaryCondition bc,
                                              double lambda_max, const SolveOptions& opt = {});

struct SpacingRow {
    EigenvalueRecord record;
    double gap_to_next = 0;  ///< 0 for the last row
    int cluster = 0;         ///< cluster id; rows closer than tol_cluster share it
};

struct SpacingReport {
    std::vector<SpacingRow> rows;
    int clusters_of_size_two = 0;
    int clusters_of_size_three_or_more = 0;
};

/// Merged spectrum of the four classes with nearest-neighbour gaps. Rows whose
/// gap is below tol_rel * lambda are grouped; groups of three or more are only flagged.
SpacingReport spacing_report(const EllipseGeometry& g, BoundaryCondition bc, double lambda_max, double tol_rel = 1e-6,
                             const SolveOptions& opt = {});

SpacingReport cluster_records(std::vector<EigenvalueRecord> records, double tol_rel);

}  // namespace ellbill
