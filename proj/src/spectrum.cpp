#include "ellbill/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ellbill/parallel.hpp"
#include "ellbill/roots.hpp"

namespace ellbill {

namespace {

AngularMode angular_mode(int n, const SymmetryClass& cls) { return {cls.parity_y, n}; }

RadialMode radial_mode(int m, const SymmetryClass& cls, BoundaryCondition bc) { return {cls.parity_y, m, bc}; }

void check_lattice_point(int m, int n, const SymmetryClass& cls) {
    if (x_parity(n, cls.parity_y) != cls.parity_x)
        fail(ErrorCode::InvalidArgument, "angular index parity does not match the x parity of the class");
    if (cls.parity_y == Parity::Odd && (m < 1 || n < 1))
        fail(ErrorCode::InvalidArgument, "odd-in-y modes need m >= 1 and n >= 1");
    if (m < 0 || n < 0) fail(ErrorCode::InvalidArgument, "lattice indices must be nonnegative");
}

double student_t95(int dof) {
    static constexpr double table[] = {12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
                                       2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086};
    if (dof < 1) return std::numeric_limits<double>::infinity();
    if (dof <= 20) return table[dof - 1];
    return 1.96 + 2.5 / dof;
}

}  // namespace

Parity x_parity(int n, Parity parity_y) {
    const bool even_n = n % 2 == 0;
    return even_n == (parity_y == Parity::Even) ? Parity::Even : Parity::Odd;
}

std::string class_name(const SymmetryClass& cls) {
    std::string s;
    s += cls.parity_x == Parity::Even ? 'e' : 'o';
    s += cls.parity_y == Parity::Even ? 'e' : 'o';
    return s;
}

SymmetryClass parse_class(std::string_view s) {
    if (s.size() != 2) fail(ErrorCode::ParseError, "class must be one of ee, eo, oe, oo");
    auto one = [](char ch) {
        if (ch == 'e') return Parity::Even;
        if (ch == 'o') return Parity::Odd;
        fail(ErrorCode::ParseError, "class must be one of ee, eo, oe, oo");
    };
    return {one(s[0]), one(s[1])};
}

MaslovShift maslov_shift(Parity parity_y, Branch branch, BoundaryCondition bc) {
    const bool even = parity_y == Parity::Even;
    if (bc == BoundaryCondition::Dirichlet) {
        if (branch == Branch::Outside) return even ? MaslovShift{0.75, 0.0} : MaslovShift{-0.25, 0.0};
        return even ? MaslovShift{0.5, 0.5} : MaslovShift{0.0, -0.5};
    }
    if (branch == Branch::Outside) return even ? MaslovShift{0.25, 0.0} : MaslovShift{-0.75, 0.0};
    return even ? MaslovShift{0.0, 0.5} : MaslovShift{-0.5, -0.5};
}

double intersection_gap(const EllipseGeometry& g, int m, int n, const SymmetryClass& cls, BoundaryCondition bc,
                        double hbar) {
    return angular_characteristic(g, hbar, angular_mode(n, cls)) - radial_characteristic(g, hbar, radial_mode(m, cls, bc));
}

double bs_seed(const EllipseGeometry& g, int m, int n, const SymmetryClass& cls, Branch branch, BoundaryCondition bc,
               double eps_sep) {
    const auto shift = maslov_shift(cls.parity_y, branch, bc);
    const double mt = m + shift.rho, nt = n + shift.theta;
    if (!(mt > 0) || !(nt > 0)) fail(ErrorCode::OutOfSector, "shifted lattice point is not in the positive quadrant");
    const double r = mt / nt;
    if (!eligible_sector(g, branch, eps_sep).contains(r)) fail(ErrorCode::OutOfSector, "ratio outside the sector");
    const double alpha = invert_A0(g, r, branch, eps_sep);
    return action_angular(g, alpha) / nt;
}

std::optional<std::pair<double, Branch>> seed_any_branch(const EllipseGeometry& g, int m, int n,
                                                         const SymmetryClass& cls, BoundaryCondition bc,
                                                         double eps_sep) {
    for (Branch b : {Branch::Outside, Branch::Inside}) {
        try {
            return std::make_pair(bs_seed(g, m, n, cls, b, bc, eps_sep), b);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::OutOfSector) throw;
        }
    }
    return std::nullopt;
}

EigenvalueRecord solve_intersection(const EllipseGeometry& g, int m, int n, const SymmetryClass& cls,
                                    BoundaryCondition bc, const SolveOptions& opt) {
    check_lattice_point(m, n, cls);
    auto gap = [&](double hbar) { return intersection_gap(g, m, n, cls, bc, hbar); };

    EigenvalueRecord rec;
    rec.m = m;
    rec.n = n;
    rec.cls = cls;
    rec.bc = bc;

    double lo = 0, hi = 0, f_lo = 0, f_hi = 0;
    bool bracketed = false;
    if (auto seed = seed_any_branch(g, m, n, cls, bc, opt.eps_sep)) {
        rec.hbar_seed = seed->first;
        double factor = 1.5;
        for (int k = 0; k <= opt.max_expansions && !bracketed; ++k) {
            lo = rec.hbar_seed / factor;
            hi = rec.hbar_seed * factor;
            f_lo = gap(lo);
            f_hi = gap(hi);
            bracketed = f_lo < 0 && f_hi > 0;
            rec.bracket_expansions = k;
            factor *= 1.5;
        }
    }
    if (!bracketed) {
        // Geometric scan downward from large hbar, where the gap is positive,
        // to the first negative value.
        const double start = 1e-3 * g.c(), stop = 20 * g.c();
        const int samples = 80;
        double prev_h = stop, prev_f = gap(stop);
        for (int i = samples - 1; i >= 0 && !bracketed; --i) {
            const double h = start * std::pow(stop / start, static_cast<double>(i) / samples);
            const double f = gap(h);
            if (f < 0 && prev_f > 0) {
                lo = h;
                hi = prev_h;
                f_lo = f;
                f_hi = prev_f;
                bracketed = true;
            }
            prev_h = h;
            prev_f = f;
        }
        if (!bracketed) fail(ErrorCode::NoBracket, "no sign change of the intersection gap");
        if (rec.hbar_seed == 0) rec.hbar_seed = std::sqrt(lo * hi);
    }

    // Uniqueness inside the bracket: sampled gap values change sign exactly once.
    {
        int changes = 0;
        double prev = f_lo;
        for (int i = 1; i <= opt.uniqueness_samples + 1; ++i) {
            const double h = lo + (hi - lo) * i / (opt.uniqueness_samples + 1.0);
            const double f = (i == opt.uniqueness_samples + 1) ? f_hi : gap(h);
            if ((f > 0) != (prev > 0)) ++changes;
            prev = f;
        }
        if (changes != 1) fail(ErrorCode::MultipleRoots, "intersection gap changes sign more than once in the bracket");
    }

    const auto root = brent(gap, lo, hi, f_lo, f_hi, opt.hbar_rel_tol * lo);
    rec.hbar = root.x;
    rec.lambda = 1.0 / rec.hbar;
    rec.gap = root.fx;
    rec.hbar_error = opt.hbar_rel_tol * lo;
    rec.alpha = angular_characteristic(g, rec.hbar, angular_mode(n, cls));
    rec.branch = rec.alpha < 1 ? Branch::Inside : Branch::Outside;
    return rec;
}

double fixed_point_refine(const EllipseGeometry& g, int m, int n, const SymmetryClass& cls, BoundaryCondition bc,
                          double hbar0, double tol, int max_iter) {
    check_lattice_point(m, n, cls);
    auto gap = [&](double hbar) { return intersection_gap(g, m, n, cls, bc, hbar); };
    const double dh = 1e-5 * hbar0;
    const double slope = (gap(hbar0 + dh) - gap(hbar0 - dh)) / (2 * dh);
    if (!(slope > 0)) fail(ErrorCode::SolverStagnated, "gap slope at the starting point is not positive");
    double h = hbar0;
    for (int it = 0; it < max_iter; ++it) {
        const double next = h - gap(h) / slope;
        if (!(next > 0)) fail(ErrorCode::SolverStagnated, "fixed-point iteration left the positive axis");
        if (std::abs(next - h) <= tol * h) return next;
        h = next;
    }
    fail(ErrorCode::SolverStagnated, "fixed-point iteration did not converge");
}

Ladder build_ladder(const EllipseGeometry& g, double alpha_target, const SymmetryClass& cls, BoundaryCondition bc,
                    const std::vector<int>& n_list, const SolveOptions& opt, LadderRule rule) {
    Ladder lad;
    lad.alpha_target = alpha_target;
    lad.branch = level_branch(g, alpha_target, opt.eps_sep);
    lad.r0 = action_ratio_A0(g, alpha_target);
    lad.sector = eligible_sector(g, lad.branch, opt.eps_sep);

    std::vector<std::pair<int, int>> points;
    for (int n : n_list) {
        if (n < 1) fail(ErrorCode::InvalidArgument, "ladder n values must be positive");
        if (x_parity(n, cls.parity_y) != cls.parity_x) ++n;
        const double lo = std::ceil(lad.sector.k1 * n), hi = std::floor(lad.sector.k2 * n);
        if (lo > hi) fail(ErrorCode::OutOfSector, "no lattice point of the sector at this n");
        double target = lad.r0 * n;
        if (rule == LadderRule::Shifted) {
            const auto shift = maslov_shift(cls.parity_y, lad.branch, bc);
            target = lad.r0 * (n + shift.theta) - shift.rho;
        }
        int m = static_cast<int>(std::clamp(std::round(target), lo, hi));
        if (cls.parity_y == Parity::Odd) m = std::max(m, 1);
        points.emplace_back(m, n);
    }
    lad.entries.resize(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        lad.entries[i] = solve_intersection(g, points[i].first, points[i].second, cls, bc, opt);
    });
    for (const auto& e : lad.entries)
        if (e.branch != lad.branch) fail(ErrorCode::SeparatrixLevel, "ladder entry crossed the separatrix");
    return lad;
}

TrendFit trend_fit(const std::vector<double>& x, const std::vector<double>& y) {
    TrendFit fit;
    const std::size_t n = x.size();
    if (n < 2) return fit;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    fit.slope = sxy / sxx;
    if (n > 2) {
        double rss = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - my - fit.slope * (x[i] - mx);
            rss += r * r;
        }
        fit.slope_stderr = std::sqrt(rss / (n - 2) / sxx);
        fit.ci_halfwidth = student_t95(static_cast<int>(n) - 2) * fit.slope_stderr;
    } else {
        fit.ci_halfwidth = std::numeric_limits<double>::infinity();
    }
    fit.no_growth = fit.slope - fit.ci_halfwidth <= 0;
    return fit;
}

AsymptoticReport asymptotic_check(const EllipseGeometry& g, const Ladder& ladder, double eps_sep) {
    AsymptoticReport rep;
    std::vector<double> xs;
    for (const auto& e : ladder.entries) {
        const double n = e.n;
        const double a0 = invert_A0(g, e.m / n, ladder.branch, eps_sep);
        rep.n.push_back(e.n);
        xs.push_back(n);
        rep.e.push_back(n * std::abs(e.lambda - n / action_angular(g, a0)));
        const auto shift = maslov_shift(e.cls.parity_y, ladder.branch, e.bc);
        const double mt = e.m + shift.rho, nt = n + shift.theta;
        const double a1 = invert_A0(g, mt / nt, ladder.branch, eps_sep);
        rep.e_shifted.push_back(n * std::abs(e.lambda - nt / action_angular(g, a1)));
    }
    if (xs.size() >= 2) {
        rep.fit = trend_fit(xs, rep.e);
        rep.fit_shifted = trend_fit(xs, rep.e_shifted);
    }
    rep.bounded = rep.fit.no_growth;
    return rep;
}

std::vector<EigenvalueRecord> enumerate_class(const EllipseGeometry& g, const SymmetryClass& cls, BoundaryCondition bc,
                                              double lambda_max, const SolveOptions& opt) {
    std::vector<EigenvalueRecord> out;
    const int m0 = cls.parity_y == Parity::Odd ? 1 : 0;
    int n0 = cls.parity_y == Parity::Odd ? 1 : 0;
    if (x_parity(n0, cls.parity_y) != cls.parity_x) ++n0;
    for (int n = n0;; n += 2) {
        std::vector<EigenvalueRecord> row;
        bool any = false;
        for (int m = m0;; ++m) {
            // The Neumann constant mode (lambda = 0) has no finite hbar.
            if (bc == BoundaryCondition::Neumann && m == 0 && n == 0) {
                any = true;
                continue;
            }
            // The gap rises through its single root, so a positive gap at
            // hbar = 1/lambda_max means the eigenvalue lies above lambda_max.
            if (intersection_gap(g, m, n, cls, bc, 1.0 / lambda_max) > 0) break;
            auto rec = solve_intersection(g, m, n, cls, bc, opt);
            if (rec.lambda > lambda_max) break;
            row.push_back(rec);
            any = true;
        }
        if (!any) break;
        out.insert(out.end(), row.begin(), row.end());
    }
    return out;
}

SpacingReport cluster_records(std::vector<EigenvalueRecord> records, double tol_rel) {
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
    SpacingReport rep;
    int cluster = 0;
    std::vector<int> sizes;
    for (std::size_t i = 0; i < records.size(); ++i) {
        SpacingRow row{records[i], 0, 0};
        if (i + 1 < records.size()) row.gap_to_next = records[i + 1].lambda - records[i].lambda;
        if (i > 0 && records[i].lambda - records[i - 1].lambda < tol_rel * records[i].lambda) {
            ++sizes.back();
        } else {
            cluster = static_cast<int>(sizes.size());
            sizes.push_back(1);
        }
        row.cluster = cluster;
        rep.rows.push_back(row);
    }
    for (int s : sizes) {
        if (s == 2) ++rep.clusters_of_size_two;
        if (s >= 3) ++rep.clusters_of_size_three_or_more;
    }
    return rep;
}

SpacingReport spacing_report(const EllipseGeometry& g, BoundaryCondition bc, double lambda_max, double tol_rel,
                             const SolveOptions& opt) {
    std::vector<std::vector<EigenvalueRecord>> per_class(4);
    parallel_for(4, [&](std::size_t i) { per_class[i] = enumerate_class(g, kAllClasses[i], bc, lambda_max, opt); });
    std::vector<EigenvalueRecord> all;
    for (auto& v : per_class) all.insert(all.end(), v.begin(), v.end());
    return cluster_records(std::move(all), tol_rel);
}

}  // namespace ellbill
