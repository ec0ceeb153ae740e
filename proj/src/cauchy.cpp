#include "ellbill/cauchy.hpp"

#include <unsupported/Eigen/FFT>
#include <cmath>
#include <complex>
#include <numbers>

#include "ellbill/parallel.hpp"

namespace ellbill {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> periodic_grid(std::size_t n) {
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = 2 * kPi * static_cast<double>(i) / static_cast<double>(n);
    return grid;
}

int significant_frequency(const AngularFunction& fn) {
    const auto& c = fn.coefficients();
    const double top = c.cwiseAbs().maxCoeff();
    int last = 0;
    for (int j = 0; j < c.size(); ++j)
        if (std::abs(c[j]) > 1e-17 * top) last = j;
    return basis_frequency(fn.basis(), last);
}

std::size_t grid_for(const AngularFunction& fn, int n) {
    const std::size_t need = std::max<std::size_t>(20 * static_cast<std::size_t>(n + 1),
                                                   4 * static_cast<std::size_t>(significant_frequency(fn) + 1));
    std::size_t size = 64;
    while (size < need) size *= 2;
    return size;
}

double weighted_sum(const Eigen::VectorXd& w, const Eigen::VectorXd& v) { return w.dot(v); }

}  // namespace

std::size_t default_trace_grid(const EllipseGeometry& g, const EigenvalueRecord& rec) {
    return grid_for(angular_function(g, rec.hbar, {rec.cls.parity_y, rec.n}), rec.n);
}

BoundaryTrace boundary_trace(const EllipseGeometry& g, const EigenvalueRecord& rec, std::size_t n_grid) {
    const auto fn = angular_function(g, rec.hbar, {rec.cls.parity_y, rec.n});
    if (n_grid == 0) n_grid = grid_for(fn, rec.n);
    if (n_grid < static_cast<std::size_t>(20 * (rec.n + 1)))
        fail(ErrorCode::GridTooCoarse, "trace grid needs at least 20 (n + 1) points");

    const RadialMode rmode{rec.cls.parity_y, rec.m, rec.bc};
    const auto radial = radial_eigenfunction(g, rec.hbar, rmode, rec.alpha, {});

    BoundaryTrace tr;
    tr.record = rec;
    tr.kind = rec.bc;
    tr.grid = periodic_grid(n_grid);
    tr.F_end = radial.F_end;
    tr.dF_end = radial.dF_end;
    const Eigen::Index n = static_cast<Eigen::Index>(n_grid);
    tr.values.resize(n);
    tr.modified.resize(n);
    tr.speed.resize(n);
    const double amplitude = rec.bc == BoundaryCondition::Neumann ? radial.F_end : rec.hbar * radial.dF_end;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double th = tr.grid[static_cast<std::size_t>(i)];
        tr.speed[i] = boundary_speed(g, th);
        tr.modified[i] = amplitude * fn.value(th);
        tr.values[i] = rec.bc == BoundaryCondition::Neumann ? tr.modified[i] : -tr.modified[i] / tr.speed[i];
    }
    const double h = 2 * kPi / static_cast<double>(n_grid);
    const double norm2 = h * weighted_sum(tr.speed, tr.values.cwiseAbs2());
    const double s = 1.0 / std::sqrt(norm2);
    tr.values *= s;
    tr.modified *= s;
    tr.scale = amplitude * s;
    return tr;
}

Eigen::VectorXd spectral_derivative(const Eigen::VectorXd& samples, int order) {
    const std::size_t n = static_cast<std::size_t>(samples.size());
    std::vector<std::complex<double>> in(n), spec(n), out(n);
    for (std::size_t i = 0; i < n; ++i) in[i] = samples[static_cast<Eigen::Index>(i)];
    Eigen::FFT<double> fft;
    fft.fwd(spec, in);
    const std::complex<double> I(0, 1);
    for (std::size_t k = 0; k < n; ++k) {
        double wave = (k <= n / 2) ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
        if (n % 2 == 0 && k == n / 2 && order % 2 == 1) wave = 0;
        spec[k] *= std::pow(I * wave, order);
    }
    fft.inv(out, spec);
    Eigen::VectorXd d(samples.size());
    for (std::size_t i = 0; i < n; ++i) d[static_cast<Eigen::Index>(i)] = out[i].real();
    return d;
}

double matrix_element(const BoundaryTrace& trace, const Symbol& a) {
    double num = 0, den = 0;
    for (Eigen::Index i = 0; i < trace.values.size(); ++i) {
        const double w = trace.values[i] * trace.values[i] * trace.speed[i];
        num += a(trace.grid[static_cast<std::size_t>(i)]) * w;
        den += w;
    }
    return num / den;
}

Eigen::VectorXd apply_op_I(const EllipseGeometry& g, double hbar, const std::vector<double>& grid,
                           const Eigen::VectorXd& u) {
    const double h2 = hbar * hbar / (g.c() * g.c());
    Eigen::VectorXd out = -h2 * spectral_derivative(u, 2);
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double co = std::cos(grid[static_cast<std::size_t>(i)]);
        out[i] += co * co * u[i];
    }
    return out;
}

double op_I_moment(const EllipseGeometry& g, const BoundaryTrace& trace, int k) {
    Eigen::VectorXd v = trace.modified;
    for (int j = 0; j < k; ++j) v = apply_op_I(g, trace.record.hbar, trace.grid, v);
    return v.dot(trace.modified) / trace.modified.squaredNorm();
}

double op_I_expectation(const BoundaryTrace& trace, const EllipseGeometry& g, double hbar) {
    if (trace.grid.size() < static_cast<std::size_t>(20 * (trace.record.n + 1)))
        fail(ErrorCode::GridTooCoarse, "trace grid too coarse for the operator");
    const Eigen::VectorXd v = apply_op_I(g, hbar, trace.grid, trace.modified);
    return v.dot(trace.modified) / trace.modified.squaredNorm();
}

double limit_measure_integral(const EllipseGeometry& g, double alpha, const Symbol& a, BoundaryCondition bc,
                              double eps_sep) {
    level_branch(g, alpha, eps_sep);
    auto weight = [&](double th) {
        const double sp = boundary_speed(g, th);
        return bc == BoundaryCondition::Dirichlet ? 1.0 / sp : sp;
    };
    const double den = level_integral(g, alpha, weight);
    const double num = level_integral(g, alpha, [&](double th) { return a(th) * weight(th); });
    return num / den;
}

EtaProfile eta_profile(const EllipseGeometry& g, double alpha, const std::vector<double>& grid) {
    EtaProfile p;
    p.theta = grid;
    const double top = g.cosh2_rho_max();
    for (double th : grid) {
        const double co = std::cos(th);
        const double gap = alpha - co * co;
        const double sp = boundary_speed(g, th);
        const double pt = gap > 0 ? g.c() * std::sqrt(gap) : 0.0;
        const double e = pt / sp;
        p.eta.push_back(e);
        p.one_minus_eta2.push_back(1 - e * e);
        p.identity_residual.push_back(gap >= 0 ? (1 - e * e) - (top - alpha) / (top - co * co) : 0.0);
    }
    return p;
}

QuantumLimitReport convergence_study(const EllipseGeometry& g, const Ladder& ladder, const Symbol& a,
                                     const std::string& symbol_text) {
    QuantumLimitReport rep;
    rep.alpha = ladder.alpha_target;
    rep.symbol = symbol_text;
    if (ladder.entries.empty()) return rep;
    rep.bc = ladder.entries.front().bc;
    const double limit = limit_measure_integral(g, ladder.alpha_target, a, rep.bc);
    rep.rows.resize(ladder.entries.size());
    parallel_for(ladder.entries.size(), [&](std::size_t i) {
        const auto& e = ladder.entries[i];
        const auto tr = boundary_trace(g, e);
        const double me = matrix_element(tr, a);
        rep.rows[i] = {e.n, e.m, e.lambda, e.alpha, me, limit, std::abs(me - limit) / std::max(std::abs(limit), 0.1)};
    });
    std::vector<double> x, y;
    for (const auto& r : rep.rows) {
        x.push_back(std::log(static_cast<double>(r.n)));
        y.push_back(std::log(std::max(r.rel_error, 1e-300)));
    }
    if (x.size() >= 2) {
        rep.fit = trend_fit(x, y);
        rep.decreasing = rep.fit.slope < 0;
    }
    return rep;
}

QuantumLimitReport convergence_study(const EllipseGeometry& g, double alpha_target, const Symbol& a,
                                     const std::string& symbol_text, const SymmetryClass& cls, BoundaryCondition bc,
                                     const std::vector<int>& n_list, const SolveOptions& opt) {
    const auto ladder = build_ladder(g, alpha_target, cls, bc, n_list, opt);
    return convergence_study(g, ladder, a, symbol_text);
}

}  // namespace ellbill
