#include "ellbill/rigidity.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "ellbill/parallel.hpp"
#include "ellbill/quadrature.hpp"

namespace ellbill {

namespace {

constexpr double kPi = std::numbers::pi;

double profile_weight(const EllipseGeometry& g, double u) { return std::sqrt(g.cosh2_rho_max() - u); }

}  // namespace

SymmetricVariation::SymmetricVariation(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

SymmetricVariation SymmetricVariation::from_function(const std::function<double(double)>& f, int K, double sym_tol) {
    if (K < 1) fail(ErrorCode::InvalidArgument, "variation needs at least one coefficient");
    const int n = std::max(512, 16 * K);
    std::vector<double> samples(n);
    double scale = 0;
    for (int i = 0; i < n; ++i) {
        samples[i] = f(2 * kPi * i / n);
        scale = std::max(scale, std::abs(samples[i]));
    }
    for (int i = 0; i < 64; ++i) {
        const double th = 0.1 + 0.097 * i;
        const double v = f(th);
        if (std::abs(f(-th) - v) > sym_tol * std::max(scale, 1e-300) ||
            std::abs(f(kPi - th) - v) > sym_tol * std::max(scale, 1e-300))
            fail(ErrorCode::NotSymmetric, "variation is not invariant under both axis reflections");
    }
    std::vector<double> coeffs(K, 0.0);
    for (int k = 0; k < K; ++k) {
        double s = 0;
        for (int i = 0; i < n; ++i) s += samples[i] * std::cos(2.0 * k * 2 * kPi * i / n);
        coeffs[k] = (k == 0 ? 1.0 : 2.0) * s / n;
    }
    return SymmetricVariation(std::move(coeffs));
}

SymmetricVariation SymmetricVariation::from_profile(const EllipseGeometry& g, const std::function<double(double)>& P,
                                                    int K) {
    return from_function(
        [&](double th) {
            const double co = std::cos(th);
            return P(co * co) * profile_weight(g, co * co);
        },
        K);
}

double SymmetricVariation::operator()(double theta) const {
    double s = 0;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) s += coeffs_[k] * std::cos(2.0 * static_cast<double>(k) * theta);
    return s;
}

double SymmetricVariation::profile(const EllipseGeometry& g, double u) const {
    return (*this)(std::acos(std::sqrt(std::clamp(u, 0.0, 1.0)))) / profile_weight(g, u);
}

double hadamard_dirichlet(const BoundaryTrace& trace, const SymmetricVariation& rhodot) {
    if (trace.kind != BoundaryCondition::Dirichlet) fail(ErrorCode::KindMismatch, "Dirichlet formula needs a Dirichlet trace");
    const double lambda = trace.record.lambda;
    const double h = 2 * kPi / static_cast<double>(trace.grid.size());
    double s = 0;
    for (Eigen::Index i = 0; i < trace.values.size(); ++i)
        s += rhodot(trace.grid[static_cast<std::size_t>(i)]) * trace.values[i] * trace.values[i] * trace.speed[i];
    return lambda * lambda * s * h;
}

double hadamard_neumann(const BoundaryTrace& trace, const SymmetricVariation& rhodot) {
    if (trace.kind != BoundaryCondition::Neumann) fail(ErrorCode::KindMismatch, "Neumann formula needs a Neumann trace");
    const double lambda = trace.record.lambda;
    const Eigen::VectorXd du = spectral_derivative(trace.values, 1);
    const double h = 2 * kPi / static_cast<double>(trace.grid.size());
    double s = 0;
    for (Eigen::Index i = 0; i < trace.values.size(); ++i) {
        const double tangential = du[i] / trace.speed[i];
        const double density = tangential * tangential - lambda * lambda * trace.values[i] * trace.values[i];
        s += density * rhodot(trace.grid[static_cast<std::size_t>(i)]) * trace.speed[i];
    }
    return s * h;
}

double radon_leray(const EllipseGeometry& g, double alpha, const std::function<double(double)>& rhodot,
                   double eps_sep) {
    level_branch(g, alpha, eps_sep);
    const double top = g.cosh2_rho_max();
    return level_integral(g, alpha, [&](double th) {
        const double co = std::cos(th);
        return rhodot(th) / std::sqrt(top - co * co);
    });
}

double radon_leray(const EllipseGeometry& g, double alpha, const SymmetricVariation& rhodot, double eps_sep) {
    return radon_leray(g, alpha, [&](double th) { return rhodot(th); }, eps_sep);
}

double neumann_reduction_limit(const EllipseGeometry& g, double alpha, const SymmetricVariation& rhodot,
                               double eps_sep) {
    const double transform = radon_leray(g, alpha, rhodot, eps_sep);
    const double mass = level_integral(g, alpha, [&](double th) { return boundary_speed(g, th); });
    return g.c() * (alpha - g.cosh2_rho_max()) * transform / mass;
}

double abel_forward(const std::function<double(double)>& f, double x, double tol) {
    auto integrand = [&](double t) { return f(x * std::sin(t)); };
    return quad::gauss_kronrod(integrand, 0.0, kPi / 2, tol, tol).value;
}

double abel_inverse(const std::function<double(double)>& g, double u, double tol) {
    auto H = [&](double v) {
        auto integrand = [&](double t) {
            const double x = v * std::sin(t);
            return x * g(x);
        };
        return quad::gauss_kronrod(integrand, 0.0, kPi / 2, tol, tol).value;
    };
    const double h = std::cbrt(tol) * u;
    double dH = 0;
    if (u + h <= 1.0) dH = (H(u + h) - H(u - h)) / (2 * h);
    else dH = (3 * H(u) - 4 * H(u - h) + H(u - 2 * h)) / (2 * h);
    return 2 / kPi * dH;
}

double abel_identity(double u, double v, double tol) {
    if (!(v >= 0) || !(u > v)) fail(ErrorCode::InvalidArgument, "abel_identity needs 0 <= v < u");
    const double mid = 0.5 * (u + v);
    // x = v + s^2 on [v, mid] and x = u - s^2 on [mid, u].
    auto left = [&](double s) {
        const double x = v + s * s;
        return 2 * x / (std::sqrt((u - x) * (u + x)) * std::sqrt(x + v));
    };
    auto right = [&](double s) {
        const double x = u - s * s;
        return 2 * x / (std::sqrt(u + x) * std::sqrt((x - v) * (x + v)));
    };
    const double w = std::sqrt(mid - v);
    return quad::gauss_kronrod(left, 0.0, w, tol, tol).value + quad::gauss_kronrod(right, 0.0, w, tol, tol).value;
}

std::vector<double> level_grid(const EllipseGeometry& g, Branch branch, int M, double eps_sep) {
    const auto iv = branch_interval(g, branch, eps_sep);
    std::vector<double> out(M);
    for (int i = 0; i < M; ++i) out[i] = iv.lo + (iv.hi - iv.lo) * (i + 0.5) / M;
    return out;
}

KernelReport kernel_test(const EllipseGeometry& g, int K, const std::vector<double>& alphas, Branch branch,
                         const std::function<double(double)>& planted_profile, double eps_sep) {
    if (K < 1) fail(ErrorCode::InvalidArgument, "basis size must be positive");
    KernelReport rep;
    rep.branch = branch;
    rep.K = K;
    rep.alphas = alphas;
    for (double a : alphas)
        if (level_branch(g, a, eps_sep) != branch) fail(ErrorCode::InvalidArgument, "level on the wrong branch");
    const Eigen::Index M = static_cast<Eigen::Index>(alphas.size());
    rep.T.resize(M, K);
    parallel_for(static_cast<std::size_t>(M * K), [&](std::size_t idx) {
        const Eigen::Index i = static_cast<Eigen::Index>(idx) / K, j = static_cast<Eigen::Index>(idx) % K;
        rep.T(i, j) = radon_leray(g, alphas[static_cast<std::size_t>(i)],
                                  [j](double th) { return std::cos(2.0 * static_cast<double>(j) * th); }, eps_sep);
    });

    Eigen::MatrixXd normalized = rep.T;
    for (Eigen::Index j = 0; j < K; ++j) normalized.col(j) /= normalized.col(j).norm();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(normalized);
    rep.singular_values = svd.singularValues();
    rep.sigma_min = rep.singular_values[rep.singular_values.size() - 1];
    rep.condition = rep.singular_values[0] / rep.sigma_min;

    const auto planted = SymmetricVariation::from_profile(g, planted_profile, K);
    rep.planted = planted.coefficients();
    Eigen::VectorXd b(M);
    parallel_for(static_cast<std::size_t>(M), [&](std::size_t i) {
        b[static_cast<Eigen::Index>(i)] = radon_leray(g, alphas[i], planted, eps_sep);
    });
    const Eigen::VectorXd pc = Eigen::Map<const Eigen::VectorXd>(rep.planted.data(), K);
    rep.assembly_mismatch = (rep.T * pc - b).cwiseAbs().maxCoeff();

    const Eigen::VectorXd x = rep.T.colPivHouseholderQr().solve(b);
    rep.recovered.assign(x.data(), x.data() + K);
    const SymmetricVariation recovered(rep.recovered);
    for (int i = 0; i <= 200; ++i) {
        const double u = i / 200.0;
        rep.reconstruction_error =
            std::max(rep.reconstruction_error, std::abs(recovered.profile(g, u) - planted.profile(g, u)));
    }
    return rep;
}

AbelReconstruction abel_reconstruction(const EllipseGeometry& g, const std::function<double(double)>& planted_profile,
                                       const std::vector<double>& u_grid, double eps_sep) {
    (void)eps_sep;
    const double top = g.cosh2_rho_max();
    auto rhodot = [&](double th) {
        const double co = std::cos(th);
        return planted_profile(co * co) * std::sqrt(top - co * co);
    };
    // The inner Abel integral samples levels down to alpha = 0, below the band
    // used elsewhere, so the transform is evaluated without the level check.
    auto transform = [&](double x) {
        if (x <= 0) return kPi / 2 * planted_profile(0.0);
        const double alpha = x * x;
        const double v = level_integral(g, alpha, [&](double th) {
            const double co = std::cos(th);
            return rhodot(th) / std::sqrt(top - co * co);
        });
        return v / (4 * g.c());
    };
    AbelReconstruction out;
    out.u = u_grid;
    out.recovered.resize(u_grid.size());
    out.planted.resize(u_grid.size());
    parallel_for(u_grid.size(), [&](std::size_t i) {
        const double u = u_grid[i];
        const double f = abel_inverse(transform, u);
        out.recovered[i] = f * std::sqrt(1 - u * u);
        out.planted[i] = planted_profile(u * u);
    });
    for (std::size_t i = 0; i < u_grid.size(); ++i)
        out.sup_error = std::max(out.sup_error, std::abs(out.recovered[i] - out.planted[i]));
    return out;
}

std::vector<Moment> moment_test_outside(const EllipseGeometry& g, const std::function<double(double)>& f, int N_max) {
    const double top = g.cosh2_rho_max();
    std::vector<Moment> out;
    for (int n = 0; n <= N_max; ++n) {
        auto integrand = [&](double t) {
            const double s = std::sin(t), c = std::cos(t);
            const double u = s * s;
            return f(u) * 2 * s * c * std::pow(top - u, -n - 0.5);
        };
        const auto r = quad::gauss_kronrod(integrand, 0.0, kPi / 2, 1e-14, 1e-13);
        out.push_back({n, r.value, std::max(r.error, 1e-16 * std::abs(r.value))});
    }
    return out;
}

}  // namespace ellbill
