#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "ellbill/cauchy.hpp"
#include "ellbill/symbol.hpp"
#include "oracles.hpp"

using namespace ellbill;

namespace {

const EllipseGeometry kG = make_ellipse(std::sqrt(2.0), 1.0);
constexpr auto D = BoundaryCondition::Dirichlet;
constexpr auto N = BoundaryCondition::Neumann;

bool same_bits(double x, double y) { return std::memcmp(&x, &y, sizeof x) == 0; }

}  // namespace

TEST_CASE("symbol expressions evaluate bit for bit like the C++ expression") {
    const Expression e1("cos(2*theta) + 3*theta^2/2 - -1", "theta");
    const Expression e2("sin(theta)^2 * exp(-theta/4) + sqrt(abs(theta - pi))", "theta");
    const Expression e3("2^3^2 - 2^-1 + -2^2", "theta");
    const Expression e4("1 - u", "u");
    for (double x : {0.0, 0.25, 1.0, 2.5, -3.75, 6.1}) {
        CHECK(same_bits(e1(x), std::cos(2 * x) + 3 * std::pow(x, 2) / 2 - -1));
        CHECK(same_bits(e2(x), std::pow(std::sin(x), 2) * std::exp(-x / 4) + std::sqrt(std::abs(x - oracle::kPi))));
        CHECK(same_bits(e4(x), 1 - x));
    }
    CHECK(e3(0) == 512 - 0.5 - 4);
    CHECK(Expression(" ( theta ) ", "theta")(1.5) == 1.5);
    CHECK(Expression("1e-3*theta", "theta")(2.0) == 2e-3);
}

TEST_CASE("malformed symbols are parse errors") {
    for (const char* bad : {"", "cos(", "2*", "theta theta", "u", "foo(theta)", "1..2", "(1", "1)", "^2"}) {
        CAPTURE(bad);
        try {
            Expression e(bad, "theta");
            FAIL("accepted");
        } catch (const Error& err) {
            CHECK(err.code() == ErrorCode::ParseError);
        }
    }
}

TEST_CASE("spectral derivative") {
    const int n = 64;
    Eigen::VectorXd f(n), d1(n), d2(n);
    for (int i = 0; i < n; ++i) {
        const double t = 2 * oracle::kPi * i / n;
        f[i] = std::sin(3 * t) + 0.5 * std::cos(5 * t);
        d1[i] = 3 * std::cos(3 * t) - 2.5 * std::sin(5 * t);
        d2[i] = -9 * std::sin(3 * t) - 12.5 * std::cos(5 * t);
    }
    CHECK((spectral_derivative(f, 1) - d1).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((spectral_derivative(f, 2) - d2).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("traces are normalized and match the separated solution") {
    for (auto [m, n, cls, bc] : {std::tuple{2, 6, "ee", D}, std::tuple{1, 3, "eo", N}, std::tuple{3, 5, "oe", D},
                                 std::tuple{0, 4, "ee", N}}) {
        const EigenvalueRecord r = solve_intersection(kG, m, n, parse_class(cls), bc);
        const BoundaryTrace tr = boundary_trace(kG, r);
        const double h = 2 * oracle::kPi / tr.grid.size();
        double norm = 0;
        for (Eigen::Index i = 0; i < tr.values.size(); ++i) norm += h * tr.values[i] * tr.values[i] * tr.speed[i];
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(matrix_element(tr, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-12));

        // Outer data against fixed-step RK4, with a finite-difference F'(rho_max).
        const auto shot = oracle::radial_shoot(kG.c(), kG.rho_max(), r.hbar, r.cls.parity_y == Parity::Even, r.alpha);
        double l2 = 0;
        const double dr = shot.rho[1] - shot.rho[0];
        for (std::size_t i = 0; i < shot.F.size(); ++i)
            l2 += (i == 0 || i + 1 == shot.F.size() ? 0.5 : 1.0) * dr * shot.F[i] * shot.F[i];
        const std::size_t e = shot.F.size() - 1;
        const double fd = (25 * shot.F[e] - 48 * shot.F[e - 1] + 36 * shot.F[e - 2] - 16 * shot.F[e - 3] + 3 * shot.F[e - 4]) /
                          (12 * dr);
        if (bc == D) {
            CHECK(tr.dF_end == doctest::Approx(fd / std::sqrt(l2)).epsilon(1e-6));
        } else {
            CHECK(tr.F_end == doctest::Approx(shot.F_end / std::sqrt(l2)).epsilon(1e-6));
        }

        // u^b is (hbar F' G / speed) for Dirichlet and F G for Neumann, up to one constant.
        const AngularFunction G = angular_function(kG, r.hbar, {r.cls.parity_y, r.n});
        double ratio = 0;
        for (Eigen::Index i = 0; i < tr.values.size(); i += 7) {
            const double th = tr.grid[i];
            const double expect = bc == D ? r.hbar * tr.dF_end * G.value(th) / tr.speed[i] : tr.F_end * G.value(th);
            if (std::abs(expect) < 1e-3) continue;
            if (ratio == 0) ratio = tr.values[i] / expect;
            CHECK(tr.values[i] / expect == doctest::Approx(ratio).epsilon(1e-10));
        }
    }
    const EigenvalueRecord r = solve_intersection(kG, 0, 4, parse_class("ee"), D);
    CHECK_THROWS_AS(boundary_trace(kG, r, 50), Error);
}

TEST_CASE("the modified trace is an exact eigenfunction of Op(I)") {
    for (auto [m, n, cls, bc] : {std::tuple{2, 6, "ee", D}, std::tuple{1, 3, "eo", N}, std::tuple{0, 9, "oe", D}}) {
        const EigenvalueRecord r = solve_intersection(kG, m, n, parse_class(cls), bc);
        const BoundaryTrace tr = boundary_trace(kG, r);
        CHECK(std::abs(op_I_expectation(tr, kG, r.hbar) - r.alpha) < 1e-7);
        for (int k = 1; k <= 3; ++k) CHECK(std::abs(op_I_moment(kG, tr, k) - std::pow(r.alpha, k)) < 1e-6);
    }
}

TEST_CASE("limit measure against raw-integrand quadrature") {
    auto cos2 = [](double t) { return std::cos(2 * t); };
    for (double alpha : {0.3, 0.5, 0.8, 1.2, 1.6}) {
        for (BoundaryCondition bc : {D, N}) {
            auto w = [&](double t, double v) {
                const double sp = boundary_speed(kG, t);
                return (bc == D ? 1 / sp : sp) / std::sqrt(v);
            };
            double num = 0, den = 0;
            if (alpha < 1) {
                num = oracle::turning_point_integral([&](double t, double v) { return cos2(t) * w(t, v); }, alpha);
                den = oracle::turning_point_integral(w, alpha);
            } else {
                auto v = [&](double t) { return alpha - std::cos(t) * std::cos(t); };
                num = oracle::tanh_sinh([&](double t) { return cos2(t) * w(t, v(t)); }, 0, oracle::kPi);
                den = oracle::tanh_sinh([&](double t) { return w(t, v(t)); }, 0, oracle::kPi);
            }
            CHECK(limit_measure_integral(kG, alpha, cos2, bc) == doctest::Approx(num / den).epsilon(1e-9));
            CHECK(limit_measure_integral(kG, alpha, [](double) { return 1.0; }, bc) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(limit_measure_integral(kG, 1.0, cos2, D), Error);
}

TEST_CASE("eta identity on the boundary") {
    std::vector<double> grid;
    for (int i = 0; i < 200; ++i) grid.push_back(2 * oracle::kPi * i / 200);
    for (double alpha : {0.4, 1.3}) {
        const EtaProfile p = eta_profile(kG, alpha, grid);
        for (double r : p.identity_residual) CHECK(std::abs(r) < 1e-12);
    }
}

TEST_CASE("matrix elements approach the limit along a short ladder") {
    auto cos2 = [](double t) { return std::cos(2 * t); };
    const QuantumLimitReport rep = convergence_study(kG, 0.5, cos2, "cos(2*theta)", parse_class("ee"), D, {10, 20, 40});
    REQUIRE(rep.rows.size() == 3);
    for (const auto& row : rep.rows) CHECK(row.rel_error < 0.05);
}
