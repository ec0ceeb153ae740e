#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ellbill/rigidity.hpp"
#include "oracles.hpp"

using namespace ellbill;

namespace {
const EllipseGeometry kG = make_ellipse(std::sqrt(2.0), 1.0);
constexpr auto D = BoundaryCondition::Dirichlet;
constexpr auto N = BoundaryCondition::Neumann;
}  // namespace

TEST_CASE("Abel kernel identity") {
    double worst = 0;
    for (int i = 1; i <= 20; ++i) {
        const double u = i / 20.0;
        for (int j = 0; j < 20; ++j) {
            const double v = u * j / 20.0;
            worst = std::max(worst, std::abs(abel_identity(u, v) - oracle::kPi / 2));
        }
    }
    CHECK(worst < 1e-10);
    CHECK_THROWS_AS(abel_identity(0.5, 0.5), Error);
}

TEST_CASE("Abel transform of monomials") {
    for (int k = 0; k <= 5; ++k)
        for (double x : {0.1, 0.5, 0.9, 1.0})
            CHECK(abel_forward([k](double u) { return std::pow(u, k); }, x) ==
                  doctest::Approx(oracle::abel_monomial(k, x)).epsilon(1e-12));
}

TEST_CASE("Abel round trip") {
    const std::vector<std::function<double(double)>> fs = {
        [](double u) { return 1 - u; }, [](double u) { return std::exp(-u); }, [](double u) { return std::cos(3 * u); },
        [](double u) { return 1 / (1 + u * u); }, [](double u) { return u * u * u - 0.5 * u; }};
    for (const auto& f : fs) {
        auto g = [&](double x) { return abel_forward(f, x); };
        double worst = 0;
        for (int i = 1; i <= 20; ++i) {
            const double u = i / 20.0;
            worst = std::max(worst, std::abs(abel_inverse(g, u) - f(u)));
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("symmetric variations") {
    const auto v = SymmetricVariation::from_function([](double t) { return 1 + 0.5 * std::cos(2 * t) - 0.25 * std::cos(6 * t); }, 5);
    REQUIRE(v.size() == 5);
    CHECK(v.coefficients()[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(v.coefficients()[1] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(std::abs(v.coefficients()[2]) < 1e-13);
    CHECK(v.coefficients()[3] == doctest::Approx(-0.25).epsilon(1e-13));
    CHECK(v(0.3) == doctest::Approx(1 + 0.5 * std::cos(0.6) - 0.25 * std::cos(1.8)).epsilon(1e-13));
    CHECK_THROWS_AS(SymmetricVariation::from_function([](double t) { return std::cos(t); }, 4), Error);
    CHECK_THROWS_AS(SymmetricVariation::from_function([](double t) { return std::sin(2 * t); }, 4), Error);

    const auto p = SymmetricVariation::from_profile(kG, [](double u) { return 1 - u; }, 16);
    for (double u : {0.1, 0.5, 0.9}) CHECK(p.profile(kG, u) == doctest::Approx(1 - u).epsilon(1e-6));
}

TEST_CASE("Radon-Leray transform against raw-integrand quadrature") {
    const double C = kG.cosh2_rho_max();
    for (double alpha : {0.2, 0.6, 1.3, 1.8}) {
        auto rhodot = [](double t) { return 1 + 0.5 * std::cos(2 * t); };
        double expect = 0;
        if (alpha < 1) {
            expect = 2 * kG.c() *
                     oracle::turning_point_integral(
                         [&](double t, double v) { return rhodot(t) / std::sqrt(C - std::cos(t) * std::cos(t)) / std::sqrt(v); },
                         alpha);
        } else {
            expect = 2 * kG.c() * oracle::tanh_sinh([&](double t) {
                         const double c2 = std::cos(t) * std::cos(t);
                         return rhodot(t) / std::sqrt(C - c2) / std::sqrt(alpha - c2);
                     }, 0, oracle::kPi);
        }
        CHECK(radon_leray(kG, alpha, rhodot) == doctest::Approx(expect).epsilon(1e-9));
        CHECK(radon_leray(kG, alpha, SymmetricVariation({1.0, 0.5})) == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("Hadamard formulas") {
    const SymmetricVariation rhodot({1.0, 0.5});
    const auto rd = solve_intersection(kG, 2, 6, parse_class("ee"), D);
    const auto td = boundary_trace(kG, rd);
    CHECK(hadamard_dirichlet(td, rhodot) / (rd.lambda * rd.lambda) ==
          doctest::Approx(matrix_element(td, [&](double t) { return rhodot(t); })).epsilon(1e-12));
    CHECK_THROWS_AS(hadamard_neumann(td, rhodot), Error);
    const auto rn = solve_intersection(kG, 2, 6, parse_class("ee"), N);
    const auto tn = boundary_trace(kG, rn);
    CHECK_THROWS_AS(hadamard_dirichlet(tn, rhodot), Error);
}

TEST_CASE("Hadamard formulas predict the eigenvalue derivative along a -> a + da") {
    // Normal velocity of the family is b cos^2 / speed; x.nu = ab / speed fixes the
    // interior normalization through Rellich's identity.
    const double a = kG.a(), b = kG.b();
    const auto vel = SymmetricVariation::from_function(
        [&](double t) { return b * std::cos(t) * std::cos(t) / boundary_speed(kG, t); }, 40);
    const auto xnu = SymmetricVariation::from_function([&](double t) { return a * b / boundary_speed(kG, t); }, 40);
    struct Case {
        int m, n;
        const char* cls;
        BoundaryCondition bc;
    };
    for (const Case& k : {Case{2, 6, "ee", D}, Case{1, 3, "eo", D}, Case{2, 6, "ee", N}, Case{1, 2, "oo", N}}) {
        CAPTURE(k.cls);
        const auto rec = solve_intersection(kG, k.m, k.n, parse_class(k.cls), k.bc);
        const auto tr = boundary_trace(kG, rec);
        const double predicted = k.bc == D ? -2 * hadamard_dirichlet(tr, vel) / hadamard_dirichlet(tr, xnu)
                                           : -2 * hadamard_neumann(tr, vel) / hadamard_neumann(tr, xnu);
        const double eps = 1e-4;
        const double lp = solve_intersection(make_ellipse(a + eps, b), k.m, k.n, parse_class(k.cls), k.bc).lambda;
        const double lm = solve_intersection(make_ellipse(a - eps, b), k.m, k.n, parse_class(k.cls), k.bc).lambda;
        const double fd = (2 * std::log(lp) - 2 * std::log(lm)) / (2 * eps);
        CHECK(predicted == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("kernel conditioning and planted reconstruction") {
    for (int K : {4, 8, 12}) {
        const auto rep = kernel_test(kG, K, level_grid(kG, Branch::Inside, 2 * K), Branch::Inside,
                                     [](double u) { return 1 - u; });
        CHECK(rep.sigma_min > 0);
        CHECK(rep.reconstruction_error < 1e-4);
        CHECK(rep.assembly_mismatch < 1e-10);
    }
    const auto out = kernel_test(kG, 4, level_grid(kG, Branch::Outside, 8), Branch::Outside,
                                 [](double u) { return 1 - u; });
    CHECK(out.sigma_min > 0);
}

TEST_CASE("Abel pipeline recovers a planted profile") {
    std::vector<double> u;
    for (int i = 1; i < 20; ++i) u.push_back(0.05 * i);
    const auto rep = abel_reconstruction(kG, [](double x) { return 1 - x; }, u);
    CHECK(rep.sup_error < 1e-6);
}

TEST_CASE("outside moments of the constant function") {
    const auto ms = moment_test_outside(kG, [](double) { return 1.0; }, 4);
    REQUIRE(ms.size() == 5);
    for (const auto& m : ms) CHECK(m.value == doctest::Approx(oracle::outside_moment_of_one(kG.cosh2_rho_max(), m.n)).epsilon(1e-12));
}
