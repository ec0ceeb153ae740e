#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ellbill/oracle2d.hpp"
#include "ellbill/spectrum.hpp"
#include "oracles.hpp"

using namespace ellbill;

TEST_CASE("rectangle eigenvalues with Richardson extrapolation") {
    const RectangleDomain rect(1.0, 0.5);
    const FdResult coarse = fd_eigenvalues(rect, 0.02, 4);
    const FdResult fine = fd_eigenvalues(rect, 0.01, 4);
    std::vector<double> exact;
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 2; ++j) exact.push_back(oracle::kPi * oracle::kPi * (i * i + 4.0 * j * j));
    std::sort(exact.begin(), exact.end());
    const Extrapolated ex = richardson(coarse, fine);
    for (int k = 0; k < 4; ++k) {
        CHECK(fine.pairs[k].lambda2 == doctest::Approx(exact[k]).epsilon(2e-3));
        CHECK(ex.lambda2[k] == doctest::Approx(exact[k]).epsilon(1e-5));
        CHECK(fine.pairs[k].residual < 1e-8);
    }
}

TEST_CASE("unit square fundamental tone and second-order convergence") {
    const RectangleDomain sq(1.0, 1.0);
    const double l1 = fd_eigenvalues(sq, 0.04, 1).pairs[0].lambda2;
    const double l2 = fd_eigenvalues(sq, 0.02, 1).pairs[0].lambda2;
    const double l3 = fd_eigenvalues(sq, 0.01, 1).pairs[0].lambda2;
    CHECK(l3 == doctest::Approx(2 * oracle::kPi * oracle::kPi).epsilon(1e-4));
    CHECK(convergence_order(l1, l2, l3) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("ellipse: curved boundary, parities and agreement with the separable solver") {
    const EllipseGeometry g = make_ellipse(2.0, 1.0);
    const FdResult coarse = fd_eigenvalues(g, 0.02, 4);
    const FdResult fine = fd_eigenvalues(g, 0.01, 4);
    const Extrapolated ex = richardson(coarse, fine);
    const struct {
        int m, n;
        const char* cls;
    } modes[] = {{0, 0, "ee"}, {0, 1, "oe"}, {0, 2, "ee"}, {1, 1, "eo"}};
    for (int k = 0; k < 4; ++k) {
        const auto cls = parse_class(modes[k].cls);
        const double sep = solve_intersection(g, modes[k].m, modes[k].n, cls, BoundaryCondition::Dirichlet).lambda;
        CHECK(ex.lambda2[k] == doctest::Approx(sep * sep).epsilon(1e-5));
        CHECK(fine.pairs[k].parity_x == (cls.parity_x == Parity::Even ? 1 : -1));
        CHECK(fine.pairs[k].parity_y == (cls.parity_y == Parity::Even ? 1 : -1));
    }
    CHECK_THROWS_AS(fd_eigenvalues(g, 0.05, 4), Error);
    CHECK_THROWS_AS(fd_eigenvalues(g, 0.01, 21), Error);
}

TEST_CASE("fixed seed makes runs reproducible") {
    const RectangleDomain rect(1.0, 0.7);
    const FdResult a = fd_eigenvalues(rect, 0.04, 3);
    const FdResult b = fd_eigenvalues(rect, 0.04, 3);
    for (int k = 0; k < 3; ++k) CHECK(a.pairs[k].lambda2 == b.pairs[k].lambda2);
}
