#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ellbill/spectrum.hpp"
#include "oracles.hpp"

using namespace ellbill;

namespace {
const EllipseGeometry kG = make_ellipse(std::sqrt(2.0), 1.0);
constexpr auto D = BoundaryCondition::Dirichlet;
constexpr auto N = BoundaryCondition::Neumann;
}  // namespace

TEST_CASE("class names") {
    for (const auto& cls : kAllClasses) CHECK(parse_class(class_name(cls)) == cls);
    CHECK(class_name(parse_class("oe")) == "oe");
    CHECK(parse_class("oe").parity_x == Parity::Odd);
    CHECK_THROWS_AS(parse_class("xe"), Error);
    CHECK_THROWS_AS(parse_class("eee"), Error);
    // cos n theta: x parity of n; sin n theta: the opposite.
    CHECK(x_parity(2, Parity::Even) == Parity::Even);
    CHECK(x_parity(3, Parity::Even) == Parity::Odd);
    CHECK(x_parity(1, Parity::Odd) == Parity::Even);
    CHECK(x_parity(2, Parity::Odd) == Parity::Odd);
}

TEST_CASE("solved records satisfy both separated equations") {
    struct Case {
        int m, n;
        const char* cls;
        BoundaryCondition bc;
    };
    const Case cases[] = {{0, 0, "ee", D}, {2, 4, "ee", D}, {1, 3, "oe", D}, {1, 1, "eo", D}, {3, 2, "oo", D},
                          {0, 6, "ee", D}, {1, 0, "ee", N}, {2, 1, "oe", N}, {1, 2, "oo", N}, {4, 5, "eo", N}};
    for (const auto& k : cases) {
        CAPTURE(k.m);
        CAPTURE(k.n);
        CAPTURE(k.cls);
        const SymmetryClass cls = parse_class(k.cls);
        const EigenvalueRecord r = solve_intersection(kG, k.m, k.n, cls, k.bc);
        CHECK(r.lambda * r.hbar == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(std::abs(r.gap) < 1e-11);
        CHECK(r.hbar_error <= 1e-12 * r.hbar);
        // Angular side: independent shooting in the standard form.
        const char fam = cls.parity_y == Parity::Even ? 'a' : 'b';
        CHECK(r.alpha == doctest::Approx(oracle::angular_alpha(kG.c(), r.hbar, fam, k.n)).epsilon(1e-9));
        // Radial side: fixed-step RK4 at the same alpha satisfies the outer condition.
        const auto shot = oracle::radial_shoot(kG.c(), kG.rho_max(), r.hbar, cls.parity_y == Parity::Even, r.alpha);
        const double resid = k.bc == D ? shot.F_end / shot.max_abs : shot.dF_end * r.hbar / (kG.c() * shot.max_abs);
        CHECK(std::abs(resid) < 1e-6);
        CHECK(shot.interior_sign_changes == (cls.parity_y == Parity::Even ? k.m : k.m - 1));
        CHECK(std::abs(r.hbar_seed - r.hbar) < 0.1 * r.hbar);
        CHECK(fixed_point_refine(kG, k.m, k.n, cls, k.bc, r.hbar_seed) == doctest::Approx(r.hbar).epsilon(1e-11));
    }
}

TEST_CASE("lattice points outside the class are rejected") {
    CHECK_THROWS_AS(solve_intersection(kG, 0, 1, parse_class("ee"), D), Error);
    CHECK_THROWS_AS(solve_intersection(kG, 0, 2, parse_class("eo"), D), Error);
    CHECK_THROWS_AS(solve_intersection(kG, 1, 0, parse_class("eo"), D), Error);
}

TEST_CASE("Neumann constant mode and the first nonzero Neumann eigenvalue") {
    CHECK_THROWS_AS(solve_intersection(kG, 0, 0, parse_class("ee"), N), Error);
    const double lambda1 = solve_intersection(kG, 0, 0, parse_class("ee"), D).lambda;
    // Friedlander: mu_2 < lambda_1.
    const double mu2 = solve_intersection(kG, 0, 1, parse_class("oe"), N).lambda;
    CHECK(mu2 > 0);
    CHECK(mu2 < lambda1);
}

TEST_CASE("ladders") {
    const Ladder lad = build_ladder(kG, 1.2, parse_class("ee"), D, {10, 21, 40});
    REQUIRE(lad.entries.size() == 3);
    CHECK(lad.branch == Branch::Outside);
    CHECK(lad.entries[1].n == 22);
    for (std::size_t i = 1; i < lad.entries.size(); ++i) CHECK(lad.entries[i].n > lad.entries[i - 1].n);
    for (const auto& e : lad.entries) CHECK(std::abs(e.alpha - 1.2) < 0.2);
    const Ladder in = build_ladder(kG, 0.5, parse_class("oo"), N, {11, 21});
    CHECK(in.branch == Branch::Inside);
    for (const auto& e : in.entries) CHECK(e.n % 2 == 0);
    CHECK_THROWS_AS(build_ladder(kG, 1.0, parse_class("ee"), D, {10}), Error);
}

TEST_CASE("trend fit") {
    const TrendFit up = trend_fit({1, 2, 3, 4}, {2, 4, 6, 8.01});
    CHECK(up.slope == doctest::Approx(oracle::slope({1, 2, 3, 4}, {2, 4, 6, 8.01})));
    CHECK_FALSE(up.no_growth);
    const TrendFit flat = trend_fit({1, 2, 3, 4}, {1, 1.1, 0.9, 1.0});
    CHECK(flat.no_growth);
}

TEST_CASE("clustering of merged records") {
    std::vector<EigenvalueRecord> recs(4);
    recs[0].lambda = 3.0;
    recs[1].lambda = 1.0;
    recs[2].lambda = 1.0 + 1e-9;
    recs[3].lambda = 2.0;
    const SpacingReport rep = cluster_records(recs, 1e-6);
    REQUIRE(rep.rows.size() == 4);
    CHECK(rep.rows[0].record.lambda <= rep.rows[1].record.lambda);
    CHECK(rep.rows[0].cluster == rep.rows[1].cluster);
    CHECK(rep.rows[2].cluster != rep.rows[1].cluster);
    CHECK(rep.clusters_of_size_two == 1);
    CHECK(rep.clusters_of_size_three_or_more == 0);
}

TEST_CASE("merged spectrum is the union of the classes") {
    const SpacingReport rep = spacing_report(kG, D, 5.0);
    std::size_t total = 0;
    for (const auto& cls : kAllClasses) total += enumerate_class(kG, cls, D, 5.0).size();
    CHECK(rep.rows.size() == total);
    for (std::size_t i = 1; i < rep.rows.size(); ++i) CHECK(rep.rows[i].record.lambda >= rep.rows[i - 1].record.lambda);
    CHECK(rep.rows.front().record.cls == parse_class("ee"));
}
