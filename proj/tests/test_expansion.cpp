#include "doctest.h"

#include "pshdef/expansion.hpp"
#include "support.hpp"

using namespace pshdef;
using namespace pshdef::expansion;
using pshdef::expr::Field;
using pshdef::testing::rel_gap;
using pshdef::testing::Rng;

TEST_CASE("build_rho") {
    Field r = pshdef::testing::field_example6();
    Field zero = expr::constant(0.0);

    // X = 0, K = 0 -> rho = r
    Field rho0 = build_rho(r, zero, 0.0, 0.0);
    Point p = Point::from_reals(0.1, -0.2, 0.05, 0.15);
    CHECK(rho0.eval(p) == doctest::Approx(r.eval(p)).epsilon(1e-15));

    // Example domain: rho = r (1 + r - |z|^2)
    Field rho6 = build_rho(r, expr::abs2_z(), 1.0, -1.0);
    double rv = r.eval(p);
    CHECK(rho6.eval(p) ==
          doctest::Approx(rv * (1.0 + rv - std::norm(p.z))).epsilon(1e-14));

    // L = 0 keeps only the Kohn factor regardless of X.
    Field rho_k = build_rho(r, expr::abs2_z(), 2.0, 0.0);
    CHECK(rho_k.eval(p) == doctest::Approx(rv * (1.0 + 2.0 * rv)).epsilon(1e-14));
}

TEST_CASE("coefficients of flat and round model cases") {
    Rng rng(101);
    Field one = expr::constant(1.0);

    Field im = Field::parse("Im(w)");
    for (int i = 0; i < 5; ++i) {
        Point q = pshdef::testing::random_point(rng);
        ExpansionCoeffs c = coeffs(im, one, rng.uniform(-3, 3), q);
        CHECK(std::abs(c.c0) <= 1e-15);
        CHECK(std::abs(c.c1) <= 1e-15);
        CHECK(std::abs(c.c2) <= 1e-15);
    }

    Field ball = pshdef::testing::field_ball();
    for (int i = 0; i < 5; ++i) {
        Point q = pshdef::testing::random_point(rng, 0.7);
        ExpansionCoeffs c = coeffs(ball, one, 0.0, q);
        CHECK(c.c0 == doctest::Approx(1.0));
        CHECK(std::abs(c.c1) <= 1e-14);
        CHECK(std::abs(c.c2) <= 1e-14);
        CHECK(geometry::hdet(ball, q) == doctest::Approx(1.0));
    }
}

TEST_CASE("full identity on random fields") {
    Rng rng(20260810);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        Field r = pshdef::testing::random_field(rng);
        Field P = pshdef::testing::random_field(rng);
        double K = rng.uniform(-5, 5);
        Point q = pshdef::testing::random_point(rng);
        worst = std::max(worst, residual_full(r, P, K, q));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("full identity on the example domain") {
    Field r = pshdef::testing::field_example6();
    Field P = build_p(expr::abs2_z(), -1.0);
    CHECK(residual_full(r, P, 1.0, Point{{0.05, 0}, {-0.01, 0}}) <= 1e-9);
    Rng rng(7);
    for (int i = 0; i < 20; ++i)
        CHECK(residual_full(r, P, rng.uniform(0, 10), pshdef::testing::random_point(rng, 0.3)) <=
              1e-9);
}

TEST_CASE("intermediate identity for the squared factor") {
    // Ball at (0.5, 0): det H_{r^2} = 1.5 against 4r L + 4r^2 det H_r
    // with r = -0.75, L = 0.25, det H_r = 1.
    Field ball = pshdef::testing::field_ball();
    Point q{{0.5, 0}, {0, 0}};
    CHECK(geometry::hdet(expr::pow(ball, 2), q) == doctest::Approx(1.5));
    CHECK(geometry::levi(ball, q) == doctest::Approx(0.25));
    CHECK(residual_term(TermIdentity::HessianRR, ball, expr::constant(1.0), 1.0, q) <= 1e-14);
}

TEST_CASE("intermediate identities on random fields") {
    Rng rng(303);
    for (int i = 0; i < 60; ++i) {
        Field r = pshdef::testing::random_field(rng);
        Field P = pshdef::testing::random_field(rng);
        double K = rng.uniform(-5, 5);
        Point q = pshdef::testing::random_point(rng);
        CHECK(residual_term(TermIdentity::HessianRR, r, P, K, q) <= 1e-9);
        CHECK(residual_term(TermIdentity::HessianPR, r, P, K, q) <= 1e-9);
        CHECK(residual_term(TermIdentity::HessianA, r, P, K, q) <= 1e-9);
    }
    // P = 1 reduces the product identity to det H_r = det H_r.
    Field r = pshdef::testing::random_field(rng);
    CHECK(residual_term(TermIdentity::HessianPR, r, expr::constant(1.0), 0.0,
                        pshdef::testing::random_point(rng)) <= 1e-12);
}

TEST_CASE("term identity names") {
    CHECK(term_from_name("HessianRR") == TermIdentity::HessianRR);
    CHECK(term_from_name("HessianPR") == TermIdentity::HessianPR);
    CHECK(term_from_name("HessianA") == TermIdentity::HessianA);
    CHECK_THROWS_AS(term_from_name("bogus"), DomainError);
}

TEST_CASE("boundary specialization reduces to c0") {
    Rng rng(505);
    int done = 0;
    while (done < 30) {
        Field r = pshdef::testing::field_halfspace() + pshdef::testing::random_graph_field(rng);
        auto p = pshdef::testing::root_along_y2(r, rng.uniform(-0.3, 0.3),
                                                rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
        if (!p) continue;
        REQUIRE(std::abs(r.eval(*p)) <= 1e-12);
        Field P = pshdef::testing::random_field(rng);
        double K = rng.uniform(-3, 3);
        ExpansionCoeffs c = coeffs(r, P, K, *p);
        Field rho = r * (expr::constant(K) * r + P);
        double lhs = geometry::hdet(rho, *p);
        CHECK(rel_gap(lhs, c.c0) <= 1e-9);
        ++done;
    }
}

TEST_CASE("coefficients are quadratic polynomials in K") {
    Rng rng(707);
    for (int i = 0; i < 15; ++i) {
        Field r = pshdef::testing::random_field(rng);
        Field P = pshdef::testing::random_field(rng);
        Point q = pshdef::testing::random_point(rng);
        double c1[5], c2[5];
        for (int K = 0; K <= 4; ++K) {
            ExpansionCoeffs c = coeffs(r, P, static_cast<double>(K), q);
            c1[K] = c.c1;
            c2[K] = c.c2;
        }
        // Second differences of a quadratic are constant and equal 2x the
        // leading coefficient.
        jets::Jet jr = jets::jet_of(r, q, 2);
        double lead1 = 0.5 * (c1[2] - 2 * c1[1] + c1[0]);
        double lead2 = 0.5 * (c2[2] - 2 * c2[1] + c2[0]);
        CHECK(rel_gap(lead1, 4.0 * geometry::levi(jr)) <= 1e-10);
        CHECK(rel_gap(lead2, 4.0 * geometry::hdet(jr)) <= 1e-10);
        for (int K = 0; K <= 2; ++K) {
            CHECK(rel_gap(c1[K + 2] - 2 * c1[K + 1] + c1[K], 2 * lead1) <= 1e-9);
            CHECK(rel_gap(c2[K + 2] - 2 * c2[K + 1] + c2[K], 2 * lead2) <= 1e-9);
        }
        // The c1 leading coefficient does not involve P.
        Field P2 = pshdef::testing::random_field(rng);
        ExpansionCoeffs a0 = coeffs(r, P2, 0.0, q);
        ExpansionCoeffs a1 = coeffs(r, P2, 1.0, q);
        ExpansionCoeffs a2 = coeffs(r, P2, 2.0, q);
        CHECK(rel_gap(0.5 * (a2.c1 - 2 * a1.c1 + a0.c1), lead1) <= 1e-10);
    }
}

TEST_CASE("a corrupted sign in Q_P is caught by the identity") {
    Rng rng(909);
    int caught = 0;
    for (int i = 0; i < 20; ++i) {
        Field r = pshdef::testing::random_field(rng);
        Field P = pshdef::testing::random_field(rng);
        double K = rng.uniform(1, 5);
        Point q = pshdef::testing::random_point(rng);
        jets::Jet jr = jets::jet_of(r, q, 2);
        jets::Jet jp = jets::jet_of(P, q, 2);
        ExpansionCoeffs bad = detail::coeffs_mutated(jr, jp, K, q, true);
        Field rho = r * (expr::constant(K) * r + P);
        double lhs = geometry::hdet(rho, q);
        double rv = jr.value();
        double residual = std::abs(lhs - bad.combined(rv)) /
                          std::max({1.0, std::abs(lhs), std::abs(bad.c0)});
        if (residual > 1e-9) ++caught;
    }
    CHECK(caught >= 19);  // Q_P can vanish by accident at isolated points
}
