#include "doctest.h"

#include "pshdef/jet.hpp"
#include "support.hpp"

using namespace pshdef;
using namespace pshdef::jets;
using pshdef::expr::Field;
using pshdef::testing::rel_gap;
using pshdef::testing::Rng;

TEST_CASE("jet coefficients are Taylor coefficients") {
    // f = |z|^2 at (2, 0): df/dx1 = 2 x1 = 4
    Jet j = jet_of(Field::parse("abs2(z)"), Point{{2, 0}, {0, 0}}, 2);
    CHECK(j.coeff({1, 0, 0, 0}) == doctest::Approx(4.0));
    CHECK(j.coeff({2, 0, 0, 0}) == doctest::Approx(1.0));  // (1/2!) * 2
    CHECK(j.coeff({0, 2, 0, 0}) == doctest::Approx(1.0));
    CHECK(j.coeff({1, 1, 0, 0}) == doctest::Approx(0.0));

    Jet im = jet_of(Field::parse("Im(w)"), Point{{0.3, -0.2}, {0.9, 0.4}}, 1);
    for (int i = 0; i < im.size(); ++i) {
        auto mi = im.layout().index(i);
        if (mi == std::array<int, 4>{0, 0, 0, 1})
            CHECK(im.coeff(i) == doctest::Approx(1.0));
        else if (mi == std::array<int, 4>{0, 0, 0, 0})
            CHECK(im.coeff(i) == doctest::Approx(0.4));
        else
            CHECK(im.coeff(i) == doctest::Approx(0.0));
    }

    Jet r6 = jet_of(pshdef::testing::field_example6(), Point{{0, 0}, {0, 0}}, 2);
    CHECK(r6.coeff({0, 0, 1, 0}) == doctest::Approx(1.0));
    CHECK(r6.coeff({2, 0, 0, 0}) == doctest::Approx(0.0));
}

TEST_CASE("wirtinger values at the center") {
    Point any = Point::from_reals(0.7, -0.1, 0.2, 0.5);
    Jet j = jet_of(Field::parse("abs2(z)"), any, 2);
    CHECK(rel_gap(wirtinger(j, {1, 1, 0, 0}), cplx{1.0, 0.0}) <= 1e-15);

    Jet im = jet_of(Field::parse("Im(w)"), Point{{0, 0}, {0, 0}}, 1);
    CHECK(rel_gap(wirtinger(im, {0, 0, 1, 0}), cplx{0.0, -0.5}) <= 1e-15);

    Jet r6 = jet_of(pshdef::testing::field_example6(), Point{{0.1, 0}, {0, 0}}, 2);
    CHECK(rel_gap(wirtinger(r6, {1, 1, 0, 0}), cplx{0.0409, 0.0}) <= 1e-13);
}

TEST_CASE("wirtinger order guard") {
    Jet j = jet_of(Field::parse("abs2(z)"), Point{{0, 0}, {0, 0}}, 1);
    CHECK_THROWS_AS(wirtinger(j, {1, 1, 0, 0}), DomainError);
}

TEST_CASE("jets agree with the symbolic oracle") {
    Rng rng(20260810);
    int done = 0;
    while (done < 200) {
        Field f = pshdef::testing::random_field(rng);
        Point p = pshdef::testing::random_point(rng);
        std::array<int, 4> idx{0, 0, 0, 0};
        int total = rng.uniform_int(0, 4);
        for (int k = 0; k < total; ++k) ++idx[static_cast<std::size_t>(rng.uniform_int(0, 3))];
        Jet j = jet_of(f, p, 4);
        cplx via_jet = wirtinger(j, idx);
        cplx via_sym = expr::symbolic_wirtinger(f, idx).eval(p);
        CHECK(rel_gap(via_jet, via_sym) <= 1e-10);
        ++done;
    }
}

TEST_CASE("conjugate symmetry for real fields") {
    Rng rng(3);
    for (int i = 0; i < 25; ++i) {
        Field f = pshdef::testing::random_field(rng);
        Point p = pshdef::testing::random_point(rng);
        Jet j = jet_of(f, p, 4);
        std::array<int, 4> idx{};
        int total = rng.uniform_int(1, 4);
        for (int k = 0; k < total; ++k) ++idx[static_cast<std::size_t>(rng.uniform_int(0, 3))];
        std::array<int, 4> swapped{idx[1], idx[0], idx[3], idx[2]};
        CHECK(rel_gap(wirtinger(j, idx), std::conj(wirtinger(j, swapped))) <= 1e-12);
        CHECK(std::abs(wirtinger(j, {1, 1, 0, 0}).imag()) <= 1e-13);
        CHECK(std::abs(wirtinger(j, {0, 0, 1, 1}).imag()) <= 1e-13);
    }
}

TEST_CASE("products of jets satisfy Leibniz truncation") {
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        Field f = pshdef::testing::random_field(rng);
        Field g = pshdef::testing::random_field(rng);
        Point p = pshdef::testing::random_point(rng);
        Jet jf = jet_of(f, p, 4);
        Jet jg = jet_of(g, p, 4);
        Jet jfg = jet_of(f * g, p, 4);
        Jet prod = jf * jg;
        for (int c = 0; c < jfg.size(); ++c)
            CHECK(rel_gap(jfg.coeff(c), prod.coeff(c)) <= 1e-12);
    }
}

TEST_CASE("derivative fields shift jets") {
    Rng rng(9);
    Field f = pshdef::testing::random_field(rng);
    Point p = pshdef::testing::random_point(rng, 0.5);
    CJet j4 = cjet_of(f, p, 4);
    // The value of the derivative-field jet is the derivative at the center.
    CJet fz = wirtinger_field(j4, {1, 0, 0, 0});
    CHECK(rel_gap(fz.value(), wirtinger(j4, {1, 0, 0, 0})) <= 1e-13);
    // Second derivative of the derivative field matches the fourth of f.
    CJet fzzb = wirtinger_field(j4, {1, 1, 0, 0});
    CHECK(rel_gap(wirtinger(fzzb, {0, 0, 1, 1}), wirtinger(j4, {1, 1, 1, 1})) <= 1e-12);
}

TEST_CASE("truncation keeps the leading coefficients") {
    Rng rng(13);
    Field f = pshdef::testing::random_field(rng);
    Point p = pshdef::testing::random_point(rng);
    Jet j4 = jet_of(f, p, 4);
    Jet j2 = jet_of(f, p, 2);
    Jet t = j4.truncated(2);
    for (int c = 0; c < t.size(); ++c) CHECK(t.coeff(c) == doctest::Approx(j2.coeff(c)));
}
