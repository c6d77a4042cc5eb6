#include "doctest.h"

#include "pshdef/certify.hpp"
#include "support.hpp"

using namespace pshdef;
using namespace pshdef::certify;
using pshdef::expr::Field;
using pshdef::testing::rel_gap;
using pshdef::testing::Rng;

namespace {
Region ball_region() {
    Region reg;
    reg.center = Point{{1, 0}, {0, 0}};
    reg.radius = 0.25;
    reg.shape = Region::Shape::Box;
    return reg;
}

Region example6_region(double radius = 0.3) {
    Region reg;
    reg.center = Point{{0, 0}, {0, 0}};
    reg.radius = radius;
    reg.shape = Region::Shape::Polydisc;
    return reg;
}
}  // namespace

TEST_CASE("boundary sampling on the sphere") {
    auto samples = sample_boundary(pshdef::testing::field_ball(), ball_region(), 120);
    REQUIRE(samples.size() >= 20);
    for (const auto& s : samples) {
        CHECK(std::abs(pshdef::testing::field_ball().eval(s.p)) <= 1e-12);
        CHECK(s.kind == PointKind::Strong);
        CHECK(s.hdet_r == doctest::Approx(1.0));
    }
}

TEST_CASE("boundary sampling classifies the weak set of the example domain") {
    Field r = pshdef::testing::field_example6();
    auto samples = sample_boundary(r, example6_region(), 400);
    REQUIRE(samples.size() >= 50);
    int weak = 0, strong = 0;
    for (const auto& s : samples) {
        CHECK(std::abs(r.eval(s.p)) <= 1e-12);
        if (s.kind == PointKind::Weak) {
            ++weak;
            CHECK(std::abs(s.p.z) <= 1e-6);
        } else {
            ++strong;
            CHECK(s.kind == PointKind::Strong);
            CHECK(std::abs(s.p.z) > 1e-6);
        }
    }
    CHECK(weak >= 2);   // the centerline rays hit {z = 0} exactly
    CHECK(strong >= 30);
}

TEST_CASE("empty intersection yields an empty sample set") {
    Region far;
    far.center = Point{{5, 5}, {5, 5}};
    far.radius = 0.1;
    auto samples = sample_boundary(pshdef::testing::field_ball(), far, 50);
    CHECK(samples.empty());
}

TEST_CASE("classification is stable under positive rescaling") {
    Field r = pshdef::testing::field_example6();
    Field r2 = expr::constant(2.0) * r;
    for (cplx z : {cplx{0.0, 0.0}, cplx{0.12, -0.2}, cplx{0.25, 0.1}}) {
        Point p = pshdef::testing::example6_boundary_point(z);
        BoundarySample a = classify_point(r, p);
        BoundarySample b = classify_point(r2, p);
        CHECK(a.kind == b.kind);
    }
}

TEST_CASE("weak refinement converges to the levi minimum") {
    Field r = pshdef::testing::field_example6();
    // Start slightly off the weak circle {z = 0}.
    Point off = pshdef::testing::example6_boundary_point({3e-4, 2e-4});
    Point refined = refine_weak(r, off);
    CHECK(std::abs(r.eval(refined)) <= 1e-10);
    CHECK(std::abs(geometry::levi(r, refined)) < std::abs(geometry::levi(r, off)));
    CHECK(std::abs(refined.z) < 1e-5);
}

TEST_CASE("necessary boundary condition on the example domain") {
    Field r = pshdef::testing::field_example6();
    auto samples = sample_boundary(r, example6_region(), 300);

    // X = -|z|^2 (L = -1): det H_{(1+X)r} = 4|z|^2 + o(|z|^2) >= 0 near 0.
    CertReport good = check_necessary_boundary(r, -expr::abs2_z(), samples);
    CHECK(good.passed());
    CHECK(good.parameters.at("C") < 10.0);

    // Ball with X = 0 passes trivially (det H_r = 1 > 0).
    CertReport ball = check_necessary_boundary(pshdef::testing::field_ball(),
                                               expr::constant(0.0),
                                               sample_boundary(pshdef::testing::field_ball(),
                                                               ball_region(), 100));
    CHECK(ball.passed());

    // A constructed failure: a weak sample with -det H = 0.1 must be a witness.
    std::vector<BoundarySample> fake;
    BoundarySample s;
    s.p = pshdef::testing::example6_weak_point(0.0);
    s.levi = 0.0;
    s.kind = PointKind::Weak;
    fake.push_back(s);
    // Use X so large that (1+X) r has a genuinely negative determinant at p.
    CertReport bad = check_necessary_boundary(r, expr::constant(-0.5) +
                                                     expr::constant(100.0) * expr::var_re_z(),
                                              fake);
    CHECK(bad.verdict == Verdict::Fail);
    CHECK(!bad.witnesses.empty());
}

TEST_CASE("necessary condition on B_P over the weak set") {
    Field r = pshdef::testing::field_example6();
    std::vector<BoundarySample> weak;
    for (double th : {0.0, 0.7, 2.1, 4.0}) {
        BoundarySample s;
        s.p = pshdef::testing::example6_weak_point(th);
        s.kind = PointKind::Weak;
        weak.push_back(s);
    }

    // P = 1 - |z|^2: L_r(P) = r_w * (-z_bar) = 0 on {z = 0}.
    CHECK(check_necessary_BP(r, Field::parse("1-abs2(z)"), weak).passed());
    // Constant P trivially passes.
    CHECK(check_necessary_BP(r, Field::parse("1"), weak).passed());
    // P = 1 + Re(z): L_r(P)(0,0) = r_w / 2 != 0.
    CertReport bad = check_necessary_BP(r, Field::parse("1+Re(z)"), weak);
    CHECK(bad.verdict == Verdict::Fail);
    CHECK(!bad.witnesses.empty());
}

TEST_CASE("admissible L half-line") {
    Field r = pshdef::testing::field_example6();
    Point p0{{0, 0}, {0, 0}};

    ILResult plus = interval_IL(r, expr::abs2_z(), p0);
    CHECK(plus.side == ILResult::Side::Negative);
    CHECK(plus.h_value == doctest::Approx(0.25));  // |r_w(0)|^2 * X_{z z_bar} = 1/4
    CHECK(plus.admits(-1.0));
    CHECK_FALSE(plus.admits(1.0));

    ILResult minus = interval_IL(r, -expr::abs2_z(), p0);
    CHECK(minus.side == ILResult::Side::Positive);
    CHECK(minus.admits(1.0));

    // X with no second-order z-part contributes nothing at the origin.
    ILResult empty = interval_IL(r, Field::parse("Re(w)^2"), p0);
    CHECK(empty.side == ILResult::Side::Empty);
}

TEST_CASE("psh scan verdicts") {
    Region reg = example6_region();

    // |z|^2 + |w|^2 is plurisubharmonic everywhere.
    CHECK(scan_psh(Field::parse("abs2(z)+abs2(w)-1"),
                   Region{Point{{0, 0}, {0, 0}}, 0.8, Region::Shape::Box, 0.0}, 7)
              .passed());

    // The unmodified example defining function fails just inside the origin.
    Field r = pshdef::testing::field_example6();
    CertReport fail = scan_psh(r, example6_region(0.12), 7);
    CHECK(fail.verdict == Verdict::Fail);
    REQUIRE(!fail.witnesses.empty());
    // A witness sits on the {z = 0} slice where det H_r = Re w + |w|^2 < 0.
    bool near_axis = false;
    for (const auto& w : fail.witnesses)
        if (std::abs(w.p.z) < 1e-9 && w.p.w.real() < 0) near_axis = true;
    CHECK(near_axis);

    // The modified function passes on the polydisc.
    Field rho = expansion::build_rho(r, expr::abs2_z(), 0.0, -1.0);
    CHECK(scan_psh(rho, example6_region(), 7).passed());
}

TEST_CASE("grid gate follows the sublevel set of the scanned function") {
    // rho = r(1 + Kr) with large K is a defining function only where
    // 1 + Kr > 0; the scan gates on rho itself.
    Field r = pshdef::testing::field_ball();
    Field rho = expansion::build_rho(r, expr::constant(0.0), 10.0, 0.0);

    // Deep inside, rho > 0 everywhere: nothing to scan, trivially clean.
    Region deep{Point{{0, 0}, {0, 0}}, 0.85, Region::Shape::Ball, 0.0};
    CertReport inner = scan_psh(rho, deep, 7);
    CHECK(inner.passed());
    CHECK(inner.parameters.at("points_scanned") == 0.0);

    // On a collar well inside {1 + 2Kr >= 0} the scan is clean and nonempty.
    Region collar{Point{{0, 0}, {0, 0}}, 1.0, Region::Shape::Annulus, 0.98};
    CertReport outer = scan_psh(rho, collar, 11);
    CHECK(outer.passed());
    CHECK(outer.parameters.at("points_scanned") > 0.0);
}

TEST_CASE("sufficiency pipeline on the example domain") {
    Field r = pshdef::testing::field_example6();
    SufficiencyReport rep =
        check_sufficient(r, expr::abs2_z(), Point{{0, 0}, {0, 0}}, example6_region(),
                         {0.0, 1.0}, default_L_magnitudes(), 200, 7);
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(rep.cond_bp.passed());
    CHECK(rep.il.side == ILResult::Side::Negative);
    bool has_0_m1 = false;
    for (const auto& fp : rep.feasible)
        if (fp.K == 0.0 && fp.L == -1.0) has_0_m1 = true;
    CHECK(has_0_m1);
    CHECK(rep.n_weak >= 1);
}

TEST_CASE("sufficiency fails without a usable modification") {
    Field r = pshdef::testing::field_example6();
    SufficiencyReport rep =
        check_sufficient(r, expr::constant(0.0), Point{{0, 0}, {0, 0}}, example6_region(0.15),
                         {0.0, 1.0, 10.0}, default_L_magnitudes(), 150, 7);
    CHECK(rep.verdict == Verdict::Fail);
    CHECK(rep.feasible.empty());
}

TEST_CASE("sufficiency on the ball goes through the Kohn ansatz") {
    Field r = pshdef::testing::field_ball();
    SufficiencyReport rep = check_sufficient(r, expr::constant(0.0), Point{{1, 0}, {0, 0}},
                                             ball_region(), {0.0, 0.5, 2.0},
                                             default_L_magnitudes(), 100, 6);
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(rep.n_weak == 0);
    REQUIRE(!rep.feasible.empty());
    for (const auto& fp : rep.feasible) CHECK(fp.L == 0.0);
}

TEST_CASE("series necessity on weak frames of the example domain") {
    Field r = pshdef::testing::field_example6();
    Field P = expansion::build_p(expr::abs2_z(), -1.0);
    std::vector<boundary::NormalFrame> frames;
    for (double depth : {0.004, 0.01, 0.02})
        frames.push_back(boundary::project(r, Point{{0, 0}, {-depth, 0}}));

    // G_0 = 0 on W; the verdict is decided by the sign of G_1, which K
    // large enough makes negative: (-1)^1 G_1 > 0 passes.
    CertReport big_k = series_necessity(r, P, 25.0, frames);
    CHECK(big_k.passed());

    // Strongly pseudoconvex ball frame: G_0 = 2K levi + det H_r = 3 > 0.
    std::vector<boundary::NormalFrame> ball_frames{
        boundary::project(pshdef::testing::field_ball(), Point{{0.98, 0}, {0, 0}})};
    CertReport strong =
        series_necessity(pshdef::testing::field_ball(), expr::constant(1.0), 1.0, ball_frames);
    CHECK(strong.passed());

    // Unmodified defining function (P = 1, K = 0): G_0 = det H_r(p) = 0 on W
    // and G_1(p) = u A_1(det H_r) = 1 > 0, violating (-1)^1 G_1 > 0 -- the
    // series detects that r is not plurisubharmonic just inside W.
    CertReport bad = series_necessity(r, Field::parse("1"), 0.0, frames);
    CHECK(bad.verdict == Verdict::Fail);
    CHECK(!bad.witnesses.empty());

    // On the halfspace every coefficient vanishes; finite order cannot
    // decide and the verdict must not be a false certificate.
    Field flat = pshdef::testing::field_halfspace();
    std::vector<boundary::NormalFrame> flat_frames{
        boundary::project(flat, Point{{0.1, 0}, {0.2, -0.05}})};
    CertReport undecided = series_necessity(flat, Field::parse("1"), 1.0, flat_frames);
    CHECK(undecided.verdict == Verdict::Inconclusive);

    CHECK_THROWS_AS(series_necessity(r, P, 1.0, frames, 3), DomainError);
}

TEST_CASE("series necessity rejects a sign violation") {
    // P = 1 + Re(z) has L_r(P) = r_w / 2 != 0 on W, so G_0 = B_P < 0 at weak
    // frames: (-1)^0 G_0 > 0 is violated at order zero.
    Field r = pshdef::testing::field_example6();
    std::vector<boundary::NormalFrame> frames{
        boundary::project(r, Point{{0, 0}, {-0.01, 0}})};
    CertReport rep = series_necessity(r, Field::parse("1+Re(z)"), 0.0, frames);
    CHECK(rep.verdict == Verdict::Fail);
    REQUIRE(!rep.witnesses.empty());
    CHECK(rep.witnesses[0].value == doctest::Approx(-1.0 / 16.0));  // B_P(0,0)
}

TEST_CASE("rho_ww stays uniformly positive for K >= 1") {
    Field r = pshdef::testing::field_example6();
    Rng rng(99);
    for (double K : {1.0, 5.0, 25.0}) {
        Field rho = expansion::build_rho(r, expr::abs2_z(), K, -1.0);
        double min_d = 1e300;
        for (int i = 0; i < 200; ++i) {
            Point q = pshdef::testing::random_point(rng, 0.05);
            min_d = std::min(min_d, geometry::chess(rho, q).d);
        }
        CHECK(min_d > 0.5);
    }
}

TEST_CASE("strong points spread positivity inward") {
    // On strong samples (|z| >= 0.05) of the example domain, r itself stays
    // plurisubharmonic at nearby interior points along the normal.
    Field r = pshdef::testing::field_example6();
    auto samples = sample_boundary(r, example6_region(), 250);
    int checked = 0;
    for (const auto& s : samples) {
        if (std::abs(s.p.z) < 0.05) continue;
        CHECK(s.hdet_r > 0.0);
        jets::Jet j1 = jets::jet_of(r, s.p, 1);
        geometry::CVec n = geometry::field_N(j1);
        double gn = std::sqrt(geometry::grad_norm2(j1));
        double step = 0.02 * gn;  // shallow interior points along the normal
        Point q{s.p.z - step * n(0) / gn, s.p.w - step * n(1) / gn};
        if (r.eval(q) >= 0) continue;
        CHECK(geometry::psd2(geometry::chess(r, q), 1e-9));
        ++checked;
    }
    CHECK(checked >= 20);
}

TEST_CASE("large K keeps psd when G_0 is strictly positive") {
    // Proposition surrogate on the ball: G_0 > 0 at p0, so rho = r(1+Kr)
    // scans clean on a small ball around p0 once K is large enough.
    Field r = pshdef::testing::field_ball();
    Region small{Point{{1, 0}, {0, 0}}, 0.04, Region::Shape::Ball, 0.0};
    bool found = false;
    for (double K : {1.0, 2.0, 5.0}) {
        Field rho = expansion::build_rho(r, expr::constant(0.0), K, 0.0);
        if (scan_psh(rho, small, 7).passed()) {
            found = true;
            break;
        }
    }
    CHECK(found);
}

TEST_CASE("Kohn ansatz on its collar") {
    // K = 2 gives a plurisubharmonic multiple of the ball's defining
    // function on the collar where 1 + 2r >= 0, i.e. |q| >= sqrt(1/2), and
    // K = 1/2 works on the full annulus 0.5 <= |q| <= 1.
    Field r = pshdef::testing::field_ball();
    Region collar{Point{{0, 0}, {0, 0}}, 1.0, Region::Shape::Annulus, 0.87};
    CHECK(scan_psh(expansion::build_rho(r, expr::constant(0.0), 2.0, 0.0), collar, 7).passed());

    Region annulus{Point{{0, 0}, {0, 0}}, 1.0, Region::Shape::Annulus, 0.5};
    CHECK(scan_psh(expansion::build_rho(r, expr::constant(0.0), 0.5, 0.0), annulus, 7).passed());
}
