#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <sstream>

#include "fracsum/periodic.hpp"
#include "util.hpp"

using namespace fracsum;

namespace {

PeriodicFn chi4() {
    return PeriodicFn(4, {Rational(1), Rational(0), Rational(-1), Rational(0)});
}

PeriodicFn random_mean_zero(testutil::Rng& rng, long qmax) {
    long q = rng.integer(2, qmax);
    std::vector<Rational> vals;
    Rational run(0);
    for (long i = 0; i + 1 < q; ++i) {
        Rational v = make_rational(Integer(rng.integer(-4, 4)), Integer(rng.integer(1, 4)));
        run += v;
        vals.push_back(v);
    }
    vals.push_back(-run);
    return PeriodicFn(q, std::move(vals));
}

}  // namespace

TEST_CASE("periodic function validation and parsing") {
    CHECK_THROWS_AS(PeriodicFn(2, {Rational(1), Rational(1)}), DomainError);
    CHECK_THROWS_AS(PeriodicFn(0, {}), DomainError);
    CHECK_THROWS_AS(PeriodicFn(3, {Rational(0), Rational(0)}), DomainError);

    std::istringstream in("4\n1 0 -1 0\n");
    PeriodicFn f = PeriodicFn::parse(in);
    CHECK(f.q() == 4);
    CHECK(f.summatory(1) == 1);
    CHECK(f.summatory(2) == 1);
    CHECK(f.summatory(3) == 0);
    CHECK(f.summatory(4) == 0);
    CHECK(f.at(Integer(7)) == -1);  // 7 = 3 mod 4
    CHECK(f.at(Integer(9)) == 1);

    std::istringstream bad("3\n1 2\n");
    CHECK_THROWS_AS(PeriodicFn::parse(bad), ParseError);
    std::istringstream fracs("2\n1/2 -1/2\n");
    CHECK(PeriodicFn::parse(fracs).summatory(2) == 0);
}

TEST_CASE("trivial function gives zero everywhere") {
    PeriodicFn z(1, {Rational(0)});
    CHECK(dirichlet_constant(z, 1e-20).value.is_zero());
    CHECK(delta_via_v(z, Rational(1000), 1e-20).value.is_zero());
    CHECK(g_sum(z, Rational(1000)) == 0);
    BoundedReal d = delta_from_g(z, Rational(1000), 1e-20);
    CHECK(d.contains(Rational(0)));
}

TEST_CASE("known constants: ln 2 and pi/4") {
    SECTION("q = 2, f = (1,-1): C = ln 2") {
        PeriodicFn pm(2, {Rational(1), Rational(-1)});
        BoundedReal c = dirichlet_constant(pm, 1e-25, 192);
        Real ln2(192);
        mpfr_const_log2(ln2.raw(), MPFR_RNDN);
        BoundedReal ln2b(ln2, ln2.ulp_bound());
        CHECK(c.overlaps(ln2b));
        CHECK(c.err_double() <= 1e-25);
    }
    SECTION("character mod 4: C = pi/4") {
        BoundedReal c = dirichlet_constant(chi4(), 1e-25, 192);
        CHECK(c.overlaps(pi_bounded(192).div_exact(Rational(4))));
    }
}

TEST_CASE("pinned delta values") {
    SECTION("q=2 at x=5: F(1) V(5/2;1/2,1)") {
        PeriodicFn pm(2, {Rational(1), Rational(-1)});
        BoundedReal dv = delta_via_v(pm, Rational(5), 1e-20);
        EvalContext vctx(Params(parse_rational("1/2"), Rational(1)), parse_rational("5/2"));
        CHECK(dv.overlaps(v_direct(vctx, 1e-20)));
        CHECK(std::abs(dv.value.to_double() - (-0.5342640972002735)) < 1e-12);
    }
    SECTION("character mod 4 at x=100") {
        DeltaReport r = delta_report(chi4(), Rational(100), 1e-22);
        CHECK(r.G == 79);
        CHECK(r.overlap);
        CHECK(std::abs(r.delta_direct.value.to_double() - (-0.46018366025516904)) < 1e-12);
        CHECK(std::abs(r.delta_via_V.value.to_double() - (-0.46018366025516904)) < 1e-12);
    }
}

TEST_CASE("the two delta routes agree on random functions") {
    testutil::Rng rng(515253);
    for (int i = 0; i < 50; ++i) {
        PeriodicFn f = random_mean_zero(rng, 6);
        Rational x = rng.x_log(5, 100000, 3);
        BoundedReal dg = delta_from_g(f, x, 1e-18);
        BoundedReal dv = delta_via_v(f, x, 1e-18);
        CHECK(dg.overlaps(dv));
    }
}

TEST_CASE("delta_from_g desk-scale guard") {
    PeriodicFn pm(2, {Rational(1), Rational(-1)});
    CHECK_THROWS_AS(delta_from_g(pm, parse_rational("1e9"), 1e-10), DomainError);
}

TEST_CASE("delta bound ratios") {
    SECTION("zero function") {
        PeriodicFn z(1, {Rational(0)});
        DeltaBoundReport r = delta_bound_check(z, {Rational(100000)}, 1e-12);
        CHECK(r.max_ratio == 0.0);
    }
    SECTION("character mod 3 grid, pinned ceiling") {
        PeriodicFn chi3(3, {Rational(1), Rational(-1), Rational(0)});
        DeltaBoundReport r =
            delta_bound_check(chi3, {Rational(100000), Rational(1000000)}, 1e-15);
        REQUIRE(r.rows.size() == 2);
        // these x violate q <= x^(1/6)/22, so the points are flagged
        CHECK(!r.rows[0].hypothesis_ok);
        CHECK(!r.rows[1].hypothesis_ok);
        // recorded ceiling from the first oracle run: 0.057122 and 0.020364
        CHECK(r.rows[0].ratio <= 0.058);
        CHECK(r.rows[1].ratio <= 0.021);
        CHECK(r.max_ratio <= 0.058);
    }
    SECTION("hypothesis flag flips exactly at (22q)^6") {
        // the zero function skips the O(x) delta evaluation, leaving only
        // the exact threshold comparison
        PeriodicFn z(1, {Rational(0)});
        Rational threshold = pow_rat(Rational(22), 6);
        DeltaBoundReport r = delta_bound_check(z, {threshold - 1, threshold}, 1e-10);
        CHECK(!r.rows[0].hypothesis_ok);
        CHECK(r.rows[1].hypothesis_ok);
    }
}
