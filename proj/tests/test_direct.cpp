#include <catch2/catch_amalgamated.hpp>

#include "fracsum/direct.hpp"
#include "util.hpp"

using namespace fracsum;

namespace {

EvalContext ctx_of(const char* a, const char* b, const char* x) {
    return EvalContext(Params(parse_rational(a), parse_rational(b)), parse_rational(x));
}

// brute-force W_j straight from the definition, independent of the library's
// localized enumeration
Rational wj_brute(const EvalContext& c, long j) {
    Rational total(0);
    if (c.x < c.a()) return total;
    Integer nmax = floor_int(c.x - c.a());
    for (Integer n(0); n <= nmax; ++n) {
        Rational qa = c.x / (n + c.a());
        Rational qb = c.x / (n + c.b());
        Integer fa = floor_int(qa), fb = floor_int(qb);
        if (fa - fb != j) continue;
        Rational term = (qa - Rational(fa)) - (qb - Rational(fb));
        if (term < 0) term = -term;
        total += term;
    }
    return total;
}

}  // namespace

TEST_CASE("params and context validation") {
    CHECK_THROWS_AS(Params(parse_rational("2"), parse_rational("1")), DomainError);
    CHECK_THROWS_AS(Params(parse_rational("0"), parse_rational("1")), DomainError);
    CHECK_THROWS_AS(Params(parse_rational("-1"), parse_rational("1")), DomainError);
    CHECK_THROWS_AS(EvalContext(Params(Rational(1), Rational(2)), Rational(0)), DomainError);
    EvalContext c = ctx_of("1", "2", "100");
    CHECK(c.c() == 1);
    CHECK(c.y == 50);  // y = c*x/(a*b)
    EvalContext c2 = ctx_of("1/2", "3/2", "10");
    CHECK(c2.y == parse_rational("40/3"));
}

TEST_CASE("w_direct small instances") {
    SECTION("x below a: every floor vanishes and the sum telescopes") {
        BoundedReal w = w_direct(ctx_of("1", "2", "1/2"), 1e-25);
        CHECK(w.contains(parse_rational("1/2")));
    }
    SECTION("x = 1") {
        BoundedReal w = w_direct(ctx_of("1", "2", "1"), 1e-25);
        CHECK(w.contains(Rational(1)));
    }
    SECTION("x = 2") {
        // n=0 contributes 0, n=1: 2/3, n=2: 1/6, tail telescopes to 1/2
        BoundedReal w = w_direct(ctx_of("1", "2", "2"), 1e-25);
        CHECK(w.contains(parse_rational("4/3")));
    }
}

TEST_CASE("v_direct known identities") {
    SECTION("V(x;1,2) = {x}") {
        CHECK(v_direct(ctx_of("1", "2", "37/10"), 1e-25).contains(parse_rational("7/10")));
        CHECK(v_direct(ctx_of("1", "2", "2"), 1e-25).contains(Rational(0)));
    }
    SECTION("integer gap: V(x;a,a+c) = {x/a} + ... + {x/(b-1)}") {
        CHECK(v_direct(ctx_of("1", "3", "3"), 1e-25).contains(parse_rational("1/2")));
    }
}

TEST_CASE("integer gap telescoping on random instances") {
    testutil::Rng rng(906090);
    for (int i = 0; i < 40; ++i) {
        Rational a = rng.rational(0.25, 3.0, 6);
        long cgap = rng.integer(1, 3);
        Rational x = rng.x_log(2, 3000, 4);
        EvalContext ctx(Params(a, a + cgap), x);
        BoundedReal v = v_direct(ctx, 1e-22);
        Rational expect(0);
        for (long m = 0; m < cgap; ++m) expect += frac(x / (a + m));
        CHECK(v.contains(expect));
    }
}

TEST_CASE("wj_direct pinned values and localization") {
    EvalContext c100 = ctx_of("1", "2", "100");
    SECTION("vanishes past the threshold: W_j = 0 for j >= y + 1") {
        CHECK(c100.y == 50);
        CHECK(wj_direct(c100, Integer(101)) == 0);
        CHECK(wj_direct(c100, Integer(51)) == 0);
    }
    SECTION("pinned regression values (independent brute force)") {
        CHECK(wj_direct(c100, Integer(1)) == parse_rational("46874813/6874868"));
        CHECK(wj_direct(c100, Integer(2)) == parse_rational("25/42"));
        EvalContext c10 = ctx_of("1/2", "3/2", "10");
        CHECK(wj_direct(c10, Integer(3)) == 0);
        CHECK(wj_direct(c10, Integer(2)) == wj_brute(c10, 2));
    }
    SECTION("against brute force on random instances") {
        testutil::Rng rng(111222);
        for (int i = 0; i < 25; ++i) {
            Params p = rng.params(0.5);
            EvalContext ctx(p, rng.x_log(2, 500, 3));
            long jmax = static_cast<long>(ctx.y.get_d()) + 2;
            for (long j = 1; j <= std::min(jmax, 12L); ++j)
                CHECK(wj_direct(ctx, Integer(j)) == wj_brute(ctx, j));
        }
    }
    CHECK_THROWS_AS(wj_direct(c100, Integer(0)), DomainError);
}

TEST_CASE("w0_direct examples") {
    CHECK(w0_direct(ctx_of("1", "2", "1/2"), 1e-25).contains(parse_rational("1/2")));
    // oracle combination: W_0 = W - sum of W_j over 1 <= j <= 101
    EvalContext c = ctx_of("1", "2", "100");
    BoundedReal w = w_direct(c, 1e-25);
    BoundedReal w0 = w0_direct(c, 1e-25);
    Rational upper(0);
    for (long j = 1; j <= 101; ++j) upper += wj_direct(c, Integer(j));
    CHECK((w - w0).contains(upper));
}

TEST_CASE("additivity of the width decomposition") {
    testutil::Rng rng(334455);
    int done = 0;
    for (int i = 0; done < 200 && i < 600; ++i) {
        Params p = rng.params(0.5);
        EvalContext ctx(p, rng.x_log(1.5, 10000, 3));
        if (ctx.y > 600) continue;  // keep the j loop desk-sized
        ++done;
        BoundedReal w = w_direct(ctx, 1e-20);
        BoundedReal w0 = w0_direct(ctx, 1e-20);
        Rational rest(0);
        Integer jmax = ceil_int(ctx.y) + 1;
        for (Integer j(1); j <= jmax; ++j) rest += wj_direct(ctx, j);
        BoundedReal lhs = w - w0;
        CHECK(lhs.contains(rest));
    }
    CHECK(done == 200);
}

TEST_CASE("|V| <= W always") {
    testutil::Rng rng(778899);
    for (int i = 0; i < 60; ++i) {
        Params p = rng.params(0.25);
        EvalContext ctx(p, rng.x_log(1, 5000, 4));
        BoundedReal w = w_direct(ctx, 1e-20);
        BoundedReal v = v_direct(ctx, 1e-20);
        // interval-aware: the lower bound of |V| cannot exceed the upper
        // bound of W, i.e. |v| - e_v <= w + e_w
        CHECK(abs(v.value) <= add_up(add_up(w.upper(), v.err), v.err.ulp_bound()));
    }
}

TEST_CASE("tail-cut independence") {
    testutil::Rng rng(192837);
    for (int i = 0; i < 30; ++i) {
        Params p = rng.params(0.5);
        EvalContext ctx(p, rng.x_log(1, 2000, 3));
        BoundedReal base = w_direct(ctx, 1e-22);
        Integer cut = direct_cutoff(ctx) + rng.integer(1, 5000);
        BoundedReal moved = w_direct_with_cutoff(ctx, 1e-22, cut);
        CHECK(base.overlaps(moved));
        CHECK_THROWS_AS(w_direct_with_cutoff(ctx, 1e-22, direct_cutoff(ctx) - 1), DomainError);
    }
}
