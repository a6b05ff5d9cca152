#ifndef FRACSUM_DIRECT_HPP
#define FRACSUM_DIRECT_HPP

#include <optional>
#include <vector>

#include "fracsum/params.hpp"
#include "fracsum/rational.hpp"
#include "fracsum/real.hpp"
#include "fracsum/series.hpp"

namespace fracsum {

/// Reference evaluators: literal definitions summed term by term up to the
/// cutoff n* = max(0, ceil(x - a)), past which both floors vanish and the
/// rest is c*x times the tail series.  Deliberately O(x); these are the
/// ground truth the sublinear evaluator is checked against.

inline Integer direct_cutoff(const EvalContext& ctx) {
    Integer n = ceil_int(ctx.x - ctx.a());
    return n < 0 ? Integer(0) : n;
}

namespace detail {

enum class DirectKind { Absolute, Signed, EqualFloorsOnly };

inline BoundedReal direct_sum(const EvalContext& ctx, double eps, DirectKind kind, Prec prec,
                              std::optional<Integer> cutoff_override = std::nullopt) {
    if (!(eps > 0)) throw DomainError("direct sum: eps must be > 0");
    const Rational cx = ctx.c() * ctx.x;
    if (prec <= 0) prec = prec_for(eps, 24 + static_cast<long>(mpz_sizeinbase(floor_int(cx).get_mpz_t(), 2)));

    Integer cutoff = cutoff_override ? *cutoff_override : direct_cutoff(ctx);
    BoundedSum sum(prec);
    Rational qa, qb;
    for (Integer n(0); n <= cutoff; ++n) {
        qa = ctx.x / (n + ctx.a());
        qb = ctx.x / (n + ctx.b());
        Integer fa = floor_int(qa);
        Integer fb = floor_int(qb);
        if (kind == DirectKind::EqualFloorsOnly && fa != fb) continue;
        Rational term = (qa - Rational(fa)) - (qb - Rational(fb));
        if (kind == DirectKind::Absolute && term < 0) term = -term;
        sum.add_exact(term);
    }

    // all n > cutoff have equal (zero) floors, so each term is the positive
    // quantity c*x/((n+a)(n+b)) regardless of kind
    double tail_eps = eps * 0.5 / std::max(1.0, mpfr_get_d(Real::of(cx, 64).raw(), MPFR_RNDU));
    TailSeries tail(ctx.a(), ctx.b());
    sum.add(tail.from_index(cutoff, tail_eps, prec).mul_exact(cx));
    return sum.result();
}

}  // namespace detail

/// W(x;a,b) = sum_{n>=0} |{x/(n+a)} - {x/(n+b)}| with error radius <= eps.
inline BoundedReal w_direct(const EvalContext& ctx, double eps, Prec prec = 0) {
    return detail::direct_sum(ctx, eps, detail::DirectKind::Absolute, prec);
}

/// V(x;a,b): the signed version of W.
inline BoundedReal v_direct(const EvalContext& ctx, double eps, Prec prec = 0) {
    return detail::direct_sum(ctx, eps, detail::DirectKind::Signed, prec);
}

/// W_0: contribution of the n whose two floors agree.
inline BoundedReal w0_direct(const EvalContext& ctx, double eps, Prec prec = 0) {
    return detail::direct_sum(ctx, eps, detail::DirectKind::EqualFloorsOnly, prec);
}

/// Same as w_direct but with a caller-chosen cutoff >= n*; the result must
/// not move outside the error interval (tail-cut independence).
inline BoundedReal w_direct_with_cutoff(const EvalContext& ctx, double eps, Integer cutoff) {
    Integer least = direct_cutoff(ctx);
    if (cutoff < least) throw DomainError("cutoff below ceil(x - a)");
    return detail::direct_sum(ctx, eps, detail::DirectKind::Absolute, 0, cutoff);
}

/// W_j for j >= 1 is a finite sum and therefore an exact rational: the
/// constraint floor(x/(n+a)) - floor(x/(n+b)) = j forces n <= x - a, and for
/// j >= 2 also (n+a)(n+b) < c*x/(j-1).
inline Rational wj_direct(const EvalContext& ctx, const Integer& j) {
    if (j < 1) throw DomainError("wj_direct: j >= 1 required");
    if (ctx.x < ctx.a()) return Rational(0);
    Integer n_max = floor_int(ctx.x - ctx.a());
    if (j >= 2) {
        // largest n with (n+a)(n+b) <= c*x/(j-1); none at all means W_j = 0
        const Rational bound = ctx.c() * ctx.x / Rational(j - 1);
        if ((ctx.a()) * (ctx.b()) > bound) return Rational(0);
        Integer hi = floor_int(ctx.x);  // safe upper start for the scan below
        // exact monotone search from an isqrt estimate
        Integer est = isqrt(floor_int(bound));
        auto fits = [&](const Integer& n) {
            return (n + ctx.a()) * (n + ctx.b()) <= bound;
        };
        Integer n = est;
        if (n > hi) n = hi;
        if (n < 0) n = 0;
        while (n > 0 && !fits(n)) --n;
        while (fits(n + 1)) ++n;
        if (n < n_max) n_max = n;
    }
    std::vector<Rational> terms;
    for (Integer n(0); n <= n_max; ++n) {
        Rational qa = ctx.x / (n + ctx.a());
        Rational qb = ctx.x / (n + ctx.b());
        Integer fa = floor_int(qa);
        Integer fb = floor_int(qb);
        if (fa - fb != j) continue;
        Rational term = (qa - Rational(fa)) - (qb - Rational(fb));
        if (term < 0) term = -term;
        terms.push_back(std::move(term));
    }
    return sum_exact(std::move(terms));
}

}  // namespace fracsum

#endif
