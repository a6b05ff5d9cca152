#ifndef FRACSUM_BLOCKS_HPP
#define FRACSUM_BLOCKS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "fracsum/direct.hpp"
#include "fracsum/params.hpp"
#include "fracsum/rational.hpp"
#include "fracsum/real.hpp"
#include "fracsum/series.hpp"

namespace fracsum {

/// Largest k >= 0 with k(k+1) <= t: index of the last n-interval on which the
/// two floors agree and are positive.
inline Integer diag_limit(const Rational& t) {
    return floor_sqrt_le(t, Integer(1));
}

/// Largest k >= j with (k-j)k <= j*t; equals j + floor_sqrt_le(j*t, j).
/// offset_limit(0, t) == 0.
inline Integer offset_limit(const Integer& j, const Rational& t) {
    if (j < 0) throw DomainError("offset_limit: j >= 0 required");
    if (!(t > 0)) throw DomainError("offset_limit: t > 0 required");
    if (j == 0) return Integer(0);
    return j + floor_sqrt_le(Rational(j) * t, j);
}

/// Largest n >= 0 with (n+a)(n+b) <= c*x/j: the point where
/// c*x/((n+a)(n+b)) - j changes sign.  Empty (nullopt) when even n = 0
/// fails, which happens exactly when j > y.
inline std::optional<Integer> sign_change(const Integer& j, const EvalContext& ctx) {
    if (j < 1) throw DomainError("sign_change: j >= 1 required");
    const Rational bound = ctx.c() * ctx.x / Rational(j);
    if (ctx.a() * ctx.b() > bound) return std::nullopt;
    // n <= sqrt(bound + c^2/4) - (a+b)/2
    Integer n = isqrt(floor_int(bound + ctx.c() * ctx.c() / 4));
    auto fits = [&](const Integer& v) { return (v + ctx.a()) * (v + ctx.b()) <= bound; };
    while (n > 0 && !fits(n)) --n;
    while (fits(n + 1)) ++n;
    return n;
}

enum class CellClass { E1, E2, E3, J0 };

/// Position of column k among the width-j cells, by the quadratic tests that
/// avoid evaluating offset_limit: E1 below the boundary, E2 above, E3 at it.
inline CellClass classify(const Integer& j, const Integer& k, const EvalContext& ctx) {
    if (j < 1) throw DomainError("classify: j >= 1 required");
    if (k < j) throw DomainError("classify: k >= j required");
    const Rational jt = Rational(j) * ctx.x / ctx.c();
    if (Rational((k + 1 - j) * (k + 1)) <= jt) return CellClass::E1;  // k <= limit - 1
    if (Rational((k - j) * k) > jt) return CellClass::E2;             // k > limit
    return CellClass::E3;                                             // k == limit
}

/// One maximal interval of n on which both floors are constant.
struct BlockCell {
    Integer h, k;               // floor(x/(n+b)), floor(x/(n+a))
    Integer j;                  // k - h
    Rational lo;                // exclusive rational lower endpoint
    std::optional<Rational> hi; // inclusive upper endpoint; nullopt on the final cell
    Integer first, last;        // integer range; last meaningless when infinite()
    CellClass eclass = CellClass::J0;

    bool infinite() const { return !hi.has_value(); }
    Integer count() const {
        if (infinite()) throw DomainError("count of infinite cell");
        return last - first + 1;
    }
};

/// Walks the nonempty cells in increasing n.  Each step jumps to the next
/// breakpoint min(floor(x/k - a), floor(x/h - b)); the number of cells is at
/// most (#distinct values of floor(x/(n+a))) + (same for b) + 1, which is
/// O(sqrt(x)).
class CellWalker {
  public:
    explicit CellWalker(const EvalContext& ctx)
        : ctx_(ctx), fa_(ctx.x, ctx.a()), fb_(ctx.x, ctx.b()), n_(0) {}

    std::optional<BlockCell> next() {
        if (done_) return std::nullopt;
        BlockCell cell;
        Integer k = fa_.floor_at(n_);
        Integer h = fb_.floor_at(n_);
        cell.k = k;
        cell.h = h;
        cell.j = k - h;
        cell.first = n_;
        if (k == 0) {
            // final cell: both floors stay zero for every larger n
            cell.lo = ctx_.x - ctx_.a();
            cell.hi = std::nullopt;
            cell.eclass = CellClass::J0;
            done_ = true;
            ++emitted_;
            return cell;
        }
        Integer last = fa_.floor_shift_div(k);
        Rational hi = ctx_.x / Rational(k) - ctx_.a();
        if (h > 0) {
            Integer last_b = fb_.floor_shift_div(h);
            if (last_b < last) {
                last = last_b;
                hi = ctx_.x / Rational(h) - ctx_.b();
            } else if (last_b == last) {
                Rational hi_b = ctx_.x / Rational(h) - ctx_.b();
                if (hi_b < hi) hi = hi_b;
            }
        }
        cell.last = last;
        cell.hi = std::move(hi);
        Rational lo_a = ctx_.x / Rational(k + 1) - ctx_.a();
        Rational lo_b = ctx_.x / Rational(h + 1) - ctx_.b();
        cell.lo = lo_a > lo_b ? std::move(lo_a) : std::move(lo_b);
        cell.eclass = cell.j == 0 ? CellClass::J0 : classify(cell.j, k, ctx_);
        n_ = last + 1;
        ++emitted_;
        return cell;
    }

    std::uint64_t emitted() const { return emitted_; }

  private:
    const EvalContext& ctx_;
    FloorShift fa_, fb_;
    Integer n_;
    bool done_ = false;
    std::uint64_t emitted_ = 0;
};

inline void for_each_cell(const EvalContext& ctx, const std::function<bool(const BlockCell&)>& fn) {
    CellWalker walker(ctx);
    while (auto cell = walker.next()) {
        if (!fn(*cell)) break;
    }
}

/// A cell's contribution to W, split at the sign change when it falls inside.
struct CellSum {
    BlockCell cell;
    BoundedReal contribution;
    std::optional<Integer> split_at;
};

namespace detail {

/// Memo for boundary tails: consecutive cells share floor endpoints, so the
/// previous cell's lower tail is this cell's upper one.
struct TailCache {
    std::optional<Integer> at;
    BoundedReal value{64};
};

class CellSummer {
  public:
    CellSummer(const EvalContext& ctx, const TailSeries& tail, double eps_f, Prec prec)
        : ctx_(ctx), tail_(tail), cx_(ctx.c() * ctx.x), eps_f_(eps_f), prec_(prec) {}

    CellSum sum(const BlockCell& cell, TailCache* cache) {
        CellSum out{cell, BoundedReal(prec_), std::nullopt};
        if (cell.infinite()) {
            out.contribution = tail_at(cell.first - 1, cache).mul_exact(cx_);
            return out;
        }
        if (cell.j == 0) {
            out.contribution = slice(cell.first - 1, cell.last, cache).mul_exact(cx_);
            return out;
        }
        // sign of c*x/((n+a)(n+b)) - j across the cell, via exact comparisons
        bool pos_first = below_sign_change(cell.first, cell.j);
        bool pos_last = below_sign_change(cell.last, cell.j);
        if (pos_last) {
            out.contribution = slice(cell.first - 1, cell.last, cache).mul_exact(cx_) -
                               BoundedReal::exact(Integer(cell.j * cell.count()), prec_);
        } else if (!pos_first) {
            out.contribution = BoundedReal::exact(Integer(cell.j * cell.count()), prec_) -
                               slice(cell.first - 1, cell.last, cache).mul_exact(cx_);
        } else {
            // sign change strictly inside: largest n in the cell still below it
            Integer lo = cell.first, hi = cell.last;
            while (lo < hi) {
                Integer mid = (lo + hi + 1) / 2;
                if (below_sign_change(mid, cell.j)) lo = mid; else hi = mid - 1;
            }
            out.split_at = lo;
            BoundedReal part1 = slice(cell.first - 1, lo, cache).mul_exact(cx_) -
                                BoundedReal::exact(Integer(cell.j * (lo - cell.first + 1)), prec_);
            BoundedReal part2 = BoundedReal::exact(Integer(cell.j * (cell.last - lo)), prec_) -
                                slice(lo, cell.last, cache).mul_exact(cx_);
            out.contribution = part1 + part2;
        }
        return out;
    }

  private:
    bool below_sign_change(const Integer& n, const Integer& j) const {
        // (n+a)(n+b) * j <= c*x
        return Rational(j) * (n + ctx_.a()) * (n + ctx_.b()) <= cx_;
    }

    /// sum_{n0 < n <= n1} 1/((n+a)(n+b)); exact for short runs, tail
    /// difference otherwise.
    BoundedReal slice(const Integer& n0, const Integer& n1, TailCache* cache) {
        if (n1 - n0 <= 24) {
            return BoundedReal::exact(tail_.slice_exact(n0, n1), prec_);
        }
        BoundedReal left = tail_at(n0, cache);
        BoundedReal right = tail_.from_index(n1, eps_f_, prec_);
        if (cache) {
            cache->at = n1;
            cache->value = right;
        }
        return left - right;
    }

    BoundedReal tail_at(const Integer& n0, TailCache* cache) {
        if (cache && cache->at && *cache->at == n0) return cache->value;
        return tail_.from_index(n0, eps_f_, prec_);
    }

    const EvalContext& ctx_;
    const TailSeries& tail_;
    Rational cx_;
    double eps_f_;
    Prec prec_;
};

}  // namespace detail

/// Contribution of one cell with error radius <= eps.
inline CellSum cell_sum(const BlockCell& cell, const EvalContext& ctx, double eps, Prec prec = 0) {
    if (!(eps > 0)) throw DomainError("cell_sum: eps must be > 0");
    const Rational cx = ctx.c() * ctx.x;
    double cx_up = mpfr_get_d(Real::of(cx, 64, MPFR_RNDU).raw(), MPFR_RNDU);
    double eps_f = eps / (8.0 * std::max(1.0, cx_up));
    if (prec <= 0) prec = prec_for(eps_f, 8) + 16;
    TailSeries tail(ctx.a(), ctx.b());
    detail::CellSummer summer(ctx, tail, eps_f, prec);
    return summer.sum(cell, nullptr);
}

struct BlockResult {
    BoundedReal value;
    std::uint64_t cells = 0;
    std::uint64_t splits = 0;
};

/// W(x;a,b) as the sum over all cells, O(sqrt x) cell operations, error
/// radius <= eps.  Deterministic: cells are accumulated in walk order.
inline BlockResult w_block_stats(const EvalContext& ctx, double eps, Prec prec = 0) {
    if (!(eps > 0)) throw DomainError("w_block: eps must be > 0");
    const Rational cx = ctx.c() * ctx.x;
    double cx_up = mpfr_get_d(Real::of(cx, 64, MPFR_RNDU).raw(), MPFR_RNDU);
    // cells <= 4(sqrt(x)+1) + 3; each contributes at most four tail errors
    // scaled by c*x (two slices after an interior split)
    double cell_bound = 4.0 * (std::sqrt(std::max(0.0, mpfr_get_d(Real::of(ctx.x, 64, MPFR_RNDU).raw(), MPFR_RNDU))) + 1.0) + 3.0;
    double eps_f = eps / (4.0 * cell_bound * std::max(1.0, cx_up));
    if (prec <= 0) {
        long mag = static_cast<long>(mpz_sizeinbase(floor_int(cx).get_mpz_t(), 2));
        prec = prec_for(eps_f, mag + 8) + 16;
    }

    TailSeries tail(ctx.a(), ctx.b());
    detail::CellSummer summer(ctx, tail, eps_f, prec);
    detail::TailCache cache;

    BlockResult out;
    out.value = BoundedReal(prec);
    BoundedSum acc(prec);
    CellWalker walker(ctx);
    while (auto cell = walker.next()) {
        CellSum cs = summer.sum(*cell, &cache);
        if (cs.split_at) ++out.splits;
        acc.add(cs.contribution);
    }
    out.cells = walker.emitted();
    out.value = acc.result();
    return out;
}

inline BoundedReal w_block(const EvalContext& ctx, double eps, Prec prec = 0) {
    return w_block_stats(ctx, eps, prec).value;
}

/// Closed form for W_0, valid for x >= a^2/c: c*x*F(x/(K+1) - a) plus the
/// telescoped column sums over 1 <= k <= K with K = diag_limit(x/c).
inline BoundedReal w0_closed(const EvalContext& ctx, double eps, Prec prec = 0) {
    if (!(eps > 0)) throw DomainError("w0_closed: eps must be > 0");
    if (ctx.x < ctx.a() * ctx.a() / ctx.c())
        throw DomainError("w0_closed requires x >= a^2/c");
    const Rational cx = ctx.c() * ctx.x;
    const Integer K = diag_limit(ctx.x / ctx.c());
    double cx_up = mpfr_get_d(Real::of(cx, 64, MPFR_RNDU).raw(), MPFR_RNDU);
    double calls = 2.0 * mpz_get_d(K.get_mpz_t()) + 4.0;
    double eps_f = eps / (calls * std::max(1.0, cx_up));
    if (prec <= 0) {
        long mag = static_cast<long>(mpz_sizeinbase(floor_int(cx).get_mpz_t(), 2));
        prec = prec_for(eps_f, mag + 8) + 16;
    }
    TailSeries tail(ctx.a(), ctx.b());

    BoundedSum acc(prec);
    acc.add(tail.at(TailPoint(ctx.x / Rational(K + 1) - ctx.a()), eps_f, prec));
    for (Integer k(1); k <= K; ++k) {
        Rational base = ctx.x / Rational(k);
        acc.add(tail.at(TailPoint(base - ctx.a()), eps_f, prec));
        acc.sub(tail.at(TailPoint(base - ctx.b()), eps_f, prec));
    }
    return acc.result().mul_exact(cx);
}

/// Closed form for W_j, 1 <= j <= y - 1: six blocks of floor sums and tail
/// sums anchored at the offset limits for j-1 and j+1 and at the sign-change
/// point.
inline BoundedReal wj_closed(const Integer& j, const EvalContext& ctx, double eps,
                             Prec prec = 0) {
    if (!(eps > 0)) throw DomainError("wj_closed: eps must be > 0");
    if (j < 1) throw DomainError("wj_closed: j >= 1 required");
    if (!(Rational(j) <= ctx.y - 1)) throw DomainError("wj_closed requires j <= y - 1");

    const Rational t = ctx.x / ctx.c();
    const Integer k_lo = offset_limit(j - 1, t);
    const Integer k_hi = offset_limit(j + 1, t);
    auto n_split = sign_change(j, ctx);
    if (!n_split) throw DomainError("wj_closed: no sign change point (j > y)");

    const Rational cx = ctx.c() * ctx.x;
    double cx_up = mpfr_get_d(Real::of(cx, 64, MPFR_RNDU).raw(), MPFR_RNDU);
    double span = mpz_get_d(Integer(k_hi - k_lo).get_mpz_t());
    double calls = 2.0 * span + 2.0 * mpz_get_d(j.get_mpz_t()) + 8.0;
    double eps_f = eps / (calls * std::max(1.0, cx_up));
    if (prec <= 0) {
        long mag = static_cast<long>(mpz_sizeinbase(floor_int(cx).get_mpz_t(), 2));
        prec = prec_for(eps_f, mag + 8) + 16;
    }

    TailSeries tail(ctx.a(), ctx.b());
    FloorShift fa(ctx.x, ctx.a());
    FloorShift fb(ctx.x, ctx.b());

    Integer floors(0);
    BoundedSum tails(prec);

    // columns k_lo < k <= k_hi: floor(x/k - a) - floor(x/k - b) and the
    // matching tail differences
    for (Integer k = k_lo + 1; k <= k_hi; ++k) {
        floors += fa.floor_shift_div(k) - fb.floor_shift_div(k);
        Rational base = ctx.x / Rational(k);
        tails.add(tail.at(TailPoint(base - ctx.a()), eps_f, prec));
        tails.sub(tail.at(TailPoint(base - ctx.b()), eps_f, prec));
    }
    // boundary columns k_hi - (j+1) < k <= k_hi, added
    for (Integer k = k_hi - (j + 1) + 1; k <= k_hi; ++k) {
        floors += fb.floor_shift_div(k);
        tails.add(tail.at(TailPoint(ctx.x / Rational(k) - ctx.b()), eps_f, prec));
    }
    // boundary columns k_lo - (j-1) < k <= k_lo, subtracted
    for (Integer k = k_lo - (j - 1) + 1; k <= k_lo; ++k) {
        floors -= fb.floor_shift_div(k);
        tails.sub(tail.at(TailPoint(ctx.x / Rational(k) - ctx.b()), eps_f, prec));
    }
    floors -= 2 * *n_split;
    tails.sub(tail.from_index(*n_split, eps_f, prec));
    tails.sub(tail.from_index(*n_split, eps_f, prec));

    BoundedReal result = tails.result().mul_exact(cx);
    return result + BoundedReal::exact(Rational(j) * Rational(floors), prec);
}

}  // namespace fracsum

#endif
