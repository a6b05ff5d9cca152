#ifndef FRACSUM_CHECK_HPP
#define FRACSUM_CHECK_HPP

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "fracsum/asymptotics.hpp"
#include "fracsum/blocks.hpp"
#include "fracsum/direct.hpp"

namespace fracsum {

/// Property suites runnable on a single instance (the `check` subcommand and
/// the test harness share this).  kj_offset is a fault-injection hook: a
/// nonzero value perturbs the offset limits the suites test against, which a
/// healthy run must detect as failures.
struct CheckOptions {
    long kj_offset = 0;
    long max_j = 400;
    Rational desk_limit = Rational(2000000);
};

struct CheckResult {
    std::string name;
    bool pass = true;
    bool skipped = false;
    std::string detail;
};

inline const std::vector<std::string>& check_suite_names() {
    static const std::vector<std::string> names = {
        "partition",       "limit-sandwich", "limit-bracket", "limit-domain",
        "tail-bound",      "closed-forms",   "remainder-magnitude",
        "block-vs-direct",
    };
    return names;
}

namespace detail {

inline long j_top(const EvalContext& ctx, const CheckOptions& opt) {
    Integer ymax = floor_int(ctx.y);
    if (ymax < 1) return 0;
    if (ymax > opt.max_j) return opt.max_j;
    return static_cast<long>(ymax.get_si());
}

inline CheckResult check_partition(const EvalContext& ctx, const CheckOptions&) {
    CheckResult r{"partition"};
    FloorShift fa(ctx.x, ctx.a());
    FloorShift fb(ctx.x, ctx.b());
    Integer expect(0);
    std::uint64_t cells = 0;
    CellWalker w(ctx);
    while (auto cell = w.next()) {
        ++cells;
        bool ok = cell->first == expect && fa.floor_at(cell->first) == cell->k &&
                  fb.floor_at(cell->first) == cell->h;
        if (ok && !cell->infinite())
            ok = fa.floor_at(cell->last) == cell->k && fb.floor_at(cell->last) == cell->h;
        if (!ok) {
            r.pass = false;
            r.detail = "cell starting at n = " + expect.get_str() + " is inconsistent";
            return r;
        }
        if (cell->infinite()) break;
        expect = cell->last + 1;
    }
    r.detail = std::to_string(cells) + " cells tile the naturals";
    return r;
}

inline CheckResult check_sandwich(const EvalContext& ctx, const CheckOptions& opt) {
    CheckResult r{"limit-sandwich"};
    long top = j_top(ctx, opt);
    if (top < 1) {
        r.skipped = true;
        r.detail = "no j in range (y < 1)";
        return r;
    }
    for (long jj = 1; jj <= top; ++jj) {
        Integer j(jj);
        if (!(Rational(j) <= ctx.y)) break;
        Integer kj = offset_limit(j, ctx.x / ctx.c()) + opt.kj_offset;
        auto nj = sign_change(j, ctx);
        if (!nj || kj < 1) {
            r.pass = false;
            r.detail = "missing sign change at j = " + std::to_string(jj);
            return r;
        }
        if (!(floor_int(ctx.x / Rational(kj + 1) - ctx.a()) <= *nj &&
              *nj <= floor_int(ctx.x / Rational(kj) - ctx.a()))) {
            r.pass = false;
            r.detail = "sandwich fails at j = " + std::to_string(jj);
            return r;
        }
    }
    r.detail = "floor sandwich holds for j <= " + std::to_string(top);
    return r;
}

inline CheckResult check_bracket(const EvalContext& ctx, const CheckOptions& opt) {
    CheckResult r{"limit-bracket"};
    long top = std::max(j_top(ctx, opt), 1L);
    const Rational t = ctx.x / ctx.c();
    for (long jj = 1; jj <= top; ++jj) {
        Integer j(jj);
        Integer kj = offset_limit(j, t) + opt.kj_offset;
        Rational jt = Rational(j) * t;
        Rational upper = Rational((kj - j) * (kj - j));
        Rational lo_rhs = Rational(kj) - Rational(j) / 2 + 1;
        if (!(upper <= jt && lo_rhs > 0 && jt < lo_rhs * lo_rhs)) {
            r.pass = false;
            r.detail = "sqrt bracket fails at j = " + std::to_string(jj);
            return r;
        }
    }
    r.detail = "sqrt bracket holds for j <= " + std::to_string(top);
    return r;
}

inline CheckResult check_domain(const EvalContext& ctx, const CheckOptions& opt) {
    CheckResult r{"limit-domain"};
    long top = j_top(ctx, opt);
    if (top < 1) {
        r.skipped = true;
        r.detail = "no j in range (y < 1)";
        return r;
    }
    for (long jj = 1; jj <= top; ++jj) {
        Integer j(jj);
        if (!(Rational(j) <= ctx.y)) break;
        Integer kj = offset_limit(j, ctx.x / ctx.c()) + opt.kj_offset;
        if (!(Rational(kj) <= ctx.x / ctx.a())) {
            r.pass = false;
            r.detail = "offset limit exceeds x/a at j = " + std::to_string(jj);
            return r;
        }
    }
    r.detail = "offset limits stay below x/a for j <= " + std::to_string(top);
    return r;
}

inline CheckResult check_tail_bound_suite(const EvalContext& ctx, const CheckOptions& opt) {
    CheckResult r{"tail-bound"};
    if (ctx.x > opt.desk_limit / 10) {
        r.skipped = true;
        r.detail = "needs the O(x) reference, x too large";
        return r;
    }
    for (double J : {2.0, 3.5, 6.0}) {
        if (!tail_bound_holds(ctx, J)) {
            r.pass = false;
            std::ostringstream os;
            os << "tail bound fails at J = " << J;
            r.detail = os.str();
            return r;
        }
    }
    r.detail = "tail sum below sqrt(cx/(J-1)) + 1 at J in {2, 3.5, 6}";
    return r;
}

inline CheckResult check_closed_forms(const EvalContext& ctx, const CheckOptions& opt) {
    CheckResult r{"closed-forms"};
    if (ctx.x > opt.desk_limit / 100) {
        r.skipped = true;
        r.detail = "needs the O(x) reference, x too large";
        return r;
    }
    int checked = 0;
    if (!(ctx.x < ctx.a() * ctx.a() / ctx.c())) {
        if (!w0_closed(ctx, 1e-18).overlaps(w0_direct(ctx, 1e-18))) {
            r.pass = false;
            r.detail = "diagonal closed form disagrees with the direct sum";
            return r;
        }
        ++checked;
    }
    Integer jmax = floor_int(ctx.y - 1);
    long top = jmax < 1 ? 0 : std::min<long>(opt.max_j / 8, static_cast<long>(jmax.get_si()));
    for (long jj = 1; jj <= top; ++jj) {
        Integer j(jj);
        if (!(Rational(j) <= ctx.y - 1)) break;
        if (!wj_closed(j, ctx, 1e-16).contains(wj_direct(ctx, j))) {
            r.pass = false;
            r.detail = "width-" + std::to_string(jj) + " closed form disagrees";
            return r;
        }
        ++checked;
    }
    if (checked == 0) {
        r.skipped = true;
        r.detail = "no closed form applicable (degenerate instance)";
        return r;
    }
    r.detail = std::to_string(checked) + " closed forms match their direct sums";
    return r;
}

inline CheckResult check_r_magnitude(const EvalContext& ctx, const CheckOptions&) {
    CheckResult r{"remainder-magnitude"};
    RMagnitudeReport rep = r_magnitude_report(ctx);
    if (rep.rows.empty()) {
        r.skipped = true;
        r.detail = "no j with j^3 <= x/c";
        return r;
    }
    for (const auto& row : rep.rows) {
        if (!std::isfinite(row.ratio)) {
            r.pass = false;
            r.detail = "ratio not finite at j = " + std::to_string(row.j);
            return r;
        }
    }
    std::ostringstream os;
    os << rep.rows.size() << " ratios finite, max " << rep.max_ratio;
    r.detail = os.str();
    return r;
}

inline CheckResult check_block_vs_direct(const EvalContext& ctx, const CheckOptions& opt) {
    CheckResult r{"block-vs-direct"};
    if (ctx.x > opt.desk_limit) {
        r.skipped = true;
        r.detail = "x beyond the O(x) reference range";
        return r;
    }
    BoundedReal fast = w_block(ctx, 1e-18);
    BoundedReal slow = w_direct(ctx, 1e-18);
    if (!fast.overlaps(slow)) {
        r.pass = false;
        r.detail = "block evaluator does not overlap the direct sum";
        return r;
    }
    r.detail = "block and direct enclosures overlap";
    return r;
}

}  // namespace detail

inline std::vector<CheckResult> run_checks(const EvalContext& ctx,
                                           std::vector<std::string> which = {},
                                           const CheckOptions& opt = {}) {
    if (which.empty()) which = check_suite_names();
    std::vector<CheckResult> out;
    for (const std::string& name : which) {
        if (name == "partition") out.push_back(detail::check_partition(ctx, opt));
        else if (name == "limit-sandwich") out.push_back(detail::check_sandwich(ctx, opt));
        else if (name == "limit-bracket") out.push_back(detail::check_bracket(ctx, opt));
        else if (name == "limit-domain") out.push_back(detail::check_domain(ctx, opt));
        else if (name == "tail-bound") out.push_back(detail::check_tail_bound_suite(ctx, opt));
        else if (name == "closed-forms") out.push_back(detail::check_closed_forms(ctx, opt));
        else if (name == "remainder-magnitude") out.push_back(detail::check_r_magnitude(ctx, opt));
        else if (name == "block-vs-direct") out.push_back(detail::check_block_vs_direct(ctx, opt));
        else throw DomainError("unknown check suite: " + name);
    }
    return out;
}

}  // namespace fracsum

#endif
