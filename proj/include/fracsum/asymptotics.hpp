#ifndef FRACSUM_ASYMPTOTICS_HPP
#define FRACSUM_ASYMPTOTICS_HPP

#include <cmath>
#include <map>
#include <vector>

#include "fracsum/blocks.hpp"
#include "fracsum/direct.hpp"
#include "fracsum/params.hpp"
#include "fracsum/rational.hpp"
#include "fracsum/real.hpp"
#include "fracsum/series.hpp"

namespace fracsum {

/// Leading term (2/pi) * zeta(3/2) * sqrt(c*x).
inline BoundedReal main_term(const EvalContext& ctx, double eps, Prec prec = 0) {
    if (!(eps > 0)) throw DomainError("main_term: eps must be > 0");
    const Rational cx = ctx.c() * ctx.x;
    if (prec <= 0) {
        long mag = static_cast<long>(mpz_sizeinbase(floor_int(cx).get_mpz_t(), 2)) / 2 + 8;
        prec = prec_for(eps, mag) + 32;
    }
    double root_up = std::sqrt(mpfr_get_d(Real::of(cx, 64, MPFR_RNDU).raw(), MPFR_RNDU)) + 1.0;
    BoundedReal z = zeta_three_halves(eps / (8.0 * root_up), prec);
    BoundedReal pi = pi_bounded(prec);
    BoundedReal two = BoundedReal::exact(Rational(2), prec);
    BoundedReal root = BoundedReal::sqrt_of(cx, prec);
    return two / pi * z * root;
}

/// Coefficient of sqrt(c*x) contributed by the width-j sums:
/// (8j+2)/3 sqrt(j+1) - (8j-2)/3 sqrt(j-1) - 4 sqrt(j).  Decays like
/// j^(-3/2)/6, so the evaluation precision has to absorb a ~j^3
/// cancellation, which prec_for covers through the magnitude argument.
inline BoundedReal f_coeff(const Integer& j, double eps, Prec prec = 0) {
    if (j < 1) throw DomainError("f_coeff: j >= 1 required");
    if (!(eps > 0)) throw DomainError("f_coeff: eps must be > 0");
    if (prec <= 0) {
        long mag = 6 + (3 * static_cast<long>(mpz_sizeinbase(j.get_mpz_t(), 2))) / 2;
        prec = prec_for(eps, mag) + 16;
    }
    BoundedReal sp = BoundedReal::sqrt_of(Rational(j + 1), prec)
                         .mul_exact(make_rational(8 * j + 2, Integer(3)));
    BoundedReal sm = BoundedReal::sqrt_of(Rational(j - 1), prec)
                         .mul_exact(make_rational(8 * j - 2, Integer(3)));
    BoundedReal s0 = BoundedReal::sqrt_of(Rational(j), prec).mul_exact(Rational(4));
    return sp - sm - s0;
}

/// 2/3 + sum_{1 <= j <= J} f_coeff(j); converges to (2/pi) zeta(3/2).
inline BoundedReal series_partial(const Integer& J, double eps, Prec prec = 0) {
    if (J < 1) throw DomainError("series_partial: J >= 1 required");
    if (!(eps > 0)) throw DomainError("series_partial: eps must be > 0");
    double terms = mpz_get_d(J.get_mpz_t()) + 1.0;
    double eps_term = eps / (2.0 * terms);
    if (prec <= 0) {
        long mag = 6 + (3 * static_cast<long>(mpz_sizeinbase(J.get_mpz_t(), 2))) / 2;
        prec = prec_for(eps_term, mag) + 16;
    }
    BoundedSum acc(prec);
    acc.add_exact(make_rational(Integer(2), Integer(3)));
    for (Integer j(1); j <= J; ++j) acc.add(f_coeff(j, eps_term, prec));
    return acc.result();
}

/// Exact remainder weight sums.  The fractional-part difference
/// {x/k - a} - {x/k - b} equals c - (floor(x/k - a) - floor(x/k - b)), so
/// both R_0 and R_j reduce to integer-weighted floor sums and a few exact
/// rational factors; no rounding anywhere.
inline Rational r_term(const EvalContext& ctx, const Integer& j) {
    if (j < 0) throw DomainError("r_term: j >= 0 required");
    FloorShift fa(ctx.x, ctx.a());
    FloorShift fb(ctx.x, ctx.b());
    const Rational t = ctx.x / ctx.c();

    Integer k_lo, k_hi;
    if (j == 0) {
        k_lo = 0;
        k_hi = diag_limit(t);
    } else {
        k_lo = offset_limit(j - 1, t);
        k_hi = offset_limit(j + 1, t);
    }
    Integer sum_k2(0), sum_k2d(0), sum_d(0), cnt(0);
    for (Integer k = k_lo + 1; k <= k_hi; ++k) {
        Integer d = fa.floor_shift_div(k) - fb.floor_shift_div(k);
        Integer k2 = k * k;
        sum_k2 += k2;
        sum_k2d += k2 * d;
        sum_d += d;
        ++cnt;
    }
    Rational head = (ctx.c() / ctx.x) * (ctx.c() * Rational(sum_k2) - Rational(sum_k2d));
    if (j == 0) return head;
    return head - Rational(j) * (ctx.c() * Rational(cnt) - Rational(sum_d));
}

/// sum of r_term over 0 <= j <= J.
inline Rational r_sum(const EvalContext& ctx, double J) {
    if (J < 0) throw DomainError("r_sum: J >= 0 required");
    long top = static_cast<long>(std::floor(J));
    std::vector<Rational> terms;
    for (long j = 0; j <= top; ++j) terms.push_back(r_term(ctx, Integer(j)));
    return sum_exact(std::move(terms));
}

struct RemainderTable {
    double J = 0;
    std::map<long, Rational> entries;

    Rational total() const {
        Rational t(0);
        for (const auto& [j, v] : entries) t += v;
        return t;
    }
};

inline RemainderTable r_table(const EvalContext& ctx, double J) {
    if (J < 0) throw DomainError("r_table: J >= 0 required");
    RemainderTable table;
    table.J = J;
    long top = static_cast<long>(std::floor(J));
    for (long j = 0; j <= top; ++j) table.entries[j] = r_term(ctx, Integer(j));
    return table;
}

/// Truncation point J = c^(3/5) (1+b)^(-4/5) x^(1/5) used by the residual
/// assembly; a summation cutoff only, so a double suffices.
inline double r_cutoff(const EvalContext& ctx) {
    double c = ctx.c().get_d();
    double b1 = 1.0 + ctx.b().get_d();
    double x = ctx.x.get_d();
    return std::pow(c, 0.6) * std::pow(b1, -0.8) * std::pow(x, 0.2);
}

/// x >= 40 c^-3 (1+b)^4, exactly.
inline bool hypothesis_a(const EvalContext& ctx) {
    Rational lhs = ctx.x * pow_rat(ctx.c(), 3);
    Rational rhs = 40 * pow_rat(1 + ctx.b(), 4);
    return lhs >= rhs;
}

/// x >= 40 c^-5 (1+b)^(27/2), exactly (squared to clear the half power).
inline bool hypothesis_b(const EvalContext& ctx) {
    Rational lhs = pow_rat(ctx.x, 2) * pow_rat(ctx.c(), 10);
    Rational rhs = 1600 * pow_rat(1 + ctx.b(), 27);
    return lhs >= rhs;
}

/// One row of an asymptotics scan.
struct ResidualSample {
    Rational x;
    Rational a, b, c;
    BoundedReal W;
    BoundedReal main;
    BoundedReal RJ;
    double J = 0;
    BoundedReal residual_A;  // W - main - RJ
    BoundedReal residual_B;  // W - main
    bool hypothesis_A_ok = false;
    bool hypothesis_B_ok = false;
};

inline ResidualSample residual_sample(const EvalContext& ctx, double eps) {
    if (!(eps > 0)) throw DomainError("residual_sample: eps must be > 0");
    ResidualSample s;
    s.x = ctx.x;
    s.a = ctx.a();
    s.b = ctx.b();
    s.c = ctx.c();
    s.W = w_block(ctx, eps / 2);
    s.main = main_term(ctx, eps / 2, s.W.value.prec());
    s.J = r_cutoff(ctx);
    s.RJ = BoundedReal::exact(r_sum(ctx, s.J), s.W.value.prec());
    s.residual_B = s.W - s.main;
    s.residual_A = s.residual_B - s.RJ;
    s.hypothesis_A_ok = hypothesis_a(ctx);
    s.hypothesis_B_ok = hypothesis_b(ctx);
    return s;
}

/// sum_{j > J} W_j < sqrt(c*x/(J-1)) + 1, decided exactly.  The left side
/// is a finite sum of exact rationals; the comparison squares the
/// difference against c*x/(J-1).
inline bool tail_bound_holds(const EvalContext& ctx, double J) {
    if (!(J > 1)) throw DomainError("tail_bound_holds: J > 1 required");
    Rational jr;
    mpq_set_d(jr.get_mpq_t(), J);  // doubles are exact rationals
    Integer j_lo = floor_int(jr) + 1;
    Integer j_hi = floor_int(ctx.y) + 1;
    std::vector<Rational> terms;
    for (Integer j = j_lo; j <= j_hi; ++j) terms.push_back(wj_direct(ctx, j));
    Rational lhs = sum_exact(std::move(terms));
    if (lhs < 1) return true;
    Rational diff = lhs - 1;
    return diff * diff < ctx.c() * ctx.x / (jr - 1);
}

struct RMagnitudeRow {
    long j = 0;
    double r_abs = 0;
    double envelope = 0;
    double ratio = 0;
};

struct RMagnitudeReport {
    std::vector<RMagnitudeRow> rows;
    double max_ratio = 0;
};

/// |R_j| against the envelope x^(1/3)/j + x^(1/4) j^(3/4) c^(-3/4) for
/// 2 <= j <= (x/c)^(1/3).  The envelope carries an unspecified constant, so
/// callers assert the ratios against a recorded ceiling, not against 1.
inline RMagnitudeReport r_magnitude_report(const EvalContext& ctx) {
    RMagnitudeReport report;
    const Rational t = ctx.x / ctx.c();
    double x = ctx.x.get_d();
    double c = ctx.c().get_d();
    for (long j = 2; Rational(Integer(j) * Integer(j) * Integer(j)) <= t; ++j) {
        RMagnitudeRow row;
        row.j = j;
        Rational r = r_term(ctx, Integer(j));
        row.r_abs = std::fabs(r.get_d());
        row.envelope = std::cbrt(x) / static_cast<double>(j) +
                       std::pow(x, 0.25) * std::pow(static_cast<double>(j), 0.75) *
                           std::pow(c, -0.75);
        row.ratio = row.r_abs / row.envelope;
        report.max_ratio = std::max(report.max_ratio, row.ratio);
        report.rows.push_back(row);
    }
    return report;
}

struct FitError : DomainError {
    enum class Kind { TooFewPoints, Degenerate };
    Kind kind;
    explicit FitError(Kind k)
        : DomainError(k == Kind::TooFewPoints ? "fit: fewer than 5 usable points"
                                              : "fit: residuals are all zero"),
          kind(k) {}
};

struct FitResult {
    double slope = 0;
    double intercept = 0;
    int points = 0;
};

struct FitPoint {
    double x = 0;
    double residual = 0;
    double err = 0;
};

/// Least squares of log|residual| against log x, after dropping
/// noise-dominated points (|residual| <= 10 * err).
inline FitResult fit_points(const std::vector<FitPoint>& pts) {
    std::vector<std::pair<double, double>> keep;
    bool any_nonzero = false;
    for (const auto& p : pts) {
        if (p.residual != 0.0) any_nonzero = true;
        if (std::fabs(p.residual) > 10.0 * p.err && p.residual != 0.0)
            keep.emplace_back(std::log(p.x), std::log(std::fabs(p.residual)));
    }
    if (!any_nonzero) throw FitError(FitError::Kind::Degenerate);
    if (keep.size() < 5) throw FitError(FitError::Kind::TooFewPoints);
    double mx = 0, my = 0;
    for (auto& [lx, ly] : keep) {
        mx += lx;
        my += ly;
    }
    mx /= static_cast<double>(keep.size());
    my /= static_cast<double>(keep.size());
    double sxx = 0, sxy = 0;
    for (auto& [lx, ly] : keep) {
        sxx += (lx - mx) * (lx - mx);
        sxy += (lx - mx) * (ly - my);
    }
    if (sxx == 0) throw FitError(FitError::Kind::TooFewPoints);
    FitResult r;
    r.slope = sxy / sxx;
    r.intercept = my - r.slope * mx;
    r.points = static_cast<int>(keep.size());
    return r;
}

enum class ResidualKind { A, B };

inline FitResult fit_exponent(const std::vector<ResidualSample>& samples, ResidualKind kind) {
    std::vector<FitPoint> pts;
    pts.reserve(samples.size());
    for (const auto& s : samples) {
        const BoundedReal& r = kind == ResidualKind::A ? s.residual_A : s.residual_B;
        pts.push_back({s.x.get_d(), r.value.to_double(), r.err_double()});
    }
    return fit_points(pts);
}

}  // namespace fracsum

#endif
