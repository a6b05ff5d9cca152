#ifndef FRACSUM_SERIES_HPP
#define FRACSUM_SERIES_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "fracsum/rational.hpp"
#include "fracsum/real.hpp"

namespace fracsum {

/// Evaluation point for the tail series: a rational, or the +infinity
/// sentinel (where the tail is exactly zero).
struct TailPoint {
    bool infinite = false;
    Rational t;

    TailPoint(Rational v) : t(std::move(v)) {}  // NOLINT(google-explicit-constructor)
    static TailPoint inf() {
        TailPoint p{Rational(0)};
        p.infinite = true;
        return p;
    }
};

/// Enclosures of tail_from(n0) = sum_{n > n0} 1/((n+a)(n+b)) for fixed
/// 0 < a < b.  Strategy: sum terms explicitly up to a base point M, then
/// expand the remaining tail in the telescoping basis
///     1/((n+b)(n+b+1)...(n+b+m+1)),
/// whose tails sum in closed form.  The expansion coefficients are the exact
/// products (c+1)(c+2)...(c+m), and the truncated remainder is sandwiched
/// between the next term and (1 + (c+m+1)/(M+1+a)) times it, which gives a
/// rigorous bracket with no special functions involved.
class TailSeries {
  public:
    TailSeries(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)), c_(b_ - a_) {
        if (!(a_ > 0 && a_ < b_)) throw DomainError("tail series requires 0 < a < b");
    }

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    const Rational& c() const { return c_; }

    /// sum_{n > n0} 1/((n+a)(n+b)) with error radius <= eps.
    BoundedReal from_index(Integer n0, double eps, Prec prec = 0) const {
        if (!(eps > 0)) throw DomainError("tail series: eps must be > 0");
        if (n0 < -1) n0 = -1;
        if (prec <= 0) prec = prec_for(eps, 8);
        for (int tries = 0; tries < 4; ++tries) {
            BoundedReal r = attempt(n0, eps, prec);
            Real budget = Real::of(eps, 64);
            if (r.err <= budget) return r;
            prec += prec / 2 + 64;
        }
        throw std::logic_error("tail series failed to meet eps");
    }

    /// Floor convention: for rational t >= 0 the sum over n > t equals the
    /// sum over n > floor(t); any t < 0 means the full series from n = 0.
    BoundedReal at(const TailPoint& t, double eps, Prec prec = 0) const {
        if (t.infinite) return BoundedReal::zero(prec > 0 ? prec : prec_for(eps, 8));
        Integer n0 = t.t >= 0 ? floor_int(t.t) : Integer(-1);
        return from_index(n0, eps, prec);
    }

    /// Exact finite slice sum_{n0 < n <= n1} 1/((n+a)(n+b)).
    Rational slice_exact(const Integer& n0, const Integer& n1) const {
        std::vector<Rational> terms;
        for (Integer n = n0 + 1; n <= n1; ++n) terms.push_back(term_exact(n));
        return sum_exact(std::move(terms));
    }

    Rational term_exact(const Integer& n) const {
        return make_rational(a_.get_den() * b_.get_den(),
                             (n * a_.get_den() + a_.get_num()) * (n * b_.get_den() + b_.get_num()));
    }

  private:
    BoundedReal attempt(const Integer& n0, double eps, Prec prec) const {
        BoundedSum sum(prec);
        // expansion base: large enough that term ratios stay below one and the
        // expanded tail is comparable to its first term
        Integer floor_base(48);
        Integer by_c = ceil_int(4 * (c_ + 1));
        Integer by_b = ceil_int(b_) + 1;
        if (by_c > floor_base) floor_base = by_c;
        if (by_b > floor_base) floor_base = by_b;
        Integer base = n0 < floor_base ? floor_base : n0;
        for (Integer n = n0 + 1; n <= base; ++n) sum.add_exact(term_exact(n));

        const int cap = 96;
        while (true) {
            if (auto rem = expand_at(base, eps * 0.5, prec, cap)) {
                sum.add(*rem);
                return sum.result();
            }
            Integer next = base * 2 + 16;
            for (Integer n = base + 1; n <= next; ++n) sum.add_exact(term_exact(n));
            base = next;
        }
    }

    /// Telescoping expansion of sum_{n > base}; nullopt if the bracket does
    /// not shrink below eps within `cap` terms.
    std::optional<BoundedReal> expand_at(const Integer& base, double eps, Prec prec,
                                         int cap) const {
        const Integer& cn = c_.get_num();
        const Integer& cd = c_.get_den();
        const Integer& bn = b_.get_num();
        const Integer& bd = b_.get_den();

        BoundedSum sum(prec);
        Real term(prec);
        // t_0 = 1/(base + 1 + b)
        Rational first = make_rational(bd, (base + 1) * bd + bn);
        mpfr_set_q(term.raw(), first.get_mpq_t(), MPFR_RNDN);
        const mpfr_exp_t exp0 = mpfr_get_exp(term.raw());

        Real eps_r = Real::of(eps, 64);
        Integer q_den = (base + 1) * a_.get_den() + a_.get_num();  // (base+1+a) * a_den
        unsigned long ops = 0;

        for (int m = 0; m < cap; ++m) {
            // q_m = (c + m + 1) / (base + 1 + a); bracket width = t_m * q_m
            Rational q_m = make_rational((cn + (m + 1) * cd) * a_.get_den(), cd * q_den);
            Real width(prec);
            mpfr_mul_q(width.raw(), term.raw(), q_m.get_mpq_t(), MPFR_RNDU);
            if (width <= eps_r) {
                // remainder lies in [t_m, t_m * (1 + q_m)]; drift of the term
                // recursion is bounded against the first (largest) term
                Real mid(prec);
                mpfr_div_2ui(mid.raw(), width.raw(), 1, MPFR_RNDN);
                mpfr_add(mid.raw(), mid.raw(), term.raw(), MPFR_RNDN);
                Real half(prec);
                mpfr_div_2ui(half.raw(), width.raw(), 1, MPFR_RNDU);
                Real slop(64);
                mpfr_set_ui_2exp(slop.raw(), 8 * (ops + 4), exp0 - prec + 1, MPFR_RNDU);
                sum.add(BoundedReal(mid, add_up(half, slop)));
                return sum.result();
            }
            sum.add(BoundedReal(term, Real(32)));
            // t_{m+1} = t_m * (c+m+1)(m+1) / ((m+2)(base+1+b+m+1))
            Integer rnum = (cn + (m + 1) * cd) * (m + 1) * bd;
            Integer rden = cd * (m + 2) * ((base + m + 2) * bd + bn);
            mpfr_mul_z(term.raw(), term.raw(), rnum.get_mpz_t(), MPFR_RNDN);
            mpfr_div_z(term.raw(), term.raw(), rden.get_mpz_t(), MPFR_RNDN);
            ops += 2;
        }
        return std::nullopt;
    }

    Rational a_, b_, c_;
};

/// F(t) from the module contract: the tail series at an extended-rational
/// point, with err <= eps.
inline BoundedReal tail_sum(const TailPoint& t, const Rational& a, const Rational& b,
                            double eps, Prec prec = 0) {
    return TailSeries(a, b).at(t, eps, prec);
}

/// Exact Bernoulli numbers B_0..B_n from the defining recurrence.
inline std::vector<Rational> bernoulli_numbers(int n) {
    std::vector<Rational> bern(static_cast<std::size_t>(n) + 1);
    bern[0] = 1;
    for (int m = 1; m <= n; ++m) {
        Rational acc(0);
        for (int k = 0; k < m; ++k) {
            Integer binom;
            mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(m) + 1,
                         static_cast<unsigned long>(k));
            acc += Rational(binom) * bern[static_cast<std::size_t>(k)];
        }
        bern[static_cast<std::size_t>(m)] = -acc / Rational(m + 1);
    }
    return bern;
}

inline BoundedReal pi_bounded(Prec prec) {
    Real v(prec);
    mpfr_const_pi(v.raw(), MPFR_RNDN);
    Real e = v.ulp_bound();
    return BoundedReal(std::move(v), std::move(e));
}

/// zeta(3/2) enclosed by Euler-Maclaurin summation with exact Bernoulli
/// coefficients.  For real positive s the truncation error of the correction
/// series is bounded by the first omitted term, which is the radius used.
inline BoundedReal zeta_three_halves(double eps, Prec prec = 0) {
    if (!(eps > 0)) throw DomainError("zeta_three_halves: eps must be > 0");
    if (prec <= 0) prec = prec_for(eps, 4) + 32;

    const Rational s(3, 2);
    // Pick N, m so that |T_{m+1}(N)| is far below eps.  T_k(N) =
    // B_2k/(2k)! * s(s+1)...(s+2k-2) * N^(-s-2k+1).
    long n_base = 32;
    int m = 8;
    auto term_coeff = [&](const std::vector<Rational>& bern, int k) -> Rational {
        Rational poch(1);
        for (int i = 0; i <= 2 * k - 2; ++i) poch *= s + i;
        Integer fact;
        mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(2 * k));
        Rational r = bern[static_cast<std::size_t>(2 * k)] / Rational(fact);
        r *= poch;
        return r;
    };
    auto tail_term_log2 = [&](const std::vector<Rational>& bern, long n, int k) {
        Rational coeff = abs(term_coeff(bern, k));
        double lg = std::log2(coeff.get_d());
        lg -= (2.0 * k + 0.5) * std::log2(static_cast<double>(n));
        return lg;
    };
    std::vector<Rational> bern = bernoulli_numbers(2 * (m + 1) + 2);
    double target = std::log2(eps) - 3;
    while (tail_term_log2(bern, n_base, m + 1) > target) {
        if (m < 24) {
            m += 4;
            bern = bernoulli_numbers(2 * (m + 1) + 2);
        } else {
            n_base *= 2;
        }
    }

    BoundedSum sum(prec);
    Real inv_sqrt(prec);
    for (long n = 1; n <= n_base; ++n) {
        // n^(-3/2)
        mpfr_sqrt_ui(inv_sqrt.raw(), static_cast<unsigned long>(n), MPFR_RNDN);
        mpfr_mul_ui(inv_sqrt.raw(), inv_sqrt.raw(), static_cast<unsigned long>(n), MPFR_RNDN);
        mpfr_ui_div(inv_sqrt.raw(), 1, inv_sqrt.raw(), MPFR_RNDN);
        Real slop = inv_sqrt.ulp_bound();
        slop = add_up(slop, slop);
        sum.add(BoundedReal(inv_sqrt, slop));
    }

    Real rn(prec);
    mpfr_sqrt_ui(rn.raw(), static_cast<unsigned long>(n_base), MPFR_RNDN);
    mpfr_ui_div(rn.raw(), 1, rn.raw(), MPFR_RNDN);  // N^(-1/2)
    {
        Real t = rn + rn;  // N^(1-s)/(s-1) = 2 N^(-1/2)
        Real e = add_up(t.ulp_bound(), t.ulp_bound());
        sum.add(BoundedReal(t, e));
    }
    {
        Real t(prec);
        mpfr_div_ui(t.raw(), rn.raw(), 2 * static_cast<unsigned long>(n_base), MPFR_RNDN);
        Real e = add_up(t.ulp_bound(), t.ulp_bound());
        sum.sub(BoundedReal(t, e));  // - N^(-s)/2
    }
    Integer npow(1);
    const Integer nz(n_base);
    for (int k = 1; k <= m; ++k) {
        npow *= nz * nz;  // N^(2k)
        Rational coeff = term_coeff(bern, k);
        Real t(prec);
        mpfr_mul_q(t.raw(), rn.raw(), coeff.get_mpq_t(), MPFR_RNDN);
        mpfr_div_z(t.raw(), t.raw(), npow.get_mpz_t(), MPFR_RNDN);
        Real e = t.ulp_bound();
        e = add_up(add_up(e, e), e);
        sum.add(BoundedReal(t, e));
    }

    // truncation radius: |T_{m+1}(N)|
    npow *= nz * nz;
    Rational coeff = abs(term_coeff(bern, m + 1));
    Real bound(prec);
    mpfr_mul_q(bound.raw(), rn.raw(), coeff.get_mpq_t(), MPFR_RNDU);
    mpfr_div_z(bound.raw(), bound.raw(), npow.get_mpz_t(), MPFR_RNDU);

    BoundedReal r = sum.result();
    return r.widened(bound);
}

}  // namespace fracsum

#endif
