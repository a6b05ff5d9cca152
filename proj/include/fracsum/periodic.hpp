#ifndef FRACSUM_PERIODIC_HPP
#define FRACSUM_PERIODIC_HPP

#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fracsum/direct.hpp"
#include "fracsum/params.hpp"
#include "fracsum/rational.hpp"
#include "fracsum/real.hpp"
#include "fracsum/series.hpp"

namespace fracsum {

/// Mean-zero arithmetic function of period q, with its summatory values
/// F(k) = f(1) + ... + f(k).  Mean zero makes F periodic with F(q) = 0.
class PeriodicFn {
  public:
    PeriodicFn(long q, std::vector<Rational> values)
        : q_(q), values_(std::move(values)) {
        if (q_ < 1) throw DomainError("period must be >= 1");
        if (values_.size() != static_cast<std::size_t>(q_))
            throw DomainError("need exactly q values");
        Rational run(0);
        summatory_.reserve(values_.size());
        for (const Rational& v : values_) {
            run += v;
            summatory_.push_back(run);
        }
        if (run != 0) throw DomainError("periodic function must have mean zero");
    }

    /// Text format: first line q, second line the q rational values.
    static PeriodicFn parse(std::istream& in) {
        long q = 0;
        if (!(in >> q)) throw ParseError("periodic file: missing period");
        std::vector<Rational> vals;
        std::string tok;
        for (long i = 0; i < q; ++i) {
            if (!(in >> tok)) throw ParseError("periodic file: missing value");
            vals.push_back(parse_rational(tok));
        }
        return PeriodicFn(q, std::move(vals));
    }

    long q() const { return q_; }
    const std::vector<Rational>& values() const { return values_; }

    /// f(n) for n >= 1.
    const Rational& at(const Integer& n) const {
        Integer idx = (n - 1) % q_;
        return values_[static_cast<std::size_t>(idx.get_ui())];
    }

    /// F(k) for 1 <= k <= q.
    const Rational& summatory(long k) const {
        return summatory_[static_cast<std::size_t>(k - 1)];
    }

    Rational abs_summatory_sum() const {
        Rational s(0);
        for (const Rational& v : summatory_) s += abs(v);
        return s;
    }

  private:
    long q_;
    std::vector<Rational> values_;
    std::vector<Rational> summatory_;
};

/// C = sum_{n>=1} f(n)/n, regrouped through the summatory function:
/// C = sum_{k=1}^{q-1} F(k) sum_{j>=0} 1/((jq+k)(jq+k+1)), and each inner
/// series is (1/q^2) times a reciprocal-pair tail with a = k/q, b = (k+1)/q.
inline BoundedReal dirichlet_constant(const PeriodicFn& f, double eps, Prec prec = 0) {
    if (!(eps > 0)) throw DomainError("dirichlet_constant: eps must be > 0");
    if (prec <= 0) prec = prec_for(eps, 8);
    const long q = f.q();
    BoundedSum acc(prec);
    if (q == 1) return acc.result();
    const Rational q2(Integer(q) * Integer(q));
    for (long k = 1; k < q; ++k) {
        const Rational& fk = f.summatory(k);
        if (fk == 0) continue;
        double scale = std::max(1.0, std::fabs(fk.get_d())) * static_cast<double>(q);
        TailSeries tail(make_rational(Integer(k), Integer(q)),
                        make_rational(Integer(k + 1), Integer(q)));
        BoundedReal inner = tail.from_index(Integer(-1), eps / scale, prec);
        acc.add(inner.mul_exact(fk / q2));
    }
    return acc.result();
}

/// G(x) = sum_{n <= x} (f * 1)(n) = sum_{n >= 1} f(n) floor(x/n), exact.
inline Rational g_sum(const PeriodicFn& f, const Rational& x) {
    if (!(x > 0)) throw DomainError("g_sum: x > 0 required");
    Integer top = floor_int(x);
    std::vector<Rational> parts;
    const long q = f.q();
    for (long k = 1; k <= q; ++k) {
        const Rational& fk = f.values()[static_cast<std::size_t>(k - 1)];
        if (fk == 0) continue;
        Integer weight(0);
        for (Integer n(k); n <= top; n += q) weight += floor_int(x / Rational(n));
        parts.push_back(fk * Rational(weight));
    }
    return sum_exact(std::move(parts));
}

/// Delta(x) = C x - G(x); direct route, O(x), desk scale only.
inline BoundedReal delta_from_g(const PeriodicFn& f, const Rational& x, double eps,
                                Prec prec = 0) {
    if (!(eps > 0)) throw DomainError("delta_from_g: eps must be > 0");
    if (x > 10000000) throw DomainError("delta_from_g is O(x); use delta_via_v beyond 1e7");
    if (prec <= 0) prec = prec_for(eps, 40);
    double x_up = mpfr_get_d(Real::of(x, 64, MPFR_RNDU).raw(), MPFR_RNDU);
    BoundedReal c = dirichlet_constant(f, eps / (2.0 * std::max(1.0, x_up)), prec);
    BoundedReal cx = c.mul_exact(x);
    return cx - BoundedReal::exact(g_sum(f, x), prec);
}

/// Delta(x) = sum_{k=1}^{q} F(k) V(x/q; k/q, (k+1)/q); scales with the V
/// evaluator, eps split across the q calls.
inline BoundedReal delta_via_v(const PeriodicFn& f, const Rational& x, double eps,
                               Prec prec = 0) {
    if (!(eps > 0)) throw DomainError("delta_via_v: eps must be > 0");
    if (!(x > 0)) throw DomainError("delta_via_v: x > 0 required");
    if (prec <= 0) prec = prec_for(eps, 40);
    const long q = f.q();
    BoundedSum acc(prec);
    for (long k = 1; k < q; ++k) {  // F(q) = 0 drops the last term
        const Rational& fk = f.summatory(k);
        if (fk == 0) continue;
        double scale = std::max(1.0, std::fabs(fk.get_d())) * static_cast<double>(q);
        EvalContext ctx(Params(make_rational(Integer(k), Integer(q)),
                               make_rational(Integer(k + 1), Integer(q))),
                        x / q);
        acc.add(v_direct(ctx, eps / scale, prec).mul_exact(fk));
    }
    return acc.result();
}

struct DeltaReport {
    Rational x;
    BoundedReal C;
    Rational G;
    BoundedReal delta_direct;
    BoundedReal delta_via_V;
    bool overlap = false;
};

inline DeltaReport delta_report(const PeriodicFn& f, const Rational& x, double eps) {
    DeltaReport r;
    r.x = x;
    r.C = dirichlet_constant(f, eps);
    r.G = g_sum(f, x);
    r.delta_direct = delta_from_g(f, x, eps);
    r.delta_via_V = delta_via_v(f, x, eps);
    r.overlap = r.delta_direct.overlaps(r.delta_via_V);
    return r;
}

struct DeltaBoundRow {
    Rational x;
    double ratio = 0;
    bool hypothesis_ok = false;
};

struct DeltaBoundReport {
    std::vector<DeltaBoundRow> rows;
    double max_ratio = 0;        // over every computed point
    double max_ratio_ok = 0;     // over points satisfying q <= x^(1/6)/22
};

/// ratio |Delta(x)| q / (sum|F(k)| sqrt(x)) per grid point; the hypothesis
/// flag marks q <= x^(1/6)/22, checked exactly as (22 q)^6 <= x.
inline DeltaBoundReport delta_bound_check(const PeriodicFn& f,
                                          const std::vector<Rational>& grid, double eps) {
    DeltaBoundReport report;
    Rational fa = f.abs_summatory_sum();
    if (fa == 0) {
        for (const Rational& x : grid)
            report.rows.push_back({x, 0.0, pow_rat(Rational(22 * f.q()), 6) <= x});
        return report;
    }
    for (const Rational& x : grid) {
        DeltaBoundRow row;
        row.x = x;
        row.hypothesis_ok = pow_rat(Rational(22 * f.q()), 6) <= x;
        BoundedReal d = delta_via_v(f, x, eps);
        double dv = mpfr_get_d(d.abs_upper().raw(), MPFR_RNDU);
        row.ratio = dv * static_cast<double>(f.q()) /
                    (fa.get_d() * std::sqrt(x.get_d()));
        report.max_ratio = std::max(report.max_ratio, row.ratio);
        if (row.hypothesis_ok) report.max_ratio_ok = std::max(report.max_ratio_ok, row.ratio);
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace fracsum

#endif
