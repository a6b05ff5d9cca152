#ifndef FRACSUM_RATIONAL_HPP
#define FRACSUM_RATIONAL_HPP

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fracsum {

using Integer = mpz_class;
using Rational = mpq_class;

struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline Integer floor_int(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r;
}

inline Integer ceil_int(const Rational& q) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r;
}

/// Fractional part t - floor(t), exact, in [0, 1).  Floor convention for
/// negative inputs: frac(-6/5) = 4/5.
inline Rational frac(const Rational& t) {
    return t - Rational(floor_int(t));
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline Rational make_rational(const Integer& num, const Integer& den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Integer isqrt(const Integer& n) {
    if (n < 0) throw DomainError("isqrt of negative integer");
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline Integer pow_int(const Integer& base, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline Rational pow_rat(const Rational& base, unsigned long e) {
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), e);
    return Rational(num, den);  // coprime stays coprime under powers
}

/// Largest integer k >= 0 with k*(k + shift) <= t.  Exact: an integer-sqrt
/// estimate is corrected by rational comparisons, no floating point anywhere.
/// Requires t >= 0 and shift >= 0.
inline Integer floor_sqrt_le(const Rational& t, const Integer& shift) {
    if (t < 0) throw DomainError("floor_sqrt_le: t < 0");
    if (shift < 0) throw DomainError("floor_sqrt_le: shift < 0");
    // k <= (sqrt(shift^2 + 4t) - shift) / 2
    Integer disc = floor_int(Rational(shift * shift) + 4 * t);
    Integer k = (isqrt(disc) - shift) / 2;
    if (k < 0) k = 0;
    auto fits = [&](const Integer& v) { return Rational(v * (v + shift)) <= t; };
    while (k > 0 && !fits(k)) --k;
    while (fits(k + 1)) ++k;
    return k;
}

/// Balanced reduction keeps intermediate denominators small when adding many
/// unrelated fractions.
inline Rational sum_exact(std::vector<Rational> terms) {
    if (terms.empty()) return Rational(0);
    std::size_t n = terms.size();
    while (n > 1) {
        std::size_t half = n / 2;
        for (std::size_t i = 0; i < half; ++i)
            terms[i] += terms[n - 1 - i];
        n -= half;
    }
    terms.resize(1);
    return terms[0];
}

namespace detail {

inline Integer parse_mpz(std::string_view s) {
    if (s.empty()) throw ParseError("empty integer");
    try {
        return Integer(std::string(s), 10);
    } catch (const std::invalid_argument&) {
        throw ParseError("invalid integer: '" + std::string(s) + "'");
    }
}

}  // namespace detail

/// Accepts "p/q", plain integers, and decimal strings with optional exponent
/// ("3.7", "-0.25", "1e12", "2.5e-3").  Decimal conversion is exact.
inline Rational parse_rational(std::string_view s) {
    if (s.empty()) throw ParseError("empty rational");
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        Integer num = detail::parse_mpz(s.substr(0, slash));
        Integer den = detail::parse_mpz(s.substr(slash + 1));
        if (den == 0) throw ParseError("zero denominator: '" + std::string(s) + "'");
        return make_rational(num, den);
    }
    std::string_view rest = s;
    bool neg = false;
    if (rest.front() == '+' || rest.front() == '-') {
        neg = rest.front() == '-';
        rest.remove_prefix(1);
    }
    long exp10 = 0;
    if (auto e = rest.find_first_of("eE"); e != std::string_view::npos) {
        auto es = rest.substr(e + 1);
        if (es.empty()) throw ParseError("empty exponent: '" + std::string(s) + "'");
        bool eneg = false;
        if (es.front() == '+' || es.front() == '-') {
            eneg = es.front() == '-';
            es.remove_prefix(1);
        }
        if (es.empty() || es.size() > 6) throw ParseError("bad exponent: '" + std::string(s) + "'");
        for (char ch : es) {
            if (ch < '0' || ch > '9') throw ParseError("bad exponent: '" + std::string(s) + "'");
            exp10 = exp10 * 10 + (ch - '0');
        }
        if (eneg) exp10 = -exp10;
        rest = rest.substr(0, e);
    }
    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false;
    for (char ch : rest) {
        if (ch == '.') {
            if (seen_dot) throw ParseError("invalid rational: '" + std::string(s) + "'");
            seen_dot = true;
        } else if (ch >= '0' && ch <= '9') {
            digits.push_back(ch);
            if (seen_dot) ++frac_digits;
        } else {
            throw ParseError("invalid rational: '" + std::string(s) + "'");
        }
    }
    if (digits.empty()) throw ParseError("invalid rational: '" + std::string(s) + "'");
    Integer num(digits, 10);
    if (neg) num = -num;
    long net = exp10 - frac_digits;
    Integer scale = pow_int(Integer(10), static_cast<unsigned long>(net < 0 ? -net : net));
    return net >= 0 ? Rational(num * scale) : make_rational(num, scale);
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace fracsum

#endif
