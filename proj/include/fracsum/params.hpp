#ifndef FRACSUM_PARAMS_HPP
#define FRACSUM_PARAMS_HPP

#include <utility>

#include "fracsum/rational.hpp"

namespace fracsum {

/// Validated pair 0 < a < b with the derived gap c = b - a.
struct Params {
    Rational a, b, c;

    Params(Rational a_in, Rational b_in)
        : a(std::move(a_in)), b(std::move(b_in)), c(b - a) {
        if (!(a > 0)) throw DomainError("requires a > 0");
        if (!(a < b)) throw DomainError("requires a < b");
    }
};

/// A problem instance: parameters plus the evaluation point x > 0 and the
/// derived threshold y = c*x/(a*b) beyond which the width-j sums vanish.
struct EvalContext {
    Params params;
    Rational x, y;

    EvalContext(Params p, Rational x_in)
        : params(std::move(p)), x(std::move(x_in)), y(params.c * x / (params.a * params.b)) {
        if (!(x > 0)) throw DomainError("requires x > 0");
    }

    const Rational& a() const { return params.a; }
    const Rational& b() const { return params.b; }
    const Rational& c() const { return params.c; }
};

/// floor(x / (n + u)) computed in integer arithmetic; u > 0 rational,
/// n >= 0.  Precomputes the cross products for one (x, u) pair.
class FloorShift {
  public:
    FloorShift(const Rational& x, const Rational& u)
        : xn_ud(x.get_num() * u.get_den()),
          xd(x.get_den()),
          un(u.get_num()),
          ud(u.get_den()) {}

    Integer floor_at(const Integer& n) const {
        Integer den = xd * (n * ud + un);
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), xn_ud.get_mpz_t(), den.get_mpz_t());
        return q;
    }

    /// floor(x/k - u) for integer k >= 1.
    Integer floor_shift_div(const Integer& k) const {
        Integer num = xn_ud - k * un * xd;
        Integer den = k * xd * ud;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        return q;
    }

  private:
    Integer xn_ud;  // x_num * u_den
    Integer xd, un, ud;
};

}  // namespace fracsum

#endif
