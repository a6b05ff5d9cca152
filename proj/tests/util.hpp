#ifndef FRACSUM_TESTS_UTIL_HPP
#define FRACSUM_TESTS_UTIL_HPP

#include <random>

#include "fracsum/params.hpp"
#include "fracsum/rational.hpp"

namespace testutil {

using fracsum::Integer;
using fracsum::Params;
using fracsum::Rational;

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    long integer(long lo, long hi) {
        return std::uniform_int_distribution<long>(lo, hi)(gen_);
    }

    double real(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen_);
    }

    /// Rational in [lo, hi] with denominator <= max_den.
    Rational rational(double lo, double hi, long max_den = 6) {
        long den = integer(1, max_den);
        long numlo = static_cast<long>(std::ceil(lo * den));
        long numhi = static_cast<long>(std::floor(hi * den));
        if (numhi < numlo) numhi = numlo;
        return fracsum::make_rational(Integer(integer(numlo, numhi)), Integer(den));
    }

    /// 0 < a < b <= 5 with small denominators; a >= a_min keeps the vanishing
    /// threshold y manageable.
    Params params(double a_min = 0.25) {
        while (true) {
            Rational a = rational(a_min, 4.5);
            Rational b = rational(a_min, 5.0);
            if (a > 0 && a < b) return Params(a, b);
        }
    }

    /// Log-uniform rational x in [lo, hi] (integer part drawn on a log scale,
    /// small random denominator).
    Rational x_log(double lo, double hi, long max_den = 4) {
        double t = real(std::log(lo), std::log(hi));
        double v = std::exp(t);
        long den = integer(1, max_den);
        Integer num(static_cast<long>(v * den) + 1);
        return fracsum::make_rational(num, Integer(den));
    }

    std::mt19937_64& raw() { return gen_; }

  private:
    std::mt19937_64 gen_;
};

}  // namespace testutil

#endif
