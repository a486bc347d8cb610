#pragma once

#include <cstdint>
#include <random>

#include "plcert/rational.hpp"

namespace plcert::detail {

/// Seeded generator with platform-independent integer draws. mt19937_64
/// output is pinned by the standard; std::uniform_int_distribution is not,
/// so ranges are produced here by rejection instead.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, bound). bound > 0.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
        std::uint64_t v;
        do {
            v = gen_();
        } while (v >= limit);
        return v % bound;
    }

    /// Uniform in [lo, hi], inclusive.
    long long uniform_int(long long lo, long long hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long long>(span == 0 ? gen_() : below(span));
    }

    /// Uniform in [0, bound], inclusive, for arbitrary-precision bounds.
    Integer uniform_integer_upto(const Integer& bound) {
        if (bound <= 0) return Integer(0);
        const unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(bound)) + 1;
        const unsigned words = (bits + 63) / 64;
        while (true) {
            Integer v = 0;
            for (unsigned w = 0; w < words; ++w) v = (v << 64) | Integer(gen_());
            v >>= (words * 64 - bits);
            if (v <= bound) return v;
        }
    }

    /// Uniform over { k/denom : |k/denom| <= radius }.
    Rational uniform_rational_ball(const Rational& radius, const Integer& denom) {
        const Integer bound = floor_rational(radius * Rational(denom));
        Integer k = uniform_integer_upto(2 * bound) - bound;
        return make_rational(std::move(k), denom);
    }

  private:
    std::mt19937_64 gen_;
};

}  // namespace plcert::detail
