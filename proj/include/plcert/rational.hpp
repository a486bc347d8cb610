#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <sstream>
#include <string>
#include <string_view>

#include "plcert/errors.hpp"

namespace plcert {

// Exact arithmetic substrate. Every coefficient in the library is a Rational;
// there is no floating point anywhere on a decision path.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Builds num/den in canonical form (reduced, positive denominator).
inline Rational make_rational(Integer num, Integer den) {
    if (den == 0) throw ParseError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rational(num, den);
}

inline int sign(const Rational& q) {
    if (q > 0) return 1;
    if (q < 0) return -1;
    return 0;
}

inline Rational abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

/// Largest integer <= q. cpp_int division truncates toward zero, so adjust.
inline Integer floor_rational(const Rational& q) {
    Integer t = numerator(q) / denominator(q);
    if (q < 0 && t * denominator(q) != numerator(q)) --t;
    return t;
}

inline Integer ceil_rational(const Rational& q) { return -floor_rational(-q); }

/// Serializes as "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

namespace detail {

inline bool parse_integer(std::string_view s, Integer& out) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (s[0] == '+' || s[0] == '-') i = 1;
    if (i == s.size()) return false;
    for (std::size_t k = i; k < s.size(); ++k)
        if (s[k] < '0' || s[k] > '9') return false;
    out = Integer(std::string(s));
    return true;
}

}  // namespace detail

/// Parses "p" or "p/q" (arbitrary precision). Rejects zero denominators,
/// decimals, and anything else.
inline Rational parse_rational(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    const auto bad = [&] { return ParseError("malformed rational \"" + std::string(s) + "\""); };
    if (s.empty()) throw bad();
    const std::size_t slash = s.find('/');
    Integer num, den = 1;
    if (slash == std::string_view::npos) {
        if (!detail::parse_integer(s, num)) throw bad();
    } else {
        if (!detail::parse_integer(s.substr(0, slash), num) ||
            !detail::parse_integer(s.substr(slash + 1), den))
            throw bad();
        if (den == 0) throw ParseError("malformed rational \"" + std::string(s) +
                                       "\": zero denominator");
    }
    return make_rational(std::move(num), std::move(den));
}

}  // namespace plcert
