#pragma once

// Exact rational arithmetic. Everything in this library is computed over
// arbitrary-precision rationals; there is no floating point anywhere.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "tcs/error.hpp"

namespace tcs {

using BigInt = boost::multiprecision::cpp_int;

// Always held in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline int rat_sign(const Rational& r) { return r < 0 ? -1 : (r > 0 ? 1 : 0); }

/// Canonical textual form: "p" when the denominator is 1, else "p/q".
inline std::string to_string(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) {
        s += "/";
        s += denominator(r).str();
    }
    return s;
}

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

} // namespace detail

/// Parses "p", "p/q" or a plain decimal like "2.75" into an exact Rational.
/// Decimal input is exact: "0.5" becomes 1/2. No exponents, no whitespace.
/// Throws TcsError{ErrorCode::SyntaxError} on malformed input or q = 0.
inline Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    auto fail = [&]() -> Rational {
        throw TcsError(ErrorCode::SyntaxError,
                       "malformed rational: '" + std::string(text) + "'");
    };
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) return fail();

    Rational value;
    auto slash = s.find('/');
    auto dot = s.find('.');
    if (slash != std::string_view::npos) {
        std::string_view num = s.substr(0, slash);
        std::string_view den = s.substr(slash + 1);
        if (!detail::all_digits(num) || !detail::all_digits(den)) return fail();
        BigInt p{std::string(num)};
        BigInt q{std::string(den)};
        if (q == 0) return fail();
        value = Rational(p, q);
    } else if (dot != std::string_view::npos) {
        std::string_view whole = s.substr(0, dot);
        std::string_view frac = s.substr(dot + 1);
        if (!detail::all_digits(whole) || !detail::all_digits(frac)) return fail();
        BigInt scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        BigInt num = BigInt{std::string(whole)} * scale + BigInt{std::string(frac)};
        value = Rational(num, scale);
    } else {
        if (!detail::all_digits(s)) return fail();
        value = Rational(BigInt{std::string(s)});
    }
    return negative ? Rational(-value) : value;
}

} // namespace tcs
