#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>

namespace anisowave {

/// Exact rational arithmetic for anisotropy vectors and exponent bookkeeping.
using Rational = boost::rational<std::int64_t>;

/// Parses "p/q" or a plain integer "p".
Rational parse_rational(const std::string& text);

/// Renders as "p/q", or "p" when the denominator is 1.
std::string rational_str(const Rational& r);

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline bool is_integer(const Rational& r) { return r.denominator() == 1; }

}  // namespace anisowave
