#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace mgs {

using Rational = mpq_class;

/// Parses "p/q" or "p" into a canonical rational. Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Always "p/q", including integers ("1/1", "0/1"); round-trips bit-exactly.
std::string format_rational(const Rational& q);

/// Best rational approximation with denominator <= max_denominator
/// (continued fractions, semiconvergents included).
Rational rationalize(double value, std::int64_t max_denominator);

/// Nearest multiple of 1/denominator.
Rational round_to_grid(double value, std::int64_t denominator);

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace mgs
