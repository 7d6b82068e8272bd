#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <string>
#include <string_view>

namespace erglab {

/// Exact rational number in canonical form (denominator > 0).
using Rat = boost::multiprecision::mpq_rational;

/// num/den as an exact rational; den must be non-zero.
Rat ratio(std::size_t num, std::size_t den);

/// "p/q", or "p" for integers. This is the JSON wire form.
std::string to_string(const Rat& r);

/// Accepts "p/q", integers and finite decimals ("0.25"). Throws ValidationError.
Rat parse_rational(std::string_view text);

double to_double(const Rat& r);

}  // namespace erglab
