#pragma once

#include <string>

namespace modulecad {

/// Shortest decimal that parses back to the same double. Negative zero is
/// written as "0".
std::string format_shortest(double value);

/// Drawing-text form: fixed notation, at most `max_decimals` fraction
/// digits, trailing zeros and a bare trailing "." removed, "." separator.
std::string format_decimal(double value, int max_decimals = 6);

/// Rounds half away from zero to `decimals` fraction digits.
double round_half_away(double value, int decimals);

}  // namespace modulecad
