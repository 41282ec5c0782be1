#pragma once

#include <string>

namespace wmwpower {

// Whole-percent display, rounded half-up from the full-precision value.
int percent_round_half_up(double proportion);

// Table display convention: estimates in (0.995, 1.0) print as ">99".
std::string percent_display(double proportion);

// Shortest decimal form that round-trips through a double.
std::string format_double(double v);

}  // namespace wmwpower
