#include "wmwpower/report.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace wmwpower {

int percent_round_half_up(double proportion) {
  return int(std::floor(100.0 * proportion + 0.5));
}

std::string percent_display(double proportion) {
  if (proportion > 0.995 && proportion < 1.0) return ">99";
  return std::to_string(percent_round_half_up(proportion));
}

std::string format_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) return buf;
  }
  return buf;
}

}  // namespace wmwpower
