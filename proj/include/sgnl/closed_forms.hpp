#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "sgnl/grid.hpp"

namespace sgnl::forms {

/// Re((x1 + i|x2|)^{3/2}): harmonic on each half plane, zero obstacle
/// Signorini solution with contact set {x1 <= 0, x2 = 0} and free boundary
/// at the origin (n = 2 only; x2 plays the role of x_n).
inline double thin_obstacle_32(const Vec& x) {
  double rho = std::hypot(x[0], x[1]);
  if (rho == 0) return 0.0;
  double th = std::atan2(std::abs(x[1]), x[0]);  // in [0, pi]
  return std::pow(rho, 1.5) * std::cos(1.5 * th);
}

inline double eval(const std::string& name, const Vec& x, double t) {
  if (name == "zero") return 0.0;
  if (name == "one") return 1.0;
  if (name == "linear_x1") return x[0];
  if (name == "quadratic_caloric") return x[0] * x[0] + 2.0 * t;
  if (name == "saddle") return x[0] * x[0] - x[1] * x[1];
  if (name == "exp_caloric") return std::exp(x[0] + t);
  if (name == "thin_obstacle_32") return thin_obstacle_32(x);
  if (name == "abs_xn_sqrt") return std::sqrt(std::abs(x[x.dim() - 1]));
  throw std::invalid_argument("unknown closed form: " + name);
}

inline bool known(const std::string& name) {
  for (const char* s : {"zero", "one", "linear_x1", "quadratic_caloric", "saddle",
                        "exp_caloric", "thin_obstacle_32", "abs_xn_sqrt"})
    if (name == s) return true;
  return false;
}

}  // namespace sgnl::forms
