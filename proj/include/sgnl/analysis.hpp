#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgnl/functionals.hpp"

namespace sgnl {

enum class FunctionalKind { phi, dirichlet, campanato_grad, mean_osc };

std::string to_string(FunctionalKind k);

/// Power-law fit of functional values over a radius ladder at one center.
struct GrowthReport {
  PPoint center;
  std::vector<double> radii;   // strictly increasing
  std::vector<double> values;  // >= 0
  double fitted_exponent = 0.0;
  double fit_residual = 0.0;  // max |log v - fit| over points
  FunctionalKind functional_kind = FunctionalKind::phi;
  bool degenerate = false;  // some value vanished; exponent is the +inf sentinel
};

/// Least-squares slope of log value against log radius.
/// Zero (or negative) values report the +infinity sentinel with
/// degenerate = true. Requires at least 4 usable points.
struct ExponentFit {
  double exponent = 0.0;
  double residual = 0.0;
  bool degenerate = false;
};
ExponentFit fit_exponent(const std::vector<double>& radii,
                         const std::vector<double>& values);

/// Geometric radius ladder from r_min to r_max inclusive (count >= 4 points).
std::vector<double> radius_ladder(double r_min, double r_max, int count);

/// Radii of the form sqrt(m tau) for m in {2, 4, 8, ...}: each step doubles
/// the cylinder's interior layer count, which keeps time quadrature clean.
std::vector<double> dyadic_time_radii(const Grid& g, double r_max, int count);

/// Checks the growth-iteration lemma numerically on sampled (rho, phi) pairs:
/// hypothesis phi(rho) <= a [ (rho/r)^gamma + eps ] phi(r) + b r^beta for all
/// rho < r, and conclusion phi(rho) <= c [ (rho/r)^beta phi(r) + b rho^beta ],
/// reporting the smallest working c.
struct IterationCheck {
  bool hypothesis_ok = false;
  double hypothesis_worst = 0.0;  // max ratio lhs / rhs over pairs
  bool conclusion_ok = false;
  double conclusion_c = 0.0;  // smallest c validating the conclusion
};
IterationCheck hl_iteration_check(const std::vector<std::pair<double, double>>& samples,
                                  double a, double gamma, double beta, double b,
                                  double eps);

/// beta = alpha / (4 (2n + 4 + alpha)).
double beta_exponent(int n, double alpha);

/// Implied Holder exponent from a fitted slope through the Campanato
/// dictionary of the given functional kind (clamped to [0, 1]).
double implied_sigma(FunctionalKind kind, int n, double slope);

struct ReportOptions {
  bool even_extension = false;   // campanato_grad only
  double contact_tol = 1e-9;     // a_selector in thin-centered sweeps
};

struct ReportSet {
  std::vector<GrowthReport> reports;
  double min_exponent = 0.0;
  double median_exponent = 0.0;
  double implied_holder = 0.0;  // from the median slope
  bool any_degenerate = false;
};

/// One GrowthReport per center over the given radii. Cylinders must fit in
/// the grid; thin-space centers use full cylinders centered on Q'.
ReportSet regularity_report(const ScalarField& u, const std::vector<PPoint>& centers,
                            FunctionalKind kind, const std::vector<double>& radii,
                            const ReportOptions& opts = {});

}  // namespace sgnl
