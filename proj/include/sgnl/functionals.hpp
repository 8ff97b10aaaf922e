#pragma once

#include <cstdint>
#include <vector>

#include "sgnl/field.hpp"
#include "sgnl/grid.hpp"
#include "sgnl/solve.hpp"

namespace sgnl {

/// phi_{z0}(r, u) = r^{n+4} int_{Q_r} |grad u|^2
///                + int_{Q_r x Q_r} |u(z) - u(w)|^2 dz dw.
struct PhiValue {
  Cylinder cylinder;
  double grad_term = 0.0;
  double osc_term = 0.0;
  double total = 0.0;
};

PhiValue phi(const ScalarField& u, const Cylinder& c);
PhiValue phi(const ScalarField& u, const VectorField& grad, const Grid& g,
             const CylinderNodes& cn);

/// int over the set of |G - <G>|^2 (componentwise mean).
double campanato_deviation(const VectorField& G, const NodeSet& ns);

/// int_{Q_rho} |G - <G>|^2 with G = grad u, or the even extension of grad u
/// taken from the upper half when use_even_extension is set.
double campanato_gradient(const ScalarField& u, const Cylinder& c,
                          bool use_even_extension);

/// Even extension of grad u from Q+ across the thin space: values at
/// (x', -x_n, t) copy those at (x', x_n, t); on the thin layer itself the
/// x_n-derivative is one-sided from above.
VectorField even_extension(const ScalarField& u);

/// Selector a_{v,z0,r}: 0 when the contact set {v <= contact_tol} meets the
/// thin cylinder Q'_r, otherwise the mean of v over Q_r.
double a_selector(const ScalarField& v, const Cylinder& c, double contact_tol);
double a_selector(const ScalarField& v, const Grid& g, const CylinderNodes& cn,
                  double contact_tol);

/// Dirichlet energy int <A grad u, grad u> (identity coefficients when null).
double dirichlet_energy(const VectorField& grad, const Grid& g, const NodeSet& ns,
                        const CoefficientField* coeffs);
double dirichlet_energy(const ScalarField& u, const Cylinder& c,
                        const CoefficientField* coeffs = nullptr);

/// Discrete parabolic Holder data measured on a cylinder region.
///
/// exponent_space / exponent_time come from difference-scaling fits: the
/// largest |u(z)-u(w)| per dyadic separation bin against the separation, for
/// same-time and same-point pairs. seminorm is the sup ratio at the given
/// sigma. campanato_exponent maps the decay of int |u - <u>|^2 through the
/// dictionary slope = n + 2 + 2 sigma. Exponents are clamped to [0, 1];
/// constant fields report exponent 1 by convention.
struct HolderEstimate {
  double exponent_space = 1.0;
  double exponent_time = 0.5;
  double seminorm = 0.0;
  std::int64_t pairs_sampled = 0;
  double campanato_exponent = 1.0;
};

HolderEstimate holder_seminorm(const ScalarField& u, const Cylinder& region,
                               double sigma);

}  // namespace sgnl
