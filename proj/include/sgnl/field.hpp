#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "sgnl/grid.hpp"

namespace sgnl {

/// Nodal scalar values over a grid, in node-id order.
struct ScalarField {
  std::shared_ptr<const Grid> grid;
  std::vector<double> values;

  double operator()(int k, std::int64_t s) const {
    return values[static_cast<std::size_t>(grid->node_id(k, s))];
  }
  double& at(int k, std::int64_t s) {
    return values[static_cast<std::size_t>(grid->node_id(k, s))];
  }
};

/// Nodal n-vector values over a grid; component-contiguous per node.
struct VectorField {
  std::shared_ptr<const Grid> grid;
  int components = 0;
  std::vector<double> values;

  double operator()(int k, std::int64_t s, int d) const {
    return values[static_cast<std::size_t>(grid->node_id(k, s)) * components + d];
  }
  double& at(int k, std::int64_t s, int d) {
    return values[static_cast<std::size_t>(grid->node_id(k, s)) * components + d];
  }
};

ScalarField make_field(std::shared_ptr<const Grid> g,
                       const std::function<double(const Vec&, double)>& f);
ScalarField zero_field(std::shared_ptr<const Grid> g);

/// Discrete spatial gradient: centered differences in the interior, one-sided
/// at the box boundary. On the thin layer the x_n-component is the average of
/// the two one-sided (second order) derivatives; the one-sided pair itself is
/// available from thin_normal_derivatives.
VectorField gradient(const ScalarField& f);

/// One-sided x_n-derivatives on the thin layer, from each half.
/// Indexed by [layer k][thin spatial node in ascending id order].
struct ThinDerivatives {
  std::vector<std::int64_t> thin_spatial;
  int layers = 0;
  std::vector<double> from_above;  // d/dx_n limit from x_n > 0
  std::vector<double> from_below;  // d/dx_n limit from x_n < 0
  double above(int k, std::size_t i) const {
    return from_above[static_cast<std::size_t>(k) * thin_spatial.size() + i];
  }
  double below(int k, std::size_t i) const {
    return from_below[static_cast<std::size_t>(k) * thin_spatial.size() + i];
  }
};

/// order = 1: (u(h)-u(0))/h style; order = 2: three-point one-sided.
ThinDerivatives thin_normal_derivatives(const ScalarField& f, int order = 1);

/// Backward time difference; the first layer copies the second.
ScalarField time_derivative(const ScalarField& f);

/// Non-owning view of a factorized node set (spatial list x layer range).
struct NodeSet {
  const std::vector<std::int64_t>* spatial = nullptr;
  int k_first = 0;
  int k_last = -1;
  std::int64_t count() const {
    return static_cast<std::int64_t>(spatial->size()) * (k_last - k_first + 1);
  }
};

inline NodeSet as_set(const CylinderNodes& c) {
  return NodeSet{&c.spatial(), c.k_first(), c.k_last()};
}

/// Riemann sum h^n * tau * sum of f over the set's nodes.
double cyl_integral(const ScalarField& f, const NodeSet& ns);
double cyl_integral(const ScalarField& f, const CylinderNodes& c);
double cyl_integral(const ScalarField& f, const Cylinder& c);
double cyl_mean(const ScalarField& f, const NodeSet& ns);
double cyl_mean(const ScalarField& f, const CylinderNodes& c);
double cyl_mean(const ScalarField& f, const Cylinder& c);

/// Integral of the squared euclidean norm of a vector field.
double cyl_integral_sq(const VectorField& f, const NodeSet& ns);

/// Double integral of |f(z)-f(w)|^2 over Q x Q, via
/// 2 [ |Q| * int f^2 - (int f)^2 ] (linear cost in node count).
double oscillation_double(const ScalarField& f, const NodeSet& ns);
double oscillation_double(const ScalarField& f, const CylinderNodes& c);
double oscillation_double(const ScalarField& f, const Cylinder& c);

/// max - min over the set's nodes.
double oscillation_range(const ScalarField& f, const NodeSet& ns);

}  // namespace sgnl
