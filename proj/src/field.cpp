#include "sgnl/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sgnl {

ScalarField make_field(std::shared_ptr<const Grid> g,
                       const std::function<double(const Vec&, double)>& f) {
  ScalarField out{g, std::vector<double>(static_cast<std::size_t>(g->node_count()))};
  for (int k = 0; k < g->time_layers(); ++k) {
    double t = g->time_coord(k);
    for (std::int64_t s = 0; s < g->spatial_count(); ++s)
      out.at(k, s) = f(g->spatial_coords(s), t);
  }
  return out;
}

ScalarField zero_field(std::shared_ptr<const Grid> g) {
  return ScalarField{g, std::vector<double>(static_cast<std::size_t>(g->node_count()), 0.0)};
}

VectorField gradient(const ScalarField& f) {
  const Grid& g = *f.grid;
  if (g.nodes_per_axis() < 3) throw std::invalid_argument("gradient: grid too small");
  const int n = g.dim();
  const int N = g.nodes_per_axis();
  const double h = g.spacing();
  const int mid = g.thin_layer();

  VectorField out{f.grid, n,
                  std::vector<double>(static_cast<std::size_t>(g.node_count()) * n)};

  // Strides along each spatial axis in spatial-id space (x_n fastest).
  std::array<std::int64_t, kMaxDim> stride{};
  stride[n - 1] = 1;
  for (int d = n - 2; d >= 0; --d) stride[d] = stride[d + 1] * N;

  for (int k = 0; k < g.time_layers(); ++k) {
    const std::int64_t base = g.node_id(k, 0);
    const double* u = f.values.data() + base;
    for (std::int64_t s = 0; s < g.spatial_count(); ++s) {
      MultiIndex idx = g.spatial_multi(s);
      for (int d = 0; d < n; ++d) {
        const std::int64_t st = stride[d];
        double deriv;
        if (d == n - 1 && idx[d] == mid) {
          // Average of the two second-order one-sided derivatives across Q'.
          double up = (-3.0 * u[s] + 4.0 * u[s + st] - u[s + 2 * st]) / (2 * h);
          double dn = (3.0 * u[s] - 4.0 * u[s - st] + u[s - 2 * st]) / (2 * h);
          deriv = 0.5 * (up + dn);
        } else if (idx[d] == 0) {
          deriv = (u[s + st] - u[s]) / h;
        } else if (idx[d] == N - 1) {
          deriv = (u[s] - u[s - st]) / h;
        } else {
          deriv = (u[s + st] - u[s - st]) / (2 * h);
        }
        out.values[(static_cast<std::size_t>(base + s)) * n + d] = deriv;
      }
    }
  }
  return out;
}

ThinDerivatives thin_normal_derivatives(const ScalarField& f, int order) {
  const Grid& g = *f.grid;
  if (order != 1 && order != 2)
    throw std::invalid_argument("thin_normal_derivatives: order must be 1 or 2");
  const double h = g.spacing();
  ThinDerivatives td;
  td.layers = g.time_layers();
  for (std::int64_t s = 0; s < g.spatial_count(); ++s)
    if (g.is_thin(s)) td.thin_spatial.push_back(s);
  const std::size_t m = td.thin_spatial.size();
  td.from_above.resize(m * td.layers);
  td.from_below.resize(m * td.layers);
  for (int k = 0; k < td.layers; ++k) {
    const std::int64_t base = g.node_id(k, 0);
    const double* u = f.values.data() + base;
    for (std::size_t i = 0; i < m; ++i) {
      std::int64_t s = td.thin_spatial[i];
      double up, dn;
      if (order == 1) {
        up = (u[s + 1] - u[s]) / h;
        dn = (u[s] - u[s - 1]) / h;
      } else {
        up = (-3.0 * u[s] + 4.0 * u[s + 1] - u[s + 2]) / (2 * h);
        dn = (3.0 * u[s] - 4.0 * u[s - 1] + u[s - 2]) / (2 * h);
      }
      td.from_above[static_cast<std::size_t>(k) * m + i] = up;
      td.from_below[static_cast<std::size_t>(k) * m + i] = dn;
    }
  }
  return td;
}

ScalarField time_derivative(const ScalarField& f) {
  const Grid& g = *f.grid;
  const double tau = g.time_step();
  ScalarField out = zero_field(f.grid);
  const std::int64_t Ns = g.spatial_count();
  for (int k = 1; k < g.time_layers(); ++k)
    for (std::int64_t s = 0; s < Ns; ++s)
      out.at(k, s) = (f(k, s) - f(k - 1, s)) / tau;
  for (std::int64_t s = 0; s < Ns; ++s) out.at(0, s) = out(1, s);
  return out;
}

namespace {
double node_measure(const Grid& g) {
  double m = g.time_step();
  for (int d = 0; d < g.dim(); ++d) m *= g.spacing();
  return m;
}
}  // namespace

double cyl_integral(const ScalarField& f, const NodeSet& ns) {
  const Grid& g = *f.grid;
  double sum = 0;
  for (int k = ns.k_first; k <= ns.k_last; ++k) {
    const double* u = f.values.data() + g.node_id(k, 0);
    for (std::int64_t s : *ns.spatial) sum += u[s];
  }
  return sum * node_measure(g);
}

double cyl_integral(const ScalarField& f, const CylinderNodes& c) {
  return cyl_integral(f, as_set(c));
}

double cyl_integral(const ScalarField& f, const Cylinder& c) {
  return cyl_integral(f, CylinderNodes(*f.grid, c));
}

double cyl_mean(const ScalarField& f, const NodeSet& ns) {
  const Grid& g = *f.grid;
  double sum = 0;
  for (int k = ns.k_first; k <= ns.k_last; ++k) {
    const double* u = f.values.data() + g.node_id(k, 0);
    for (std::int64_t s : *ns.spatial) sum += u[s];
  }
  return sum / static_cast<double>(ns.count());
}

double cyl_mean(const ScalarField& f, const CylinderNodes& c) {
  return cyl_mean(f, as_set(c));
}

double cyl_mean(const ScalarField& f, const Cylinder& c) {
  return cyl_mean(f, CylinderNodes(*f.grid, c));
}

double cyl_integral_sq(const VectorField& f, const NodeSet& ns) {
  const Grid& g = *f.grid;
  const int n = f.components;
  double sum = 0;
  for (int k = ns.k_first; k <= ns.k_last; ++k) {
    const double* v = f.values.data() + g.node_id(k, 0) * n;
    for (std::int64_t s : *ns.spatial) {
      const double* p = v + s * n;
      for (int d = 0; d < n; ++d) sum += p[d] * p[d];
    }
  }
  return sum * node_measure(g);
}

double oscillation_double(const ScalarField& f, const NodeSet& ns) {
  const Grid& g = *f.grid;
  double s1 = 0, s2 = 0;
  for (int k = ns.k_first; k <= ns.k_last; ++k) {
    const double* u = f.values.data() + g.node_id(k, 0);
    for (std::int64_t s : *ns.spatial) {
      s1 += u[s];
      s2 += u[s] * u[s];
    }
  }
  const double w = node_measure(g);
  const double cnt = static_cast<double>(ns.count());
  // int int |f(z)-f(w)|^2 = 2 [ |Q| int f^2 - (int f)^2 ]
  double val = 2.0 * w * w * (cnt * s2 - s1 * s1);
  return std::max(val, 0.0);
}

double oscillation_double(const ScalarField& f, const CylinderNodes& c) {
  return oscillation_double(f, as_set(c));
}

double oscillation_double(const ScalarField& f, const Cylinder& c) {
  return oscillation_double(f, CylinderNodes(*f.grid, c));
}

double oscillation_range(const ScalarField& f, const NodeSet& ns) {
  const Grid& g = *f.grid;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int k = ns.k_first; k <= ns.k_last; ++k) {
    const double* u = f.values.data() + g.node_id(k, 0);
    for (std::int64_t s : *ns.spatial) {
      lo = std::min(lo, u[s]);
      hi = std::max(hi, u[s]);
    }
  }
  return hi - lo;
}

}  // namespace sgnl
