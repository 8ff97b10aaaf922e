#include "sgnl/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sgnl {

namespace {

double node_measure(const Grid& g) {
  double m = g.time_step();
  for (int d = 0; d < g.dim(); ++d) m *= g.spacing();
  return m;
}

double pow_int(double x, int p) {
  double r = 1;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

// Least-squares slope of log v against log r; both positive.
bool log_fit(const std::vector<double>& r, const std::vector<double>& v,
             double& slope) {
  std::size_t m = r.size();
  if (m < 2) return false;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double x = std::log(r[i]), y = std::log(v[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = m * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) return false;
  slope = (m * sxy - sx * sy) / denom;
  return true;
}

}  // namespace

PhiValue phi(const ScalarField& u, const VectorField& grad, const Grid& g,
             const CylinderNodes& cn) {
  PhiValue out;
  out.cylinder = cn.cylinder();
  const double r = cn.cylinder().radius;
  out.grad_term = pow_int(r, g.dim() + 4) * cyl_integral_sq(grad, as_set(cn));
  out.osc_term = oscillation_double(u, as_set(cn));
  out.total = out.grad_term + out.osc_term;
  return out;
}

PhiValue phi(const ScalarField& u, const Cylinder& c) {
  CylinderNodes cn(*u.grid, c);
  return phi(u, gradient(u), *u.grid, cn);
}

double campanato_deviation(const VectorField& G, const NodeSet& ns) {
  const Grid& g = *G.grid;
  const int n = G.components;
  double mean[kMaxDim] = {0, 0, 0, 0};
  for (int k = ns.k_first; k <= ns.k_last; ++k) {
    const double* v = G.values.data() + g.node_id(k, 0) * n;
    for (std::int64_t s : *ns.spatial)
      for (int d = 0; d < n; ++d) mean[d] += v[s * n + d];
  }
  const double cnt = static_cast<double>(ns.count());
  for (int d = 0; d < n; ++d) mean[d] /= cnt;
  double sum = 0;
  for (int k = ns.k_first; k <= ns.k_last; ++k) {
    const double* v = G.values.data() + g.node_id(k, 0) * n;
    for (std::int64_t s : *ns.spatial)
      for (int d = 0; d < n; ++d) {
        double dv = v[s * n + d] - mean[d];
        sum += dv * dv;
      }
  }
  return sum * node_measure(g);
}

double campanato_gradient(const ScalarField& u, const Cylinder& c,
                          bool use_even_extension) {
  CylinderNodes cn(*u.grid, c);
  VectorField G = use_even_extension ? even_extension(u) : gradient(u);
  return campanato_deviation(G, as_set(cn));
}

VectorField even_extension(const ScalarField& u) {
  const Grid& g = *u.grid;
  const int n = g.dim();
  const int N = g.nodes_per_axis();
  const double h = g.spacing();
  const int mid = g.thin_layer();

  VectorField out{u.grid, n,
                  std::vector<double>(static_cast<std::size_t>(g.node_count()) * n)};

  std::array<std::int64_t, kMaxDim> st{};
  st[n - 1] = 1;
  for (int d = n - 2; d >= 0; --d) st[d] = st[d + 1] * N;

  for (int k = 0; k < g.time_layers(); ++k) {
    const std::int64_t base = g.node_id(k, 0);
    const double* v = u.values.data() + base;
    for (std::int64_t s = 0; s < g.spatial_count(); ++s) {
      MultiIndex idx = g.spatial_multi(s);
      const int in = idx[n - 1];
      double* o = out.values.data() + static_cast<std::size_t>(base + s) * n;
      if (in < mid) {
        // Mirror of the upper-half node (filled below once the mirror's
        // values exist; ids with larger x_n come later, so do a second pass).
        continue;
      }
      for (int d = 0; d < n; ++d) {
        double deriv;
        if (d == n - 1 && in == mid) {
          deriv = (-3.0 * v[s] + 4.0 * v[s + st[d]] - v[s + 2 * st[d]]) / (2 * h);
        } else if (idx[d] == 0) {
          deriv = (v[s + st[d]] - v[s]) / h;
        } else if (idx[d] == N - 1) {
          deriv = (v[s] - v[s - st[d]]) / h;
        } else {
          deriv = (v[s + st[d]] - v[s - st[d]]) / (2 * h);
        }
        o[d] = deriv;
      }
    }
    // Reflect into the lower half.
    for (std::int64_t s = 0; s < g.spatial_count(); ++s) {
      MultiIndex idx = g.spatial_multi(s);
      if (idx[n - 1] >= mid) continue;
      MultiIndex midx = idx;
      midx[n - 1] = 2 * mid - idx[n - 1];
      std::int64_t ms = g.spatial_id(midx);
      const double* src = out.values.data() + static_cast<std::size_t>(base + ms) * n;
      double* dst = out.values.data() + static_cast<std::size_t>(base + s) * n;
      for (int d = 0; d < n; ++d) dst[d] = src[d];
    }
  }
  return out;
}

double a_selector(const ScalarField& v, const Grid& g, const CylinderNodes& cn,
                  double contact_tol) {
  if (cn.thin().empty())
    throw std::invalid_argument("a_selector: cylinder contains no thin nodes");
  for (int k = cn.k_first(); k <= cn.k_last(); ++k) {
    const double* u = v.values.data() + g.node_id(k, 0);
    for (std::int64_t s : cn.thin())
      if (u[s] <= contact_tol) return 0.0;
  }
  return cyl_mean(v, cn);
}

double a_selector(const ScalarField& v, const Cylinder& c, double contact_tol) {
  CylinderNodes cn(*v.grid, c);
  return a_selector(v, *v.grid, cn, contact_tol);
}

double dirichlet_energy(const VectorField& grad, const Grid& g, const NodeSet& ns,
                        const CoefficientField* coeffs) {
  if (!coeffs || coeffs->kind() == CoefficientField::Kind::identity)
    return cyl_integral_sq(grad, ns);
  const int n = grad.components;
  double sum = 0;
  for (int k = ns.k_first; k <= ns.k_last; ++k) {
    const double* v = grad.values.data() + g.node_id(k, 0) * n;
    for (std::int64_t s : *ns.spatial) {
      const double* p = v + s * n;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sum += coeffs->a_entry(k, s, i, j) * p[i] * p[j];
    }
  }
  return sum * node_measure(g);
}

double dirichlet_energy(const ScalarField& u, const Cylinder& c,
                        const CoefficientField* coeffs) {
  CylinderNodes cn(*u.grid, c);
  return dirichlet_energy(gradient(u), *u.grid, as_set(cn), coeffs);
}

// ---------------------------------------------------------------------------
// Holder estimates
// ---------------------------------------------------------------------------

namespace {

// Deterministic subsample keeping ascending order.
std::vector<std::int64_t> subsample(const std::vector<std::int64_t>& v,
                                    std::size_t cap) {
  if (v.size() <= cap) return v;
  std::vector<std::int64_t> out;
  out.reserve(cap);
  double step = static_cast<double>(v.size()) / static_cast<double>(cap);
  for (std::size_t i = 0; i < cap; ++i)
    out.push_back(v[static_cast<std::size_t>(i * step)]);
  return out;
}

struct BinMax {
  double best_diff = 0.0;
  double sep = 0.0;
};

}  // namespace

HolderEstimate holder_seminorm(const ScalarField& u, const Cylinder& region,
                               double sigma) {
  if (sigma <= 0 || sigma > 1)
    throw std::invalid_argument("holder_seminorm: sigma must be in (0,1]");
  const Grid& g = *u.grid;
  const double h = g.spacing();
  const double tau = g.time_step();
  CylinderNodes cn(g, region);

  const double min_sep = 2.0 * h;
  if (2.0 * region.radius < min_sep * 1.5)
    throw std::invalid_argument("holder_seminorm: region too small");

  std::vector<std::int64_t> nodes = subsample(cn.spatial(), 1400);
  std::vector<Vec> coords;
  coords.reserve(nodes.size());
  for (std::int64_t s : nodes) coords.push_back(g.spatial_coords(s));

  std::vector<int> layers;
  {
    int nl = cn.layers();
    int stride = std::max(1, nl / 32);
    for (int k = cn.k_first(); k <= cn.k_last(); k += stride) layers.push_back(k);
  }

  HolderEstimate est;
  const double bin_ratio = std::sqrt(2.0);
  auto bin_of = [&](double d) {
    return static_cast<int>(std::floor(std::log(d / min_sep) / std::log(bin_ratio)));
  };
  std::vector<BinMax> sbins(40), tbins(40);
  double sup_space = 0, sup_time = 0;
  std::int64_t pairs = 0;

  // Same-time spatial pairs.
  for (int k : layers) {
    const double* v = u.values.data() + g.node_id(k, 0);
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        double d = (coords[i] - coords[j]).norm();
        if (d < min_sep) continue;
        double diff = std::abs(v[nodes[i]] - v[nodes[j]]);
        ++pairs;
        sup_space = std::max(sup_space, diff / std::pow(d, sigma));
        int b = std::clamp(bin_of(d), 0, 39);
        if (diff > sbins[b].best_diff) {
          sbins[b].best_diff = diff;
          sbins[b].sep = d;
        }
      }
  }

  // Same-point time pairs (parabolic separation floor (2h)^2).
  const double min_tsep = min_sep * min_sep;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t a = 0; a < layers.size(); ++a)
      for (std::size_t b = a + 1; b < layers.size(); ++b) {
        double dt = (layers[b] - layers[a]) * tau;
        if (dt < min_tsep) continue;
        double diff =
            std::abs(u(layers[a], nodes[i]) - u(layers[b], nodes[i]));
        ++pairs;
        sup_time = std::max(sup_time, diff / std::pow(dt, sigma / 2));
        int bb = std::clamp(bin_of(dt / min_sep), 0, 39);  // dt in units of 2h
        if (diff > tbins[bb].best_diff) {
          tbins[bb].best_diff = diff;
          tbins[bb].sep = dt;
        }
      }
  }

  est.pairs_sampled = pairs;
  est.seminorm = std::max(sup_space, sup_time);

  auto fit_bins = [](const std::vector<BinMax>& bins, double fallback) {
    std::vector<double> r, v;
    for (const BinMax& b : bins)
      if (b.best_diff > 0) {
        r.push_back(b.sep);
        v.push_back(b.best_diff);
      }
    double slope;
    if (r.size() < 3 || !log_fit(r, v, slope)) return fallback;
    return slope;
  };
  // Constant fields have no positive differences: exponent 1 by convention.
  est.exponent_space = std::clamp(fit_bins(sbins, 1.0), 0.0, 1.0);
  est.exponent_time = std::clamp(fit_bins(tbins, 0.5), 0.0, 1.0);

  // Campanato route: mean-oscillation decay across a geometric ladder.
  {
    std::vector<double> radii, vals;
    double r = region.radius;
    const double rmin = std::max(4.0 * h, std::sqrt(2.0 * tau));
    while (r >= rmin * 0.999 && radii.size() < 12) {
      Cylinder c{region.center, r};
      try {
        CylinderNodes sub(g, c);
        double mean = cyl_mean(u, sub);
        double sum = 0;
        for (int k = sub.k_first(); k <= sub.k_last(); ++k) {
          const double* v = u.values.data() + g.node_id(k, 0);
          for (std::int64_t s : sub.spatial()) sum += (v[s] - mean) * (v[s] - mean);
        }
        double m = tau;
        for (int d = 0; d < g.dim(); ++d) m *= h;
        double val = sum * m;
        if (val > 0) {
          radii.push_back(r);
          vals.push_back(val);
        }
      } catch (const std::exception&) {
        break;
      }
      r /= std::sqrt(2.0);
    }
    double slope;
    if (radii.size() >= 4 && log_fit(radii, vals, slope)) {
      est.campanato_exponent =
          std::clamp((slope - (g.dim() + 2)) / 2.0, 0.0, 1.0);
    } else {
      est.campanato_exponent = 1.0;  // degenerate (constant) field
    }
  }
  return est;
}

}  // namespace sgnl
