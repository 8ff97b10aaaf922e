#include "sgnl/solve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

namespace sgnl {

namespace {

std::array<std::int64_t, kMaxDim> spatial_strides(const Grid& g) {
  std::array<std::int64_t, kMaxDim> st{};
  const int n = g.dim();
  st[n - 1] = 1;
  for (int d = n - 2; d >= 0; --d) st[d] = st[d + 1] * g.nodes_per_axis();
  return st;
}

double pow_int(double x, int p) {
  double r = 1;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// CoefficientField
// ---------------------------------------------------------------------------

CoefficientField CoefficientField::identity(std::shared_ptr<const Grid> g) {
  CoefficientField c;
  c.grid_ = std::move(g);
  c.n_ = c.grid_->dim();
  return c;
}

CoefficientField CoefficientField::constant(std::shared_ptr<const Grid> g,
                                            const std::vector<double>& A,
                                            double lambda, double Lambda,
                                            double alpha) {
  const int n = g->dim();
  if (static_cast<int>(A.size()) != n * n)
    throw std::invalid_argument("coefficients: matrix size mismatch");
  CoefficientField c;
  c.grid_ = std::move(g);
  c.n_ = n;
  c.kind_ = Kind::constant;
  c.A_ = A;
  c.lambda_ = lambda;
  c.Lambda_ = Lambda;
  c.alpha_ = alpha;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (std::abs(A[i * n + j] - A[j * n + i]) > 1e-12)
        throw std::invalid_argument("coefficients: matrix must be symmetric");
      if (i != j && A[i * n + j] != 0.0) c.has_offdiag_ = true;
    }
  return c;
}

CoefficientField CoefficientField::varying(std::shared_ptr<const Grid> g,
                                           std::vector<double> A_values,
                                           double alpha, double lambda,
                                           double Lambda) {
  const int n = g->dim();
  if (static_cast<std::int64_t>(A_values.size()) != g->node_count() * n * n)
    throw std::invalid_argument("coefficients: per-node matrix array size mismatch");
  CoefficientField c;
  c.grid_ = std::move(g);
  c.n_ = n;
  c.kind_ = Kind::varying;
  c.A_ = std::move(A_values);
  c.alpha_ = alpha;
  c.lambda_ = lambda;
  c.Lambda_ = Lambda;
  for (std::size_t node = 0; node < c.A_.size() / (n * n) && !c.has_offdiag_; ++node)
    for (int i = 0; i < n && !c.has_offdiag_; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && c.A_[(node * n + i) * n + j] != 0.0) {
          c.has_offdiag_ = true;
          break;
        }
  return c;
}

void CoefficientField::set_constant_drift(Vec b) {
  if (b.dim() != n_) throw std::invalid_argument("drift: dimension mismatch");
  drift_kind_ = Kind::constant;
  b_.assign(static_cast<std::size_t>(n_), 0.0);
  for (int d = 0; d < n_; ++d) b_[d] = b[d];
}

void CoefficientField::set_varying_drift(std::vector<double> b_values) {
  if (static_cast<std::int64_t>(b_values.size()) != grid_->node_count() * n_)
    throw std::invalid_argument("drift: per-node array size mismatch");
  drift_kind_ = Kind::varying;
  b_ = std::move(b_values);
}

CoefficientField CoefficientField::with_constant_drift(std::shared_ptr<const Grid> g,
                                                       Vec b) {
  CoefficientField c = identity(g);
  c.set_constant_drift(b);
  return c;
}

CoefficientField CoefficientField::with_lp_drift(std::shared_ptr<const Grid> g,
                                                 double p, double magnitude) {
  if (p <= g->dim())
    throw std::invalid_argument("drift: need p > n for a bounded gauge");
  CoefficientField c = identity(g);
  const int n = g->dim();
  const double cap = 2.0 * g->spacing();
  const double expo = -static_cast<double>(n) / p;
  std::vector<double> b(static_cast<std::size_t>(g->node_count()) * n, 0.0);
  for (int k = 0; k < g->time_layers(); ++k)
    for (std::int64_t s = 0; s < g->spatial_count(); ++s) {
      double r = std::max(g->spatial_coords(s).norm(), cap);
      b[static_cast<std::size_t>(g->node_id(k, s)) * n] =
          magnitude * std::pow(r, expo);
    }
  c.set_varying_drift(std::move(b));
  return c;
}

CoefficientField CoefficientField::holder_synthetic(std::shared_ptr<const Grid> g,
                                                    double alpha, double amplitude,
                                                    std::uint64_t seed) {
  if (alpha <= 0 || alpha >= 1)
    throw std::invalid_argument("coefficients: alpha must be in (0,1)");
  const int n = g->dim();
  const int J = std::max(2, static_cast<int>(std::ceil(std::log2(1.0 / g->spacing()))));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // Weierstrass-type sum with parabolic scaling: spatial frequency 2^j pairs
  // with temporal frequency 4^j.
  struct Mode {
    Vec dir;
    double tfreq, phase, weight;
  };
  std::vector<std::vector<Mode>> modes(n);
  double wsum = 0;
  for (int j = 0; j <= J; ++j) wsum += std::pow(2.0, -alpha * j);
  for (int d = 0; d < n; ++d) {
    for (int j = 0; j <= J; ++j) {
      Mode m;
      m.dir = Vec::zero(n);
      double norm = 0;
      for (int q = 0; q < n; ++q) {
        m.dir[q] = 2.0 * unif(rng) - 1.0;
        norm += m.dir[q] * m.dir[q];
      }
      norm = std::sqrt(std::max(norm, 1e-12));
      double freq = std::pow(2.0, j);
      for (int q = 0; q < n; ++q) m.dir[q] *= freq / norm;
      m.tfreq = std::pow(4.0, j) * (unif(rng) < 0.5 ? 1.0 : -1.0);
      m.phase = 2.0 * M_PI * unif(rng);
      m.weight = std::pow(2.0, -alpha * j) / wsum;  // |W| <= 1
      modes[d].push_back(m);
    }
  }

  std::vector<double> A(static_cast<std::size_t>(g->node_count()) * n * n, 0.0);
  for (int k = 0; k < g->time_layers(); ++k) {
    double t = g->time_coord(k);
    for (std::int64_t s = 0; s < g->spatial_count(); ++s) {
      Vec x = g->spatial_coords(s);
      std::size_t base = static_cast<std::size_t>(g->node_id(k, s)) * n * n;
      for (int d = 0; d < n; ++d) {
        double w = 0;
        for (const Mode& m : modes[d])
          w += m.weight * std::cos(m.dir.dot(x) + m.tfreq * t + m.phase);
        A[base + d * n + d] = std::exp(amplitude * w);
      }
    }
  }
  double lam = std::exp(-amplitude), Lam = std::exp(amplitude);
  return varying(g, std::move(A), alpha, lam, Lam);
}

CoefficientField CoefficientField::frozen_at(int k, std::int64_t s) const {
  return constant(grid_, matrix_at(k, s), lambda_, Lambda_, alpha_);
}

std::vector<double> CoefficientField::matrix_at(int k, std::int64_t s) const {
  std::vector<double> m(static_cast<std::size_t>(n_) * n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m[i * n_ + j] = a_entry(k, s, i, j);
  return m;
}

// ---------------------------------------------------------------------------
// Relaxation engine
// ---------------------------------------------------------------------------

namespace {

struct Region {
  std::vector<std::int64_t> interior;   // spatial ids, ascending
  std::vector<std::uint8_t> mask;       // 1 where interior
  std::vector<std::size_t> thin_order;  // positions in `interior` on Q'
  int k_init = 0;
  int k_top = 0;
};

Region make_region(const SolveSpec& spec) {
  const Grid& g = *spec.grid;
  Region r;
  if (!spec.custom_interior.empty()) {
    r.interior = spec.custom_interior;
    std::sort(r.interior.begin(), r.interior.end());
    if (spec.custom_k_init < 0 || spec.custom_k_top <= spec.custom_k_init ||
        spec.custom_k_top > g.time_steps())
      throw std::invalid_argument("solve: bad custom layer range");
    r.k_init = spec.custom_k_init;
    r.k_top = spec.custom_k_top;
  } else if (spec.region) {
    CylinderNodes cn(g, *spec.region);
    if (!cn.bottom_on_grid())
      throw std::invalid_argument("solve: cylinder bottom falls below the grid");
    if (cn.layers() < 1) throw std::invalid_argument("solve: no interior layers");
    r.interior = cn.spatial();
    r.k_init = cn.k_bottom();
    r.k_top = cn.k_last();
  } else {
    for (std::int64_t s = 0; s < g.spatial_count(); ++s)
      if (!g.is_box_boundary(s)) r.interior.push_back(s);
    r.k_init = 0;
    r.k_top = g.time_steps();
  }
  r.mask.assign(static_cast<std::size_t>(g.spatial_count()), 0);
  for (std::int64_t s : r.interior) {
    if (g.is_box_boundary(s))
      throw std::invalid_argument("solve: region touches the grid boundary");
    r.mask[static_cast<std::size_t>(s)] = 1;
  }
  for (std::size_t i = 0; i < r.interior.size(); ++i)
    if (g.is_thin(r.interior[i])) r.thin_order.push_back(i);
  return r;
}

void check_thin_compatibility(const SolveSpec& spec, const Region& reg) {
  const Grid& g = *spec.grid;
  const int mid = g.thin_layer();
  auto offending = [&](int k, std::int64_t s) {
    Vec x = g.spatial_coords(s);
    std::string msg = "signorini: boundary data negative on the thin space at (";
    for (int d = 0; d < g.dim(); ++d)
      msg += std::to_string(x[d]) + (d + 1 < g.dim() ? "," : "");
    msg += "; t=" + std::to_string(g.time_coord(k)) + ") value " +
           std::to_string(spec.boundary(k, s));
    throw std::invalid_argument(msg);
  };
  // Thin nodes of the parabolic boundary: non-interior thin nodes adjacent to
  // the solve region, plus the thin slice of the initial layer.
  const auto st = spatial_strides(g);
  for (std::int64_t s = 0; s < g.spatial_count(); ++s) {
    if (static_cast<int>(s % g.nodes_per_axis()) != mid) continue;
    bool interior = reg.mask[static_cast<std::size_t>(s)] != 0;
    if (!interior) {
      bool adjacent = false;
      MultiIndex idx = g.spatial_multi(s);
      for (int d = 0; d < g.dim() && !adjacent; ++d) {
        if (idx[d] + 1 < g.nodes_per_axis() &&
            reg.mask[static_cast<std::size_t>(s + st[d])])
          adjacent = true;
        if (idx[d] > 0 && reg.mask[static_cast<std::size_t>(s - st[d])])
          adjacent = true;
      }
      if (!adjacent) continue;
      for (int k = reg.k_init; k <= reg.k_top; ++k)
        if (spec.boundary(k, s) < -1e-12) offending(k, s);
    } else {
      if (spec.boundary(reg.k_init, s) < -1e-12) offending(reg.k_init, s);
    }
  }
}

struct StepCoefs {
  std::vector<double> edge;   // per interior node: [diag, lo_0, hi_0, ...]
  std::vector<double> drift;  // per interior node: n entries (empty if none)
  int stride_per_node = 0;
};

ScalarField run_solve(const SolveSpec& spec, bool constrained) {
  if (!spec.grid) throw std::invalid_argument("solve: missing grid");
  const Grid& g = *spec.grid;
  if (spec.boundary.grid.get() != &g)
    throw std::invalid_argument("solve: boundary field grid mismatch");
  if (spec.tol <= 0) throw std::invalid_argument("solve: tol must be positive");
  if (spec.psor_omega <= 0 || spec.psor_omega >= 2)
    throw std::invalid_argument("solve: relaxation factor must lie in (0,2)");

  Region reg = make_region(spec);
  if (constrained) check_thin_compatibility(spec, reg);

  const CoefficientField* cf = spec.coeffs;
  CoefficientField id = CoefficientField::identity(spec.grid);
  if (!cf) cf = &id;

  const int n = g.dim();
  const double h = g.spacing();
  const double tau = g.time_step();
  const double hn = pow_int(h, n);
  const double hn2 = pow_int(h, n - 2);
  const double mass = hn / tau;
  const auto st = spatial_strides(g);
  const std::size_t ni = reg.interior.size();
  const bool cross = cf->has_offdiag();
  const bool drift = cf->has_drift();

  ScalarField out = spec.boundary;  // exterior and initial values
  StepCoefs sc;
  sc.stride_per_node = 2 * n + 1;
  sc.edge.resize(ni * sc.stride_per_node);
  if (drift) sc.drift.resize(ni * n);

  for (int k = reg.k_init + 1; k <= reg.k_top; ++k) {
    double* u = out.values.data() + g.node_id(k, 0);
    const double* uprev = out.values.data() + g.node_id(k - 1, 0);

    // Per-step coefficients (A may depend on t); warm start from the
    // previous layer.
    for (std::size_t i = 0; i < ni; ++i) {
      const std::int64_t s = reg.interior[i];
      u[s] = uprev[s];
      double* e = sc.edge.data() + i * sc.stride_per_node;
      double diag = mass;
      for (int d = 0; d < n; ++d) {
        double ac = cf->a_entry(k, s, d, d);
        double lo = 0.5 * (cf->a_entry(k, s - st[d], d, d) + ac) * hn2;
        double hi = 0.5 * (ac + cf->a_entry(k, s + st[d], d, d)) * hn2;
        e[1 + 2 * d] = lo;
        e[2 + 2 * d] = hi;
        diag += lo + hi;
      }
      e[0] = diag;
      if (drift)
        for (int d = 0; d < n; ++d) sc.drift[i * n + d] = cf->b_entry(k, s, d);
    }

    const double cross_scale = hn / (2.0 * h);
    double res = 0;
    int sweep = 0;
    for (; sweep < spec.max_sweeps; ++sweep) {
      res = 0;
      for (std::size_t i = 0; i < ni; ++i) {
        const std::int64_t s = reg.interior[i];
        const double* e = sc.edge.data() + i * sc.stride_per_node;
        double Ku = 0;
        for (int d = 0; d < n; ++d)
          Ku += e[1 + 2 * d] * (u[s] - u[s - st[d]]) +
                e[2 + 2 * d] * (u[s] - u[s + st[d]]);
        if (cross) {
          double kx = 0;
          for (int a = 0; a < n; ++a)
            for (int b2 = 0; b2 < n; ++b2) {
              if (a == b2) continue;
              const std::int64_t ym = s - st[a], yp = s + st[a];
              if (reg.mask[static_cast<std::size_t>(ym)])
                kx += cf->a_entry(k, ym, a, b2) * (u[ym + st[b2]] - u[ym - st[b2]]) /
                      (2.0 * h);
              if (reg.mask[static_cast<std::size_t>(yp)])
                kx -= cf->a_entry(k, yp, a, b2) * (u[yp + st[b2]] - u[yp - st[b2]]) /
                      (2.0 * h);
            }
          Ku += cross_scale * kx;
        }
        if (drift) {
          const double* b = sc.drift.data() + i * n;
          double dv = 0;
          for (int d = 0; d < n; ++d) dv += b[d] * (u[s + st[d]] - u[s - st[d]]);
          Ku += hn * dv / (2.0 * h);
        }
        const double r = mass * (uprev[s] - u[s]) - Ku;
        const double diag = e[0];
        double nr = r / diag;
        double cand = u[s] + spec.psor_omega * r / diag;
        if (constrained && g.is_thin(s) && cand < 0.0) {
          cand = 0.0;
          if (u[s] == 0.0) nr = std::max(nr, 0.0);  // active node: only
                                                    // positive push violates
        }
        u[s] = cand;
        res = std::max(res, std::abs(nr));
      }
      if (res <= spec.tol) break;
    }
    if (res > spec.tol)
      throw SolveError("solve: relaxation did not reach tolerance at layer " +
                           std::to_string(k) + " (residual " + std::to_string(res) +
                           ")",
                       res, k);
  }
  return out;
}

}  // namespace

ScalarField heat_solve(const SolveSpec& spec) { return run_solve(spec, false); }

ScalarField signorini_solve(const SolveSpec& spec) {
  if (!spec.constrained) {
    SolveSpec s2 = spec;
    s2.constrained = true;
    return run_solve(s2, true);
  }
  return run_solve(spec, true);
}

namespace {
ScalarField replacement(const ScalarField& u, const Cylinder& c, bool constrained,
                        const CoefficientField* coeffs, double tol, int max_sweeps) {
  SolveSpec spec;
  spec.grid = u.grid;
  spec.region = c;
  spec.boundary = u;
  spec.constrained = constrained;
  spec.coeffs = coeffs;
  spec.tol = tol;
  spec.max_sweeps = max_sweeps;
  return constrained ? signorini_solve(spec) : heat_solve(spec);
}
}  // namespace

ScalarField caloric_replacement(const ScalarField& u, const Cylinder& c,
                                const CoefficientField* coeffs, double tol,
                                int max_sweeps) {
  return replacement(u, c, false, coeffs, tol, max_sweeps);
}

ScalarField signorini_replacement(const ScalarField& u, const Cylinder& c,
                                  const CoefficientField* coeffs, double tol,
                                  int max_sweeps) {
  return replacement(u, c, true, coeffs, tol, max_sweeps);
}

// ---------------------------------------------------------------------------
// Complementarity
// ---------------------------------------------------------------------------

namespace {
ComplementarityReport complementarity_impl(const ScalarField& u,
                                           const std::vector<std::int64_t>& thin,
                                           int k_first, int k_last) {
  const Grid& g = *u.grid;
  const double h = g.spacing();
  ComplementarityReport rep;
  for (int k = k_first; k <= k_last; ++k) {
    const double* v = u.values.data() + g.node_id(k, 0);
    for (std::int64_t s : thin) {
      double val = v[s];
      double jump = (2.0 * v[s] - v[s - 1] - v[s + 1]) / h;
      rep.min_thin_value = std::min(rep.min_thin_value, val);
      rep.min_flux_jump = std::min(rep.min_flux_jump, jump);
      rep.max_product = std::max(rep.max_product, std::abs(val * jump));
      rep.value_scale = std::max(rep.value_scale, std::abs(val));
    }
  }
  return rep;
}
}  // namespace

ComplementarityReport complementarity_residuals(const ScalarField& u) {
  const Grid& g = *u.grid;
  std::vector<std::int64_t> thin;
  for (std::int64_t s = 0; s < g.spatial_count(); ++s)
    if (g.is_thin(s) && !g.is_box_boundary(s)) thin.push_back(s);
  return complementarity_impl(u, thin, 1, g.time_steps());
}

ComplementarityReport complementarity_residuals(const ScalarField& u,
                                                const CylinderNodes& c) {
  return complementarity_impl(u, c.thin(), c.k_first(), c.k_last());
}

// ---------------------------------------------------------------------------
// Step objective (exposed for minimality tests)
// ---------------------------------------------------------------------------

double step_objective(const ScalarField& f, int k,
                      const std::vector<std::int64_t>& interior,
                      const CoefficientField* coeffs) {
  const Grid& g = *f.grid;
  const int n = g.dim();
  const double h = g.spacing();
  const double hn = pow_int(h, n);
  const double hn2 = pow_int(h, n - 2);
  const auto st = spatial_strides(g);
  CoefficientField id = CoefficientField::identity(f.grid);
  const CoefficientField* cf = coeffs ? coeffs : &id;

  std::vector<std::uint8_t> mask(static_cast<std::size_t>(g.spatial_count()), 0);
  for (std::int64_t s : interior) mask[static_cast<std::size_t>(s)] = 1;

  const double* u = f.values.data() + g.node_id(k, 0);
  const double* uprev = f.values.data() + g.node_id(k - 1, 0);

  double energy = 0;
  for (std::int64_t s : interior) {
    for (int d = 0; d < n; ++d) {
      // Edge (s, s+st): always counted from its lower interior endpoint;
      // edge (s-st, s) only when the lower endpoint is exterior.
      double ac = cf->a_entry(k, s, d, d);
      double du = u[s + st[d]] - u[s];
      energy += 0.25 * (ac + cf->a_entry(k, s + st[d], d, d)) * hn2 * du * du;
      if (!mask[static_cast<std::size_t>(s - st[d])]) {
        double dl = u[s] - u[s - st[d]];
        energy += 0.25 * (cf->a_entry(k, s - st[d], d, d) + ac) * hn2 * dl * dl;
      }
    }
    if (cf->has_offdiag()) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          if (a == b) continue;
          double da = (u[s + st[a]] - u[s - st[a]]) / (2 * h);
          double db = (u[s + st[b]] - u[s - st[b]]) / (2 * h);
          energy += 0.5 * hn * cf->a_entry(k, s, a, b) * da * db;
        }
    }
    double dt = u[s] - uprev[s];
    energy += 0.5 * hn / g.time_step() * dt * dt;
  }
  return energy;
}

}  // namespace sgnl
