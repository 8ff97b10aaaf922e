#include "sgnl/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sgnl/closed_forms.hpp"

namespace sgnl {

CertRegion make_region(const Grid& g, const Cylinder& c) {
  CylinderNodes cn(g, c);
  if (!cn.bottom_on_grid())
    throw std::invalid_argument("certify: cylinder bottom falls below the grid");
  CertRegion r;
  r.spatial = cn.spatial();
  r.thin = cn.thin();
  r.ring = cn.ring();
  r.k_first = cn.k_first();
  r.k_last = cn.k_last();
  r.center = c.center;
  r.radius = c.radius;
  return r;
}

CertRegion make_region(const Grid& g, const EllipticCylinder& f) {
  EllipticNodes en = elliptic_nodes(g, f);
  if (en.k_first <= 0)
    throw std::invalid_argument("certify: elliptic cylinder bottom falls below the grid");
  CertRegion r;
  r.spatial = en.spatial;
  r.thin = en.thin;
  r.ring = spatial_ring(g, en.spatial);
  r.k_first = en.k_first;
  r.k_last = en.k_last;
  r.center = PPoint{f.frame.x0, f.frame.t0};
  r.radius = f.radius;
  r.frame = f.frame;
  return r;
}

DeficitEvaluator::DeficitEvaluator(const ScalarField& u, const CertRegion& region,
                                   const CoefficientField* coeffs)
    : u_(u), region_(region), coeffs_(coeffs) {
  grad_u_ = gradient(u);
  dt_u_ = time_derivative(u);
  e_u_ = dirichlet_energy(grad_u_, *u.grid, region.set(), coeffs);
}

bool DeficitEvaluator::check_admissible(const ScalarField& v, double tol) const {
  const Grid& g = *u_.grid;
  // Boundary equality on the lateral ring over all layers plus the bottom.
  int kb = region_.k_bottom();
  for (std::int64_t s : region_.ring)
    for (int k = kb; k <= region_.k_last; ++k)
      if (std::abs(v(k, s) - u_(k, s)) > tol) return false;
  for (std::int64_t s : region_.spatial)
    if (std::abs(v(kb, s) - u_(kb, s)) > tol) return false;
  // Thin nonnegativity inside the region.
  for (std::int64_t s : region_.thin)
    for (int k = region_.k_first; k <= region_.k_last; ++k)
      if (v(k, s) < -tol) return false;
  (void)g;
  return true;
}

Deficit DeficitEvaluator::eval(const Competitor& v) const {
  if (!v.admissible)
    throw std::invalid_argument("deficit: competitor failed admissibility checks");
  Deficit d;
  d.energy_u = e_u_;
  VectorField gv = gradient(v.field);
  d.energy_v = dirichlet_energy(gv, *u_.grid, region_.set(), coeffs_);
  const Grid& g = *u_.grid;
  double m = g.time_step();
  for (int q = 0; q < g.dim(); ++q) m *= g.spacing();
  double p = 0;
  for (int k = region_.k_first; k <= region_.k_last; ++k) {
    const double* du = dt_u_.values.data() + g.node_id(k, 0);
    const double* uu = u_.values.data() + g.node_id(k, 0);
    const double* vv = v.field.values.data() + g.node_id(k, 0);
    for (std::int64_t s : region_.spatial) p += du[s] * (uu[s] - vv[s]);
  }
  d.time_term = 2.0 * p * m;
  return d;
}

Deficit deficit(const ScalarField& u, const Competitor& v, const Cylinder& c,
                const CoefficientField* coeffs) {
  CertRegion region = make_region(*u.grid, c);
  DeficitEvaluator ev(u, region, coeffs);
  return ev.eval(v);
}

namespace {

double bump_profile(double q2) {
  if (q2 >= 1.0) return 0.0;
  double w = 1.0 - q2;
  return w * w;
}

// Smallest singular value of the frame map (unit pullback ball -> physical).
double frame_min_stretch(const Frame& f) {
  Eigen::JacobiSVD<Matrix> svd(f.a_bar);
  return svd.singularValues().minCoeff();
}

}  // namespace

std::vector<Competitor> make_competitor_family(const ScalarField& u,
                                               const CertRegion& region,
                                               const CoefficientField* coeffs,
                                               const FamilyOptions& opts) {
  const Grid& g = *u.grid;
  const int n = g.dim();
  const double h = g.spacing();
  std::vector<Competitor> fam;
  DeficitEvaluator ev(u, region, coeffs);

  // The canonical competitor: the (frozen-coefficient) Signorini replacement.
  {
    SolveSpec spec;
    spec.grid = u.grid;
    spec.custom_interior = region.spatial;
    spec.custom_k_init = region.k_bottom();
    spec.custom_k_top = region.k_last;
    spec.boundary = u;
    spec.coeffs = coeffs;
    spec.tol = opts.solver_tol;
    spec.max_sweeps = opts.max_sweeps;
    Competitor rep;
    rep.field = signorini_solve(spec);
    rep.kind = CompetitorKind::replacement;
    rep.admissible = ev.check_admissible(rep.field, 1e-9);
    if (!rep.admissible)
      throw std::runtime_error("certify: replacement failed admissibility checks");
    fam.push_back(std::move(rep));
  }

  const double eps = opts.epsilon_factor * oscillation_range(u, region.set());
  if (eps <= 0.0) return fam;  // constant candidate: replacement only

  const double r = region.radius;
  // Pullback clearance needed for one grid step next to the ring.
  double hpull = h;
  if (region.frame) hpull = h / frame_min_stretch(*region.frame);

  std::vector<double> scales;
  for (int i = 0; i < opts.bump_scales; ++i)
    scales.push_back(r * (0.45 - 0.125 * i));
  std::vector<Vec> offsets;
  offsets.push_back(Vec::zero(n));
  if (opts.bump_positions > 1) {
    Vec up = Vec::zero(n);
    up[n - 1] = 0.35 * r;
    offsets.push_back(up);
    if (opts.bump_positions > 2) {
      Vec dn = Vec::zero(n);
      dn[n - 1] = -0.35 * r;
      offsets.push_back(dn);
    }
  }

  const double t_bot = g.time_coord(region.k_bottom());
  const double t_top = g.time_coord(region.k_last);
  const double t_span = t_top - t_bot;

  for (const Vec& yc : offsets) {
    for (double s0 : scales) {
      double s = std::min(s0, r - yc.norm() - 2.0 * hpull);
      if (s < 1.5 * hpull) continue;  // unresolvable at this radius
      for (int sign : {1, -1}) {
        Competitor comp;
        comp.field = u;
        comp.kind = region.frame ? CompetitorKind::deskewed
                                 : CompetitorKind::bump_perturbation;
        for (int k = region.k_first; k <= region.k_last; ++k) {
          double ramp = (g.time_coord(k) - t_bot) / t_span;
          double* vv = comp.field.values.data() + g.node_id(k, 0);
          for (std::int64_t sp : region.spatial) {
            Vec x = g.spatial_coords(sp);
            double q2;
            if (region.frame) {
              Eigen::VectorXd xv(n);
              for (int d = 0; d < n; ++d) xv[d] = x[d];
              Eigen::VectorXd y = region.frame->pullback(xv);
              double acc = 0;
              for (int d = 0; d < n; ++d) {
                double dy = y[d] - yc[d];
                acc += dy * dy;
              }
              q2 = acc / (s * s);
            } else {
              q2 = ((x - region.center.x) - yc).norm2() / (s * s);
            }
            double bump = bump_profile(q2);
            if (bump == 0.0) continue;
            vv[sp] += sign * eps * ramp * bump;
            if (g.is_thin(sp) && vv[sp] < 0.0) vv[sp] = 0.0;
          }
        }
        comp.admissible = ev.check_admissible(comp.field);
        if (!comp.admissible)
          throw std::runtime_error("certify: generated bump failed admissibility");
        fam.push_back(std::move(comp));
      }
    }
  }
  return fam;
}

double omega_min(const ScalarField& u, const CertRegion& region,
                 const std::vector<Competitor>& family,
                 const CoefficientField* coeffs) {
  if (family.empty()) throw std::invalid_argument("omega_min: empty family");
  DeficitEvaluator ev(u, region, coeffs);
  double best = 0.0;
  bool usable = false;
  for (const Competitor& v : family) {
    Deficit d = ev.eval(v);
    double denom = d.energy_u + d.energy_v;
    if (denom <= 0) continue;
    usable = true;
    best = std::max(best, std::max(0.0, d.value() / denom));
  }
  if (!usable) throw std::runtime_error("omega_min: all competitors degenerate");
  return best;
}

double omega_min(const ScalarField& u, const Cylinder& c,
                 const std::vector<Competitor>& family,
                 const CoefficientField* coeffs) {
  CertRegion region = make_region(*u.grid, c);
  return omega_min(u, region, family, coeffs);
}

namespace {

GaugeReport sweep_regions(const ScalarField& u, const std::vector<CertRegion>& regions,
                          const CoefficientField* coeffs, const FamilyOptions& opts) {
  GaugeReport rep;
  for (const CertRegion& region : regions) {
    std::vector<Competitor> fam = make_competitor_family(u, region, coeffs, opts);
    rep.competitors_per_cylinder =
        std::max(rep.competitors_per_cylinder, static_cast<int>(fam.size()));
    rep.cylinders.emplace_back(region.center, region.radius);
    rep.omega.push_back(omega_min(u, region, fam, coeffs));
  }
  std::vector<double> rs, ws;
  for (std::size_t i = 0; i < rep.omega.size(); ++i)
    if (rep.omega[i] > 0) {
      rs.push_back(rep.cylinders[i].second);
      ws.push_back(rep.omega[i]);
    }
  if (rs.size() >= 4) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      double x = std::log(rs[i]), y = std::log(ws[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    double m = static_cast<double>(rs.size());
    double denom = m * sxx - sx * sx;
    if (std::abs(denom) > 1e-30) {
      rep.fitted_alpha = (m * sxy - sx * sy) / denom;
      rep.fitted_C = std::exp((sy - rep.fitted_alpha * sx) / m);
      rep.fit_valid = true;
    }
  }
  return rep;
}

}  // namespace

GaugeReport certify_over_radii(const ScalarField& u, const PPoint& z0,
                               const std::vector<double>& radii,
                               const CoefficientField* coeffs,
                               const FamilyOptions& opts) {
  if (radii.size() < 4)
    throw std::invalid_argument("certify: need at least 4 radii");
  std::vector<CertRegion> regions;
  for (double r : radii) regions.push_back(make_region(*u.grid, Cylinder{z0, r}));
  return sweep_regions(u, regions, coeffs, opts);
}

GaugeReport certify_drift(std::shared_ptr<const Grid> g, double p, double magnitude,
                          const std::vector<double>& radii, const FamilyOptions& opts) {
  if (g->dim() != 2)
    throw std::invalid_argument("certify_drift: reference experiment is n = 2");
  CoefficientField drift = magnitude != 0.0
                               ? CoefficientField::with_lp_drift(g, p, magnitude)
                               : CoefficientField::identity(g);
  ScalarField boundary =
      make_field(g, [](const Vec& x, double) { return forms::thin_obstacle_32(x); });
  SolveSpec spec;
  spec.grid = g;
  spec.boundary = boundary;
  spec.coeffs = &drift;
  spec.tol = opts.solver_tol;
  spec.max_sweeps = opts.max_sweeps;
  ScalarField u = signorini_solve(spec);

  PPoint z0{Vec::zero(g->dim()), 0.0};
  // Certification is against the driftless functional (identity coefficients).
  return certify_over_radii(u, z0, radii, nullptr, opts);
}

GaugeReport certify_frozen(const ScalarField& U, const PPoint& z0,
                           const std::vector<double>& radii,
                           const CoefficientField& coeffs, const FamilyOptions& opts) {
  const Grid& g = *U.grid;
  if (radii.size() < 4)
    throw std::invalid_argument("certify_frozen: need at least 4 radii");
  std::int64_t s0 = -1;
  // z0 must sit on the thin space; locate the nearest grid node.
  {
    MultiIndex idx{};
    for (int d = 0; d < g.dim(); ++d)
      idx[d] = static_cast<int>(std::lround((z0.x[d] + g.half_width()) / g.spacing()));
    if (idx[g.dim() - 1] != g.thin_layer())
      throw std::invalid_argument("certify_frozen: z0 must lie on the thin space");
    s0 = g.spatial_id(idx);
  }
  int k0 = g.layer_at_or_below(z0.t);
  CoefficientField frozen = coeffs.frozen_at(k0, s0);
  Frame frame = make_frame(coeffs.matrix_at(k0, s0), g.dim(), z0.x, z0.t);

  std::vector<CertRegion> regions;
  for (double r : radii)
    regions.push_back(make_region(g, EllipticCylinder{frame, r}));
  return sweep_regions(U, regions, &frozen, opts);
}

}  // namespace sgnl
