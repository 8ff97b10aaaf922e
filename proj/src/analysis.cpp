#include "sgnl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sgnl {

std::string to_string(FunctionalKind k) {
  switch (k) {
    case FunctionalKind::phi:
      return "phi";
    case FunctionalKind::dirichlet:
      return "dirichlet";
    case FunctionalKind::campanato_grad:
      return "campanato_grad";
    default:
      return "mean_osc";
  }
}

ExponentFit fit_exponent(const std::vector<double>& radii,
                         const std::vector<double>& values) {
  if (radii.size() != values.size())
    throw std::invalid_argument("fit_exponent: size mismatch");
  if (radii.size() < 4)
    throw std::invalid_argument("fit_exponent: need at least 4 points");
  ExponentFit out;
  for (double v : values)
    if (v <= 0.0) {
      out.exponent = std::numeric_limits<double>::infinity();
      out.degenerate = true;
      return out;
    }
  const std::size_t m = radii.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double x = std::log(radii[i]), y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = m * sxx - sx * sx;
  if (std::abs(denom) < 1e-30)
    throw std::invalid_argument("fit_exponent: radii are not distinct");
  out.exponent = (m * sxy - sx * sy) / denom;
  double intercept = (sy - out.exponent * sx) / m;
  for (std::size_t i = 0; i < m; ++i) {
    double pred = intercept + out.exponent * std::log(radii[i]);
    out.residual = std::max(out.residual, std::abs(std::log(values[i]) - pred));
  }
  return out;
}

std::vector<double> radius_ladder(double r_min, double r_max, int count) {
  if (count < 4) throw std::invalid_argument("radius_ladder: need >= 4 radii");
  if (r_min <= 0 || r_min >= r_max)
    throw std::invalid_argument("radius_ladder: need 0 < r_min < r_max");
  std::vector<double> out(count);
  double q = std::pow(r_max / r_min, 1.0 / (count - 1));
  double r = r_min;
  for (int i = 0; i < count; ++i) {
    out[i] = r;
    r *= q;
  }
  out.back() = r_max;
  return out;
}

std::vector<double> dyadic_time_radii(const Grid& g, double r_max, int count) {
  if (count < 4) throw std::invalid_argument("dyadic_time_radii: need >= 4 radii");
  std::vector<double> out;
  double m = r_max * r_max / g.time_step();
  for (int i = 0; i < count; ++i) {
    double r = std::sqrt(m * g.time_step());
    if (m < 2.0 - 1e-9) break;
    out.push_back(r);
    m /= 2.0;
  }
  if (static_cast<int>(out.size()) < count)
    throw std::invalid_argument(
        "dyadic_time_radii: ladder would drop below the 2-layer floor");
  std::reverse(out.begin(), out.end());
  return out;
}

IterationCheck hl_iteration_check(
    const std::vector<std::pair<double, double>>& samples, double a, double gamma,
    double beta, double b, double eps) {
  if (!(gamma > beta && beta > 0 && a > 0 && b >= 0 && eps >= 0))
    throw std::invalid_argument("hl_iteration_check: parameter violation");
  if (samples.size() < 2)
    throw std::invalid_argument("hl_iteration_check: need >= 2 samples");
  IterationCheck out;
  out.hypothesis_worst = 0.0;
  out.conclusion_c = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = 0; j < samples.size(); ++j) {
      double rho = samples[i].first, fr = samples[i].second;
      double r = samples[j].first, fR = samples[j].second;
      if (!(rho < r)) continue;
      double hyp_rhs = a * (std::pow(rho / r, gamma) + eps) * fR + b * std::pow(r, beta);
      if (hyp_rhs > 0) out.hypothesis_worst = std::max(out.hypothesis_worst, fr / hyp_rhs);
      double conc_rhs = std::pow(rho / r, beta) * fR + b * std::pow(rho, beta);
      if (conc_rhs > 0) out.conclusion_c = std::max(out.conclusion_c, fr / conc_rhs);
    }
  out.hypothesis_ok = out.hypothesis_worst <= 1.0 + 1e-12;
  out.conclusion_ok = std::isfinite(out.conclusion_c);
  return out;
}

double beta_exponent(int n, double alpha) {
  return alpha / (4.0 * (2.0 * n + 4.0 + alpha));
}

double implied_sigma(FunctionalKind kind, int n, double slope) {
  double sigma;
  switch (kind) {
    case FunctionalKind::phi:
      sigma = (slope - (2 * n + 4)) / 2.0;
      break;
    case FunctionalKind::dirichlet:
      sigma = (slope - n) / 2.0;
      break;
    default:  // campanato_grad and mean_osc share the n+2+2s dictionary
      sigma = (slope - (n + 2)) / 2.0;
      break;
  }
  return std::clamp(sigma, 0.0, 1.0);
}

ReportSet regularity_report(const ScalarField& u, const std::vector<PPoint>& centers,
                            FunctionalKind kind, const std::vector<double>& radii,
                            const ReportOptions& opts) {
  if (centers.empty()) throw std::invalid_argument("regularity_report: no centers");
  std::vector<double> rs = radii;
  std::sort(rs.begin(), rs.end());
  const Grid& g = *u.grid;

  VectorField G;
  bool need_grad = kind != FunctionalKind::mean_osc;
  if (need_grad)
    G = (kind == FunctionalKind::campanato_grad && opts.even_extension)
            ? even_extension(u)
            : gradient(u);

  ReportSet set;
  for (const PPoint& z0 : centers) {
    GrowthReport rep;
    rep.center = z0;
    rep.radii = rs;
    rep.functional_kind = kind;
    for (double r : rs) {
      Cylinder c{z0, r};
      CylinderNodes cn(g, c);
      double v = 0;
      switch (kind) {
        case FunctionalKind::phi:
          v = phi(u, G, g, cn).total;
          break;
        case FunctionalKind::dirichlet:
          v = cyl_integral_sq(G, as_set(cn));
          break;
        case FunctionalKind::campanato_grad:
          v = campanato_deviation(G, as_set(cn));
          break;
        case FunctionalKind::mean_osc: {
          double mean = cyl_mean(u, cn);
          double sum = 0;
          for (int k = cn.k_first(); k <= cn.k_last(); ++k) {
            const double* p = u.values.data() + g.node_id(k, 0);
            for (std::int64_t s : cn.spatial()) sum += (p[s] - mean) * (p[s] - mean);
          }
          double m = g.time_step();
          for (int d = 0; d < g.dim(); ++d) m *= g.spacing();
          v = sum * m;
          break;
        }
      }
      rep.values.push_back(v);
    }
    ExponentFit fit = fit_exponent(rep.radii, rep.values);
    rep.fitted_exponent = fit.exponent;
    rep.fit_residual = fit.residual;
    rep.degenerate = fit.degenerate;
    set.any_degenerate = set.any_degenerate || fit.degenerate;
    set.reports.push_back(std::move(rep));
  }

  std::vector<double> exps;
  for (const GrowthReport& r : set.reports) exps.push_back(r.fitted_exponent);
  std::sort(exps.begin(), exps.end());
  set.min_exponent = exps.front();
  set.median_exponent = exps[exps.size() / 2];
  set.implied_holder = implied_sigma(kind, g.dim(), set.median_exponent);
  return set;
}

}  // namespace sgnl
