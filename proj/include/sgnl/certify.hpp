#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sgnl/functionals.hpp"
#include "sgnl/geometry.hpp"
#include "sgnl/solve.hpp"

namespace sgnl {

enum class CompetitorKind { replacement, bump_perturbation, deskewed };

/// Candidate competitor over a certification region: equals the candidate on
/// the parabolic boundary and is nonnegative on the thin part.
struct Competitor {
  ScalarField field;
  CompetitorKind kind = CompetitorKind::bump_perturbation;
  bool admissible = false;
};

/// Certification region: a euclidean parabolic cylinder or an elliptic one.
/// Carries the factorized node set, the Dirichlet ring, and the thin subset.
struct CertRegion {
  std::vector<std::int64_t> spatial;
  std::vector<std::int64_t> thin;
  std::vector<std::int64_t> ring;
  int k_first = 0, k_last = -1;
  PPoint center;
  double radius = 0.0;
  std::optional<Frame> frame;  // set for elliptic regions

  NodeSet set() const { return NodeSet{&spatial, k_first, k_last}; }
  int k_bottom() const { return k_first - 1; }
};

CertRegion make_region(const Grid& g, const Cylinder& c);
CertRegion make_region(const Grid& g, const EllipticCylinder& f);

struct FamilyOptions {
  int bump_scales = 3;
  int bump_positions = 3;        // thin-centered plus one per side
  double epsilon_factor = 0.1;   // bump amplitude = factor * osc(u over region)
  double solver_tol = 1e-10;
  int max_sweeps = 50000;
};

/// Energy terms of the almost-minimizer inequality on one region:
/// E_u = int <A grad u, grad u>, E_v likewise, P = 2 int dt_u (u - v).
struct Deficit {
  double energy_u = 0.0;
  double energy_v = 0.0;
  double time_term = 0.0;
  double value() const { return energy_u + time_term - energy_v; }
};

/// Caches grad u and dt u over one region so a whole family can be scored.
class DeficitEvaluator {
 public:
  DeficitEvaluator(const ScalarField& u, const CertRegion& region,
                   const CoefficientField* coeffs);
  Deficit eval(const Competitor& v) const;
  double energy_u() const { return e_u_; }
  /// Verifies boundary equality and thin nonnegativity of v against u.
  bool check_admissible(const ScalarField& v, double tol = 1e-12) const;

 private:
  const ScalarField& u_;
  const CertRegion& region_;
  const CoefficientField* coeffs_;
  VectorField grad_u_;
  ScalarField dt_u_;
  double e_u_ = 0.0;
};

Deficit deficit(const ScalarField& u, const Competitor& v, const Cylinder& c,
                const CoefficientField* coeffs = nullptr);

/// Signorini replacement plus clamped bump perturbations (scales x positions
/// x signs). Bumps vanish on the parabolic boundary by construction; each
/// competitor is admissibility-checked before being returned.
std::vector<Competitor> make_competitor_family(const ScalarField& u,
                                               const CertRegion& region,
                                               const CoefficientField* coeffs,
                                               const FamilyOptions& opts);

/// Smallest gauge value making the almost-minimizer inequality hold for the
/// tested family on this region: max over v of
/// max(0, (E_u + P - E_v) / (E_u + E_v)).
double omega_min(const ScalarField& u, const CertRegion& region,
                 const std::vector<Competitor>& family,
                 const CoefficientField* coeffs);
double omega_min(const ScalarField& u, const Cylinder& c,
                 const std::vector<Competitor>& family,
                 const CoefficientField* coeffs = nullptr);

/// Per-radius minimal gauges plus the fitted decay law omega(r) ~ C r^alpha.
struct GaugeReport {
  std::vector<std::pair<PPoint, double>> cylinders;
  std::vector<double> omega;  // clamped at 0
  double fitted_alpha = 0.0;
  double fitted_C = 0.0;
  int competitors_per_cylinder = 0;
  bool fit_valid = false;  // needs >= 4 positive gauge values
};

/// Sweeps thin-centered cylinders Q_r(z0) with the replacement + bump family
/// (identity coefficients unless given).
GaugeReport certify_over_radii(const ScalarField& u, const PPoint& z0,
                               const std::vector<double>& radii,
                               const CoefficientField* coeffs,
                               const FamilyOptions& opts);

/// Appendix experiment: solves the drift Signorini problem (boundary data
/// from the closed-form thin-obstacle profile) and certifies the solution
/// against the driftless functional over dyadic radii at the free-boundary
/// center. p > n; magnitude 0 gives the control run.
GaugeReport certify_drift(std::shared_ptr<const Grid> g, double p, double magnitude,
                          const std::vector<double>& radii, const FamilyOptions& opts);

/// Frozen-coefficient gauge over elliptic cylinders F_r(z0): energies use
/// A(z0), the replacement solves the frozen-coefficient problem on E_r.
GaugeReport certify_frozen(const ScalarField& U, const PPoint& z0,
                           const std::vector<double>& radii,
                           const CoefficientField& coeffs, const FamilyOptions& opts);

}  // namespace sgnl
