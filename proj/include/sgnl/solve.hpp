#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sgnl/field.hpp"
#include "sgnl/grid.hpp"

namespace sgnl {

/// Per-node symmetric coefficient matrix A(z) plus optional drift b(z),
/// with ellipticity bounds 0 < lambda <= 1 <= Lambda.
class CoefficientField {
 public:
  enum class Kind { identity, constant, varying };

  static CoefficientField identity(std::shared_ptr<const Grid> g);
  /// A_row_major: n*n entries, symmetric.
  static CoefficientField constant(std::shared_ptr<const Grid> g,
                                   const std::vector<double>& A_row_major,
                                   double lambda, double Lambda, double alpha = 0.5);
  /// Per space-time node matrices, node-id order, n*n entries each.
  static CoefficientField varying(std::shared_ptr<const Grid> g,
                                  std::vector<double> A_values, double alpha,
                                  double lambda, double Lambda);

  /// Identity A with constant drift b.
  static CoefficientField with_constant_drift(std::shared_ptr<const Grid> g, Vec b);
  /// Identity A with b(x) = magnitude * |x|^{-n/p} e_1, magnitude capped at
  /// the value attained on |x| = 2h (bounded L^p cross-sections).
  static CoefficientField with_lp_drift(std::shared_ptr<const Grid> g, double p,
                                        double magnitude);
  /// Weierstrass-type synthetic field with parabolic Holder exponent alpha:
  /// A(z) = exp(eps W(z)) applied to the identity eigenframe (diagonal).
  static CoefficientField holder_synthetic(std::shared_ptr<const Grid> g,
                                           double alpha, double amplitude,
                                           std::uint64_t seed);

  CoefficientField frozen_at(int k, std::int64_t s) const;

  const std::shared_ptr<const Grid>& grid() const { return grid_; }
  Kind kind() const { return kind_; }
  bool has_offdiag() const { return has_offdiag_; }
  bool has_drift() const { return drift_kind_ != Kind::identity; }
  double lambda() const { return lambda_; }
  double Lambda() const { return Lambda_; }
  double alpha() const { return alpha_; }

  double a_entry(int k, std::int64_t s, int i, int j) const {
    switch (kind_) {
      case Kind::identity:
        return i == j ? 1.0 : 0.0;
      case Kind::constant:
        return A_[static_cast<std::size_t>(i * n_ + j)];
      default:
        return A_[(static_cast<std::size_t>(grid_->node_id(k, s)) * n_ + i) * n_ + j];
    }
  }
  double b_entry(int k, std::int64_t s, int d) const {
    switch (drift_kind_) {
      case Kind::identity:
        return 0.0;
      case Kind::constant:
        return b_[static_cast<std::size_t>(d)];
      default:
        return b_[static_cast<std::size_t>(grid_->node_id(k, s)) * n_ + d];
    }
  }

  /// A(z) as a row-major n x n block.
  std::vector<double> matrix_at(int k, std::int64_t s) const;

  void set_constant_drift(Vec b);
  void set_varying_drift(std::vector<double> b_values);

 private:
  CoefficientField() = default;
  std::shared_ptr<const Grid> grid_;
  int n_ = 0;
  Kind kind_ = Kind::identity;
  Kind drift_kind_ = Kind::identity;
  bool has_offdiag_ = false;
  double lambda_ = 1.0, Lambda_ = 1.0, alpha_ = 0.5;
  std::vector<double> A_;  // constant: n*n; varying: per node
  std::vector<double> b_;  // constant: n; varying: per node
};

/// Thrown when relaxation fails to reach the residual tolerance.
class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& msg, double residual, int layer)
      : std::runtime_error(msg), last_residual(residual), time_layer(layer) {}
  double last_residual;
  int time_layer;
};

/// Problem description for one parabolic solve.
///
/// region = nullopt solves on the full grid (Dirichlet data on the box faces,
/// initial data on layer 0). A Cylinder region solves on its spatial ball
/// with data taken from `boundary` on the ring and bottom layer. An explicit
/// interior node list (custom_interior) overrides both.
struct SolveSpec {
  std::shared_ptr<const Grid> grid;
  std::optional<Cylinder> region;
  std::vector<std::int64_t> custom_interior;  // spatial ids
  int custom_k_init = -1;
  int custom_k_top = -1;
  ScalarField boundary;
  bool constrained = false;
  const CoefficientField* coeffs = nullptr;  // null = identity, no drift
  double psor_omega = 1.5;
  double tol = 1e-10;
  int max_sweeps = 50000;
};

/// Implicit Euler; each step relaxed (SOR) to the residual tolerance.
ScalarField heat_solve(const SolveSpec& spec);

/// Same stepping with projected relaxation: thin-layer values are clamped at
/// zero after each update (zero thin obstacle).
ScalarField signorini_solve(const SolveSpec& spec);

/// Heat solve on c with boundary data u|dpQ; equals u on the boundary.
ScalarField caloric_replacement(const ScalarField& u, const Cylinder& c,
                                const CoefficientField* coeffs = nullptr,
                                double tol = 1e-10, int max_sweeps = 50000);

/// Constrained analogue; requires u >= 0 on the thin part of dpQ.
ScalarField signorini_replacement(const ScalarField& u, const Cylinder& c,
                                  const CoefficientField* coeffs = nullptr,
                                  double tol = 1e-10, int max_sweeps = 50000);

/// Discrete complementarity residuals on thin nodes over solved layers:
/// value negativity, flux-jump negativity (J = d/dx_n from below minus from
/// above, first-order one-sided), and the product |u * J|.
struct ComplementarityReport {
  double min_thin_value = 0.0;
  double min_flux_jump = 0.0;
  double max_product = 0.0;
  double value_scale = 0.0;  // max |u| over checked nodes
};

ComplementarityReport complementarity_residuals(const ScalarField& u);
ComplementarityReport complementarity_residuals(const ScalarField& u,
                                                const CylinderNodes& c);

/// The solver's per-step variational objective at time layer k:
/// 1/2 a_k(w,w) + (h^n / 2 tau) sum_I (w - w_prev)^2, with the stiffness form
/// summed over edges touching the interior set (flux form, edge-averaged
/// diagonal coefficients; centered cross terms on interior density nodes).
/// The solved slice minimizes this over slices with the same exterior values
/// (subject to the thin constraint when constrained). Exposed for tests.
double step_objective(const ScalarField& u, int k,
                      const std::vector<std::int64_t>& interior,
                      const CoefficientField* coeffs);

}  // namespace sgnl
