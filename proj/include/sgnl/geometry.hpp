#pragma once

#include <Eigen/Dense>
#include <memory>

#include "sgnl/field.hpp"
#include "sgnl/grid.hpp"

namespace sgnl {

using Matrix = Eigen::MatrixXd;

/// Symmetric positive definite square root, by symmetric eigendecomposition
/// with nonnegative roots. Rejects non-symmetric or non-PD input.
Matrix spd_sqrt(const Matrix& A);

/// Rotation O with O e_n = a e_n / |a e_n|, realized as the minimal rotation
/// in the plane spanned by e_n and a e_n (identity when they align). For SPD
/// a the two directions are never antipodal, so O is well defined, det O = 1.
Matrix align_rotation(const Matrix& a);

/// Deskewing frame at z0: a_bar = A^{1/2}(z0) O, so that the map
/// x -> a_bar x + x0 sends the hyperplane {x_n = 0} into itself (about x0).
struct Frame {
  Matrix a_bar;  // a * O
  Matrix O;      // aligning rotation
  Vec x0;
  double t0 = 0.0;

  Eigen::VectorXd apply(const Eigen::VectorXd& y) const;     // a_bar y + x0
  Eigen::VectorXd pullback(const Eigen::VectorXd& x) const;  // a_bar^{-1} (x - x0)
  double det_sqrt_A() const { return a_bar.determinant(); }
};

/// Frame from the coefficient matrix at z0 (row-major n x n entries).
Frame make_frame(const std::vector<double>& A_row_major, int n, const Vec& x0,
                 double t0);

/// Elliptic cylinder F_r(z0) = E_r(z0) x (t0 - r^2, t0],
/// E_r(z0) = A^{1/2}(z0)(B_r) + x0.
struct EllipticCylinder {
  Frame frame;
  double radius = 0.0;

  bool contains_spatial(const Vec& x) const;
};

/// Grid nodes inside F_r(z0): spatial members of E_r plus the interior time
/// layer range, in the same factorized layout as CylinderNodes.
struct EllipticNodes {
  std::vector<std::int64_t> spatial;
  std::vector<std::int64_t> thin;
  int k_first = 0, k_last = -1;
  int k_bottom() const { return k_first - 1; }
  int layers() const { return k_last - k_first + 1; }
  std::int64_t count() const {
    return static_cast<std::int64_t>(spatial.size()) * layers();
  }
};

EllipticNodes elliptic_nodes(const Grid& g, const EllipticCylinder& f);

/// u_{z0}(x, t) = U(a_bar x + x0, t + t0) sampled on a fresh grid over
/// Q_R = [-R,R]^n x (-R^2, 0], with spacing matching the source grid and
/// multilinear interpolation (linear in time). Throws if the image of any
/// output node leaves the source grid.
ScalarField deskew(const ScalarField& U, const Frame& frame, double R);

}  // namespace sgnl
