#include "sgnl/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace sgnl {

Matrix spd_sqrt(const Matrix& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("spd_sqrt: not square");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("spd_sqrt: matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("spd_sqrt: eigendecomposition failed");
  if (es.eigenvalues().minCoeff() <= 0)
    throw std::invalid_argument("spd_sqrt: matrix not positive definite");
  Eigen::VectorXd roots = es.eigenvalues().cwiseSqrt();
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().transpose();
}

Matrix align_rotation(const Matrix& a) {
  const int n = static_cast<int>(a.rows());
  Eigen::VectorXd en = Eigen::VectorXd::Zero(n);
  en[n - 1] = 1.0;
  Eigen::VectorXd w = a * en;
  double wn = w.norm();
  if (wn <= 0) throw std::invalid_argument("align_rotation: degenerate matrix");
  w /= wn;

  // Minimal rotation taking e_n to w inside span{e_n, w}.
  double c = en.dot(w);
  Eigen::VectorXd v = w - c * en;
  double s = v.norm();
  if (s < 1e-15) return Matrix::Identity(n, n);
  v /= s;
  Matrix O = Matrix::Identity(n, n);
  O += (c - 1.0) * (en * en.transpose() + v * v.transpose());
  O += s * (v * en.transpose() - en * v.transpose());
  return O;
}

Eigen::VectorXd Frame::apply(const Eigen::VectorXd& y) const {
  Eigen::VectorXd x = a_bar * y;
  for (int d = 0; d < x.size(); ++d) x[d] += x0[d];
  return x;
}

Eigen::VectorXd Frame::pullback(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = x;
  for (int d = 0; d < y.size(); ++d) y[d] -= x0[d];
  return a_bar.partialPivLu().solve(y);
}

Frame make_frame(const std::vector<double>& A_rm, int n, const Vec& x0, double t0) {
  Matrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = A_rm[static_cast<std::size_t>(i * n + j)];
  Frame f;
  Matrix a = spd_sqrt(A);
  f.O = align_rotation(a);
  f.a_bar = a * f.O;
  f.x0 = x0;
  f.t0 = t0;
  return f;
}

bool EllipticCylinder::contains_spatial(const Vec& x) const {
  const int n = x.dim();
  Eigen::VectorXd xv(n);
  for (int d = 0; d < n; ++d) xv[d] = x[d];
  return frame.pullback(xv).norm() < radius;
}

EllipticNodes elliptic_nodes(const Grid& g, const EllipticCylinder& f) {
  EllipticNodes out;
  // Bounding ball B_{Lambda^{1/2} r}: the largest singular value of a_bar
  // bounds the stretch of the unit ball.
  double stretch = f.frame.a_bar.operatorNorm();
  std::vector<std::int64_t> cand = g.ball_nodes(f.frame.x0, stretch * f.radius * 1.0001);
  for (std::int64_t s : cand)
    if (f.contains_spatial(g.spatial_coords(s))) {
      out.spatial.push_back(s);
      if (g.is_thin(s)) out.thin.push_back(s);
    }
  out.k_last = g.layer_at_or_below(f.frame.t0);
  out.k_first = g.layer_above(f.frame.t0 - f.radius * f.radius);
  if (out.spatial.empty() || out.k_first > out.k_last || out.k_last < 0)
    throw std::runtime_error("elliptic cylinder: empty intersection with grid");
  return out;
}

ScalarField deskew(const ScalarField& U, const Frame& frame, double R) {
  const Grid& src = *U.grid;
  const int n = src.dim();
  if (frame.a_bar.rows() != n) throw std::invalid_argument("deskew: dimension mismatch");

  // Fresh grid over Q_R with the source spacing class.
  int N = 2 * std::max(2, static_cast<int>(std::lround(R / src.spacing()))) + 1;
  int K = std::max(2, static_cast<int>(std::lround(R * R / src.time_step())));
  auto out_grid = std::make_shared<Grid>(
      build_scaled_grid(n, N, K, R, R * R, src.domain()));

  ScalarField out = zero_field(out_grid);
  const double h = src.spacing();
  const double tau = src.time_step();
  const double L = src.half_width();
  const double T = src.duration();
  const int Ns = src.nodes_per_axis();

  Eigen::VectorXd y(n);
  for (std::int64_t s = 0; s < out_grid->spatial_count(); ++s) {
    Vec xo = out_grid->spatial_coords(s);
    for (int d = 0; d < n; ++d) y[d] = xo[d];
    Eigen::VectorXd x = frame.apply(y);

    // Base cell and interpolation weights per axis, with snapping so nodes
    // that land exactly on source layers (the thin plane in particular) do
    // not smear across them.
    std::array<int, kMaxDim> base{};
    std::array<double, kMaxDim> w{};
    for (int d = 0; d < n; ++d) {
      double c = (x[d] + L) / h;
      double fl = std::floor(c);
      double frac = c - fl;
      if (frac < 1e-9) frac = 0.0;
      if (frac > 1.0 - 1e-9) {
        fl += 1.0;
        frac = 0.0;
      }
      int b = static_cast<int>(fl);
      if (b < 0 || b >= Ns || (b == Ns - 1 && frac > 0))
        throw std::invalid_argument("deskew: image leaves the source grid");
      base[d] = b;
      w[d] = frac;
    }

    for (int k = 0; k <= out_grid->time_steps(); ++k) {
      double t = out_grid->time_coord(k) + frame.t0;
      double ct = (t + T) / tau;
      double flt = std::floor(ct);
      double ft = ct - flt;
      if (ft < 1e-9) ft = 0.0;
      if (ft > 1.0 - 1e-9) {
        flt += 1.0;
        ft = 0.0;
      }
      int bt = static_cast<int>(flt);
      if (bt < 0 || bt > src.time_steps() || (bt == src.time_steps() && ft > 0))
        throw std::invalid_argument("deskew: image leaves the source time range");

      // Multilinear over the 2^n spatial corners, linear in time.
      double acc = 0;
      for (int corner = 0; corner < (1 << n); ++corner) {
        double wt = 1.0;
        MultiIndex idx{};
        for (int d = 0; d < n; ++d) {
          if (corner & (1 << d)) {
            wt *= w[d];
            idx[d] = base[d] + 1;
          } else {
            wt *= 1.0 - w[d];
            idx[d] = base[d];
          }
        }
        if (wt == 0.0) continue;
        std::int64_t ss = src.spatial_id(idx);
        double v0 = U(bt, ss);
        double v = (ft == 0.0) ? v0 : (1.0 - ft) * v0 + ft * U(bt + 1, ss);
        acc += wt * v;
      }
      out.at(k, s) = acc;
    }
  }
  return out;
}

}  // namespace sgnl
