#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgnl {

/// Maximum supported spatial dimension.
inline constexpr int kMaxDim = 4;

/// Small fixed-capacity spatial vector (dimension carried at runtime).
class Vec {
 public:
  Vec() = default;
  explicit Vec(int n) : n_(n) {
    if (n < 0 || n > kMaxDim) throw std::invalid_argument("Vec: bad dimension");
  }
  Vec(std::initializer_list<double> xs) : n_(static_cast<int>(xs.size())) {
    if (n_ > kMaxDim) throw std::invalid_argument("Vec: bad dimension");
    int i = 0;
    for (double x : xs) v_[i++] = x;
  }
  static Vec zero(int n) { return Vec(n); }

  int dim() const { return n_; }
  double& operator[](int i) { return v_[i]; }
  double operator[](int i) const { return v_[i]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < n_; ++i) v_[i] += o.v_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < n_; ++i) v_[i] -= o.v_[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < n_; ++i) v_[i] *= s;
    return *this;
  }
  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(double s, Vec a) { return a *= s; }

  double dot(const Vec& o) const {
    double s = 0;
    for (int i = 0; i < n_; ++i) s += v_[i] * o.v_[i];
    return s;
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }

 private:
  std::array<double, kMaxDim> v_{};
  int n_ = 0;
};

/// Space-time point z = (x, t).
struct PPoint {
  Vec x;
  double t = 0.0;
};

/// Parabolic distance (|x0-x1|^2 + |t0-t1|)^{1/2}.
double parabolic_distance(const PPoint& a, const PPoint& b);

/// Parabolic cylinder descriptor: Q_r(z0) = B_r(x0) x (t0-r^2, t0].
struct Cylinder {
  PPoint center;
  double radius = 0.0;
};

enum class Domain { box, ball };

using MultiIndex = std::array<int, kMaxDim>;

/// Uniform node-centered space-time grid over [-L,L]^n x (-T, 0].
///
/// Spatial axes have N nodes each (N odd, so the thin hyperplane {x_n = 0}
/// falls exactly on the middle layer); time has K+1 layers t_k = -T + k*tau.
/// Node ids are row-major with the time axis slowest and x_n fastest,
/// matching the snapshot payload order.
class Grid {
 public:
  Grid(int n, int nodes_per_axis, int time_steps, double half_width,
       double duration, Domain domain);

  int dim() const { return n_; }
  int nodes_per_axis() const { return N_; }
  int time_steps() const { return K_; }
  int time_layers() const { return K_ + 1; }
  double spacing() const { return h_; }
  double time_step() const { return tau_; }
  double half_width() const { return L_; }
  double duration() const { return T_; }
  Domain domain() const { return domain_; }

  /// Index of the thin layer {x_n = 0} along the last spatial axis.
  int thin_layer() const { return (N_ - 1) / 2; }

  std::int64_t spatial_count() const { return spatial_count_; }
  std::int64_t node_count() const { return spatial_count_ * (K_ + 1); }

  std::int64_t node_id(int k, std::int64_t s) const { return k * spatial_count_ + s; }

  std::int64_t spatial_id(const MultiIndex& idx) const {
    std::int64_t s = 0;
    for (int d = 0; d < n_; ++d) s = s * N_ + idx[d];
    return s;
  }
  MultiIndex spatial_multi(std::int64_t s) const {
    MultiIndex idx{};
    for (int d = n_ - 1; d >= 0; --d) {
      idx[d] = static_cast<int>(s % N_);
      s /= N_;
    }
    return idx;
  }

  double axis_coord(int i) const { return -L_ + i * h_; }
  double time_coord(int k) const { return -T_ + k * tau_; }
  Vec spatial_coords(std::int64_t s) const {
    MultiIndex idx = spatial_multi(s);
    Vec x(n_);
    for (int d = 0; d < n_; ++d) x[d] = axis_coord(idx[d]);
    return x;
  }
  PPoint node_coords(int k, std::int64_t s) const {
    return PPoint{spatial_coords(s), time_coord(k)};
  }

  bool is_thin(std::int64_t s) const {
    return static_cast<int>(s % N_) == thin_layer();
  }
  /// Sign of x_n at a spatial node: -1, 0 (thin layer), +1.
  int side(std::int64_t s) const {
    int in = static_cast<int>(s % N_);
    return in == thin_layer() ? 0 : (in > thin_layer() ? 1 : -1);
  }
  bool is_box_boundary(std::int64_t s) const {
    MultiIndex idx = spatial_multi(s);
    for (int d = 0; d < n_; ++d)
      if (idx[d] == 0 || idx[d] == N_ - 1) return true;
    return false;
  }

  /// Largest time layer with t_k <= t (clamped to [-1, K]).
  int layer_at_or_below(double t) const;
  /// Smallest time layer with t_k > t (may be K+1 if none).
  int layer_above(double t) const;

  /// Spatial nodes with |x - x0| < r, in ascending id order.
  std::vector<std::int64_t> ball_nodes(const Vec& x0, double r) const;

 private:
  int n_, N_, K_;
  double h_, tau_, L_, T_;
  Domain domain_;
  std::int64_t spatial_count_;
};

/// Builds the reference grid over [-1,1]^n x (-1, 0].
/// Rejects even N (the thin space must land on a node layer) and n < 2.
Grid build_grid(int n, int N, int K, Domain domain = Domain::box);

/// Grid over [-L,L]^n x (-T, 0] (used for deskewed fields).
Grid build_scaled_grid(int n, int N, int K, double half_width, double duration,
                       Domain domain = Domain::box);

/// Node sets of a parabolic cylinder clipped to a grid.
///
/// Factorized representation: the spatial ball cross-section (constant over
/// the cylinder's time layers) plus the interior layer range. The bottom
/// layer (last layer at or below t0 - r^2) carries initial data and belongs
/// to the parabolic boundary, not the interior.
class CylinderNodes {
 public:
  CylinderNodes(const Grid& g, const Cylinder& c);

  const Cylinder& cylinder() const { return cyl_; }
  const std::vector<std::int64_t>& spatial() const { return spatial_; }
  const std::vector<std::int64_t>& thin() const { return thin_; }
  const std::vector<std::int64_t>& upper() const { return upper_; }
  const std::vector<std::int64_t>& lower() const { return lower_; }
  /// Spatial nodes outside the ball adjacent (one grid step) to a ball node.
  const std::vector<std::int64_t>& ring() const { return ring_; }

  int k_first() const { return k_first_; }  // first interior layer
  int k_last() const { return k_last_; }    // last interior layer (= top)
  int k_bottom() const { return k_first_ - 1; }
  int layers() const { return k_last_ - k_first_ + 1; }
  bool bottom_on_grid() const { return k_first_ > 0; }

  std::int64_t count() const {
    return static_cast<std::int64_t>(spatial_.size()) * layers();
  }

  /// Interior nodes as flat ids, ascending.
  std::vector<std::int64_t> node_ids(const Grid& g) const;
  /// Parabolic boundary: lateral ring over [k_bottom, k_last] plus the whole
  /// bottom layer (ball and ring). Empty ring portion if the ball touches the
  /// grid edge. Bottom layer omitted when the cylinder is clipped below.
  std::vector<std::int64_t> boundary_ids(const Grid& g) const;

 private:
  Cylinder cyl_;
  std::vector<std::int64_t> spatial_, thin_, upper_, lower_, ring_;
  int k_first_ = 0, k_last_ = -1;
};

/// Interior nodes of Q_r(z0) on g; throws if the clipped set is empty.
std::vector<std::int64_t> cylinder_nodes(const Grid& g, const Cylinder& c);

/// Spatial nodes outside a sorted member list with a one-step neighbor inside.
std::vector<std::int64_t> spatial_ring(const Grid& g,
                                       const std::vector<std::int64_t>& members_sorted);

}  // namespace sgnl
