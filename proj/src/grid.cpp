#include "sgnl/grid.hpp"

#include <algorithm>

namespace sgnl {

namespace {
// Snap tolerance for placing cylinder bounds between time layers.
constexpr double kSnap = 1e-9;
}  // namespace

double parabolic_distance(const PPoint& a, const PPoint& b) {
  return std::sqrt((a.x - b.x).norm2() + std::abs(a.t - b.t));
}

Grid::Grid(int n, int N, int K, double L, double T, Domain domain)
    : n_(n), N_(N), K_(K), L_(L), T_(T), domain_(domain) {
  if (n < 2) throw std::invalid_argument("grid: spatial dimension must be >= 2");
  if (n > kMaxDim) throw std::invalid_argument("grid: spatial dimension too large");
  if (N < 5) throw std::invalid_argument("grid: need at least 5 nodes per axis");
  if (N % 2 == 0)
    throw std::invalid_argument(
        "grid: N must be odd so the thin space {x_n = 0} lies on a node layer");
  if (K < 2) throw std::invalid_argument("grid: need at least 2 time steps");
  if (L <= 0 || T <= 0) throw std::invalid_argument("grid: extents must be positive");
  h_ = 2.0 * L / (N - 1);
  tau_ = T / K;
  spatial_count_ = 1;
  for (int d = 0; d < n; ++d) spatial_count_ *= N;
}

int Grid::layer_at_or_below(double t) const {
  double k = (t + T_) / tau_;
  int kk = static_cast<int>(std::floor(k + kSnap));
  return std::clamp(kk, -1, K_);
}

int Grid::layer_above(double t) const {
  double k = (t + T_) / tau_;
  int kk = static_cast<int>(std::floor(k + kSnap)) + 1;
  return std::clamp(kk, 0, K_ + 1);
}

std::vector<std::int64_t> Grid::ball_nodes(const Vec& x0, double r) const {
  if (x0.dim() != n_) throw std::invalid_argument("ball_nodes: dimension mismatch");
  // Bounding box per axis, then exact membership test.
  MultiIndex lo{}, hi{};
  for (int d = 0; d < n_; ++d) {
    lo[d] = std::max(0, static_cast<int>(std::ceil((x0[d] - r + L_) / h_ - kSnap)));
    hi[d] = std::min(N_ - 1, static_cast<int>(std::floor((x0[d] + r + L_) / h_ + kSnap)));
  }
  std::vector<std::int64_t> out;
  MultiIndex idx = lo;
  const double r2 = r * r;
  while (true) {
    double d2 = 0;
    for (int d = 0; d < n_; ++d) {
      double dx = axis_coord(idx[d]) - x0[d];
      d2 += dx * dx;
    }
    if (d2 < r2) out.push_back(spatial_id(idx));
    int d = n_ - 1;
    while (d >= 0) {
      if (++idx[d] <= hi[d]) break;
      idx[d] = lo[d];
      --d;
    }
    if (d < 0) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

CylinderNodes::CylinderNodes(const Grid& g, const Cylinder& c) : cyl_(c) {
  if (c.radius <= 0) throw std::invalid_argument("cylinder: radius must be positive");
  if (c.center.x.dim() != g.dim())
    throw std::invalid_argument("cylinder: dimension mismatch");
  spatial_ = g.ball_nodes(c.center.x, c.radius);
  k_last_ = g.layer_at_or_below(c.center.t);
  k_first_ = g.layer_above(c.center.t - c.radius * c.radius);
  if (spatial_.empty() || k_first_ > k_last_ || k_last_ < 0)
    throw std::runtime_error("cylinder: empty intersection with grid");

  for (std::int64_t s : spatial_) {
    int side = g.side(s);
    if (side == 0)
      thin_.push_back(s);
    else if (side > 0)
      upper_.push_back(s);
    else
      lower_.push_back(s);
  }

  // Ring: out-of-ball spatial nodes one step away from a ball node.
  std::vector<std::int64_t> cand;
  const int N = g.nodes_per_axis();
  std::int64_t stride = 1;
  for (std::int64_t s : spatial_) {
    MultiIndex idx = g.spatial_multi(s);
    for (int d = g.dim() - 1; d >= 0; --d) {
      for (int dir : {-1, 1}) {
        int j = idx[d] + dir;
        if (j < 0 || j >= N) continue;
        MultiIndex nb = idx;
        nb[d] = j;
        cand.push_back(g.spatial_id(nb));
      }
    }
  }
  (void)stride;
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  const double r2 = c.radius * c.radius;
  for (std::int64_t s : cand) {
    if ((g.spatial_coords(s) - c.center.x).norm2() >= r2) ring_.push_back(s);
  }
}

std::vector<std::int64_t> CylinderNodes::node_ids(const Grid& g) const {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(count()));
  for (int k = k_first_; k <= k_last_; ++k)
    for (std::int64_t s : spatial_) out.push_back(g.node_id(k, s));
  return out;
}

std::vector<std::int64_t> CylinderNodes::boundary_ids(const Grid& g) const {
  std::vector<std::int64_t> out;
  int kb = k_bottom();
  if (kb >= 0) {
    for (std::int64_t s : spatial_) out.push_back(g.node_id(kb, s));
    for (std::int64_t s : ring_) out.push_back(g.node_id(kb, s));
  }
  for (int k = k_first_; k <= k_last_; ++k)
    for (std::int64_t s : ring_) out.push_back(g.node_id(k, s));
  std::sort(out.begin(), out.end());
  return out;
}

Grid build_grid(int n, int N, int K, Domain domain) {
  return Grid(n, N, K, 1.0, 1.0, domain);
}

Grid build_scaled_grid(int n, int N, int K, double L, double T, Domain domain) {
  return Grid(n, N, K, L, T, domain);
}

std::vector<std::int64_t> cylinder_nodes(const Grid& g, const Cylinder& c) {
  return CylinderNodes(g, c).node_ids(g);
}

std::vector<std::int64_t> spatial_ring(const Grid& g,
                                       const std::vector<std::int64_t>& members) {
  std::vector<std::int64_t> cand;
  const int N = g.nodes_per_axis();
  for (std::int64_t s : members) {
    MultiIndex idx = g.spatial_multi(s);
    for (int d = 0; d < g.dim(); ++d) {
      for (int dir : {-1, 1}) {
        int j = idx[d] + dir;
        if (j < 0 || j >= N) continue;
        MultiIndex nb = idx;
        nb[d] = j;
        cand.push_back(g.spatial_id(nb));
      }
    }
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  std::vector<std::int64_t> out;
  for (std::int64_t s : cand)
    if (!std::binary_search(members.begin(), members.end(), s)) out.push_back(s);
  return out;
}

}  // namespace sgnl
