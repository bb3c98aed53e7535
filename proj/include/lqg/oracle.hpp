#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "lqg/grid.hpp"
#include "lqg/metric.hpp"

// Brute-force reference implementations used only for cross-checks. They
// share no shortest-path, sampling, or counting code with the modules they
// validate; even the lattice edge costs are recomputed locally.

namespace lqg::oracle {

struct DenseMatrix {
  int n = 0;
  std::vector<double> entries;  // row-major

  static DenseMatrix zeros(int n) {
    DenseMatrix m;
    m.n = n;
    m.entries.assign(static_cast<size_t>(n) * n, 0.0);
    return m;
  }
  double& at(int i, int j) { return entries[static_cast<size_t>(i) * n + j]; }
  double at(int i, int j) const {
    return entries[static_cast<size_t>(i) * n + j];
  }
};

// Exact all-pairs shortest paths over the top-left m x m subgrid of w,
// with edge costs recomputed here from the cell costs.
inline DenseMatrix floyd_warshall(const WeightGrid& w, int m) {
  if (m > 8) throw std::invalid_argument("floyd_warshall: m capped at 8");
  if (m > w.geom.n) throw std::invalid_argument("floyd_warshall: m exceeds grid");
  const int N = m * m;
  const double inf = std::numeric_limits<double>::infinity();
  DenseMatrix d = DenseMatrix::zeros(N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i != j) d.at(i, j) = inf;

  const bool eight = w.topology == GraphTopology::EightNeighbor;
  const bool geo = w.cost_rule == EdgeCostRule::GeoMean;
  for (int y = 0; y < m; ++y)
    for (int x = 0; x < m; ++x)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          if (!eight && dx != 0 && dy != 0) continue;
          int vx = x + dx, vy = y + dy;
          if (vx < 0 || vx >= m || vy < 0 || vy >= m) continue;
          double ca = w.cell_cost[y * w.geom.n + x];
          double cb = w.cell_cost[vy * w.geom.n + vx];
          double mean = geo ? std::sqrt(ca * cb) : 0.5 * (ca + cb);
          double unit = (dx != 0 && dy != 0) ? std::sqrt(2.0) : 1.0;
          d.at(y * m + x, vy * m + vx) = w.geom.spacing * unit * mean;
        }

  for (int k = 0; k < N; ++k)
    for (int i = 0; i < N; ++i) {
      double dik = d.at(i, k);
      if (dik == inf) continue;
      for (int j = 0; j < N; ++j) {
        double cand = dik + d.at(k, j);
        if (cand < d.at(i, j)) d.at(i, j) = cand;
      }
    }
  return d;
}

// Graph Laplacian of the 1D path with m interior nodes: tridiag(-1, 2, -1).
inline DenseMatrix path_laplacian(int m) {
  DenseMatrix l = DenseMatrix::zeros(m);
  for (int i = 0; i < m; ++i) {
    l.at(i, i) = 2.0;
    if (i > 0) l.at(i, i - 1) = -1.0;
    if (i + 1 < m) l.at(i, i + 1) = -1.0;
  }
  return l;
}

// 5-point discrete Dirichlet Laplacian on the n x n interior grid.
inline DenseMatrix grid_laplacian(int n) {
  const int N = n * n;
  DenseMatrix l = DenseMatrix::zeros(N);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      int i = y * n + x;
      l.at(i, i) = 4.0;
      if (x > 0) l.at(i, i - 1) = -1.0;
      if (x + 1 < n) l.at(i, i + 1) = -1.0;
      if (y > 0) l.at(i, i - n) = -1.0;
      if (y + 1 < n) l.at(i, i + n) = -1.0;
    }
  return l;
}

// Inverse of a symmetric positive-definite matrix via dense Cholesky.
inline DenseMatrix spd_inverse(const DenseMatrix& a) {
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>
      m(a.entries.data(), a.n, a.n);
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("spd_inverse: matrix is not positive definite");
  Eigen::MatrixXd inv =
      llt.solve(Eigen::MatrixXd::Identity(a.n, a.n));
  DenseMatrix out = DenseMatrix::zeros(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) out.at(i, j) = inv(i, j);
  return out;
}

// Green's function of the zero-boundary discrete Laplacian: the exact
// covariance of the raw GFF sampler.
inline DenseMatrix dense_green(int n) {
  if (n > 24) throw std::invalid_argument("dense_green: n capped at 24");
  return spd_inverse(grid_laplacian(n));
}

// Occupied-box count by direct enumeration.
inline long long exhaustive_box_count(const std::vector<Point>& points,
                                      double scale, Rect extent) {
  if (points.size() > 10000)
    throw std::invalid_argument("exhaustive_box_count: too many points");
  std::unordered_set<std::int64_t> boxes;
  for (const Point& p : points) {
    auto bx = static_cast<std::int64_t>(std::floor((p.x - extent.x0) / scale));
    auto by = static_cast<std::int64_t>(std::floor((p.y - extent.y0) / scale));
    boxes.insert(bx * 1000003 + by);
  }
  return static_cast<long long>(boxes.size());
}

}  // namespace lqg::oracle
