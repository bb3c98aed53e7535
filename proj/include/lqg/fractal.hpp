#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "lqg/grid.hpp"
#include "lqg/metric.hpp"

// Box-counting and metric-cover dimension estimators. Box-counting
// (Minkowski) dimension stands in for Hausdorff dimension throughout; the two
// coincide on the exact power-law sets used as oracles and box counting is
// the standard estimator for simulated fractals.

namespace lqg {

struct DimensionEstimate {
  std::vector<double> scales;  // strictly decreasing
  std::vector<long long> counts;
  double slope = 0.0;  // box-counting estimate of dim_H
  double intercept = 0.0;
  double r_squared = 0.0;
  double slope_stderr = 0.0;
};

struct ScaleCount {
  double scale;
  long long count;
};

// Number of occupied boxes of the scale-aligned partition of `extent`
// anchored at its lower-left corner. Nested for power-of-two scale ratios.
inline long long count_boxes_at_scale(const std::vector<Point>& points,
                                      Rect extent, double scale) {
  std::unordered_set<std::int64_t> occupied;
  occupied.reserve(points.size());
  long long nx = static_cast<long long>(std::ceil(extent.width() / scale));
  for (const Point& p : points) {
    auto bx = static_cast<long long>(std::floor((p.x - extent.x0) / scale));
    auto by = static_cast<long long>(std::floor((p.y - extent.y0) / scale));
    occupied.insert(by * (nx + 2) + bx);
  }
  return static_cast<long long>(occupied.size());
}

inline std::vector<ScaleCount> box_count(const std::vector<Point>& points,
                                         Rect extent,
                                         const std::vector<double>& scales) {
  if (points.empty()) throw std::invalid_argument("box_count: empty point set");
  std::vector<ScaleCount> out;
  out.reserve(scales.size());
  for (double s : scales) {
    if (!(s > 0.0) || s > std::max(extent.width(), extent.height()))
      throw std::invalid_argument("box_count: scale out of range");
    out.push_back({s, count_boxes_at_scale(points, extent, s)});
  }
  return out;
}

inline std::vector<Point> cell_centers(const GridGeometry& geom,
                                       const CellSet& cells) {
  std::vector<Point> pts;
  pts.reserve(cells.size());
  for (int i : cells) pts.push_back(geom.center(i));
  return pts;
}

inline std::vector<ScaleCount> box_count(const CellSet& cells,
                                         const GridGeometry& geom, Rect extent,
                                         const std::vector<double>& scales) {
  return box_count(cell_centers(geom, cells), extent, scales);
}

// Offset-averaged variant: counts averaged over 4 half-scale-shifted grids,
// reducing lattice alignment artifacts at the cost of exact nesting.
inline std::vector<ScaleCount> box_count_offset_averaged(
    const std::vector<Point>& points, Rect extent,
    const std::vector<double>& scales) {
  if (points.empty()) throw std::invalid_argument("box_count: empty point set");
  std::vector<ScaleCount> out;
  for (double s : scales) {
    long long total = 0;
    for (int ox = 0; ox < 2; ++ox)
      for (int oy = 0; oy < 2; ++oy) {
        Rect shifted{extent.x0 - 0.5 * s * ox, extent.y0 - 0.5 * s * oy,
                     extent.x1, extent.y1};
        total += count_boxes_at_scale(points, shifted, s);
      }
    out.push_back({s, (total + 2) / 4});
  }
  return out;
}

// OLS of log(count) against log(1/scale).
inline DimensionEstimate fit_dimension(const std::vector<ScaleCount>& pairs) {
  if (pairs.size() < 3)
    throw std::invalid_argument("fit_dimension: needs at least 3 pairs");
  const size_t m = pairs.size();
  DimensionEstimate est;
  std::vector<double> xs(m), ys(m);
  for (size_t i = 0; i < m; ++i) {
    if (pairs[i].count <= 0)
      throw std::invalid_argument("fit_dimension: nonpositive count");
    xs[i] = std::log(1.0 / pairs[i].scale);
    ys[i] = std::log(static_cast<double>(pairs[i].count));
    est.scales.push_back(pairs[i].scale);
    est.counts.push_back(pairs[i].count);
  }
  double mx = 0, my = 0;
  for (size_t i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0))
    throw std::invalid_argument("fit_dimension: zero variance in log scales");
  est.slope = sxy / sxx;
  est.intercept = my - est.slope * mx;
  double ss_res = 0;
  for (size_t i = 0; i < m; ++i) {
    double r = ys[i] - (est.intercept + est.slope * xs[i]);
    ss_res += r * r;
  }
  est.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  est.slope_stderr =
      m > 2 ? std::sqrt(ss_res / (m - 2) / sxx) : 0.0;
  return est;
}

struct QuantumCover {
  std::vector<int> centers;
  // Greatest LQG distance from a boundary cell to its covering center;
  // at most r by construction, recorded for the post-hoc validity check.
  double max_cover_dist = 0.0;
};

// Greedy cover of the boundary by LQG balls of radius r: repeatedly pick the
// lowest-index uncovered cell and run a cutoff-r Dijkstra from it over the
// full grid.
inline QuantumCover quantum_cover(const CellSet& boundary,
                                  const WeightGrid& w, double r) {
  if (boundary.empty())
    throw std::invalid_argument("quantum_cover: empty boundary");
  if (!(r > 0.0)) throw std::invalid_argument("quantum_cover: r must be positive");
  QuantumCover cover;
  std::vector<std::uint8_t> covered(boundary.size(), 0);
  for (size_t i = 0; i < boundary.size(); ++i) {
    if (covered[i]) continue;
    int center = boundary[i];
    cover.centers.push_back(center);
    DistanceField d = shortest_distances(w, {center}, r);
    for (size_t j = i; j < boundary.size(); ++j) {
      if (covered[j]) continue;
      int c = boundary[j];
      if (d.settled[c] && d.dist[c] <= r) {
        covered[j] = 1;
        cover.max_cover_dist = std::max(cover.max_cover_dist, d.dist[c]);
      }
    }
  }
  return cover;
}

inline long long quantum_cover_count(const CellSet& boundary,
                                     const WeightGrid& w, double r) {
  return static_cast<long long>(quantum_cover(boundary, w, r).centers.size());
}

// Quantum (LQG-metric) box dimension from greedy cover counts over a ladder
// of metric radii.
inline DimensionEstimate quantum_dimension(const CellSet& boundary,
                                           const WeightGrid& w,
                                           const std::vector<double>& r_scales) {
  if (r_scales.size() < 3)
    throw std::invalid_argument("quantum_dimension: needs at least 3 scales");
  std::vector<ScaleCount> pairs;
  for (double r : r_scales)
    pairs.push_back({r, quantum_cover_count(boundary, w, r)});
  return fit_dimension(pairs);
}

// Secondary diagnostic for the quantum dimension: for each exponent p, the
// fitted log-log slope in 1/eps of  sum over occupied eps-boxes of
// (internal diameter of the box)^p. The p whose slope crosses zero tracks the
// quantum dimension of the boundary.
inline std::vector<std::pair<double, double>> diameter_sum_slopes(
    const CellSet& boundary, const WeightGrid& w, Rect extent,
    const std::vector<double>& eps_scales, const std::vector<double>& p_values) {
  const GridGeometry& geom = w.geom;
  std::vector<std::vector<double>> diams_per_scale;
  for (double eps : eps_scales) {
    // Collect occupied boxes and their full cell regions.
    std::unordered_set<std::int64_t> seen;
    std::vector<double> diams;
    long long nx = static_cast<long long>(std::ceil(extent.width() / eps));
    for (int cellidx : boundary) {
      Point p = geom.center(cellidx);
      if (!extent.contains(p)) continue;
      auto bx = static_cast<long long>(std::floor((p.x - extent.x0) / eps));
      auto by = static_cast<long long>(std::floor((p.y - extent.y0) / eps));
      if (!seen.insert(by * (nx + 2) + bx).second) continue;
      CellSet region;
      double x0 = extent.x0 + bx * eps, y0 = extent.y0 + by * eps;
      int cx0 = std::max(0, static_cast<int>((x0 + 1.0) / geom.spacing));
      int cy0 = std::max(0, static_cast<int>((y0 + 1.0) / geom.spacing));
      int cx1 = std::min(geom.n - 1, static_cast<int>((x0 + eps + 1.0) / geom.spacing));
      int cy1 = std::min(geom.n - 1, static_cast<int>((y0 + eps + 1.0) / geom.spacing));
      for (int y = cy0; y <= cy1; ++y)
        for (int x = cx0; x <= cx1; ++x) region.push_back(y * geom.n + x);
      if (region.empty()) continue;
      diams.push_back(internal_diameter(w, region).value);
    }
    diams_per_scale.push_back(std::move(diams));
  }

  std::vector<std::pair<double, double>> out;
  for (double p : p_values) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (size_t i = 0; i < eps_scales.size(); ++i) {
      double sum = 0.0;
      for (double d : diams_per_scale[i]) sum += std::pow(d, p);
      if (!(sum > 0.0)) continue;
      double x = std::log(1.0 / eps_scales[i]);
      double y = std::log(sum);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++m;
    }
    double slope = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
    out.push_back({p, slope});
  }
  return out;
}

}  // namespace lqg
