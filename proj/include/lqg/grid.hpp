#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace lqg {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double euclid_dist(Point a, Point b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

struct Rect {
  double x0, y0, x1, y1;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  bool contains(Point p) const {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }
};

struct Cell {
  int x = 0;
  int y = 0;
  friend bool operator==(Cell a, Cell b) { return a.x == b.x && a.y == b.y; }
};

// Cells stored as sorted, unique linear indices keep set operations cheap and
// make "lowest-index" tie-breaking rules unambiguous.
using CellSet = std::vector<int>;

inline void normalize_cell_set(CellSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

// Square lattice of n x n cell centers filling [-1,1]^2. The field lives on
// cell centers; the surrounding frame (outermost ring of cells) marks where
// truncation artifacts start.
struct GridGeometry {
  int n = 0;
  double spacing = 0.0;

  static GridGeometry make(int n) {
    if (n < 2) throw std::invalid_argument("grid: n must be at least 2");
    return GridGeometry{n, 2.0 / static_cast<double>(n)};
  }

  int cell_count() const { return n * n; }

  int index(Cell c) const { return c.y * n + c.x; }
  Cell cell(int idx) const { return Cell{idx % n, idx / n}; }

  Point center(Cell c) const {
    return Point{-1.0 + (c.x + 0.5) * spacing, -1.0 + (c.y + 0.5) * spacing};
  }
  Point center(int idx) const { return center(cell(idx)); }

  bool contains(Cell c) const {
    return c.x >= 0 && c.x < n && c.y >= 0 && c.y < n;
  }

  Cell cell_at(Point p) const {
    int cx = static_cast<int>(std::floor((p.x + 1.0) / spacing));
    int cy = static_cast<int>(std::floor((p.y + 1.0) / spacing));
    cx = std::clamp(cx, 0, n - 1);
    cy = std::clamp(cy, 0, n - 1);
    return Cell{cx, cy};
  }

  bool on_frame(Cell c) const {
    return c.x == 0 || c.y == 0 || c.x == n - 1 || c.y == n - 1;
  }
  bool on_frame(int idx) const { return on_frame(cell(idx)); }

  // Distance from p to the edge of the cell-center hull; bilinear
  // interpolation is defined only inside this hull.
  double hull_clearance(Point p) const {
    double half = 1.0 - 0.5 * spacing;
    return std::min(std::min(half - p.x, p.x + half),
                    std::min(half - p.y, p.y + half));
  }

  // Cell containing the domain origin.
  Cell origin_cell() const { return cell_at(Point{0.0, 0.0}); }

  CellSet cells_within(Point z, double radius) const {
    CellSet out;
    int cx0 = std::max(0, static_cast<int>(std::floor((z.x - radius + 1.0) / spacing)) - 1);
    int cx1 = std::min(n - 1, static_cast<int>(std::ceil((z.x + radius + 1.0) / spacing)) + 1);
    int cy0 = std::max(0, static_cast<int>(std::floor((z.y - radius + 1.0) / spacing)) - 1);
    int cy1 = std::min(n - 1, static_cast<int>(std::ceil((z.y + radius + 1.0) / spacing)) + 1);
    for (int y = cy0; y <= cy1; ++y)
      for (int x = cx0; x <= cx1; ++x)
        if (euclid_dist(center(Cell{x, y}), z) <= radius)
          out.push_back(index(Cell{x, y}));
    return out;
  }
};

// Central measurement window: all fractal statistics are collected on the
// concentric half-size square, away from the zero-boundary frame.
inline Rect measurement_window() { return Rect{-0.5, -0.5, 0.5, 0.5}; }

}  // namespace lqg
