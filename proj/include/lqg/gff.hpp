#pragma once

#include <fftw3.h>

#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "lqg/grid.hpp"
#include "lqg/rng.hpp"

// Discrete Gaussian free field on the cell-center lattice of [-1,1]^2 with
// zero boundary conditions, sampled exactly in the eigenbasis of the discrete
// Dirichlet Laplacian. The whole-plane field of interest differs from this one
// by a field that is smooth on the central measurement window, which leaves
// every fractal statistic collected there unchanged.

namespace lqg {

struct Normalization {
  enum class Kind { RawZeroBoundary, PinnedCircleAverage };
  Kind kind = Kind::RawZeroBoundary;
  double pin_radius = 0.5;

  static Normalization raw() { return {Kind::RawZeroBoundary, 0.0}; }
  static Normalization pinned(double r) {
    return {Kind::PinnedCircleAverage, r};
  }
  friend bool operator==(const Normalization& a, const Normalization& b) {
    return a.kind == b.kind &&
           (a.kind == Kind::RawZeroBoundary || a.pin_radius == b.pin_radius);
  }
};

struct FieldGrid {
  GridGeometry geom;
  std::vector<double> values;  // row-major, values[y*n+x]
  std::uint64_t seed = 0;
  double calibration = 1.0;
  Normalization normalization;
  bool derived = false;  // true once field arithmetic has been applied

  double at(int idx) const { return values[idx]; }
  double at(Cell c) const { return values[geom.index(c)]; }

  // Bilinear interpolation on cell centers; p must lie inside the hull.
  double interpolate(Point p) const {
    const int n = geom.n;
    double u = (p.x + 1.0) / geom.spacing - 0.5;
    double v = (p.y + 1.0) / geom.spacing - 0.5;
    if (u < 0.0 || v < 0.0 || u > n - 1 || v > n - 1)
      throw std::out_of_range("interpolate: point outside cell-center hull");
    int i0 = std::min(static_cast<int>(u), n - 2);
    int j0 = std::min(static_cast<int>(v), n - 2);
    double fu = u - i0, fv = v - j0;
    double a = values[j0 * n + i0], b = values[j0 * n + i0 + 1];
    double c = values[(j0 + 1) * n + i0], d = values[(j0 + 1) * n + i0 + 1];
    return (1 - fv) * ((1 - fu) * a + fu * b) + fv * ((1 - fu) * c + fu * d);
  }
};

namespace detail {

inline std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

// 1D Dirichlet-Laplacian eigenvalue for mode j (0-based) on n interior nodes.
inline double dirichlet_eigenvalue(int n, int j) {
  double s = std::sin(0.5 * M_PI * (j + 1) / (n + 1));
  return 4.0 * s * s;
}

// Orthonormal 1D eigenvector entry: e_j(i) = sqrt(2/(n+1)) sin(pi(i+1)(j+1)/(n+1)).
inline double dirichlet_eigenvector(int n, int j, int i) {
  return std::sqrt(2.0 / (n + 1)) *
         std::sin(M_PI * (i + 1.0) * (j + 1.0) / (n + 1));
}

inline constexpr int kMaxFieldSide = 4096;  // memory cap: 128 MiB of doubles

}  // namespace detail

inline double circle_average(const FieldGrid& f, Point z, double r);

// Zero-boundary GFF, exact in the spectral sense: independent N(0,1) mode
// amplitudes scaled by lambda^{-1/2}, transformed to the lattice by a type-I
// DST. Covariance of the raw field is the inverse Dirichlet Laplacian.
inline FieldGrid sample_field(int n, std::uint64_t seed, Normalization nrm,
                              double calibration = 1.0) {
  if (n < 8) throw std::invalid_argument("sample_field: n must be >= 8");
  if (n > detail::kMaxFieldSide)
    throw std::invalid_argument("sample_field: n exceeds the memory cap");

  GaussianStream g(seed);
  std::vector<double> coeff(static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    double lj = detail::dirichlet_eigenvalue(n, j);
    for (int k = 0; k < n; ++k) {
      double lk = detail::dirichlet_eigenvalue(n, k);
      coeff[static_cast<size_t>(j) * n + k] = g() / std::sqrt(lj + lk);
    }
  }

  FieldGrid f;
  f.geom = GridGeometry::make(n);
  f.values.assign(static_cast<size_t>(n) * n, 0.0);
  f.seed = seed;
  f.calibration = calibration;
  f.normalization = nrm;

  {
    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
      plan = fftw_plan_r2r_2d(n, n, coeff.data(), f.values.data(),
                              FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
      std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
      fftw_destroy_plan(plan);
    }
  }

  // FFTW's RODFT00 carries a factor 2 per dimension; fold in the orthonormal
  // eigenvector normalization sqrt(2/(n+1)) per dimension.
  double scale = calibration / (2.0 * (n + 1));
  for (double& v : f.values) v *= scale;

  if (nrm.kind == Normalization::Kind::PinnedCircleAverage) {
    double a = circle_average(f, Point{0.0, 0.0}, nrm.pin_radius);
    for (double& v : f.values) v -= a;
  }
  return f;
}

inline FieldGrid zero_field(int n) {
  FieldGrid f;
  f.geom = GridGeometry::make(n);
  f.values.assign(static_cast<size_t>(n) * n, 0.0);
  f.normalization = Normalization::raw();
  return f;
}

// Mean of the interpolated field over the circle of radius r about z,
// uniform angular quadrature with at least 64 nodes.
inline double circle_average(const FieldGrid& f, Point z, double r) {
  if (r < 2.0 * f.geom.spacing)
    throw std::invalid_argument("circle_average: radius below resolution");
  if (f.geom.hull_clearance(z) < r)
    throw std::invalid_argument("circle_average: circle leaves the grid");
  int m = std::max(64, static_cast<int>(
                           std::ceil(2.0 * M_PI * r / f.geom.spacing)));
  double sum = 0.0;
  for (int k = 0; k < m; ++k) {
    double a = 2.0 * M_PI * k / m;
    sum += f.interpolate(Point{z.x + r * std::cos(a), z.y + r * std::sin(a)});
  }
  return sum / m;
}

// Radii ladder used for circle-average variance regressions.
inline std::vector<double> calibration_radii(const GridGeometry& geom,
                                             int count = 10) {
  double lo = 8.0 * geom.spacing;
  double hi = std::max(0.25, 2.0 * lo);
  if (geom.hull_clearance(Point{0, 0}) <= hi)
    hi = 0.95 * geom.hull_clearance(Point{0, 0});
  if (hi <= lo) throw std::invalid_argument("grid too small to calibrate");
  std::vector<double> radii(count);
  for (int i = 0; i < count; ++i)
    radii[i] = lo * std::pow(hi / lo, i / (count - 1.0));
  return radii;
}

// Slope kappa of empirical Var(h_r(0)) against log(1/r) for an arbitrary
// field source; the calibration factor is kappa^{-1/2}.
inline double calibrate_with(
    const std::function<FieldGrid(std::uint64_t)>& sampler, int replicates,
    std::uint64_t seed) {
  if (replicates < 100)
    throw std::invalid_argument("calibrate: needs at least 100 replicates");
  FieldGrid probe = sampler(mix_seed(seed, 0));
  std::vector<double> radii = calibration_radii(probe.geom);
  const size_t nr = radii.size();

  std::vector<double> sum(nr, 0.0), sumsq(nr, 0.0);
  for (int rep = 0; rep < replicates; ++rep) {
    FieldGrid f = rep == 0 ? std::move(probe) : sampler(mix_seed(seed, rep));
    for (size_t i = 0; i < nr; ++i) {
      double h = circle_average(f, Point{0, 0}, radii[i]);
      sum[i] += h;
      sumsq[i] += h * h;
    }
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < nr; ++i) {
    double mean = sum[i] / replicates;
    double var = sumsq[i] / replicates - mean * mean;
    double x = std::log(1.0 / radii[i]);
    sx += x;
    sy += var;
    sxx += x * x;
    sxy += x * var;
  }
  double denom = nr * sxx - sx * sx;
  double kappa = (nr * sxy - sx * sy) / denom;
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw std::runtime_error("calibrate: degenerate variance regression");
  return 1.0 / std::sqrt(kappa);
}

// Calibration factor for the raw sampler at size n.
inline double calibrate(int n, int replicates, std::uint64_t seed) {
  return calibrate_with(
      [n](std::uint64_t s) { return sample_field(n, s, Normalization::raw()); },
      replicates, seed);
}

// Pointwise sum with a deterministic function evaluated at cell centers.
inline FieldGrid add_function(const FieldGrid& f,
                              const std::function<double(Point)>& g) {
  FieldGrid out = f;
  out.derived = true;
  const int n = f.geom.n;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      double v = g(f.geom.center(Cell{x, y}));
      if (!std::isfinite(v))
        throw std::invalid_argument("add_function: non-finite value");
      out.values[static_cast<size_t>(y) * n + x] += v;
    }
  return out;
}

// Smooth radial profile: 0 inside radius `scale` and outside 4*scale,
// exactly 1 on the annulus [2*scale, 3*scale], C^2 quintic ramps between.
struct RadialBump {
  Point center{0.0, 0.0};
  double scale = 0.1;

  static double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
  }

  double value_at_radius(double r) const {
    if (r <= scale || r >= 4.0 * scale) return 0.0;
    if (r < 2.0 * scale) return smoothstep(r / scale - 1.0);
    if (r <= 3.0 * scale) return 1.0;
    return smoothstep(4.0 - r / scale);
  }

  double operator()(Point p) const {
    return value_at_radius(euclid_dist(p, center));
  }
};

// Covariance of the raw sampler accumulated directly from the eigenbasis,
// as a dense (n^2 x n^2) matrix. Cross-checked against the dense
// Green's-function oracle; n is capped accordingly.
inline std::vector<double> sampler_covariance_dense(int n) {
  if (n > 24)
    throw std::invalid_argument("sampler_covariance_dense: n capped at 24");
  const int N = n * n;
  std::vector<double> cov(static_cast<size_t>(N) * N, 0.0);
  std::vector<double> mode(N);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      double lambda = detail::dirichlet_eigenvalue(n, j) +
                      detail::dirichlet_eigenvalue(n, k);
      for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
          mode[y * n + x] = detail::dirichlet_eigenvector(n, j, y) *
                            detail::dirichlet_eigenvector(n, k, x);
      double inv = 1.0 / lambda;
      for (int a = 0; a < N; ++a) {
        double ma = mode[a] * inv;
        double* row = cov.data() + static_cast<size_t>(a) * N;
        for (int b = 0; b < N; ++b) row[b] += ma * mode[b];
      }
    }
  }
  return cov;
}

}  // namespace lqg
