#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lqg/formulas.hpp"
#include "lqg/fractal.hpp"
#include "lqg/gff.hpp"
#include "lqg/metric.hpp"

// Thickness classification of points: circle-average slopes (alpha-thick
// points) and local metric-diameter slopes (metric alpha-thick points), plus
// the thick-point spectrum of a metric-ball boundary and the one-point
// boundary event used for exponent estimation.

namespace lqg {

struct AlphaEstimate {
  int point = -1;  // linear cell index
  double alpha_circle = std::numeric_limits<double>::quiet_NaN();
  double alpha_metric = std::numeric_limits<double>::quiet_NaN();
  int n_scales = 0;
};

namespace detail {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

inline LineFit linear_fit(const std::vector<double>& xs,
                          const std::vector<double>& ys) {
  const size_t m = xs.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < m; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("linear_fit: degenerate xs");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace detail

// Finite-scale surrogate for circle-average thickness: OLS slope of h_r(z)
// against log(1/r) over the given radii.
inline std::vector<AlphaEstimate> classify_alpha(
    const FieldGrid& f, const CellSet& points,
    const std::vector<double>& radii) {
  if (radii.size() < 3)
    throw std::invalid_argument("classify_alpha: needs at least 3 radii");
  std::vector<double> xs(radii.size());
  for (size_t i = 0; i < radii.size(); ++i) xs[i] = std::log(1.0 / radii[i]);

  std::vector<AlphaEstimate> out;
  out.reserve(points.size());
  std::vector<double> ys(radii.size());
  for (int idx : points) {
    Point z = f.geom.center(idx);
    for (size_t i = 0; i < radii.size(); ++i)
      ys[i] = circle_average(f, z, radii[i]);
    AlphaEstimate est;
    est.point = idx;
    est.alpha_circle = detail::linear_fit(xs, ys).slope;
    est.n_scales = static_cast<int>(radii.size());
    out.push_back(est);
  }
  return out;
}

// Metric thickness surrogate: the diameter of B_r(z) scales like
// r^{xi(Q-alpha)}, so alpha = Q - slope/xi with slope from the regression of
// log internal_diameter(B_r(z)) against log r. Raw slopes, no recentering;
// the discrete metric's missing scale prefactor shifts all values by a
// common constant that callers may subtract (see MetricRecenter).
inline std::vector<AlphaEstimate> classify_metric_alpha(
    const WeightGrid& w, const GammaParams& p, const CellSet& points,
    const std::vector<double>& radii) {
  if (radii.size() < 3)
    throw std::invalid_argument("classify_metric_alpha: needs at least 3 radii");
  for (double r : radii)
    if (r < 4.0 * w.geom.spacing)
      throw std::invalid_argument("classify_metric_alpha: radius below resolution");

  std::vector<double> xs(radii.size());
  for (size_t i = 0; i < radii.size(); ++i) xs[i] = std::log(radii[i]);

  std::vector<AlphaEstimate> out;
  out.reserve(points.size());
  std::vector<double> ys(radii.size());
  for (int idx : points) {
    Point z = w.geom.center(idx);
    for (size_t i = 0; i < radii.size(); ++i) {
      if (w.geom.hull_clearance(z) < radii[i])
        throw std::invalid_argument("classify_metric_alpha: ball leaves grid");
      CellSet region = w.geom.cells_within(z, radii[i]);
      ys[i] = std::log(internal_diameter(w, region).value);
    }
    AlphaEstimate est;
    est.point = idx;
    est.alpha_metric = p.q - detail::linear_fit(xs, ys).slope / p.xi;
    est.n_scales = static_cast<int>(radii.size());
    out.push_back(est);
  }
  return out;
}

// Offset between the discrete diameter-scaling convention and the continuum
// one, estimated once per (gamma, grid) from typical points:
//   exponent_shift = xi*Q - median raw log-diameter slope,
//   log_prefactor  = median raw intercept.
// Corrected diameters read log d~ = log d + exponent_shift*log(eps)
//                                    - log_prefactor.
struct MetricRecenter {
  double exponent_shift = 0.0;
  double log_prefactor = 0.0;
};

inline MetricRecenter estimate_metric_recenter(
    const std::vector<const WeightGrid*>& grids, const GammaParams& p,
    const CellSet& typical_points, const std::vector<double>& radii) {
  std::vector<double> slopes, intercepts;
  std::vector<double> xs(radii.size()), ys(radii.size());
  for (size_t i = 0; i < radii.size(); ++i) xs[i] = std::log(radii[i]);
  for (const WeightGrid* w : grids) {
    for (int idx : typical_points) {
      Point z = w->geom.center(idx);
      for (size_t i = 0; i < radii.size(); ++i) {
        CellSet region = w->geom.cells_within(z, radii[i]);
        ys[i] = std::log(internal_diameter(*w, region).value);
      }
      auto fit = detail::linear_fit(xs, ys);
      slopes.push_back(fit.slope);
      intercepts.push_back(fit.intercept);
    }
  }
  if (slopes.empty())
    throw std::invalid_argument("estimate_metric_recenter: no samples");
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t m = v.size();
    return m % 2 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
  };
  MetricRecenter rc;
  rc.exponent_shift = p.xi * p.q - median(slopes);
  rc.log_prefactor = median(intercepts);
  return rc;
}

struct SpectrumResult {
  std::vector<double> alpha_bins;  // bin centers
  std::vector<long long> counts;
  std::vector<std::optional<DimensionEstimate>> bin_dims;
};

struct SpectrumOptions {
  int n_radii = 8;
  double r_min_factor = 3.0;  // in units of spacing
  double r_max = 0.25;
  int min_cells_for_fit = 20;
  std::vector<double> box_scales;  // defaults to dyadic ladder if empty
};

namespace detail {

inline std::vector<double> default_box_scales(const GridGeometry& geom,
                                              Rect extent) {
  std::vector<double> scales;
  double hi = extent.width() / 8.0;
  double lo = 8.0 * geom.spacing;
  for (double s = hi; s >= lo * (1.0 - 1e-12); s *= 0.5) scales.push_back(s);
  return scales;
}

}  // namespace detail

// Classify every boundary cell by circle-average thickness, bin over the
// given range (default: observed range), and box-count each bin subset that
// is large enough to fit.
inline SpectrumResult boundary_spectrum(
    const FieldGrid& f, const WeightGrid& w, const GammaParams& p,
    const MetricBall& ball, int bins,
    std::optional<std::pair<double, double>> range = {},
    const SpectrumOptions& opt = {}) {
  (void)w;
  (void)p;
  if (ball.touches_frame)
    throw std::invalid_argument("boundary_spectrum: truncated ball");
  if (bins < 1) throw std::invalid_argument("boundary_spectrum: bins < 1");

  // Restrict to the measurement window, where the zero-boundary surrogate
  // matches the whole-plane field.
  Rect window = measurement_window();
  CellSet cells;
  for (int i : ball.boundary)
    if (window.contains(f.geom.center(i))) cells.push_back(i);
  if (cells.size() < 100)
    throw std::invalid_argument("boundary_spectrum: fewer than 100 usable boundary cells");

  std::vector<double> radii(opt.n_radii);
  double r_lo = opt.r_min_factor * f.geom.spacing;
  double r_hi = opt.r_max;
  if (!(r_hi > r_lo))
    throw std::invalid_argument("boundary_spectrum: radius window empty");
  for (int i = 0; i < opt.n_radii; ++i)
    radii[i] = r_lo * std::pow(r_hi / r_lo, i / (opt.n_radii - 1.0));

  std::vector<AlphaEstimate> alphas = classify_alpha(f, cells, radii);

  double lo, hi;
  if (range) {
    lo = range->first;
    hi = range->second;
  } else {
    lo = alphas.front().alpha_circle;
    hi = lo;
    for (const auto& a : alphas) {
      lo = std::min(lo, a.alpha_circle);
      hi = std::max(hi, a.alpha_circle);
    }
    hi += 1e-9;  // half-open bins; keep the max inside
  }
  double width = (hi - lo) / bins;
  if (!(width > 0.0))
    throw std::invalid_argument("boundary_spectrum: empty alpha range");

  SpectrumResult res;
  res.alpha_bins.resize(bins);
  res.counts.assign(bins, 0);
  res.bin_dims.assign(bins, std::nullopt);
  for (int b = 0; b < bins; ++b) res.alpha_bins[b] = lo + (b + 0.5) * width;

  std::vector<CellSet> members(bins);
  for (const auto& a : alphas) {
    int b = static_cast<int>(std::floor((a.alpha_circle - lo) / width));
    b = std::clamp(b, 0, bins - 1);  // out-of-range mass lands in end bins
    res.counts[b]++;
    members[b].push_back(a.point);
  }

  std::vector<double> scales =
      opt.box_scales.empty() ? detail::default_box_scales(f.geom, window)
                             : opt.box_scales;
  for (int b = 0; b < bins; ++b) {
    if (res.counts[b] < opt.min_cells_for_fit) continue;
    auto pairs = box_count(members[b], f.geom, window, scales);
    res.bin_dims[b] = fit_dimension(pairs);
  }
  return res;
}

// One-point boundary event at scale eps: the distance from the ball source
// lands within a shrinking bracket of s, and the corrected diameter of the
// eps-ball around z sits in the thickness bracket
// [eps^{xi(Q-a)+zeta}, eps^{xi(Q-a)-zeta}].
inline bool one_point_event(const DistanceField& d, const WeightGrid& w,
                            const GammaParams& p, int z, double eps,
                            double alpha, double zeta, double s,
                            const MetricRecenter& rc = {}) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("one_point_event: eps must be in (0,1)");
  Point zc = w.geom.center(z);
  if (w.geom.hull_clearance(zc) < eps)
    throw std::invalid_argument("one_point_event: eps-ball leaves grid");
  if (!d.settled[z]) return false;

  double expo = p.xi * (p.q - alpha);
  double log_eps = std::log(eps);

  CellSet region = w.geom.cells_within(zc, eps);
  double diam = internal_diameter(w, region).value;
  if (!(diam > 0.0)) return false;
  double log_diam_corr =
      std::log(diam) + rc.exponent_shift * log_eps - rc.log_prefactor;
  bool diam_ok = log_diam_corr <= (expo - zeta) * log_eps + 1e-12 &&
                 log_diam_corr >= (expo + zeta) * log_eps - 1e-12;

  // Distance bracket half-width, converted back to the discrete convention.
  double half_width = std::exp((expo - zeta) * log_eps -
                               rc.exponent_shift * log_eps + rc.log_prefactor);
  bool dist_ok = std::abs(d.dist[z] - s) <= half_width;
  return diam_ok && dist_ok;
}

}  // namespace lqg
