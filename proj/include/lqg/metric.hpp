#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "lqg/formulas.hpp"
#include "lqg/gff.hpp"
#include "lqg/grid.hpp"

// Discrete gamma-LQG metric: shortest paths over exponentiated-field edge
// weights on the cell lattice. The global scale normalization of the
// continuum metric is omitted; every dimension statistic downstream is
// invariant under a global multiplicative rescaling.

namespace lqg {

enum class GraphTopology { EightNeighbor, FourNeighbor };
enum class EdgeCostRule { ArithMean, GeoMean };

inline constexpr double kInfDist = std::numeric_limits<double>::infinity();

struct WeightGrid {
  GridGeometry geom;
  double xi = 0.0;
  GraphTopology topology = GraphTopology::EightNeighbor;
  EdgeCostRule cost_rule = EdgeCostRule::ArithMean;
  std::vector<double> cell_cost;  // exp(xi * h(v)) per cell

  int neighbor_count() const {
    return topology == GraphTopology::EightNeighbor ? 8 : 4;
  }

  // dx, dy, unit Euclidean length per neighbor slot.
  static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  static constexpr double kUnit[8] = {1, 1, 1, 1,
                                      1.4142135623730951, 1.4142135623730951,
                                      1.4142135623730951, 1.4142135623730951};

  double edge_cost(int a, int b, double unit) const {
    double w = cost_rule == EdgeCostRule::ArithMean
                   ? 0.5 * (cell_cost[a] + cell_cost[b])
                   : std::sqrt(cell_cost[a] * cell_cost[b]);
    return geom.spacing * unit * w;
  }
};

// Weyl scaling at the weight level: cell cost exp(xi h). Exponent range is
// checked rather than clamped; a clamp would silently distort the metric.
inline WeightGrid build_weights(const FieldGrid& f, const GammaParams& p,
                                GraphTopology topology = GraphTopology::EightNeighbor,
                                EdgeCostRule rule = EdgeCostRule::ArithMean) {
  WeightGrid w;
  w.geom = f.geom;
  w.xi = p.xi;
  w.topology = topology;
  w.cost_rule = rule;
  w.cell_cost.resize(f.values.size());
  for (size_t i = 0; i < f.values.size(); ++i) {
    double e = p.xi * f.values[i];
    if (!(std::abs(e) < 700.0))
      throw std::overflow_error("build_weights: xi*h outside exp range");
    w.cell_cost[i] = std::exp(e);
  }
  return w;
}

struct DistanceField {
  GridGeometry geom;
  CellSet sources;
  std::vector<double> dist;           // +inf where not settled
  std::vector<std::uint8_t> settled;  // popped with final distance
  std::vector<std::uint8_t> touched;  // settled or ever relaxed
  bool visited_all = false;
};

// Exact multi-source Dijkstra on the weighted lattice. With a cutoff, cells
// whose distance exceeds it stay unsettled (dist = +inf); `touched` records
// the frontier, which bounds the region the settled distances depend on.
inline DistanceField shortest_distances(const WeightGrid& w,
                                        const CellSet& sources,
                                        std::optional<double> cutoff = {},
                                        const std::vector<std::uint8_t>* region = nullptr) {
  if (sources.empty())
    throw std::invalid_argument("shortest_distances: empty source set");
  const int n = w.geom.n;
  const int N = n * n;

  DistanceField out;
  out.geom = w.geom;
  out.sources = sources;
  out.dist.assign(N, kInfDist);
  out.settled.assign(N, 0);
  out.touched.assign(N, 0);

  std::vector<double> tent(N, kInfDist);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  for (int s : sources) {
    if (s < 0 || s >= N)
      throw std::invalid_argument("shortest_distances: source outside grid");
    if (region && !(*region)[s])
      throw std::invalid_argument("shortest_distances: source outside region");
    tent[s] = 0.0;
    out.touched[s] = 1;
    pq.push({0.0, s});
  }

  const int deg = w.neighbor_count();
  int settled_count = 0;
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (out.settled[u] || d > tent[u]) continue;
    if (cutoff && d > *cutoff) break;
    out.settled[u] = 1;
    out.dist[u] = d;
    ++settled_count;
    int ux = u % n, uy = u / n;
    for (int k = 0; k < deg; ++k) {
      int vx = ux + WeightGrid::kDx[k], vy = uy + WeightGrid::kDy[k];
      if (vx < 0 || vx >= n || vy < 0 || vy >= n) continue;
      int v = vy * n + vx;
      if (out.settled[v]) continue;
      if (region && !(*region)[v]) continue;
      double nd = d + w.edge_cost(u, v, WeightGrid::kUnit[k]);
      if (nd < tent[v]) {
        tent[v] = nd;
        out.touched[v] = 1;
        pq.push({nd, v});
      }
    }
  }
  out.visited_all = settled_count == N;
  return out;
}

struct MetricBall {
  double radius = 0.0;
  std::vector<std::uint8_t> mask;  // dist <= radius
  CellSet boundary;                // in-ball cells with a 4-neighbor outside
  bool touches_frame = false;
};

// Ball membership is dist <= s; the boundary is the set of in-ball cells with
// at least one out-of-ball 4-neighbor inside the grid. Frame contact flags
// the sample as truncated instead of treating frame cells as boundary.
inline MetricBall metric_ball(const DistanceField& d, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("metric_ball: radius must be positive");
  const int n = d.geom.n;
  const int N = n * n;
  MetricBall ball;
  ball.radius = s;
  ball.mask.assign(N, 0);
  for (int i = 0; i < N; ++i)
    if (d.settled[i] && d.dist[i] <= s) ball.mask[i] = 1;

  static constexpr int ddx[4] = {1, -1, 0, 0};
  static constexpr int ddy[4] = {0, 0, 1, -1};
  for (int i = 0; i < N; ++i) {
    if (!ball.mask[i]) continue;
    Cell c = d.geom.cell(i);
    if (d.geom.on_frame(c)) ball.touches_frame = true;
    for (int k = 0; k < 4; ++k) {
      Cell nb{c.x + ddx[k], c.y + ddy[k]};
      if (!d.geom.contains(nb)) continue;
      if (!ball.mask[d.geom.index(nb)]) {
        ball.boundary.push_back(i);
        break;
      }
    }
  }
  return ball;
}

struct DiameterEstimate {
  double value = 0.0;
  bool lower_bound = true;  // two-sweep heuristic reports a certified lower bound
};

namespace detail {

inline std::vector<std::uint8_t> region_mask(const GridGeometry& geom,
                                             const CellSet& region) {
  std::vector<std::uint8_t> mask(geom.cell_count(), 0);
  for (int i : region) {
    if (i < 0 || i >= geom.cell_count())
      throw std::invalid_argument("region cell outside grid");
    mask[i] = 1;
  }
  return mask;
}

inline void check_region_connected(const WeightGrid& w,
                                   const std::vector<std::uint8_t>& mask,
                                   const CellSet& region) {
  if (region.empty())
    throw std::invalid_argument("internal_diameter: empty region");
  DistanceField d = shortest_distances(w, {region.front()}, {}, &mask);
  for (int i : region)
    if (!d.settled[i])
      throw std::invalid_argument("internal_diameter: region disconnected");
}

}  // namespace detail

// Internal diameter of a region: two Dijkstra sweeps restricted to the
// region. Exact on paths and trees, a lower bound in general.
inline DiameterEstimate internal_diameter(const WeightGrid& w,
                                          const CellSet& region) {
  auto mask = detail::region_mask(w.geom, region);
  detail::check_region_connected(w, mask, region);
  if (region.size() == 1) return {0.0, true};

  DistanceField first = shortest_distances(w, {region.front()}, {}, &mask);
  int far = region.front();
  for (int i : region)
    if (first.dist[i] > first.dist[far]) far = i;
  DistanceField second = shortest_distances(w, {far}, {}, &mask);
  double best = 0.0;
  for (int i : region) best = std::max(best, second.dist[i]);
  return {best, true};
}

struct ThetaProfile {
  std::vector<double> xs;
  std::vector<double> thetas;  // distance k1 -> k2 under h + x*bump
  RadialBump bump;
  double annulus_gap = 0.0;  // base-field distance across the plateau annulus
};

namespace detail {

inline double set_distance(const WeightGrid& w, const CellSet& from,
                           const CellSet& to) {
  DistanceField d = shortest_distances(w, from);
  double best = kInfDist;
  for (int i : to) best = std::min(best, d.dist[i]);
  return best;
}

}  // namespace detail

// Distance profile x -> D_{h+x*phi}(K1, K2) for a radial bump whose plateau
// annulus separates K1 from K2. The reported annulus_gap is the base-field
// distance between thin cell bands hugging the plateau's inner and outer
// radii; any K1->K2 path must cross both bands, so
//   theta(y) - theta(x) >= (e^{xi y} - e^{xi x}) * annulus_gap for y > x >= 0.
inline ThetaProfile theta_profile(const FieldGrid& f, const GammaParams& p,
                                  const RadialBump& bump,
                                  const std::vector<double>& xs,
                                  const CellSet& k1, const CellSet& k2,
                                  GraphTopology topology = GraphTopology::EightNeighbor,
                                  EdgeCostRule rule = EdgeCostRule::ArithMean) {
  const double band = 1.5 * f.geom.spacing;
  if (bump.scale < 4.0 * f.geom.spacing)
    throw std::invalid_argument("theta_profile: bump scale below resolution");
  if (std::max(std::abs(bump.center.x), std::abs(bump.center.y)) +
          3.0 * bump.scale >
      1.0 - f.geom.spacing)
    throw std::invalid_argument("theta_profile: plateau annulus leaves the grid");
  for (int i : k1)
    if (euclid_dist(f.geom.center(i), bump.center) >= 2.0 * bump.scale)
      throw std::invalid_argument("theta_profile: k1 must sit inside the plateau annulus");
  for (int i : k2)
    if (euclid_dist(f.geom.center(i), bump.center) <= 3.0 * bump.scale)
      throw std::invalid_argument("theta_profile: k2 must sit outside the plateau annulus");

  ThetaProfile prof;
  prof.xs = xs;
  prof.bump = bump;

  CellSet inner, outer;
  for (int i = 0; i < f.geom.cell_count(); ++i) {
    double r = euclid_dist(f.geom.center(i), bump.center);
    if (r >= 2.0 * bump.scale && r <= 2.0 * bump.scale + band) inner.push_back(i);
    if (r >= 3.0 * bump.scale - band && r <= 3.0 * bump.scale) outer.push_back(i);
  }
  if (inner.empty() || outer.empty())
    throw std::invalid_argument("theta_profile: annulus bands empty");

  WeightGrid base = build_weights(f, p, topology, rule);
  prof.annulus_gap = detail::set_distance(base, inner, outer);

  for (double x : xs) {
    FieldGrid shifted =
        add_function(f, [&](Point pt) { return x * bump(pt); });
    WeightGrid w = build_weights(shifted, p, topology, rule);
    prof.thetas.push_back(detail::set_distance(w, k1, k2));
  }
  return prof;
}

}  // namespace lqg
