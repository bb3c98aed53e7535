#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

// Closed-form exponents and fractal-dimension predictions for the gamma-LQG
// metric. Everything here is pure arithmetic on (gamma, d_gamma); the rest of
// the library treats these values as the ground truth to compare estimates
// against.

namespace lqg {

inline constexpr double kSqrt83 = 1.6329931618554520654648560498;  // sqrt(8/3)

// Hausdorff dimension of the gamma-LQG plane. Known exactly only at
// gamma = sqrt(8/3); otherwise a model choice the caller must make.
struct DGammaModel {
  enum class Kind { ExactSqrt83, Watabiki, QuadraticGuess, UserSupplied };

  Kind kind = Kind::Watabiki;
  double user_value = 0.0;

  static DGammaModel exact_sqrt83() { return {Kind::ExactSqrt83, 0.0}; }
  static DGammaModel watabiki() { return {Kind::Watabiki, 0.0}; }
  static DGammaModel quadratic_guess() { return {Kind::QuadraticGuess, 0.0}; }
  static DGammaModel user(double d) { return {Kind::UserSupplied, d}; }

  // Accepts "exact", "watabiki", "quad", "user:<value>".
  static DGammaModel parse(const std::string& s) {
    if (s == "exact") return exact_sqrt83();
    if (s == "watabiki") return watabiki();
    if (s == "quad") return quadratic_guess();
    if (s.rfind("user:", 0) == 0) return user(std::stod(s.substr(5)));
    throw std::invalid_argument("unknown d_gamma model: " + s);
  }

  std::string name() const {
    switch (kind) {
      case Kind::ExactSqrt83: return "exact";
      case Kind::Watabiki: return "watabiki";
      case Kind::QuadraticGuess: return "quad";
      case Kind::UserSupplied: return "user:" + std::to_string(user_value);
    }
    return "?";
  }

  double evaluate(double gamma) const;
};

struct GammaParams {
  double gamma;    // LQG coupling, in (0,2)
  double d_gamma;  // Hausdorff dimension of the gamma-LQG plane, > 2
  double xi;       // gamma / d_gamma
  double q;        // 2/gamma + gamma/2
};

struct AlphaWindow {
  double lo;
  double hi;
};

inline void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma < 2.0))
    throw std::invalid_argument("gamma must lie in (0,2)");
}

inline double watabiki_dimension(double gamma) {
  check_gamma(gamma);
  double g2 = gamma * gamma;
  return 1.0 + g2 / 4.0 + 0.25 * std::sqrt((4.0 + g2) * (4.0 + g2) + 16.0 * g2);
}

inline double quadratic_guess_dimension(double gamma) {
  check_gamma(gamma);
  return 2.0 + gamma * gamma / 2.0 + gamma / std::sqrt(6.0);
}

inline double DGammaModel::evaluate(double gamma) const {
  check_gamma(gamma);
  switch (kind) {
    case Kind::ExactSqrt83:
      if (std::abs(gamma - kSqrt83) > 1e-12)
        throw std::invalid_argument(
            "exact d_gamma is only known at gamma = sqrt(8/3)");
      return 4.0;
    case Kind::Watabiki:
      return watabiki_dimension(gamma);
    case Kind::QuadraticGuess:
      return quadratic_guess_dimension(gamma);
    case Kind::UserSupplied:
      if (!(user_value > 2.0))
        throw std::invalid_argument("user-supplied d_gamma must exceed 2");
      return user_value;
  }
  throw std::logic_error("unreachable");
}

inline GammaParams make_params(double gamma, double d_gamma) {
  check_gamma(gamma);
  if (!(d_gamma > 2.0))
    throw std::invalid_argument("d_gamma must exceed 2");
  return GammaParams{gamma, d_gamma, gamma / d_gamma,
                     2.0 / gamma + gamma / 2.0};
}

inline GammaParams make_params(double gamma, const DGammaModel& model) {
  return make_params(gamma, model.evaluate(gamma));
}

// Euclidean dimension of a metric-ball boundary: 2 - xi*Q + xi^2/2.
inline double euclid_boundary_dim(const GammaParams& p) {
  return 2.0 - p.xi * p.q + 0.5 * p.xi * p.xi;
}

// Quantum dimension of a metric-ball boundary: d_gamma - 1.
inline double quantum_boundary_dim(const GammaParams& p) {
  return p.d_gamma - 1.0;
}

// Euclidean dimension of the alpha-thick subset of the boundary. Negative
// outside the admissible alpha window; callers interpret via is_in_window.
inline double thick_euclid_dim(const GammaParams& p, double alpha) {
  return 2.0 - p.xi * (p.q - alpha) - 0.5 * alpha * alpha;
}

// Quantum dimension of the alpha-thick subset: (2 - a^2/2)/(xi(Q-a)) - 1.
inline double thick_quantum_dim(const GammaParams& p, double alpha) {
  if (!(alpha < p.q))
    throw std::domain_error("thick_quantum_dim: alpha must be below Q");
  return (2.0 - 0.5 * alpha * alpha) / (p.xi * (p.q - alpha)) - 1.0;
}

inline AlphaWindow alpha_window(const GammaParams& p) {
  double disc = 4.0 - 2.0 * p.xi * p.q + p.xi * p.xi;
  if (!(disc > 0.0))
    throw std::domain_error("alpha_window: nonpositive discriminant");
  double half = std::sqrt(disc);
  return AlphaWindow{p.xi - half, p.xi + half};
}

inline bool is_in_window(const GammaParams& p, double alpha) {
  AlphaWindow w = alpha_window(p);
  return alpha > w.lo && alpha < w.hi;
}

// Decay exponent of the one-point boundary event: xi(Q-a) + a^2/2.
inline double one_point_exponent(const GammaParams& p, double alpha) {
  return p.xi * (p.q - alpha) + 0.5 * alpha * alpha;
}

// Decay exponent of the p-th diameter moment restricted to boundary boxes:
// (p+1) xi Q - (p+1)^2 xi^2 / 2, valid for 0 <= p <= 2 d_gamma/gamma - 1.
inline double moment_exponent(const GammaParams& p, double pexp) {
  double pmax = 2.0 * p.d_gamma / p.gamma - 1.0;
  if (!(pexp >= 0.0 && pexp <= pmax))
    throw std::domain_error("moment_exponent: p outside [0, 2 d/gamma - 1]");
  double m = pexp + 1.0;
  return m * p.xi * p.q - 0.5 * m * m * p.xi * p.xi;
}

// Tail exponent for ball diameters that are atypically large or small by a
// factor eps^{-xi alpha}: alpha^2/2.
inline double diam_tail_exponent(double alpha) { return 0.5 * alpha * alpha; }

}  // namespace lqg
