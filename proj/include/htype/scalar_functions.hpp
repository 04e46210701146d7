#pragma once

#include <cmath>

// Normalized scalar functions of θ = α|v| used by the geodesic formulas.
// Each one is an even entire function equal to 1 (or a simple constant) at
// θ = 0; below kSeriesThreshold a 5-term Taylor polynomial replaces the
// closed form, which cancels catastrophically near the removable singularity.
namespace htype::scalar {

inline constexpr double kSeriesThreshold = 0.1;

/// sin θ / θ
inline double sinc(double t) {
  if (std::abs(t) < kSeriesThreshold) {
    const double t2 = t * t;
    return 1.0 + t2 * (-1.0 / 6 + t2 * (1.0 / 120 + t2 * (-1.0 / 5040 + t2 * (1.0 / 362880))));
  }
  return std::sin(t) / t;
}

/// (cos θ - 1) / θ²
inline double cosm1_over_sq(double t) {
  if (std::abs(t) < kSeriesThreshold) {
    const double t2 = t * t;
    return -0.5 + t2 * (1.0 / 24 + t2 * (-1.0 / 720 + t2 * (1.0 / 40320 + t2 * (-1.0 / 3628800))));
  }
  return (std::cos(t) - 1.0) / (t * t);
}

/// 1 - sin θ / θ
inline double one_minus_sinc(double t) {
  if (std::abs(t) < kSeriesThreshold) {
    const double t2 = t * t;
    return t2 * (1.0 / 6 + t2 * (-1.0 / 120 + t2 * (1.0 / 5040 + t2 * (-1.0 / 362880 + t2 * (1.0 / 39916800)))));
  }
  return 1.0 - std::sin(t) / t;
}

/// 6 (θ - sin θ) / θ³, the vertical-displacement profile.
inline double vertical_profile(double t) {
  if (std::abs(t) < kSeriesThreshold) {
    const double t2 = t * t;
    return 1.0 + t2 * (-1.0 / 20 + t2 * (1.0 / 840 + t2 * (-1.0 / 60480 + t2 * (1.0 / 6652800))));
  }
  return 6.0 * (t - std::sin(t)) / (t * t * t);
}

/// sin(θ/2) / (θ/2); its square is |f(±iθ)|².
inline double half_sinc(double t) { return sinc(0.5 * t); }

/// 3 (sin φ - φ cos φ) / φ³ with φ = θ/2.
inline double half_angle_profile(double t) {
  const double phi = 0.5 * t;
  if (std::abs(phi) < kSeriesThreshold) {
    const double p2 = phi * phi;
    return 1.0 + p2 * (-1.0 / 10 + p2 * (1.0 / 280 + p2 * (-1.0 / 15120 + p2 * (1.0 / 1330560))));
  }
  return 3.0 * (std::sin(phi) - phi * std::cos(phi)) / (phi * phi * phi);
}

}  // namespace htype::scalar
