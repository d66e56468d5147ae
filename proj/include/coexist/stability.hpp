#pragma once

#include <span>
#include <string_view>

#include "coexist/map.hpp"

namespace coexist {

enum class StabilityClass { AsymptoticallyStable, Saddle, Source, NonHyperbolic };

std::string_view to_string(StabilityClass c);

/// Distance from a triangle edge (or eigenvalue modulus from 1) below which
/// an orbit is reported NonHyperbolic.
inline constexpr double kStabilityTol = 1e-9;

/// Df(p_{n-1}) ... Df(p_0) over one period. Empty input gives the identity.
Jacobian2 orbit_jacobian(const MapParams& params, std::span<const Point2> points);

/// Position of (trace, det) relative to the stability triangle
/// |tau| - 1 < delta < 1.
StabilityClass classify(double tau, double delta, double tol = kStabilityTol);

/// Limits of (tau_k, delta_k) along the two SR_k branches as k grows.
struct AsymptoticPrediction {
    double tau_inf_minus = 0.0;
    double tau_inf_plus = 0.0;
    double delta_inf = 0.0;
};

/// tau_inf = 1 - c2 y*/x* -+ sqrt(Delta), delta_inf = -c2 y*/x*.
/// Throws NegativeDiscriminant when Delta < 0.
AsymptoticPrediction predict_asymptotics(const MapParams& params);

}  // namespace coexist
