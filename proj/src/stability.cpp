#include "coexist/stability.hpp"

#include <cmath>

#include "coexist/errors.hpp"
#include "coexist/theory.hpp"

namespace coexist {

std::string_view to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::AsymptoticallyStable: return "AsymptoticallyStable";
        case StabilityClass::Saddle: return "Saddle";
        case StabilityClass::Source: return "Source";
        case StabilityClass::NonHyperbolic: return "NonHyperbolic";
    }
    return "?";
}

Jacobian2 orbit_jacobian(const MapParams& params, std::span<const Point2> points) {
    Jacobian2 m = Jacobian2::identity();
    for (const Point2& p : points) m = jacobian_f(params, p) * m;
    return m;
}

StabilityClass classify(double tau, double delta, double tol) {
    // Each edge line is where an eigenvalue sits on the unit circle:
    // delta = tau - 1 (mu = 1), delta = -tau - 1 (mu = -1), delta = 1 with
    // |tau| <= 2 (complex pair of modulus 1).
    if (std::abs(delta - tau + 1.0) <= tol || std::abs(delta + tau + 1.0) <= tol ||
        (std::abs(delta - 1.0) <= tol && std::abs(tau) <= 2.0 + tol))
        return StabilityClass::NonHyperbolic;

    if (delta < 1.0 - tol && delta > tau - 1.0 + tol && delta > -tau - 1.0 + tol)
        return StabilityClass::AsymptoticallyStable;

    const double disc = tau * tau - 4.0 * delta;
    // complex pair of modulus sqrt(delta); delta < 1 was caught by the triangle test
    if (disc < 0.0) return StabilityClass::Source;
    const double root = std::sqrt(disc);
    const double m1 = std::abs(0.5 * (tau + root));
    const double m2 = std::abs(0.5 * (tau - root));
    const bool out1 = m1 > 1.0;
    const bool out2 = m2 > 1.0;
    if (out1 && out2) return StabilityClass::Source;
    if (out1 != out2) return StabilityClass::Saddle;
    // both inside the unit circle but the strict triangle test failed: only
    // reachable inside the tolerance band
    return StabilityClass::NonHyperbolic;
}

AsymptoticPrediction predict_asymptotics(const MapParams& params) {
    const double delta = compute_Delta(params);
    if (delta < 0.0) throw NegativeDiscriminant(delta);
    const double ratio = params.c2 * params.y_star / params.x_star;
    const double root = std::sqrt(delta);
    return {1.0 - ratio - root, 1.0 - ratio + root, -ratio};
}

}  // namespace coexist
