#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "coexist/map.hpp"
#include "coexist/stability.hpp"

namespace coexist {

/// Which root of the SR_k fixed-point quadratic an orbit came from.
/// Minus is the branch that turns asymptotically stable for large k.
enum class Branch { Minus, Plus };

std::string_view to_string(Branch b);

/// Roots u = y_k - y* of the SR_k quadratic; absent when not real.
struct RootPair {
    std::optional<double> u_minus;
    std::optional<double> u_plus;
};

struct NewtonOptions {
    double tol = 1e-12;
    int max_iter = 50;
    int max_halvings = 20;
    double singular_tol = 1e-14;
    double minimality_tol = 1e-8;
    double escape_radius = kDefaultEscapeRadius;
};

/// Periodic orbit produced by the Newton solver.
struct PeriodicOrbit {
    std::vector<Point2> points;  ///< p0, f(p0), ..., f^{period-1}(p0)
    std::size_t period = 0;
    /// Smallest divisor d of period with ||f^d(p0) - p0|| <= minimality_tol.
    std::size_t minimal_period = 0;
    double residual = 0.0;  ///< ||f^period(p0) - p0||_inf
    double trace = 0.0;
    double det = 0.0;
    StabilityClass stability = StabilityClass::NonHyperbolic;
    int iterations = 0;
    std::vector<Region> itinerary;
};

/// Single-round periodic solution: one excursion point in the Upper region
/// followed by k points in the Lower region.
struct SRkOrbit {
    int k = 0;
    std::size_t period = 0;      ///< k + 1
    std::vector<Point2> points;  ///< starts at the Upper-region point
    Branch branch = Branch::Minus;
    double residual = 0.0;
    double trace = 0.0;
    double det = 0.0;
    StabilityClass stability = StabilityClass::NonHyperbolic;
};

/// Real roots of
///   A u^2 + B u + C = 0,  X(u) = lambda^k (x* + c2 u) / (1 - c1 lambda^k),
///   y* + u = sigma^k (d1 X + d2 u + d3 X^2 + d4 X u + d5 u^2),
/// which reduces to sigma^k d5 u^2 + ((lambda sigma)^k d1 c2 - 1) u
/// + ((lambda sigma)^k d1 - 1) = 0 for the example family.
/// u_minus = (-B - sqrt(B^2 - 4AC)) / (2A). Requires d5 != 0.
RootPair srk_quadratic(const MapParams& params, int k);

/// Upper point (X(u), y* + u) followed by its k images under f.
std::vector<Point2> closed_form_points(const MapParams& params, int k, double u);

std::vector<Region> itinerary_of(const MapParams& params, const std::vector<Point2>& points);

/// Builds and validates the SR_k orbit for root u. Throws ItineraryInvalid
/// when a point falls outside the Upper-then-k-Lower itinerary.
SRkOrbit assemble_orbit(const MapParams& params, int k, double u, Branch branch = Branch::Minus,
                        const NewtonOptions& options = {});

/// Newton on g(p) = f^period(p) - p with chain-rule Jacobians and step halving.
/// Throws NoConvergence, SingularJacobian or Escaped.
PeriodicOrbit find_periodic_newton(const MapParams& params, Point2 seed, std::size_t period,
                                   const NewtonOptions& options = {});

enum class BranchStatus {
    NoRealRoot,
    Found,              ///< closed form valid under the full map
    ItineraryInvalid,   ///< closed form leaves the itinerary outside the blend strip
    FallbackFound,      ///< closed form hit the blend strip; Newton found a distinct orbit
    FallbackFailed,     ///< closed form hit the blend strip; Newton found nothing new
};

std::string_view to_string(BranchStatus s);

struct BranchResult {
    Branch branch = Branch::Minus;
    BranchStatus status = BranchStatus::NoRealRoot;
    std::optional<double> root;
    std::optional<SRkOrbit> orbit;          ///< set when status == Found
    std::optional<PeriodicOrbit> fallback;  ///< set when status == FallbackFound
};

struct ScanEntry {
    int k = 0;
    std::array<BranchResult, 2> branches;  ///< [Minus, Plus]

    const BranchResult& minus() const { return branches[0]; }
    const BranchResult& plus() const { return branches[1]; }
};

struct ScanResult {
    std::vector<ScanEntry> entries;  ///< ordered by k

    /// Every valid SR_k orbit, ordered by (k, branch).
    std::vector<SRkOrbit> orbits() const;
    /// Valid SR_k orbits with the given stability class.
    std::vector<SRkOrbit> orbits_with(StabilityClass c) const;
};

/// Closed-form solve for each k in [k_min, k_max] on both branches, with a
/// Newton fallback seeded by the closed form when only blend-strip points
/// break the itinerary.
ScanResult scan_srk(const MapParams& params, int k_min, int k_max,
                    const NewtonOptions& options = {});

}  // namespace coexist
