#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coexist/map.hpp"
#include "coexist/window.hpp"

namespace coexist {

struct RefineOptions {
    double max_gap = 1e-2;     ///< largest allowed distance between neighbours
    double max_angle = 0.2;    ///< largest turning angle (rad) at a vertex
    std::size_t budget = 2'000'000;
    double seed = 1e-4;        ///< fundamental segment offset y0 (or x0)
    double escape_radius = kDefaultEscapeRadius;
};

enum class CurveKind { Unstable, StableBranch };

std::string_view to_string(CurveKind k);

struct RefinementStats {
    std::size_t inserted_points = 0;
    double max_gap = 0.0;  ///< largest neighbour distance inside a piece
};

/// A traced manifold: one or more polyline pieces clipped to the window.
/// Each point carries the curve parameter it was evaluated at.
struct ManifoldCurve {
    CurveKind kind = CurveKind::Unstable;
    int index = 0;           ///< branch index of a stable-tree curve
    std::string label;       ///< inverse-branch chain, e.g. "U1.U0"
    std::vector<Point2> points;
    std::vector<double> params;
    std::vector<std::size_t> piece_starts;  ///< first point of each piece
    std::vector<int> piece_branch;          ///< evaluator branch of each piece
    double arc_length = 0.0;
    RefinementStats stats;
    bool partial = false;  ///< point budget ran out before refinement finished

    /// Re-evaluates the curve at (branch, parameter); empty when the
    /// parameter has no valid point. Absent for synthetic curves.
    std::function<std::optional<Point2>(int, double)> evaluate;

    std::size_t piece_count() const { return piece_starts.size(); }
    /// [begin, end) point range of piece i.
    std::pair<std::size_t, std::size_t> piece_range(std::size_t i) const;
};

/// Builds a single-piece curve from a bare polyline (params = point index).
ManifoldCurve polyline_curve(std::vector<Point2> points);

/// Unstable manifold of the origin grown from the y-axis seed segment
/// [(0, y0), (0, |sigma| y0)], one branch per half-axis that the dynamics
/// reaches (both when sigma < 0). The parameter rho maps to
/// f^floor(rho)(0, +-y0 |sigma|^frac(rho)), so rho in [0, n_images + 1].
ManifoldCurve trace_unstable(const MapParams& params, int n_images, const Window& clip,
                             const RefineOptions& options = {});

Point2 invert_U0(const MapParams& params, Point2 q);

/// Inverse of the U1 formula. Requires c1 = d3 = d4 = 0, c2 != 0, d1 != 0;
/// throws DegenerateCoefficients otherwise.
Point2 invert_U1(const MapParams& params, Point2 q);

struct BlendNewtonResult {
    Point2 point;
    int iterations = 0;
    double residual = 0.0;
};

/// 2D Newton on eval_blend(p) - q from one guess. Empty unless the residual
/// reaches 1e-10 at a point of the blend strip.
std::optional<BlendNewtonResult> invert_blend_newton(const MapParams& params, Point2 q,
                                                     Point2 guess, int max_iter = 50);

/// Every preimage of q in the blend strip found from the guesses (default:
/// the analytic U0 and U1 inverses) plus a scan of the strip, deduplicated
/// and sorted by y.
std::vector<Point2> invert_blend(const MapParams& params, Point2 q,
                                 const std::vector<Point2>& guesses = {});

/// Stable set of the origin as a preimage tree. Depth 0 is the fundamental
/// segment [x0, x0/lambda] (one per half-axis when lambda < 0). For depth >= 1
/// the root is the x-axis inside the clip and each tree node is one chain of
/// inverse branches U0, U1 or B<j> (j-th blend preimage by height).
std::vector<ManifoldCurve> trace_stable(const MapParams& params, int depth, const Window& clip,
                                        const RefineOptions& options = {});

enum class Contact { Transversal, Tangential };

std::string_view to_string(Contact c);

struct TangencyHit {
    Point2 location;
    Contact contact = Contact::Transversal;
    /// y''/x'^2 along the curve at the hit: positive when the curve is
    /// convex from above.
    double curvature_sign = 0.0;
};

/// Zeros of the curve's y-component: sign changes are Transversal, local
/// minima of |y| under axis_tol without a sign change are Tangential once
/// refined to |y| <= 1e-8. Refinement re-evaluates the curve when it carries
/// an evaluator and falls back to local polyline fits otherwise.
std::vector<TangencyHit> detect_tangencies(const ManifoldCurve& curve, double axis_tol = 1e-3);

}  // namespace coexist
