#pragma once

// Piecewise-smooth planar map with a quadratic homoclinic tangency:
//
//   f = U0                    for y <= h0   (linear saddle, near the origin)
//   f = (1 - r) U0 + r U1     for h0 < y < h1
//   f = U1                    for y >= h1   (global excursion)
//
// U1 is the truncated Taylor form of the global map about (0, y*), so the
// example family is the special case x* = y* = 1, c1 = d2 = d3 = d4 = 0.

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace coexist {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }

double norm_inf(Point2 p);
double norm2(Point2 p);

/// 2x2 matrix, row-major: [[a, b], [c, d]].
struct Jacobian2 {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    static Jacobian2 identity() { return {}; }
    double trace() const { return a + d; }
    double det() const { return a * d - b * c; }
    Point2 apply(Point2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }

    friend bool operator==(const Jacobian2&, const Jacobian2&) = default;
};

/// Matrix product lhs * rhs.
Jacobian2 operator*(const Jacobian2& lhs, const Jacobian2& rhs);

enum class Region { Lower, Blend, Upper };

std::string_view to_string(Region r);

/// Full parameterization of the map family plus the normal-form coefficients
/// that the theory checks consume.
struct MapParams {
    double lambda = 0.8;  ///< contracting eigenvalue, 0 < |lambda| < 1
    double sigma = 1.25;  ///< expanding eigenvalue, |sigma| > 1
    double c2 = -0.5;
    double d1 = 1.0;
    double d5 = 1.0;
    double h0 = 13.0 / 15.0;  ///< lower switching threshold
    double h1 = 14.0 / 15.0;  ///< upper switching threshold
    double x_star = 1.0;
    double y_star = 1.0;
    double a1 = 0.0;  ///< resonant coefficient of the x-row of T0
    double b1 = 0.0;  ///< resonant coefficient of the y-row of T0
    double c1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
    double d4 = 0.0;

    /// Example family with h0, h1 derived from |lambda|.
    static MapParams example(double lambda, double sigma, double d1, double c2 = -0.5,
                             double d5 = 1.0);

    /// Recompute h0 = (2|lambda|+1)/3 and h1 = (|lambda|+2)/3.
    void derive_thresholds();

    /// Throws std::invalid_argument when 0 < |lambda| < 1 < |sigma| or
    /// |lambda| < h0 < h1 < 1 fails.
    void validate() const;

    friend bool operator==(const MapParams&, const MapParams&) = default;
};

/// The four parameter sets of the example family, indexed 20..23.
MapParams parameter_set(int id);

double eval_s(double z);
double eval_r(const MapParams& params, double y);
/// dr/dy of the raw cubic (not clamped).
double eval_r_prime(const MapParams& params, double y);

Point2 eval_U0(const MapParams& params, Point2 p);
Point2 eval_U1(const MapParams& params, Point2 p);
/// The blend formula evaluated with the raw cubic r, regardless of region.
Point2 eval_blend(const MapParams& params, Point2 p);

Jacobian2 jacobian_U0(const MapParams& params, Point2 p);
Jacobian2 jacobian_U1(const MapParams& params, Point2 p);
Jacobian2 jacobian_blend(const MapParams& params, Point2 p);

/// Boundary points belong to the closed non-blend regions.
Region region_of(const MapParams& params, double y);

Point2 eval_f(const MapParams& params, Point2 p);
Jacobian2 jacobian_f(const MapParams& params, Point2 p);

inline constexpr double kDefaultEscapeRadius = 10.0;

struct Trajectory {
    std::vector<Point2> points;  ///< p, f(p), ... up to the last finite iterate
    std::optional<std::size_t> escaped_at;  ///< step whose iterate left the escape radius
};

/// [p, f(p), ..., f^n(p)], stopping early once ||.||_inf exceeds escape_radius.
Trajectory iterate_n(const MapParams& params, Point2 p, std::size_t n,
                     double escape_radius = kDefaultEscapeRadius);

/// f^n(p) without storing the trajectory. Returns nullopt on escape.
std::optional<Point2> iterate_to(const MapParams& params, Point2 p, std::size_t n,
                                 double escape_radius = kDefaultEscapeRadius);

/// Truncated resonant normal form of T0^k when lambda*sigma = 1:
/// (lambda^k x (1 + k a1 x y), lambda^-k y (1 + k b1 x y)).
Point2 eval_T0k_expansion(const MapParams& params, Point2 p, int k);

}  // namespace coexist
