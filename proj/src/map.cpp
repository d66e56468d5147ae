#include "coexist/map.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "coexist/errors.hpp"

namespace coexist {

double norm_inf(Point2 p) { return std::max(std::abs(p.x), std::abs(p.y)); }

double norm2(Point2 p) { return std::hypot(p.x, p.y); }

Jacobian2 operator*(const Jacobian2& l, const Jacobian2& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
            l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
}

std::string_view to_string(Region r) {
    switch (r) {
        case Region::Lower: return "Lower";
        case Region::Blend: return "Blend";
        case Region::Upper: return "Upper";
    }
    return "?";
}

MapParams MapParams::example(double lambda, double sigma, double d1, double c2, double d5) {
    MapParams p;
    p.lambda = lambda;
    p.sigma = sigma;
    p.d1 = d1;
    p.c2 = c2;
    p.d5 = d5;
    p.derive_thresholds();
    return p;
}

void MapParams::derive_thresholds() {
    const double l = std::abs(lambda);
    h0 = (2.0 * l + 1.0) / 3.0;
    h1 = (l + 2.0) / 3.0;
}

void MapParams::validate() const {
    const double l = std::abs(lambda);
    const double s = std::abs(sigma);
    if (!(l > 0.0 && l < 1.0 && s > 1.0))
        throw std::invalid_argument("eigenvalues must satisfy 0 < |lambda| < 1 < |sigma|");
    if (!(l < h0 && h0 < h1 && h1 < 1.0))
        throw std::invalid_argument("switching thresholds must satisfy |lambda| < h0 < h1 < 1");
    if (!(x_star > 0.0 && y_star > 0.0))
        throw std::invalid_argument("homoclinic point coordinates x*, y* must be positive");
}

MapParams parameter_set(int id) {
    switch (id) {
        case 20: return MapParams::example(0.8, 1.25, 1.0);
        case 21: return MapParams::example(-0.8, -1.25, 1.0);
        case 22: return MapParams::example(0.8, -1.25, 1.0);
        case 23: return MapParams::example(-0.8, 1.25, -1.0);
    }
    throw std::out_of_range("unknown parameter set " + std::to_string(id));
}

double eval_s(double z) { return 3.0 * z * z - 2.0 * z * z * z; }

double eval_r(const MapParams& params, double y) {
    return eval_s((y - params.h0) / (params.h1 - params.h0));
}

double eval_r_prime(const MapParams& params, double y) {
    const double w = params.h1 - params.h0;
    const double z = (y - params.h0) / w;
    return (6.0 * z - 6.0 * z * z) / w;
}

Point2 eval_U0(const MapParams& params, Point2 p) {
    return {params.lambda * p.x, params.sigma * p.y};
}

Point2 eval_U1(const MapParams& params, Point2 p) {
    const double u = p.y - params.y_star;
    return {params.x_star + params.c1 * p.x + params.c2 * u,
            params.d1 * p.x + params.d2 * u + params.d3 * p.x * p.x + params.d4 * p.x * u +
                params.d5 * u * u};
}

Point2 eval_blend(const MapParams& params, Point2 p) {
    const double r = eval_r(params, p.y);
    const Point2 a = eval_U0(params, p);
    const Point2 b = eval_U1(params, p);
    return {(1.0 - r) * a.x + r * b.x, (1.0 - r) * a.y + r * b.y};
}

Jacobian2 jacobian_U0(const MapParams& params, Point2) {
    return {params.lambda, 0.0, 0.0, params.sigma};
}

Jacobian2 jacobian_U1(const MapParams& params, Point2 p) {
    const double u = p.y - params.y_star;
    return {params.c1, params.c2,
            params.d1 + 2.0 * params.d3 * p.x + params.d4 * u,
            params.d2 + params.d4 * p.x + 2.0 * params.d5 * u};
}

Jacobian2 jacobian_blend(const MapParams& params, Point2 p) {
    const double r = eval_r(params, p.y);
    const double rp = eval_r_prime(params, p.y);
    const Jacobian2 j0 = jacobian_U0(params, p);
    const Jacobian2 j1 = jacobian_U1(params, p);
    const Point2 gap = eval_U1(params, p) - eval_U0(params, p);
    // (1-r) DU0 + r DU1 + r'(y) (U1 - U0) e_y^T
    return {(1.0 - r) * j0.a + r * j1.a, (1.0 - r) * j0.b + r * j1.b + rp * gap.x,
            (1.0 - r) * j0.c + r * j1.c, (1.0 - r) * j0.d + r * j1.d + rp * gap.y};
}

Region region_of(const MapParams& params, double y) {
    if (y <= params.h0) return Region::Lower;
    if (y >= params.h1) return Region::Upper;
    return Region::Blend;
}

Point2 eval_f(const MapParams& params, Point2 p) {
    switch (region_of(params, p.y)) {
        case Region::Lower: return eval_U0(params, p);
        case Region::Upper: return eval_U1(params, p);
        case Region::Blend: break;
    }
    return eval_blend(params, p);
}

Jacobian2 jacobian_f(const MapParams& params, Point2 p) {
    switch (region_of(params, p.y)) {
        case Region::Lower: return jacobian_U0(params, p);
        case Region::Upper: return jacobian_U1(params, p);
        case Region::Blend: break;
    }
    return jacobian_blend(params, p);
}

Trajectory iterate_n(const MapParams& params, Point2 p, std::size_t n, double escape_radius) {
    Trajectory t;
    t.points.reserve(n + 1);
    t.points.push_back(p);
    for (std::size_t i = 1; i <= n; ++i) {
        p = eval_f(params, p);
        if (!(norm_inf(p) <= escape_radius)) {
            t.escaped_at = i;
            break;
        }
        t.points.push_back(p);
    }
    return t;
}

std::optional<Point2> iterate_to(const MapParams& params, Point2 p, std::size_t n,
                                 double escape_radius) {
    for (std::size_t i = 0; i < n; ++i) {
        p = eval_f(params, p);
        if (!(norm_inf(p) <= escape_radius)) return std::nullopt;
    }
    return p;
}

Point2 eval_T0k_expansion(const MapParams& params, Point2 p, int k) {
    const double ls = params.lambda * params.sigma;
    if (std::abs(ls - 1.0) > 1e-12) throw ResonanceFormUnavailable(ls);
    if (k == 0) return p;
    const double lk = std::pow(params.lambda, k);
    const double xy = p.x * p.y;
    return {lk * p.x * (1.0 + k * params.a1 * xy), p.y / lk * (1.0 + k * params.b1 * xy)};
}

}  // namespace coexist
