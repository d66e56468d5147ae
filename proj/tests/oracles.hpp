#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's map or stability code; formulas are written out from scratch.

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

struct P {
    double x, y;
};

/// Example-family parameters as plain numbers.
struct Family {
    double lambda, sigma, c2, d1, d5;
    double h0() const { return (2.0 * std::abs(lambda) + 1.0) / 3.0; }
    double h1() const { return (std::abs(lambda) + 2.0) / 3.0; }
};

inline Family family(int id) {
    switch (id) {
        case 20: return {0.8, 1.25, -0.5, 1.0, 1.0};
        case 21: return {-0.8, -1.25, -0.5, 1.0, 1.0};
        case 22: return {0.8, -1.25, -0.5, 1.0, 1.0};
        default: return {-0.8, 1.25, -0.5, -1.0, 1.0};
    }
}

/// The piecewise map, written directly from its definition.
inline P f(const Family& F, P p) {
    const double u0x = F.lambda * p.x, u0y = F.sigma * p.y;
    const double u1x = 1.0 + F.c2 * (p.y - 1.0);
    const double u1y = F.d1 * p.x + F.d5 * (p.y - 1.0) * (p.y - 1.0);
    const double h0 = F.h0(), h1 = F.h1();
    if (p.y <= h0) return {u0x, u0y};
    if (p.y >= h1) return {u1x, u1y};
    const double z = (p.y - h0) / (h1 - h0);
    const double r = z * z * (3.0 - 2.0 * z);
    return {(1.0 - r) * u0x + r * u1x, (1.0 - r) * u0y + r * u1y};
}

inline P iterate(const Family& F, P p, int n) {
    for (int i = 0; i < n; ++i) p = f(F, p);
    return p;
}

struct M {
    double a, b, c, d;
};

/// Central finite-difference Jacobian of any planar map g.
template <typename G>
M fd_jacobian(G&& g, P p, double h = 1e-6) {
    const P xp = g(P{p.x + h, p.y}), xm = g(P{p.x - h, p.y});
    const P yp = g(P{p.x, p.y + h}), ym = g(P{p.x, p.y - h});
    return {(xp.x - xm.x) / (2 * h), (yp.x - ym.x) / (2 * h), (xp.y - xm.y) / (2 * h),
            (yp.y - ym.y) / (2 * h)};
}

/// One-sided difference quotient in y, from below (dir = -1) or above (+1).
template <typename G>
M one_sided_y(G&& g, P p, int dir, double h = 1e-9) {
    const P base = g(p);
    const P moved = g(P{p.x, p.y + dir * h});
    const P xp = g(P{p.x + h, p.y}), xm = g(P{p.x - h, p.y});
    return {(xp.x - xm.x) / (2 * h), (moved.x - base.x) / (dir * h), (xp.y - xm.y) / (2 * h),
            (moved.y - base.y) / (dir * h)};
}

enum class Kind { Stable, Saddle, Source, Boundary };

/// Classification by eigenvalue moduli of [[.,.],[.,.]] with trace tau and
/// determinant delta, with a boundary band of width tol around modulus 1.
inline Kind eigen_kind(double tau, double delta, double tol) {
    const std::complex<double> disc = std::sqrt(std::complex<double>(tau * tau - 4.0 * delta));
    const double m1 = std::abs(0.5 * (tau + disc));
    const double m2 = std::abs(0.5 * (tau - disc));
    const auto near1 = [tol](double m) { return std::abs(m - 1.0) <= tol; };
    if (near1(m1) || near1(m2)) return Kind::Boundary;
    if (m1 < 1.0 && m2 < 1.0) return Kind::Stable;
    if (m1 > 1.0 && m2 > 1.0) return Kind::Source;
    return Kind::Saddle;
}

/// Real roots of the example-family SR_k quadratic
/// sigma^k d5 u^2 + ((lambda sigma)^k d1 c2 - 1) u + ((lambda sigma)^k d1 - 1) = 0,
/// returned (smaller-branch, larger-branch) via the textbook formula in
/// long double.
inline std::optional<std::pair<long double, long double>> srk_roots(const Family& F, int k) {
    const long double sk = std::pow((long double)F.sigma, k);
    const long double lsk = std::pow((long double)F.lambda * F.sigma, k);
    const long double a = sk * F.d5;
    const long double b = lsk * F.d1 * F.c2 - 1.0L;
    const long double c = lsk * F.d1 - 1.0L;
    const long double disc = b * b - 4.0L * a * c;
    if (disc < 0) return std::nullopt;
    const long double r = std::sqrt(disc);
    return std::make_pair((-b - r) / (2 * a), (-b + r) / (2 * a));
}

/// Resonant T0 of the truncated normal form, iterated directly.
inline P T0_direct(double lambda, double a1, double b1, P p, int k) {
    for (int i = 0; i < k; ++i) {
        const double xy = p.x * p.y;
        p = {lambda * p.x * (1.0 + a1 * xy), p.y / lambda * (1.0 + b1 * xy)};
    }
    return p;
}

struct Image {
    std::size_t nx = 0, ny = 0;
    std::vector<std::uint8_t> rgb;
};

/// Minimal binary PPM (P6, maxval 255) reader.
inline std::optional<Image> read_ppm(const std::string& bytes) {
    std::size_t pos = 0;
    auto token = [&]() -> std::optional<std::string> {
        while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
        const std::size_t start = pos;
        while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
        if (start == pos) return std::nullopt;
        return bytes.substr(start, pos - start);
    };
    const auto magic = token(), w = token(), h = token(), maxval = token();
    if (!magic || *magic != "P6" || !w || !h || !maxval || *maxval != "255") return std::nullopt;
    ++pos;  // single whitespace byte before the raster
    Image img;
    img.nx = std::stoul(*w);
    img.ny = std::stoul(*h);
    if (bytes.size() - pos != 3 * img.nx * img.ny) return std::nullopt;
    img.rgb.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end());
    return img;
}

/// Least-squares slope of log|v| against k, exponentiated.
inline double loglinear_ratio(const std::vector<int>& ks, const std::vector<double>& vs) {
    double n = 0, sk = 0, sl = 0, skk = 0, skl = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const double l = std::log(std::abs(vs[i]));
        n += 1;
        sk += ks[i];
        sl += l;
        skk += double(ks[i]) * ks[i];
        skl += ks[i] * l;
    }
    return std::exp((n * skl - sk * sl) / (n * skk - sk * sk));
}

inline std::mt19937_64 rng(std::uint64_t seed = 20240611) { return std::mt19937_64(seed); }

}  // namespace oracle
