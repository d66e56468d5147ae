#include "coexist/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coexist/errors.hpp"

namespace coexist {

std::string_view to_string(Branch b) { return b == Branch::Minus ? "minus" : "plus"; }

std::string_view to_string(BranchStatus s) {
    switch (s) {
        case BranchStatus::NoRealRoot: return "no-real-root";
        case BranchStatus::Found: return "found";
        case BranchStatus::ItineraryInvalid: return "itinerary-invalid";
        case BranchStatus::FallbackFound: return "fallback-found";
        case BranchStatus::FallbackFailed: return "fallback-failed";
    }
    return "?";
}

namespace {

struct Affine {
    double alpha;  // X(u) = alpha + beta u
    double beta;
};

std::optional<Affine> excursion_abscissa(const MapParams& p, int k) {
    const double lk = std::pow(p.lambda, k);
    const double denom = 1.0 - p.c1 * lk;
    if (denom == 0.0) return std::nullopt;
    return Affine{lk * p.x_star / denom, lk * p.c2 / denom};
}

double residual_of(const MapParams& params, Point2 p0, std::size_t period, double escape) {
    const auto back = iterate_to(params, p0, period, escape);
    if (!back) return std::numeric_limits<double>::infinity();
    return norm_inf(*back - p0);
}

struct Evaluated {
    Point2 image;
    Jacobian2 jac;
    bool escaped;
    std::size_t escaped_at;
};

Evaluated compose(const MapParams& params, Point2 p, std::size_t period, double escape) {
    Jacobian2 m = Jacobian2::identity();
    for (std::size_t i = 0; i < period; ++i) {
        m = jacobian_f(params, p) * m;
        p = eval_f(params, p);
        if (!(norm_inf(p) <= escape)) return {p, m, true, i + 1};
    }
    return {p, m, false, 0};
}

bool shares_point(const std::vector<Point2>& a, const std::vector<Point2>& b, double tol) {
    for (const Point2& p : a)
        for (const Point2& q : b)
            if (norm_inf(p - q) <= tol) return true;
    return false;
}

}  // namespace

RootPair srk_quadratic(const MapParams& params, int k) {
    if (params.d5 == 0.0) throw DegenerateCoefficients("SR_k quadratic requires d5 != 0");
    RootPair out;
    const auto affine = excursion_abscissa(params, k);
    if (!affine) return out;
    const auto [alpha, beta] = *affine;
    const double sk = std::pow(params.sigma, k);
    const double a = sk * (params.d3 * beta * beta + params.d4 * beta + params.d5);
    const double b =
        sk * (params.d1 * beta + params.d2 + 2.0 * params.d3 * alpha * beta + params.d4 * alpha) -
        1.0;
    const double c = sk * (params.d1 * alpha + params.d3 * alpha * alpha) - params.y_star;

    if (a == 0.0) {
        // As A -> 0 only the root with the sign of -B in front of the radical
        // stays finite: that is the minus root when B < 0.
        if (b == 0.0) return out;
        (b < 0.0 ? out.u_minus : out.u_plus) = -c / b;
        return out;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return out;
    const double root = std::sqrt(disc);
    // cancellation-free pair: q / a and c / q
    const double q = -0.5 * (b + std::copysign(root, b));
    if (q == 0.0) {
        out.u_minus = out.u_plus = 0.0;
        return out;
    }
    if (b < 0.0) {
        out.u_plus = q / a;   // (-b + root) / 2a
        out.u_minus = c / q;  // (-b - root) / 2a
    } else {
        out.u_minus = q / a;
        out.u_plus = c / q;
    }
    return out;
}

std::vector<Point2> closed_form_points(const MapParams& params, int k, double u) {
    const auto affine = excursion_abscissa(params, k);
    if (!affine) throw DegenerateCoefficients("1 - c1 lambda^k vanishes");
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(k) + 1);
    pts.push_back({affine->alpha + affine->beta * u, params.y_star + u});
    if (k > 0) pts.push_back(eval_U1(params, pts.back()));
    for (int j = 1; j < k; ++j) pts.push_back(eval_U0(params, pts.back()));
    return pts;
}

std::vector<Region> itinerary_of(const MapParams& params, const std::vector<Point2>& points) {
    std::vector<Region> out;
    out.reserve(points.size());
    for (const Point2& p : points) out.push_back(region_of(params, p.y));
    return out;
}

SRkOrbit assemble_orbit(const MapParams& params, int k, double u, Branch branch,
                        const NewtonOptions& options) {
    std::vector<Point2> pts = closed_form_points(params, k, u);
    const auto regions = itinerary_of(params, pts);

    std::optional<std::size_t> first_bad;
    bool blend_only = true;
    for (std::size_t j = 0; j < regions.size(); ++j) {
        const Region expected = j == 0 ? Region::Upper : Region::Lower;
        if (regions[j] != expected) {
            if (!first_bad) first_bad = j;
            if (regions[j] != Region::Blend) blend_only = false;
        }
    }
    if (first_bad) throw ItineraryInvalid(*first_bad, regions[*first_bad], blend_only);

    const std::size_t period = pts.size();
    double residual = residual_of(params, pts.front(), period, options.escape_radius);
    if (!(residual <= options.tol)) {
        // roundoff at large k: polish, then re-derive the images under f
        const PeriodicOrbit polished = find_periodic_newton(params, pts.front(), period, options);
        pts = polished.points;
        residual = polished.residual;
        const auto again = itinerary_of(params, pts);
        for (std::size_t j = 0; j < again.size(); ++j) {
            const Region expected = j == 0 ? Region::Upper : Region::Lower;
            if (again[j] != expected) throw ItineraryInvalid(j, again[j], again[j] == Region::Blend);
        }
    }

    SRkOrbit orbit;
    orbit.k = k;
    orbit.period = period;
    orbit.points = std::move(pts);
    orbit.branch = branch;
    orbit.residual = residual;
    const Jacobian2 m = orbit_jacobian(params, orbit.points);
    orbit.trace = m.trace();
    orbit.det = m.det();
    orbit.stability = classify(orbit.trace, orbit.det);
    return orbit;
}

PeriodicOrbit find_periodic_newton(const MapParams& params, Point2 seed, std::size_t period,
                                   const NewtonOptions& options) {
    if (period == 0) throw std::invalid_argument("period must be at least 1");

    Point2 p = seed;
    Evaluated ev = compose(params, p, period, options.escape_radius);
    if (ev.escaped) throw Escaped(ev.escaped_at);
    double res = norm_inf(ev.image - p);

    int it = 0;
    for (; it < options.max_iter && !(res <= options.tol); ++it) {
        Jacobian2 dg = ev.jac;
        dg.a -= 1.0;
        dg.d -= 1.0;
        const double det = dg.det();
        if (!(std::abs(det) >= options.singular_tol)) throw SingularJacobian(it);
        const Point2 g = ev.image - p;
        const Point2 step{-(dg.d * g.x - dg.b * g.y) / det, -(-dg.c * g.x + dg.a * g.y) / det};

        double t = 1.0;
        Point2 trial = p + step;
        Evaluated trial_ev = compose(params, trial, period, options.escape_radius);
        double trial_res = trial_ev.escaped ? std::numeric_limits<double>::infinity()
                                            : norm_inf(trial_ev.image - trial);
        for (int h = 0; h < options.max_halvings && !(trial_res < res); ++h) {
            t *= 0.5;
            trial = p + t * step;
            trial_ev = compose(params, trial, period, options.escape_radius);
            trial_res = trial_ev.escaped ? std::numeric_limits<double>::infinity()
                                         : norm_inf(trial_ev.image - trial);
        }
        if (trial_ev.escaped) throw Escaped(trial_ev.escaped_at);
        p = trial;
        ev = trial_ev;
        res = trial_res;
    }
    if (!(res <= options.tol)) throw NoConvergence(it, res);

    PeriodicOrbit orbit;
    orbit.period = period;
    orbit.iterations = it;
    orbit.residual = res;
    orbit.points.reserve(period);
    Point2 q = p;
    for (std::size_t i = 0; i < period; ++i) {
        orbit.points.push_back(q);
        q = eval_f(params, q);
    }
    orbit.minimal_period = period;
    for (std::size_t d = 1; d < period; ++d) {
        if (period % d != 0) continue;
        if (norm_inf(orbit.points[d % period] - p) <= options.minimality_tol) {
            orbit.minimal_period = d;
            break;
        }
    }
    orbit.itinerary = itinerary_of(params, orbit.points);
    const Jacobian2 m = orbit_jacobian(params, orbit.points);
    orbit.trace = m.trace();
    orbit.det = m.det();
    orbit.stability = classify(orbit.trace, orbit.det);
    return orbit;
}

std::vector<SRkOrbit> ScanResult::orbits() const {
    std::vector<SRkOrbit> out;
    for (const auto& e : entries)
        for (const auto& b : e.branches)
            if (b.orbit) out.push_back(*b.orbit);
    return out;
}

std::vector<SRkOrbit> ScanResult::orbits_with(StabilityClass c) const {
    std::vector<SRkOrbit> out;
    for (auto& o : orbits())
        if (o.stability == c) out.push_back(std::move(o));
    return out;
}

ScanResult scan_srk(const MapParams& params, int k_min, int k_max, const NewtonOptions& options) {
    if (k_min < 0 || k_min > k_max) throw std::invalid_argument("need 0 <= k_min <= k_max");
    ScanResult result;
    for (int k = k_min; k <= k_max; ++k) {
        ScanEntry entry;
        entry.k = k;
        const RootPair roots = srk_quadratic(params, k);
        entry.branches[0].branch = Branch::Minus;
        entry.branches[0].root = roots.u_minus;
        entry.branches[1].branch = Branch::Plus;
        entry.branches[1].root = roots.u_plus;

        std::array<bool, 2> blend_only{false, false};
        for (std::size_t i = 0; i < 2; ++i) {
            BranchResult& br = entry.branches[i];
            if (!br.root) continue;
            try {
                br.orbit = assemble_orbit(params, k, *br.root, br.branch, options);
                br.status = BranchStatus::Found;
            } catch (const ItineraryInvalid& e) {
                br.status = BranchStatus::ItineraryInvalid;
                blend_only[i] = e.blend_only;
            } catch (const Error&) {
                br.status = BranchStatus::ItineraryInvalid;
            }
        }
        // Double roots give one orbit, not two.
        if (entry.branches[0].orbit && entry.branches[1].orbit &&
            shares_point(entry.branches[0].orbit->points, entry.branches[1].orbit->points, 1e-10)) {
            entry.branches[1].orbit.reset();
            entry.branches[1].status = BranchStatus::ItineraryInvalid;
        }

        for (std::size_t i = 0; i < 2; ++i) {
            BranchResult& br = entry.branches[i];
            if (br.status != BranchStatus::ItineraryInvalid || !blend_only[i]) continue;
            br.status = BranchStatus::FallbackFailed;
            const std::size_t period = static_cast<std::size_t>(k) + 1;
            try {
                const Point2 seed = closed_form_points(params, k, *br.root).front();
                PeriodicOrbit found = find_periodic_newton(params, seed, period, options);
                if (found.minimal_period != period) continue;
                const BranchResult& other = entry.branches[1 - i];
                std::vector<Point2> other_pts;
                if (other.orbit) other_pts = other.orbit->points;
                if (other.fallback) other_pts = other.fallback->points;
                if (!other_pts.empty() && shares_point(found.points, other_pts, 1e-8)) continue;
                br.fallback = std::move(found);
                br.status = BranchStatus::FallbackFound;
            } catch (const Error&) {
            }
        }
        result.entries.push_back(std::move(entry));
    }
    return result;
}

}  // namespace coexist
