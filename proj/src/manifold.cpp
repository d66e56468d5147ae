#include "coexist/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "coexist/errors.hpp"

namespace coexist {

std::string_view to_string(CurveKind k) {
    return k == CurveKind::Unstable ? "Unstable" : "StableBranch";
}

std::string_view to_string(Contact c) {
    return c == Contact::Transversal ? "Transversal" : "Tangential";
}

std::pair<std::size_t, std::size_t> ManifoldCurve::piece_range(std::size_t i) const {
    const std::size_t end = i + 1 < piece_starts.size() ? piece_starts[i + 1] : points.size();
    return {piece_starts[i], end};
}

ManifoldCurve polyline_curve(std::vector<Point2> points) {
    ManifoldCurve c;
    c.points = std::move(points);
    c.params.resize(c.points.size());
    for (std::size_t i = 0; i < c.params.size(); ++i) c.params[i] = static_cast<double>(i);
    if (!c.points.empty()) {
        c.piece_starts.push_back(0);
        c.piece_branch.push_back(0);
    }
    for (std::size_t i = 1; i < c.points.size(); ++i) {
        const double g = norm2(c.points[i] - c.points[i - 1]);
        c.arc_length += g;
        c.stats.max_gap = std::max(c.stats.max_gap, g);
    }
    return c;
}

namespace {

using ParamEval = std::function<std::optional<Point2>(double)>;

struct Sample {
    double t = 0.0;
    std::optional<Point2> p;
    bool in = false;
};

Sample make_sample(double t, const ParamEval& eval, const Window& clip) {
    Sample s{t, eval(t), false};
    s.in = s.p && clip.contains(*s.p);
    return s;
}

double turning_angle(Point2 a, Point2 b, Point2 c) {
    const Point2 u = b - a;
    const Point2 v = c - b;
    const double nu = norm2(u);
    const double nv = norm2(v);
    if (nu == 0.0 || nv == 0.0) return 0.0;
    const double cross = u.x * v.y - u.y * v.x;
    const double dot = u.x * v.x + u.y * v.y;
    return std::abs(std::atan2(cross, dot));
}

/// Adaptive bisection in the curve parameter until neighbours inside the
/// clip window are closer than max_gap and turn by less than max_angle.
struct Refiner {
    const Window& clip;
    const RefineOptions& opt;
    std::size_t& used;
    bool partial = false;
    std::size_t inserted = 0;

    std::vector<Sample> run(std::vector<double> ts, const ParamEval& eval) {
        std::vector<Sample> s;
        s.reserve(ts.size());
        for (double t : ts) s.push_back(make_sample(t, eval, clip));
        used += s.size();
        if (s.size() < 2) return s;

        const double range = s.back().t - s.front().t;
        const double min_dt = 1e-13 * std::max(range, 1.0);
        const double boundary_dt = 1e-7 * std::max(range, 1.0);
        const double min_len = 1e-4 * opt.max_gap;

        for (int pass = 0; pass < 64; ++pass) {
            std::vector<Sample> next;
            next.reserve(s.size() + s.size() / 4);
            bool any = false;
            for (std::size_t i = 0; i + 1 < s.size(); ++i) {
                next.push_back(s[i]);
                if (!needs_split(s, i, min_dt, boundary_dt, min_len)) continue;
                if (used >= opt.budget) {
                    partial = true;
                    continue;
                }
                next.push_back(make_sample(0.5 * (s[i].t + s[i + 1].t), eval, clip));
                ++used;
                ++inserted;
                any = true;
            }
            next.push_back(s.back());
            s = std::move(next);
            if (!any) break;
        }
        return s;
    }

    bool needs_split(const std::vector<Sample>& s, std::size_t i, double min_dt,
                     double boundary_dt, double min_len) const {
        const Sample& a = s[i];
        const Sample& b = s[i + 1];
        const double dt = b.t - a.t;
        if (dt <= min_dt) return false;
        if (!a.in && !b.in) return false;
        if (!a.p || !b.p) return dt > boundary_dt;
        const double gap = norm2(*b.p - *a.p);
        if (gap > opt.max_gap) return true;
        if (a.in != b.in) return false;
        if (gap <= min_len) return false;
        if (i > 0 && s[i - 1].in && turning_angle(*s[i - 1].p, *a.p, *b.p) > opt.max_angle)
            return true;
        if (i + 2 < s.size() && s[i + 2].in &&
            turning_angle(*a.p, *b.p, *s[i + 2].p) > opt.max_angle)
            return true;
        return false;
    }
};

/// Appends the clipped pieces of a refined sample run to the curve.
void append_pieces(ManifoldCurve& curve, const std::vector<Sample>& s, int branch, double max_gap) {
    bool open = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!s[i].in) {
            open = false;
            continue;
        }
        const Point2 p = *s[i].p;
        if (open) {
            const double g = norm2(p - curve.points.back());
            if (g > max_gap) {
                open = false;  // unresolved jump: start a new piece
            } else {
                curve.arc_length += g;
                curve.stats.max_gap = std::max(curve.stats.max_gap, g);
            }
        }
        if (!open) {
            curve.piece_starts.push_back(curve.points.size());
            curve.piece_branch.push_back(branch);
            open = true;
        }
        curve.points.push_back(p);
        curve.params.push_back(s[i].t);
    }
}

std::vector<double> uniform(double a, double b, std::size_t n) {
    std::vector<double> ts(n + 1);
    for (std::size_t i = 0; i <= n; ++i) ts[i] = a + (b - a) * static_cast<double>(i) / n;
    ts.back() = b;
    return ts;
}

}  // namespace

ManifoldCurve trace_unstable(const MapParams& params, int n_images, const Window& clip,
                             const RefineOptions& options) {
    if (n_images < 1) throw std::invalid_argument("n_images must be at least 1");
    if (!clip.valid()) throw InvalidWindow("clip window must have positive area");

    const double abs_sigma = std::abs(params.sigma);
    const double flip = params.sigma < 0.0 ? -1.0 : 1.0;
    const double rho_max = n_images + 1.0;
    const double y0 = options.seed;
    const double escape = options.escape_radius;

    ManifoldCurve curve;
    curve.kind = CurveKind::Unstable;
    curve.label = "unstable";
    curve.evaluate = [params, flip, abs_sigma, y0, rho_max, escape](
                         int branch, double rho) -> std::optional<Point2> {
        if (!(rho >= 0.0 && rho <= rho_max)) return std::nullopt;
        const double n = std::min(std::floor(rho), rho_max - 1.0);
        const double frac = rho - n;
        const double side = (branch == 0 ? 1.0 : -1.0) * (std::fmod(n, 2.0) == 0.0 ? 1.0 : flip);
        const Point2 seed{0.0, side * y0 * std::pow(abs_sigma, frac)};
        return iterate_to(params, seed, static_cast<std::size_t>(n), escape);
    };

    std::size_t used = 0;
    Refiner refiner{clip, options, used};
    const int branches = params.sigma < 0.0 ? 2 : 1;
    for (int b = 0; b < branches; ++b) {
        const auto eval = [&curve, b](double rho) { return curve.evaluate(b, rho); };
        const auto samples =
            refiner.run(uniform(0.0, rho_max, static_cast<std::size_t>(64 * rho_max)), eval);
        append_pieces(curve, samples, b, options.max_gap);
    }
    curve.stats.inserted_points = refiner.inserted;
    curve.partial = refiner.partial;
    return curve;
}

Point2 invert_U0(const MapParams& params, Point2 q) {
    return {q.x / params.lambda, q.y / params.sigma};
}

Point2 invert_U1(const MapParams& params, Point2 q) {
    if (params.c1 != 0.0 || params.d3 != 0.0 || params.d4 != 0.0)
        throw DegenerateCoefficients("U1 inverse implemented for c1 = d3 = d4 = 0 only");
    if (params.c2 == 0.0) throw DegenerateCoefficients("U1 inverse requires c2 != 0");
    if (params.d1 == 0.0) throw DegenerateCoefficients("U1 inverse requires d1 != 0");
    const double u = (q.x - params.x_star) / params.c2;
    const double x = (q.y - params.d2 * u - params.d5 * u * u) / params.d1;
    return {x, params.y_star + u};
}

namespace {

constexpr double kBlendResidual = 1e-10;

bool u1_invertible(const MapParams& p) {
    return p.c1 == 0.0 && p.d3 == 0.0 && p.d4 == 0.0 && p.c2 != 0.0 && p.d1 != 0.0;
}

/// For fixed y the blend x-row is affine in x, so preimages solve a scalar
/// equation in y over the open strip (h0, h1).
struct BlendScalar {
    const MapParams& p;
    Point2 q;

    std::optional<double> x_of(double y) const {
        const double r = eval_r(p, y);
        const double u = y - p.y_star;
        const double coef = (1.0 - r) * p.lambda + r * p.c1;
        if (coef == 0.0) return std::nullopt;
        return (q.x - r * (p.x_star + p.c2 * u)) / coef;
    }

    std::optional<double> operator()(double y) const {
        const auto x = x_of(y);
        if (!x || !std::isfinite(*x)) return std::nullopt;
        return eval_blend(p, {*x, y}).y - q.y;
    }
};

std::vector<Point2> blend_scan(const MapParams& params, Point2 q, int cells = 128) {
    const BlendScalar g{params, q};
    const double w = params.h1 - params.h0;
    std::vector<Point2> out;
    const auto accept = [&](double y) {
        if (region_of(params, y) != Region::Blend) return;
        const auto x = g.x_of(y);
        if (!x || !std::isfinite(*x)) return;
        const Point2 p{*x, y};
        if (norm_inf(eval_blend(params, p) - q) <= kBlendResidual) {
            out.push_back(p);
        } else if (auto polished = invert_blend_newton(params, q, p, 8)) {
            // x is ill-conditioned near h1, where the x-row barely depends on x
            out.push_back(polished->point);
        }
    };
    const auto bisect = [&](double lo, double hi, double flo) {
        for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
            const double mid = 0.5 * (lo + hi);
            const auto fm = g(mid);
            if (!fm) break;
            if ((*fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = *fm;
            } else {
                hi = mid;
            }
        }
        accept(0.5 * (lo + hi));
    };

    std::vector<double> ys(static_cast<std::size_t>(cells) + 1);
    std::vector<std::optional<double>> fs(ys.size());
    for (int i = 0; i <= cells; ++i) {
        ys[i] = i == cells ? params.h1 - 1e-12 * w : params.h0 + w * i / cells;
        fs[i] = g(ys[i]);
    }
    for (std::size_t i = 0; i + 1 < ys.size(); ++i) {
        const auto& fa = fs[i];
        const auto& fb = fs[i + 1];
        if (fa && *fa == 0.0) accept(ys[i]);
        if (fa && fb && (*fa < 0.0) != (*fb < 0.0) && *fb != 0.0) bisect(ys[i], ys[i + 1], *fa);
    }

    // A fold can hide two roots inside one cell: look for a sample where |g|
    // has a local minimum with no sign change on either side.
    for (std::size_t i = 1; i + 1 < ys.size(); ++i) {
        if (!fs[i - 1] || !fs[i] || !fs[i + 1]) continue;
        const double a = *fs[i - 1], b = *fs[i], c = *fs[i + 1];
        if ((a < 0) != (b < 0) || (b < 0) != (c < 0)) continue;
        if (!(std::abs(b) <= std::abs(a) && std::abs(b) <= std::abs(c))) continue;
        const double sign = b < 0 ? -1.0 : 1.0;
        // golden-section search for the extremum of sign * g
        double lo = ys[i - 1], hi = ys[i + 1];
        const double phi = std::numbers::phi - 1.0;
        for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
            const double m1 = hi - phi * (hi - lo), m2 = lo + phi * (hi - lo);
            const auto g1 = g(m1), g2 = g(m2);
            if (!g1 || !g2) break;
            if (sign * *g1 < sign * *g2) hi = m2; else lo = m1;
        }
        const double ym = 0.5 * (lo + hi);
        const auto gm = g(ym);
        if (!gm) continue;
        if ((*gm < 0.0) == (b < 0.0)) {
            if (*gm == 0.0) accept(ym);
            continue;
        }
        bisect(ys[i - 1], ym, a);
        bisect(ym, ys[i + 1], *gm);
    }
    return out;
}

void dedupe_sorted(std::vector<Point2>& pts, double tol) {
    std::sort(pts.begin(), pts.end(),
              [](Point2 a, Point2 b) { return a.y < b.y || (a.y == b.y && a.x < b.x); });
    std::vector<Point2> kept;
    for (const Point2& p : pts) {
        bool dup = false;
        for (const Point2& k : kept)
            if (norm_inf(p - k) <= tol) dup = true;
        if (!dup) kept.push_back(p);
    }
    pts = std::move(kept);
}

}  // namespace

std::optional<BlendNewtonResult> invert_blend_newton(const MapParams& params, Point2 q,
                                                     Point2 guess, int max_iter) {
    Point2 p = guess;
    int it = 0;
    double res = norm_inf(eval_blend(params, p) - q);
    for (; it < max_iter && !(res <= kBlendResidual); ++it) {
        const Jacobian2 j = jacobian_blend(params, p);
        const double det = j.det();
        if (!(std::abs(det) > 1e-300) || !std::isfinite(det)) return std::nullopt;
        const Point2 g = eval_blend(params, p) - q;
        p = p - Point2{(j.d * g.x - j.b * g.y) / det, (-j.c * g.x + j.a * g.y) / det};
        res = norm_inf(eval_blend(params, p) - q);
        if (!std::isfinite(res)) return std::nullopt;
    }
    if (!(res <= kBlendResidual) || region_of(params, p.y) != Region::Blend) return std::nullopt;
    return BlendNewtonResult{p, it, res};
}

std::vector<Point2> invert_blend(const MapParams& params, Point2 q,
                                 const std::vector<Point2>& guesses) {
    std::vector<Point2> starts = guesses;
    if (starts.empty()) {
        starts.push_back(invert_U0(params, q));
        if (u1_invertible(params)) starts.push_back(invert_U1(params, q));
    }
    std::vector<Point2> out;
    for (const Point2& g : starts)
        if (auto r = invert_blend_newton(params, q, g)) out.push_back(r->point);
    for (const Point2& p : blend_scan(params, q)) out.push_back(p);
    dedupe_sorted(out, 1e-9);
    return out;
}

namespace {

enum class Inverse { U0, U1, Blend };

struct Step {
    Inverse op;
    int j = 0;  // blend preimage index
};

std::string chain_label(const std::vector<Step>& steps) {
    if (steps.empty()) return "axis";
    std::string s;
    for (const Step& st : steps) {
        if (!s.empty()) s += '.';
        switch (st.op) {
            case Inverse::U0: s += "U0"; break;
            case Inverse::U1: s += "U1"; break;
            case Inverse::Blend: s += "B" + std::to_string(st.j); break;
        }
    }
    return s;
}

std::optional<Point2> apply_step(const MapParams& params, Step st, Point2 q, double escape) {
    Point2 p;
    switch (st.op) {
        case Inverse::U0:
            p = invert_U0(params, q);
            if (region_of(params, p.y) != Region::Lower) return std::nullopt;
            break;
        case Inverse::U1:
            p = invert_U1(params, q);
            if (region_of(params, p.y) != Region::Upper) return std::nullopt;
            break;
        case Inverse::Blend: {
            const auto pre = blend_scan(params, q);
            if (static_cast<std::size_t>(st.j) >= pre.size()) return std::nullopt;
            p = pre[static_cast<std::size_t>(st.j)];
            break;
        }
    }
    if (!(norm_inf(p) <= escape)) return std::nullopt;
    return p;
}

std::optional<Point2> eval_chain(const MapParams& params, const std::vector<Step>& steps,
                                 double s, double escape) {
    std::optional<Point2> q = Point2{s, 0.0};
    for (const Step& st : steps) {
        q = apply_step(params, st, *q, escape);
        if (!q) return std::nullopt;
    }
    return q;
}

struct TreeNode {
    std::vector<Step> steps;
    std::vector<std::optional<Point2>> samples;  // on the shared root grid
};

constexpr std::size_t kMaxTreeNodes = 512;
constexpr std::size_t kRootSamples = 2048;

}  // namespace

std::vector<ManifoldCurve> trace_stable(const MapParams& params, int depth, const Window& clip,
                                        const RefineOptions& options) {
    if (depth < 0) throw std::invalid_argument("depth must be non-negative");
    if (!clip.valid()) throw InvalidWindow("clip window must have positive area");

    std::vector<ManifoldCurve> out;
    std::size_t used = 0;
    Refiner refiner{clip, options, used};

    if (depth == 0) {
        // Fundamental segment of the local stable manifold; for lambda < 0 one
        // per half-axis since f swaps them.
        const double x0 = options.seed;
        const double span = params.lambda < 0.0 ? 2.0 : 1.0;
        const double abs_lambda = std::abs(params.lambda);
        ManifoldCurve c;
        c.kind = CurveKind::StableBranch;
        c.label = "segment";
        c.evaluate = [x0, span, abs_lambda](int branch, double t) -> std::optional<Point2> {
            if (!(t >= 0.0 && t <= 1.0)) return std::nullopt;
            const double side = branch == 0 ? 1.0 : -1.0;
            return Point2{side * x0 * std::pow(abs_lambda, -span * t), 0.0};
        };
        const int branches = params.lambda < 0.0 ? 2 : 1;
        for (int b = 0; b < branches; ++b) {
            const auto eval = [&c, b](double t) { return c.evaluate(b, t); };
            append_pieces(c, refiner.run(uniform(0.0, 1.0, 1), eval), b, options.max_gap);
        }
        c.stats.inserted_points = refiner.inserted;
        c.partial = refiner.partial;
        out.push_back(std::move(c));
        return out;
    }

    const double escape = options.escape_radius;
    const std::vector<double> grid = uniform(clip.x_min, clip.x_max, kRootSamples);
    const bool u1_ok = u1_invertible(params);
    bool partial = false;

    std::vector<TreeNode> nodes;
    {
        TreeNode root;
        for (double s : grid) root.samples.push_back(Point2{s, 0.0});
        nodes.push_back(std::move(root));
    }
    std::size_t level_begin = 0;
    for (int level = 1; level <= depth; ++level) {
        const std::size_t level_end = nodes.size();
        for (std::size_t n = level_begin; n < level_end; ++n) {
            std::vector<Step> candidates;
            if (n != 0) candidates.push_back({Inverse::U0});
            if (u1_ok) candidates.push_back({Inverse::U1});
            std::size_t blend_count = 0;
            for (const auto& q : nodes[n].samples)
                if (q) blend_count = std::max(blend_count, blend_scan(params, *q).size());
            for (std::size_t j = 0; j < blend_count; ++j)
                candidates.push_back({Inverse::Blend, static_cast<int>(j)});

            for (const Step& st : candidates) {
                TreeNode child;
                child.steps = nodes[n].steps;
                child.steps.push_back(st);
                bool any = false;
                for (const auto& q : nodes[n].samples) {
                    child.samples.push_back(q ? apply_step(params, st, *q, escape) : std::nullopt);
                    any = any || child.samples.back().has_value();
                }
                if (!any) continue;
                if (nodes.size() >= kMaxTreeNodes) {
                    partial = true;
                    continue;
                }
                nodes.push_back(std::move(child));
            }
        }
        level_begin = level_end;
    }

    for (const TreeNode& node : nodes) {
        ManifoldCurve c;
        c.kind = CurveKind::StableBranch;
        c.label = chain_label(node.steps);
        const auto steps = node.steps;
        c.evaluate = [params, steps, escape](int, double s) {
            return eval_chain(params, steps, s, escape);
        };
        const auto eval = [&c](double s) { return c.evaluate(0, s); };
        const std::size_t before = refiner.inserted;
        append_pieces(c, refiner.run(grid, eval), 0, options.max_gap);
        c.stats.inserted_points = refiner.inserted - before;
        c.partial = partial || refiner.partial;
        if (c.points.empty()) continue;
        c.index = static_cast<int>(out.size());
        out.push_back(std::move(c));
    }
    return out;
}

namespace {

double curvature_of(double y2, double x1) {
    if (std::abs(x1) > 1e-300) return y2 / (x1 * x1);
    return y2 > 0.0 ? 1.0 : (y2 < 0.0 ? -1.0 : 0.0);
}

/// y''/x'^2 by central differences on the evaluator; empty if a stencil
/// point is invalid.
std::optional<double> curvature_eval(const ManifoldCurve& c, int branch, double t, double h) {
    const auto m = c.evaluate(branch, t - h);
    const auto z = c.evaluate(branch, t);
    const auto p = c.evaluate(branch, t + h);
    if (!m || !z || !p) return std::nullopt;
    const double y2 = (p->y - 2.0 * z->y + m->y) / (h * h);
    const double x1 = (p->x - m->x) / (2.0 * h);
    return curvature_of(y2, x1);
}

double curvature_polyline(const ManifoldCurve& c, std::size_t i) {
    const Point2 a = c.points[i - 1], b = c.points[i], d = c.points[i + 1];
    return curvature_of(a.y - 2.0 * b.y + d.y, 0.5 * (d.x - a.x));
}

std::optional<TangencyHit> refine_crossing(const ManifoldCurve& c, int branch, double ta,
                                           double tb, Point2 pa, Point2 pb) {
    if (c.evaluate) {
        double lo = ta, hi = tb;
        Point2 plo = pa, phi = pb;
        bool ok = true;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
            const double mid = 0.5 * (lo + hi);
            const auto pm = c.evaluate(branch, mid);
            if (!pm) {
                ok = false;
                break;
            }
            if (pm->y == 0.0) {
                plo = phi = *pm;
                lo = hi = mid;
                break;
            }
            if ((pm->y < 0.0) == (plo.y < 0.0)) {
                lo = mid;
                plo = *pm;
            } else {
                hi = mid;
                phi = *pm;
            }
        }
        if (ok) {
            const double w = phi.y - plo.y;
            const double s = w != 0.0 ? -plo.y / w : 0.0;
            const Point2 at = plo + s * (phi - plo);
            const double h = std::max(1e-6, 1e-3 * (tb - ta));
            const double k = curvature_eval(c, branch, 0.5 * (lo + hi), h).value_or(0.0);
            return TangencyHit{{at.x, 0.0}, Contact::Transversal, k};
        }
    }
    const double s = pa.y / (pa.y - pb.y);
    const Point2 at = pa + s * (pb - pa);
    return TangencyHit{{at.x, 0.0}, Contact::Transversal, 0.0};
}

/// Golden-section minimisation of |y| over [ta, tb].
std::optional<std::pair<double, Point2>> minimise_abs_y(const ManifoldCurve& c, int branch,
                                                        double ta, double tb) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = ta, b = tb;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    auto p1 = c.evaluate(branch, x1), p2 = c.evaluate(branch, x2);
    if (!p1 || !p2) return std::nullopt;
    while (b - a > 1e-10) {
        if (std::abs(p1->y) < std::abs(p2->y)) {
            b = x2;
            x2 = x1;
            p2 = p1;
            x1 = b - g * (b - a);
            p1 = c.evaluate(branch, x1);
            if (!p1) return std::nullopt;
        } else {
            a = x1;
            x1 = x2;
            p1 = p2;
            x2 = a + g * (b - a);
            p2 = c.evaluate(branch, x2);
            if (!p2) return std::nullopt;
        }
    }
    return std::abs(p1->y) < std::abs(p2->y) ? std::make_pair(x1, *p1) : std::make_pair(x2, *p2);
}

}  // namespace

std::vector<TangencyHit> detect_tangencies(const ManifoldCurve& curve, double axis_tol) {
    constexpr double kTangentialTol = 1e-8;
    std::vector<TangencyHit> hits;
    const auto add = [&hits](const TangencyHit& h) {
        for (const TangencyHit& k : hits)
            if (norm_inf(k.location - h.location) <= 1e-8) return;
        hits.push_back(h);
    };

    for (std::size_t piece = 0; piece < curve.piece_count(); ++piece) {
        const auto [begin, end] = curve.piece_range(piece);
        const int branch = curve.piece_branch.empty() ? 0 : curve.piece_branch[piece];
        const auto& P = curve.points;
        const auto& T = curve.params;

        for (std::size_t i = begin; i + 1 < end; ++i) {
            if ((P[i].y < 0.0 && P[i + 1].y > 0.0) || (P[i].y > 0.0 && P[i + 1].y < 0.0)) {
                if (auto h = refine_crossing(curve, branch, T[i], T[i + 1], P[i], P[i + 1]))
                    add(*h);
            }
        }

        for (std::size_t i = begin + 1; i + 1 < end; ++i) {
            const double ya = std::abs(P[i - 1].y), yb = std::abs(P[i].y),
                         yc = std::abs(P[i + 1].y);
            if (!(yb <= ya && yb < yc && yb < axis_tol)) continue;
            if (P[i - 1].y * P[i + 1].y <= 0.0 && !(P[i - 1].y == 0.0 && P[i + 1].y == 0.0))
                continue;  // a crossing, handled above
            if (P[i].y != 0.0 && (P[i].y < 0.0) != (P[i - 1].y < 0.0)) continue;
            const double side = P[i - 1].y < 0.0 ? -1.0 : 1.0;

            if (curve.evaluate) {
                const auto m = minimise_abs_y(curve, branch, T[i - 1], T[i + 1]);
                if (!m) continue;
                const auto [t, p] = *m;
                if (std::abs(p.y) <= kTangentialTol) {
                    const double h = std::max(1e-6, 1e-3 * (T[i + 1] - T[i - 1]));
                    const double k = curvature_eval(curve, branch, t, h)
                                         .value_or(curvature_polyline(curve, i));
                    add({{p.x, p.y}, Contact::Tangential, k});
                } else if (p.y * side < 0.0) {
                    // dipped through the axis between samples: two crossings
                    if (auto h = refine_crossing(curve, branch, T[i - 1], t, P[i - 1], p)) add(*h);
                    if (auto h = refine_crossing(curve, branch, t, T[i + 1], p, P[i + 1])) add(*h);
                }
                continue;
            }

            // quadratic through the three samples, in index parameter
            const double y0 = P[i - 1].y, y1 = P[i].y, y2 = P[i + 1].y;
            const double a = 0.5 * (y0 - 2.0 * y1 + y2);
            const double b = 0.5 * (y2 - y0);
            double s = 0.0, yv = y1;
            if (a != 0.0) {
                s = std::clamp(-b / (2.0 * a), -1.0, 1.0);
                yv = y1 + b * s + a * s * s;
            }
            if (std::abs(yv) > kTangentialTol) continue;
            const Point2 base = P[i];
            const Point2 dir = s < 0.0 ? P[i] - P[i - 1] : P[i + 1] - P[i];
            const Point2 at = base + std::abs(s) * dir;
            add({{at.x, yv}, Contact::Tangential, curvature_polyline(curve, i)});
        }
    }
    return hits;
}

}  // namespace coexist
