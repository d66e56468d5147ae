#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "coexist/errors.hpp"
#include "coexist/manifold.hpp"
#include "oracles.hpp"

using namespace coexist;

namespace {

double seg_dist(Point2 p, Point2 a, Point2 b) {
    const Point2 ab = b - a, ap = p - a;
    const double len2 = ab.x * ab.x + ab.y * ab.y;
    const double t = len2 > 0 ? std::clamp((ap.x * ab.x + ap.y * ab.y) / len2, 0.0, 1.0) : 0.0;
    return norm2(p - (a + t * ab));
}

/// Distance from p to the union of the curve's pieces.
double curve_dist(const ManifoldCurve& c, Point2 p) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.piece_count(); ++i) {
        const auto [b, e] = c.piece_range(i);
        if (e - b == 1) best = std::min(best, norm2(p - c.points[b]));
        for (std::size_t j = b + 1; j < e; ++j)
            best = std::min(best, seg_dist(p, c.points[j - 1], c.points[j]));
    }
    return best;
}

double set_dist(const std::vector<ManifoldCurve>& cs, Point2 p) {
    double best = std::numeric_limits<double>::infinity();
    for (const ManifoldCurve& c : cs) best = std::min(best, curve_dist(c, p));
    return best;
}

int depth_of(const std::string& label) {
    if (label == "axis") return 0;
    return 1 + static_cast<int>(std::count(label.begin(), label.end(), '.'));
}

const TangencyHit* hit_near(const std::vector<TangencyHit>& hits, Point2 p, double tol) {
    for (const TangencyHit& h : hits)
        if (norm_inf(h.location - p) <= tol) return &h;
    return nullptr;
}

}  // namespace

TEST_CASE("inverse of the linear branch") {
    const MapParams p = parameter_set(20);
    CHECK(norm_inf(invert_U0(p, {0.8, 0}) - Point2{1, 0}) <= 1e-15);
    auto gen = oracle::rng(11);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int id : {20, 21, 22, 23}) {
        const MapParams q = parameter_set(id);
        for (int i = 0; i < 1000; ++i) {
            const Point2 z{u(gen), u(gen)};
            CHECK(norm_inf(eval_U0(q, invert_U0(q, z)) - z) <= 1e-14);
        }
    }
}

TEST_CASE("inverse of the excursion branch") {
    const MapParams p = parameter_set(20);
    CHECK(norm_inf(invert_U1(p, {1, 0}) - Point2{0, 1}) <= 1e-15);
    CHECK(norm_inf(invert_U1(p, {0.75, 0.25}) - Point2{0, 1.5}) <= 1e-14);
    auto gen = oracle::rng(12);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int id : {20, 21, 22, 23}) {
        const MapParams q = parameter_set(id);
        const oracle::Family F = oracle::family(id);
        for (int i = 0; i < 1000; ++i) {
            const Point2 z{u(gen), u(gen)};
            const Point2 pre = invert_U1(q, z);
            CHECK(norm_inf(eval_U1(q, pre) - z) <= 1e-13);
            // forward through the reference map when the preimage is in the upper region
            if (pre.y >= F.h1()) {
                const oracle::P img = oracle::f(F, {pre.x, pre.y});
                CHECK(std::abs(img.x - z.x) <= 1e-13);
                CHECK(std::abs(img.y - z.y) <= 1e-13);
            }
        }
    }
    MapParams bad = p;
    bad.d3 = 0.1;
    CHECK_THROWS_AS(invert_U1(bad, {1, 0}), DegenerateCoefficients);
    bad = p;
    bad.c2 = 0.0;
    CHECK_THROWS_AS(invert_U1(bad, {1, 0}), DegenerateCoefficients);
}

TEST_CASE("blend-strip preimages") {
    auto gen = oracle::rng(13);
    std::uniform_real_distribution<double> ux(-1.0, 1.5);
    std::uniform_real_distribution<double> uz(0.01, 0.99);
    std::normal_distribution<double> noise(0.0, 1e-3);
    for (int id : {20, 21, 22, 23}) {
        const MapParams p = parameter_set(id);
        const oracle::Family F = oracle::family(id);
        for (int i = 0; i < 200; ++i) {
            const Point2 z{ux(gen), p.h0 + uz(gen) * (p.h1 - p.h0)};
            const oracle::P img = oracle::f(F, {z.x, z.y});
            const Point2 q{img.x, img.y};
            const std::vector<Point2> pre =
                invert_blend(p, q, {z + Point2{noise(gen), noise(gen)}});
            CAPTURE(id);
            CAPTURE(z.x);
            CAPTURE(z.y);
            bool found = false;
            for (const Point2& w : pre) {
                CHECK(norm_inf(eval_blend(p, w) - q) <= 1e-9);
                CHECK(region_of(p, w.y) == Region::Blend);
                found = found || norm_inf(w - z) <= 1e-8;
            }
            CHECK(found);
            CHECK(std::is_sorted(pre.begin(), pre.end(),
                                 [](Point2 a, Point2 b) { return a.y < b.y; }));
        }
    }
    const MapParams p = parameter_set(20);
    // for X = 50 the strip's image has Y > 0 only
    CHECK(invert_blend(p, {50, -50}).empty());

    const Point2 z{0.4, 0.9};
    const auto exact = invert_blend_newton(p, eval_blend(p, z), z);
    REQUIRE(exact);
    CHECK(exact->iterations <= 2);
    CHECK(norm_inf(exact->point - z) <= 1e-12);
}

TEST_CASE("unstable manifold of the preserving set") {
    const MapParams p = parameter_set(20);
    const ManifoldCurve w = trace_unstable(p, 46, Window{});
    CHECK(w.kind == CurveKind::Unstable);
    CHECK_FALSE(w.partial);
    CHECK(w.stats.max_gap <= 1e-2 + 1e-12);
    REQUIRE(w.points.size() == w.params.size());
    CHECK(std::is_sorted(w.params.begin(), w.params.end()));
    // chords sag by at most curvature * max_gap^2 / 8 at the fold
    CHECK(curve_dist(w, {1, 0}) <= 1e-4);
    CHECK(curve_dist(w, {0, 1}) <= 1e-6);

    const std::vector<TangencyHit> hits = detect_tangencies(w);
    const TangencyHit* h = hit_near(hits, {1, 0}, 1e-6);
    REQUIRE(h);
    CHECK(h->contact == Contact::Tangential);
    // image of the vertical line x = 0 near (0, 1) is x = 1 + c2 u, y = d5 u^2
    CHECK(h->curvature_sign == doctest::Approx(2.0 / (0.5 * 0.5)).epsilon(1e-3));

    const ManifoldCurve seg = trace_unstable(p, 1, Window{});
    CHECK(seg.piece_count() == 1);
    for (const Point2& q : seg.points) {
        CHECK(q.x == 0.0);
        CHECK(q.y > 0.0);
    }
}

TEST_CASE("unstable manifold grows both half-axes when sigma < 0") {
    const ManifoldCurve seg = trace_unstable(parameter_set(21), 3, Window{});
    bool up = false, down = false;
    for (const Point2& q : seg.points) {
        CHECK(q.x == 0.0);
        up = up || q.y > 0;
        down = down || q.y < 0;
    }
    CHECK(up);
    CHECK(down);
}

TEST_CASE("unstable manifold is forward invariant") {
    for (int id : {20, 21, 22, 23}) {
        const MapParams p = parameter_set(id);
        const int n = 30;
        const ManifoldCurve w = trace_unstable(p, n, Window{});
        auto gen = oracle::rng(14);
        std::uniform_int_distribution<std::size_t> pick(0, w.points.size() - 1);
        int checked = 0;
        for (int i = 0; i < 300; ++i) {
            const std::size_t j = pick(gen);
            if (w.params[j] > n) continue;
            const Point2 img = eval_f(p, w.points[j]);
            if (!Window{}.contains(img)) continue;
            ++checked;
            CAPTURE(id);
            CHECK(curve_dist(w, img) <= 1e-2);
        }
        CHECK(checked > 100);
    }
}

TEST_CASE("tangency of the first excursion appears in every set") {
    for (int id : {20, 21, 22, 23}) {
        CAPTURE(id);
        const ManifoldCurve w = trace_unstable(parameter_set(id), 46, Window{});
        const std::vector<TangencyHit> hits = detect_tangencies(w);
        const TangencyHit* h = hit_near(hits, {1, 0}, 1e-6);
        REQUIRE(h);
        CHECK(h->contact == Contact::Tangential);
        CHECK(h->curvature_sign > 0.0);
        for (std::size_t i = 0; i < hits.size(); ++i)
            for (std::size_t j = i + 1; j < hits.size(); ++j)
                CHECK(norm_inf(hits[i].location - hits[j].location) > 1e-8);
    }
}

TEST_CASE("clipping away the axis removes every hit") {
    const Window high{-0.5, 1.5, 0.05, 1.5};
    const ManifoldCurve w = trace_unstable(parameter_set(20), 46, high);
    for (const Point2& q : w.points) CHECK(high.contains(q));
    CHECK(detect_tangencies(w).empty());
}

TEST_CASE("stable preimage tree") {
    const MapParams p = parameter_set(20);
    const std::vector<ManifoldCurve> d0 = trace_stable(p, 0, Window{});
    REQUIRE(d0.size() == 1);
    CHECK(d0[0].piece_count() == 1);
    for (const Point2& q : d0[0].points) {
        CHECK(q.y == 0.0);
        CHECK(q.x >= 1e-4 - 1e-18);
        CHECK(q.x <= 1e-4 / 0.8 + 1e-18);
    }
    CHECK(trace_stable(parameter_set(21), 0, Window{}).size() +
              trace_stable(parameter_set(21), 0, Window{}).front().piece_count() >= 3);

    const std::vector<ManifoldCurve> d1 = trace_stable(p, 1, Window{});
    CHECK(set_dist(d1, {0, 1}) <= 1e-6);
    const std::vector<ManifoldCurve> d2 = trace_stable(p, 2, Window{});
    CHECK(set_dist(d2, {0, 0.8}) <= 1e-6);

    for (int id : {20, 21, 22, 23}) {
        const MapParams q = parameter_set(id);
        const oracle::Family F = oracle::family(id);
        const std::vector<ManifoldCurve> tree = trace_stable(q, 3, Window{});
        CHECK(tree.size() > 3);
        for (const ManifoldCurve& c : tree) {
            CAPTURE(id);
            CAPTURE(c.label);
            CHECK(c.kind == CurveKind::StableBranch);
            const int d = depth_of(c.label);
            for (std::size_t j = 0; j < c.points.size(); j += 7) {
                CHECK(Window{}.contains(c.points[j]));
                const oracle::P img = oracle::iterate(F, {c.points[j].x, c.points[j].y}, d);
                CHECK(std::abs(img.y) <= 1e-6);
            }
        }
    }
}

TEST_CASE("axis contacts of synthetic polylines") {
    std::vector<Point2> line, lifted, parabola;
    for (int i = 0; i <= 200; ++i) {
        const double x = i / 200.0;
        line.push_back({x, x - 0.503});
        lifted.push_back({x, x * x + 1.0});
        parabola.push_back({x, (x - 0.3) * (x - 0.3)});
    }
    const auto a = detect_tangencies(polyline_curve(line));
    REQUIRE(a.size() == 1);
    CHECK(a[0].contact == Contact::Transversal);
    CHECK(a[0].location.x == doctest::Approx(0.503).epsilon(1e-9));

    CHECK(detect_tangencies(polyline_curve(lifted)).empty());

    const auto c = detect_tangencies(polyline_curve(parabola));
    REQUIRE(c.size() == 1);
    CHECK(c[0].contact == Contact::Tangential);
    CHECK(c[0].location.x == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(c[0].curvature_sign == doctest::Approx(2.0).epsilon(1e-6));
}
