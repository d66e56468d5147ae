#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "coexist/errors.hpp"
#include "coexist/orbit.hpp"
#include "coexist/stability.hpp"
#include "oracles.hpp"

using namespace coexist;

TEST_CASE("classify on the named points") {
    CHECK(classify(0.0, 0.5) == StabilityClass::AsymptoticallyStable);
    CHECK(classify(3.0, 0.5) == StabilityClass::Saddle);
    CHECK(classify(2.0, 1.0) == StabilityClass::NonHyperbolic);
    CHECK(classify(0.0, 4.0) == StabilityClass::Source);
    CHECK(classify(0.5, 1.0) == StabilityClass::NonHyperbolic);   // complex pair on the circle
    CHECK(classify(1.5, 0.5) == StabilityClass::NonHyperbolic);   // eigenvalue 1
    CHECK(classify(-1.5, 0.5) == StabilityClass::NonHyperbolic);  // eigenvalue -1
}

TEST_CASE("classify agrees with eigenvalue moduli on a grid") {
    int compared = 0;
    for (int i = 0; i < 100; ++i) {
        for (int j = 0; j < 100; ++j) {
            const double tau = -4.0 + 8.0 * (i + 0.5) / 100.0;
            const double delta = -2.0 + 4.0 * (j + 0.5) / 100.0;
            const oracle::Kind k = oracle::eigen_kind(tau, delta, 1e-7);
            if (k == oracle::Kind::Boundary) continue;
            ++compared;
            const StabilityClass c = classify(tau, delta);
            CAPTURE(tau);
            CAPTURE(delta);
            switch (k) {
                case oracle::Kind::Stable: CHECK(c == StabilityClass::AsymptoticallyStable); break;
                case oracle::Kind::Saddle: CHECK(c == StabilityClass::Saddle); break;
                case oracle::Kind::Source: CHECK(c == StabilityClass::Source); break;
                case oracle::Kind::Boundary: break;
            }
        }
    }
    CHECK(compared > 9900);
}

TEST_CASE("orbit Jacobian of the worked orbits") {
    const MapParams p = parameter_set(20);
    const std::vector<Point2> orbit{{0.512, 1}, {1, 0.512}, {0.8, 0.64}, {0.64, 0.8}};
    const Jacobian2 m = orbit_jacobian(p, orbit);
    CHECK(m.a == doctest::Approx(0.0));
    CHECK(m.b == doctest::Approx(-0.256));
    CHECK(m.c == doctest::Approx(1.953125));
    CHECK(m.d == doctest::Approx(0.0));
    CHECK(m.trace() == doctest::Approx(0.0));
    CHECK(m.det() == doctest::Approx(0.5));

    const std::vector<Point2> fixed{{1, 1}};
    CHECK(orbit_jacobian(p, fixed) == Jacobian2{0, -0.5, 1, 0});
    CHECK(orbit_jacobian(p, std::vector<Point2>{}) == Jacobian2::identity());
}

TEST_CASE("trace and det are basepoint independent and det is multiplicative") {
    for (int id : {20, 21, 22, 23}) {
        const MapParams p = parameter_set(id);
        for (const SRkOrbit& o : scan_srk(p, 0, 15).orbits()) {
            const Jacobian2 base = orbit_jacobian(p, o.points);
            double det_product = 1.0;
            for (const Point2& q : o.points) det_product *= jacobian_f(p, q).det();
            CHECK(std::abs(base.det() - det_product) <= 1e-12 * std::max(1.0, std::abs(det_product)));
            std::vector<Point2> rotated = o.points;
            for (std::size_t r = 1; r < rotated.size(); ++r) {
                std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
                const Jacobian2 m = orbit_jacobian(p, rotated);
                const double scale = std::max(1.0, std::abs(base.trace()));
                CHECK(std::abs(m.trace() - base.trace()) <= 1e-9 * scale);
                CHECK(std::abs(m.det() - base.det()) <= 1e-9 * std::max(1.0, std::abs(base.det())));
            }
        }
    }
}

TEST_CASE("predicted asymptotics") {
    for (int id : {20, 21, 22, 23}) {
        const AsymptoticPrediction a = predict_asymptotics(parameter_set(id));
        CHECK(a.tau_inf_minus == doctest::Approx(0.0));
        CHECK(a.tau_inf_plus == doctest::Approx(3.0));
        CHECK(a.delta_inf == doctest::Approx(0.5));
    }
    MapParams p = parameter_set(20);
    p.c2 = 0.0;
    AsymptoticPrediction a = predict_asymptotics(p);
    CHECK(a.tau_inf_minus == doctest::Approx(0.0));
    CHECK(a.tau_inf_plus == doctest::Approx(2.0));
    CHECK(a.delta_inf == doctest::Approx(0.0));

    p.c2 = -1.0;
    a = predict_asymptotics(p);
    CHECK(a.tau_inf_minus == doctest::Approx(0.0));
    CHECK(a.tau_inf_plus == doctest::Approx(4.0));
    CHECK(a.delta_inf == doctest::Approx(1.0));
    CHECK(classify(a.tau_inf_minus, a.delta_inf) == StabilityClass::NonHyperbolic);

    MapParams neg = parameter_set(20);
    neg.c2 = 0.0;
    neg.c1 = 1.0;
    neg.d3 = 1.0;
    CHECK_THROWS_AS(predict_asymptotics(neg), NegativeDiscriminant);
}

TEST_CASE("stable orbits of the preserving set sit at (0, 0.5)") {
    const MapParams p = parameter_set(20);
    for (const SRkOrbit& o : scan_srk(p, 0, 15).orbits_with(StabilityClass::AsymptoticallyStable)) {
        CAPTURE(o.k);
        CHECK(std::abs(o.trace) <= 1e-12);
        CHECK(std::abs(o.det - 0.5) <= 1e-12);
    }
}
