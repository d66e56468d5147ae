#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "coexist/basin.hpp"
#include "coexist/errors.hpp"
#include "oracles.hpp"

using namespace coexist;

namespace {

AttractorRegistry auto_registry(int id) {
    const MapParams p = parameter_set(id);
    return registry_from_scan(p, scan_srk(p, 0, 15));
}

int id_of(const AttractorRegistry& reg, const std::string& label) {
    for (const Attractor& a : reg.entries())
        if (a.label == label) return a.id;
    return -100;
}

}  // namespace

TEST_CASE("single points") {
    const MapParams p = parameter_set(20);
    const AttractorRegistry reg = auto_registry(20);
    REQUIRE(reg.size() == 16);
    const Attractor* sr3 = reg.find(id_of(reg, "SR_3"));
    REQUIRE(sr3);
    CHECK(sr3->period == 4);
    CHECK(classify_point(p, reg, sr3->points[0]) == sr3->id);

    std::size_t used = 0;
    CHECK(classify_point(p, reg, {100, 100}, {}, &used) == kDivergent);
    CHECK(used <= 1);

    const Attractor* sr5 = reg.find(id_of(reg, "SR_5"));
    REQUIRE(sr5);
    CHECK(classify_point(p, reg, sr5->points[0] + Point2{1e-7, 1e-7}) == sr5->id);

    BasinLimits tiny;
    tiny.max_iter = 0;
    CHECK(classify_point(p, reg, {0.3, 0.3}, tiny) == kUnknown);
}

TEST_CASE("registered cycles classify as themselves") {
    for (int id : {20, 21, 22, 23}) {
        const MapParams p = parameter_set(id);
        const AttractorRegistry reg = auto_registry(id);
        const ProximityIndex index(reg);
        for (const Attractor& a : reg.entries()) {
            CAPTURE(id);
            CAPTURE(a.label);
            for (const Point2& q : a.points) CHECK(classify_point(p, index, q, {}) == a.id);
        }
    }
}

TEST_CASE("a small box around the fixed point belongs to it") {
    const MapParams p = parameter_set(20);
    AttractorRegistry reg;
    const int fixed = reg.add(p, "fixed", {{1, 1}});
    const BasinGrid g = raster(p, reg, Window{1 - 5e-4, 1 + 5e-4, 1 - 5e-4, 1 + 5e-4}, 10, 10);
    for (Label l : g.labels) CHECK(l == fixed);
    CHECK(g.fractions().at(fixed) == 1.0);
}

TEST_CASE("raster argument checks") {
    const MapParams p = parameter_set(20);
    const AttractorRegistry reg = auto_registry(20);
    CHECK_THROWS_AS(raster(p, reg, Window{1, 1, 0, 1}, 10, 10), InvalidWindow);
    CHECK_THROWS_AS(raster(p, reg, Window{0, 1, 2, 1}, 10, 10), InvalidWindow);
    CHECK_THROWS_AS(raster(p, reg, Window{}, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(raster(p, reg, Window{}, 2, 1), std::invalid_argument);
}

TEST_CASE("PPM encoding") {
    const MapParams p = parameter_set(20);
    AttractorRegistry reg;
    const int a = reg.add(p, "fixed", {{1, 1}}, Rgb{10, 20, 30});

    BasinGrid g;
    g.nx = 2;
    g.ny = 2;
    g.labels = {a, kUnknown, kDivergent, a};
    const std::string bytes = ppm_bytes(g, reg);
    const std::string header = "P6\n2 2\n255\n";
    const std::string body{10, 20, 30, 0, 0, 0, char(255), char(255), char(255), 10, 20, 30};
    CHECK(bytes == header + body);

    const auto img = oracle::read_ppm(bytes);
    REQUIRE(img);
    CHECK(img->nx == 2);
    CHECK(img->ny == 2);
    CHECK(img->rgb[9] == 10);

    BasinGrid one;
    one.nx = one.ny = 1;
    one.labels = {kDivergent};
    CHECK(ppm_bytes(one, reg) == "P6\n1 1\n255\n\xff\xff\xff");

    const auto dir = std::filesystem::temp_directory_path() / "coexist_test_basin";
    std::filesystem::create_directories(dir);
    write_ppm(g, reg, dir / "g.ppm");
    std::ifstream in(dir / "g.ppm", std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == bytes);
    CHECK_THROWS_AS(write_ppm(g, reg, dir / "missing" / "deeper" / "g.ppm"), IoError);
}

TEST_CASE("raster is independent of the thread count") {
    const MapParams p = parameter_set(21);
    const AttractorRegistry reg = auto_registry(21);
    const BasinGrid a = raster(p, reg, Window{}, 60, 48, {}, 1);
    const BasinGrid b = raster(p, reg, Window{}, 60, 48, {}, 4);
    const BasinGrid c = raster(p, reg, Window{}, 60, 48, {}, 0);
    CHECK(a.labels == b.labels);
    CHECK(a.labels == c.labels);
    CHECK(a.total_iterations == b.total_iterations);
    CHECK(ppm_bytes(a, reg) == ppm_bytes(b, reg));

    // cell centres, row 0 at the top
    CHECK(a.cell_center(0, 0).x == doctest::Approx(-0.5 + 1.0 / 60));
    CHECK(a.cell_center(0, 0).y == doctest::Approx(1.5 - 1.0 / 48));
    for (std::size_t iy = 0; iy < a.ny; iy += 7)
        for (std::size_t ix = 0; ix < a.nx; ix += 5)
            CHECK(a.at(ix, iy) == classify_point(p, reg, a.cell_center(ix, iy)));
}

TEST_CASE("coarse grid equals the subsampled fine grid") {
    // with an odd factor the coarse cell centres are fine cell centres
    const MapParams p = parameter_set(20);
    const AttractorRegistry reg = auto_registry(20);
    const BasinGrid fine = raster(p, reg, Window{}, 150, 150, {}, 0);
    const BasinGrid coarse = raster(p, reg, Window{}, 50, 50, {}, 0);
    std::size_t same = 0;
    for (std::size_t iy = 0; iy < 50; ++iy)
        for (std::size_t ix = 0; ix < 50; ++ix) {
            const Point2 cf = fine.cell_center(3 * ix + 1, 3 * iy + 1);
            const Point2 cc = coarse.cell_center(ix, iy);
            CHECK(cf == cc);
            same += fine.at(3 * ix + 1, 3 * iy + 1) == coarse.at(ix, iy);
        }
    CHECK(same == 2500);
}

TEST_CASE("a larger budget only resolves Unknown cells") {
    const MapParams p = parameter_set(22);
    const AttractorRegistry reg = auto_registry(22);
    BasinLimits lim;
    std::vector<BasinGrid> grids;
    for (std::size_t budget : {200u, 2000u, 20000u}) {
        lim.max_iter = budget;
        grids.push_back(raster(p, reg, Window{}, 40, 40, lim, 0));
    }
    for (std::size_t g = 1; g < grids.size(); ++g) {
        std::size_t unknown_before = 0, unknown_after = 0;
        for (std::size_t i = 0; i < grids[g].labels.size(); ++i) {
            const Label before = grids[g - 1].labels[i], after = grids[g].labels[i];
            if (before != kUnknown) CHECK(after == before);
            unknown_before += before == kUnknown;
            unknown_after += after == kUnknown;
        }
        CHECK(unknown_after <= unknown_before);
        CHECK(grids[g].max_iterations <= lim.max_iter);
    }
}

TEST_CASE("long-period attractors outside the scan are found from Unknown cells") {
    struct Case {
        int id;
        Point2 seed;
    };
    for (const Case& c : {Case{21, {0.99135, 0.22092}}, Case{22, {0.40606, 0.53936}}}) {
        CAPTURE(c.id);
        const MapParams p = parameter_set(c.id);
        AttractorRegistry reg = auto_registry(c.id);
        REQUIRE(classify_point(p, reg, c.seed) == kUnknown);
        const auto found = discover_attractor(p, c.seed);
        REQUIRE(found);
        CHECK(found->period == 16);
        CHECK(found->stability == StabilityClass::AsymptoticallyStable);
        // independent check that it is a cycle of the reference map
        const oracle::Family F = oracle::family(c.id);
        const oracle::P back = oracle::iterate(F, {found->points[0].x, found->points[0].y}, 16);
        CHECK(std::abs(back.x - found->points[0].x) <= 1e-10);
        CHECK(std::abs(back.y - found->points[0].y) <= 1e-10);
        const int extra = reg.add(p, "P16", found->points);
        CHECK(classify_point(p, reg, c.seed) == extra);
    }
    CHECK_FALSE(discover_attractor(parameter_set(20), {100, 100}));
}

TEST_CASE("registry validation") {
    const MapParams p = parameter_set(20);
    AttractorRegistry reg;
    CHECK_THROWS_AS(reg.add(p, "bad", {{0.5, 0.5}}), std::invalid_argument);
    CHECK_THROWS_AS(reg.add(p, "empty", {}), std::invalid_argument);
    CHECK(reg.add(p, "fixed", {{1, 1}}, Rgb{1, 2, 3}) == 0);
    const SRkOrbit o = assemble_orbit(p, 2, 0.0);
    CHECK_THROWS_AS(reg.add(p, "dup colour", o.points, Rgb{1, 2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(reg.add(p, "black", o.points, kUnknownColor), std::invalid_argument);
    CHECK_THROWS_AS(reg.add(p, "white", o.points, kDivergentColor), std::invalid_argument);
    CHECK(reg.add(p, "SR_2", o.points) == 1);
    CHECK(reg.color_of(kUnknown) == kUnknownColor);
    CHECK(reg.color_of(kDivergent) == kDivergentColor);
    CHECK(reg.color_of(0) == Rgb{1, 2, 3});

    // automatic colours are distinct and never the sentinel colours
    const AttractorRegistry big = auto_registry(21);
    for (std::size_t i = 0; i < big.size(); ++i) {
        const Rgb ci = big.entries()[i].color;
        CHECK_FALSE(ci == kUnknownColor);
        CHECK_FALSE(ci == kDivergentColor);
        for (std::size_t j = i + 1; j < big.size(); ++j) CHECK_FALSE(ci == big.entries()[j].color);
    }
}
