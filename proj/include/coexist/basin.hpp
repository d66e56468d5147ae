#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coexist/map.hpp"
#include "coexist/orbit.hpp"
#include "coexist/window.hpp"

namespace coexist {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kUnknownColor{0, 0, 0};
inline constexpr Rgb kDivergentColor{255, 255, 255};

/// Basin label: a registered attractor id (>= 0), or one of the two
/// sentinels below.
using Label = int;
inline constexpr Label kUnknown = -1;
inline constexpr Label kDivergent = -2;

struct Attractor {
    int id = 0;
    std::string label;
    std::vector<Point2> points;  ///< one full cycle in orbit order
    std::size_t period = 0;
    Rgb color;
};

/// Residual allowed when registering a cycle.
inline constexpr double kRegistryTol = 1e-10;

class AttractorRegistry {
public:
    /// Verifies that `points` is a cycle of f (consecutive images within
    /// kRegistryTol) and assigns the next id. With no colour given one is
    /// drawn from a fixed palette. Throws std::invalid_argument on a bad
    /// cycle, a duplicate colour or a black/white colour.
    int add(const MapParams& params, std::string label, std::vector<Point2> points,
            std::optional<Rgb> color = std::nullopt);

    const std::vector<Attractor>& entries() const { return entries_; }
    const Attractor* find(int id) const;
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    /// Colour used for a label (sentinels map to black/white).
    Rgb color_of(Label label) const;

private:
    std::vector<Attractor> entries_;
};

/// Registers every asymptotically stable SR_k orbit of a scan, labelled
/// "SR_<k>", in order of k.
AttractorRegistry registry_from_scan(const MapParams& params, const ScanResult& scan);

struct BasinLimits {
    std::size_t max_iter = 20000;
    double escape_radius = kDefaultEscapeRadius;
    double prox_tol = 1e-5;
};

/// Sorted point lookup over every attractor cycle point.
class ProximityIndex {
public:
    explicit ProximityIndex(const AttractorRegistry& registry);
    /// Attractor with a cycle point within tol (inf-norm) of p.
    std::optional<int> nearest(Point2 p, double tol) const;
    std::size_t period_of(int id) const;

private:
    struct Entry {
        double x, y;
        int id;
    };
    std::vector<Entry> entries_;
    std::map<int, std::size_t> periods_;
};

/// Iterates f from p until the orbit stays within prox_tol of one attractor
/// for that attractor's period (consecutive iterates), escapes, or the
/// iteration budget runs out. `iterations` receives the steps used.
Label classify_point(const MapParams& params, const AttractorRegistry& registry, Point2 p,
                     const BasinLimits& limits = {}, std::size_t* iterations = nullptr);

/// Same as classify_point with a prebuilt index.
Label classify_point(const MapParams& params, const ProximityIndex& index, Point2 p,
                     const BasinLimits& limits, std::size_t* iterations = nullptr);

struct BasinGrid {
    Window window;
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<Label> labels;  ///< row-major, row 0 at the top (y max)
    std::uint64_t total_iterations = 0;
    std::size_t max_iterations = 0;

    Label at(std::size_t ix, std::size_t iy) const { return labels[iy * nx + ix]; }
    Point2 cell_center(std::size_t ix, std::size_t iy) const;
    /// Fraction of cells per label.
    std::map<Label, double> fractions() const;
};

/// Classifies the centre of every cell. Rows are shared among `threads`
/// workers (0 = hardware concurrency); the result does not depend on it.
/// Throws InvalidWindow for a degenerate window and std::invalid_argument
/// below 2x2 cells.
BasinGrid raster(const MapParams& params, const AttractorRegistry& registry, const Window& window,
                 std::size_t nx, std::size_t ny, const BasinLimits& limits = {},
                 unsigned threads = 1);

/// Binary P6 image of the grid.
std::string ppm_bytes(const BasinGrid& grid, const AttractorRegistry& registry);

/// Writes ppm_bytes to path; throws IoError.
void write_ppm(const BasinGrid& grid, const AttractorRegistry& registry,
               const std::filesystem::path& path);

/// Long transient from `seed`, then period detection (up to max_period) and
/// Newton polishing. Returns the cycle when it is asymptotically stable.
std::optional<PeriodicOrbit> discover_attractor(const MapParams& params, Point2 seed,
                                                std::size_t transient = 20000,
                                                std::size_t max_period = 256);

}  // namespace coexist
