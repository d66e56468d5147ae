#include "coexist/basin.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "coexist/errors.hpp"

namespace coexist {

namespace {

/// Evenly spread hues at full saturation, skipping anything too close to
/// black or white.
Rgb palette_color(std::size_t i) {
    const double hue = std::fmod(static_cast<double>(i) * 0.618033988749895, 1.0) * 6.0;
    const double v = i % 3 == 2 ? 0.7 : 1.0;
    const double s = i % 2 == 1 ? 0.75 : 1.0;
    const int sector = static_cast<int>(hue);
    const double f = hue - sector;
    const double p = v * (1.0 - s), q = v * (1.0 - s * f), t = v * (1.0 - s * (1.0 - f));
    double r = 0, g = 0, b = 0;
    switch (sector % 6) {
        case 0: r = v, g = t, b = p; break;
        case 1: r = q, g = v, b = p; break;
        case 2: r = p, g = v, b = t; break;
        case 3: r = p, g = q, b = v; break;
        case 4: r = t, g = p, b = v; break;
        default: r = v, g = p, b = q; break;
    }
    const auto to8 = [](double c) { return static_cast<std::uint8_t>(std::lround(c * 255.0)); };
    return {to8(r), to8(g), to8(b)};
}

}  // namespace

int AttractorRegistry::add(const MapParams& params, std::string label, std::vector<Point2> points,
                           std::optional<Rgb> color) {
    if (points.empty()) throw std::invalid_argument("attractor '" + label + "' has no points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Point2 next = eval_f(params, points[i]);
        if (!(norm_inf(next - points[(i + 1) % points.size()]) <= kRegistryTol))
            throw std::invalid_argument("attractor '" + label + "' is not a cycle of f");
    }
    const auto taken = [this](Rgb c) {
        return c == kUnknownColor || c == kDivergentColor ||
               std::any_of(entries_.begin(), entries_.end(),
                           [c](const Attractor& a) { return a.color == c; });
    };
    Rgb chosen;
    if (color) {
        if (taken(*color))
            throw std::invalid_argument("colour of attractor '" + label + "' is reserved or in use");
        chosen = *color;
    } else {
        std::size_t i = entries_.size();
        do chosen = palette_color(i++);
        while (taken(chosen));
    }
    Attractor a;
    a.id = static_cast<int>(entries_.size());
    a.label = std::move(label);
    a.period = points.size();
    a.points = std::move(points);
    a.color = chosen;
    entries_.push_back(std::move(a));
    return entries_.back().id;
}

const Attractor* AttractorRegistry::find(int id) const {
    for (const Attractor& a : entries_)
        if (a.id == id) return &a;
    return nullptr;
}

Rgb AttractorRegistry::color_of(Label label) const {
    if (label == kDivergent) return kDivergentColor;
    if (const Attractor* a = find(label)) return a->color;
    return kUnknownColor;
}

AttractorRegistry registry_from_scan(const MapParams& params, const ScanResult& scan) {
    AttractorRegistry reg;
    for (const SRkOrbit& o : scan.orbits_with(StabilityClass::AsymptoticallyStable))
        reg.add(params, "SR_" + std::to_string(o.k), o.points);
    return reg;
}

ProximityIndex::ProximityIndex(const AttractorRegistry& registry) {
    for (const Attractor& a : registry.entries()) {
        periods_[a.id] = a.period;
        for (const Point2& p : a.points) entries_.push_back({p.x, p.y, a.id});
    }
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.x < b.x; });
}

std::optional<int> ProximityIndex::nearest(Point2 p, double tol) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), p.x - tol,
                               [](const Entry& e, double x) { return e.x < x; });
    std::optional<int> best;
    double best_d = tol;
    for (; it != entries_.end() && it->x <= p.x + tol; ++it) {
        const double d = std::max(std::abs(it->x - p.x), std::abs(it->y - p.y));
        if (d <= best_d) {
            best_d = d;
            best = it->id;
        }
    }
    return best;
}

std::size_t ProximityIndex::period_of(int id) const { return periods_.at(id); }

Label classify_point(const MapParams& params, const ProximityIndex& index, Point2 p,
                     const BasinLimits& limits, std::size_t* iterations) {
    int run_id = kUnknown;
    std::size_t run = 0;
    for (std::size_t n = 0;; ++n) {
        if (!(norm_inf(p) <= limits.escape_radius)) {
            if (iterations) *iterations = n;
            return kDivergent;
        }
        const auto near = index.nearest(p, limits.prox_tol);
        if (near) {
            run = *near == run_id ? run + 1 : 1;
            run_id = *near;
            if (run >= index.period_of(run_id)) {
                if (iterations) *iterations = n;
                return run_id;
            }
        } else {
            run = 0;
            run_id = kUnknown;
        }
        if (n == limits.max_iter) {
            if (iterations) *iterations = n;
            return kUnknown;
        }
        p = eval_f(params, p);
    }
}

Label classify_point(const MapParams& params, const AttractorRegistry& registry, Point2 p,
                     const BasinLimits& limits, std::size_t* iterations) {
    return classify_point(params, ProximityIndex(registry), p, limits, iterations);
}

Point2 BasinGrid::cell_center(std::size_t ix, std::size_t iy) const {
    // (2i+1)/(2n) is one correctly rounded division, so grids whose cells
    // nest by an odd factor share bit-identical centres
    const double tx = static_cast<double>(2 * ix + 1) / static_cast<double>(2 * nx);
    const double ty = static_cast<double>(2 * iy + 1) / static_cast<double>(2 * ny);
    return {window.x_min + tx * window.width(), window.y_max - ty * window.height()};
}

std::map<Label, double> BasinGrid::fractions() const {
    std::map<Label, double> out;
    for (Label l : labels) out[l] += 1.0;
    for (auto& [l, v] : out) v /= static_cast<double>(labels.size());
    return out;
}

BasinGrid raster(const MapParams& params, const AttractorRegistry& registry, const Window& window,
                 std::size_t nx, std::size_t ny, const BasinLimits& limits, unsigned threads) {
    if (!window.valid()) throw InvalidWindow("basin window must have positive area");
    if (nx < 2 || ny < 2) throw std::invalid_argument("basin resolution must be at least 2x2");

    BasinGrid grid;
    grid.window = window;
    grid.nx = nx;
    grid.ny = ny;
    grid.labels.assign(nx * ny, kUnknown);
    std::vector<std::size_t> iters(nx * ny, 0);

    const ProximityIndex index(registry);
    std::atomic<std::size_t> next_row{0};
    const auto worker = [&] {
        for (std::size_t iy = next_row++; iy < ny; iy = next_row++) {
            for (std::size_t ix = 0; ix < nx; ++ix) {
                const std::size_t cell = iy * nx + ix;
                grid.labels[cell] =
                    classify_point(params, index, grid.cell_center(ix, iy), limits, &iters[cell]);
            }
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, ny));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (std::size_t n : iters) {
        grid.total_iterations += n;
        grid.max_iterations = std::max(grid.max_iterations, n);
    }
    return grid;
}

std::string ppm_bytes(const BasinGrid& grid, const AttractorRegistry& registry) {
    std::string out = "P6\n" + std::to_string(grid.nx) + " " + std::to_string(grid.ny) + "\n255\n";
    out.reserve(out.size() + 3 * grid.labels.size());
    for (Label l : grid.labels) {
        const Rgb c = registry.color_of(l);
        out.push_back(static_cast<char>(c.r));
        out.push_back(static_cast<char>(c.g));
        out.push_back(static_cast<char>(c.b));
    }
    return out;
}

void write_ppm(const BasinGrid& grid, const AttractorRegistry& registry,
               const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    const std::string bytes = ppm_bytes(grid, registry);
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw IoError("failed writing " + path.string());
}

std::optional<PeriodicOrbit> discover_attractor(const MapParams& params, Point2 seed,
                                                std::size_t transient, std::size_t max_period) {
    const auto settled = iterate_to(params, seed, transient);
    if (!settled) return std::nullopt;
    Point2 p = *settled;
    for (std::size_t n = 1; n <= max_period; ++n) {
        p = eval_f(params, p);
        if (norm_inf(p - *settled) > 1e-6) continue;
        try {
            PeriodicOrbit orbit = find_periodic_newton(params, *settled, n);
            if (orbit.minimal_period == n && orbit.stability == StabilityClass::AsymptoticallyStable)
                return orbit;
        } catch (const Error&) {
        }
        return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace coexist
