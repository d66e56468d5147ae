#include "coexist/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "coexist/errors.hpp"

namespace coexist {

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

namespace {

void orbit_rows(std::string& out, int k, std::string_view branch, const std::vector<Point2>& pts,
                double trace, double det, StabilityClass stab, double residual) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
        out += std::to_string(k) + ',' + std::to_string(pts.size()) + ',' + std::string(branch) +
               ',' + std::to_string(j) + ',' + format_double(pts[j].x) + ',' +
               format_double(pts[j].y) + ',' + format_double(trace) + ',' + format_double(det) +
               ',' + std::string(to_string(stab)) + ',' + format_double(residual) + '\n';
    }
}

constexpr const char* kOrbitHeader = "k,period,branch,j,x_j,y_j,trace,det,stability,residual\n";

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

template <typename T>
T parse_field(const std::string& s, std::size_t line_no, const char* column) {
    T v{};
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
        throw ConfigError(column, "orbits CSV line " + std::to_string(line_no) +
                                      ": cannot parse '" + s + "'");
    return v;
}

}  // namespace

std::string orbits_csv(const ScanResult& scan) {
    std::string out = kOrbitHeader;
    for (const SRkOrbit& o : scan.orbits())
        orbit_rows(out, o.k, to_string(o.branch), o.points, o.trace, o.det, o.stability,
                   o.residual);
    return out;
}

std::string fallback_orbits_csv(const ScanResult& scan) {
    std::string out = kOrbitHeader;
    for (const ScanEntry& e : scan.entries)
        for (const BranchResult& b : e.branches)
            if (b.fallback)
                orbit_rows(out, e.k, to_string(b.branch), b.fallback->points, b.fallback->trace,
                           b.fallback->det, b.fallback->stability, b.fallback->residual);
    return out;
}

std::string orbit_summary_csv(const ScanResult& scan) {
    std::string out = "k,branch,status,stability,trace,det\n";
    for (const ScanEntry& e : scan.entries) {
        for (const BranchResult& b : e.branches) {
            out += std::to_string(e.k) + ',' + std::string(to_string(b.branch)) + ',' +
                   std::string(to_string(b.status)) + ',';
            if (b.orbit) {
                out += std::string(to_string(b.orbit->stability)) + ',' +
                       format_double(b.orbit->trace) + ',' + format_double(b.orbit->det);
            } else if (b.fallback) {
                out += std::string(to_string(b.fallback->stability)) + ',' +
                       format_double(b.fallback->trace) + ',' + format_double(b.fallback->det);
            } else {
                out += ",,";
            }
            out += '\n';
        }
    }
    return out;
}

std::vector<CsvOrbit> read_orbits_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("registry", "orbits CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line + '\n' != kOrbitHeader)
        throw ConfigError("registry", "orbits CSV has an unexpected header: " + line);

    std::vector<CsvOrbit> out;
    std::size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 10)
            throw ConfigError("registry", "orbits CSV line " + std::to_string(line_no) +
                                              ": expected 10 columns");
        const int k = parse_field<int>(f[0], line_no, "k");
        const auto period = parse_field<std::size_t>(f[1], line_no, "period");
        const auto j = parse_field<std::size_t>(f[3], line_no, "j");
        const Point2 p{parse_field<double>(f[4], line_no, "x_j"),
                       parse_field<double>(f[5], line_no, "y_j")};
        if (j == 0) out.push_back({k, f[2], f[8], {}});
        if (out.empty() || out.back().k != k || out.back().points.size() != j)
            throw ConfigError("registry", "orbits CSV line " + std::to_string(line_no) +
                                              ": rows of an orbit must be consecutive");
        out.back().points.push_back(p);
        if (j + 1 > period)
            throw ConfigError("registry", "orbits CSV line " + std::to_string(line_no) +
                                              ": point index beyond period");
    }
    return out;
}

AttractorRegistry registry_from_csv(const MapParams& params, const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot read orbits CSV " + path.string());
    AttractorRegistry reg;
    for (CsvOrbit& o : read_orbits_csv(is)) {
        if (o.stability != to_string(StabilityClass::AsymptoticallyStable)) continue;
        try {
            reg.add(params, "SR_" + std::to_string(o.k), std::move(o.points));
        } catch (const std::invalid_argument& e) {
            throw ConfigError("registry", e.what());
        }
    }
    return reg;
}

std::string curves_csv(const std::vector<ManifoldCurve>& curves) {
    std::string out = "branch_id,point_index,x,y\n";
    std::size_t id = 0;
    for (const ManifoldCurve& c : curves) {
        for (std::size_t piece = 0; piece < c.piece_count(); ++piece, ++id) {
            const auto [begin, end] = c.piece_range(piece);
            for (std::size_t i = begin; i < end; ++i)
                out += std::to_string(id) + ',' + std::to_string(i - begin) + ',' +
                       format_double(c.points[i].x) + ',' + format_double(c.points[i].y) + '\n';
        }
    }
    return out;
}

std::string tangencies_csv(const std::vector<TangencyHit>& hits) {
    std::string out = "x,y,contact,curvature_sign\n";
    for (const TangencyHit& h : hits)
        out += format_double(h.location.x) + ',' + format_double(h.location.y) + ',' +
               std::string(to_string(h.contact)) + ',' + format_double(h.curvature_sign) + '\n';
    return out;
}

std::string legend_csv(const AttractorRegistry& registry) {
    std::string out = "id,label,r,g,b,period\n";
    for (const Attractor& a : registry.entries())
        out += std::to_string(a.id) + ',' + a.label + ',' + std::to_string(a.color.r) + ',' +
               std::to_string(a.color.g) + ',' + std::to_string(a.color.b) + ',' +
               std::to_string(a.period) + '\n';
    return out;
}

std::string basin_stats_csv(const BasinGrid& grid, const AttractorRegistry& registry) {
    std::string out = "label,name,cells,fraction\n";
    std::map<Label, std::size_t> counts;
    for (Label l : grid.labels) ++counts[l];
    for (const auto& [l, n] : counts) {
        std::string name = l == kUnknown ? "Unknown" : l == kDivergent ? "Divergent" : "?";
        if (const Attractor* a = registry.find(l)) name = a->label;
        out += std::to_string(l) + ',' + name + ',' + std::to_string(n) + ',' +
               format_double(static_cast<double>(n) / static_cast<double>(grid.labels.size())) +
               '\n';
    }
    return out;
}

std::string labels_csv(const BasinGrid& grid) {
    std::string out = "row,col,label\n";
    for (std::size_t iy = 0; iy < grid.ny; ++iy)
        for (std::size_t ix = 0; ix < grid.nx; ++ix)
            out += std::to_string(iy) + ',' + std::to_string(ix) + ',' +
                   std::to_string(grid.at(ix, iy)) + '\n';
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!os) throw IoError("failed writing " + path.string());
}

}  // namespace coexist
