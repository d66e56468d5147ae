#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "coexist/basin.hpp"
#include "coexist/manifold.hpp"
#include "coexist/orbit.hpp"

namespace coexist {

/// Shortest decimal text that parses back to exactly v.
std::string format_double(double v);

/// One row per orbit point:
/// k,period,branch,j,x_j,y_j,trace,det,stability,residual
std::string orbits_csv(const ScanResult& scan);

/// Newton-fallback orbits from the scan, same columns; k is the SR index
/// whose closed form seeded the solve.
std::string fallback_orbits_csv(const ScanResult& scan);

/// k,branch,status,stability,trace,det per scanned branch.
std::string orbit_summary_csv(const ScanResult& scan);

/// An orbit recovered from an orbits CSV.
struct CsvOrbit {
    int k = 0;
    std::string branch;
    std::string stability;
    std::vector<Point2> points;
};

/// Parses the orbits CSV format; throws ConfigError on malformed content.
std::vector<CsvOrbit> read_orbits_csv(std::istream& is);

/// Registers the asymptotically stable rows of an orbits CSV file. Throws
/// IoError when the file cannot be read.
AttractorRegistry registry_from_csv(const MapParams& params, const std::filesystem::path& path);

/// branch_id,point_index,x,y with one branch_id per polyline piece,
/// numbered consecutively across curves.
std::string curves_csv(const std::vector<ManifoldCurve>& curves);

/// x,y,contact,curvature_sign
std::string tangencies_csv(const std::vector<TangencyHit>& hits);

/// id,label,r,g,b,period
std::string legend_csv(const AttractorRegistry& registry);

/// label,name,cells,fraction for every label present in the grid.
std::string basin_stats_csv(const BasinGrid& grid, const AttractorRegistry& registry);

/// row,col,label for every cell.
std::string labels_csv(const BasinGrid& grid);

/// Writes text to path; throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace coexist
