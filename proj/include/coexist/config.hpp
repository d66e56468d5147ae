#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coexist/basin.hpp"
#include "coexist/manifold.hpp"
#include "coexist/map.hpp"
#include "coexist/window.hpp"

namespace coexist {

enum class Command { FindOrbits, CheckTheory, Manifolds, Basins };

std::string_view to_string(Command c);
/// Accepts the CLI spelling (find-orbits, check-theory, manifolds, basins).
std::optional<Command> command_from_string(std::string_view name);

/// A set of parameter overrides, e.g. {"d1": 0.99}.
using Perturbation = std::map<std::string, double>;

struct OrbitsSection {
    int k_min = 0;
    int k_max = 15;
};

struct TheorySection {
    std::vector<Perturbation> perturbations;
    int k_min = 6;   ///< growth-fit range
    int k_max = 16;
};

struct ManifoldsSection {
    int depth = 3;
    int n_images = 46;
    Window clip;
    RefineOptions refinement;
    double axis_tol = 1e-3;
};

struct BasinsSection {
    Window window;
    std::size_t nx = 200;
    std::size_t ny = 200;
    BasinLimits limits;
    /// "auto" scans for SR_k orbits; anything else is an orbits CSV path.
    std::string registry = "auto";
    int k_min = 0;  ///< scan range for the "auto" registry
    int k_max = 15;
    unsigned threads = 0;
    bool labels_csv = false;
};

struct ExperimentConfig {
    Command command = Command::FindOrbits;
    MapParams params;
    std::filesystem::path output_dir = ".";
    std::uint64_t seed = 0;
    OrbitsSection orbits;
    TheorySection theory;
    ManifoldsSection manifolds;
    BasinsSection basins;
    /// Directory of the config file; relative paths inside it resolve here.
    std::filesystem::path base_dir = ".";
};

/// Parses a config document for one command. Only that command's section is
/// read; unknown keys anywhere on the path are rejected. Throws ConfigError.
ExperimentConfig parse_config(std::string_view json_text, Command command);

/// Reads and parses a config file; throws IoError when it cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path, Command command);

/// Flat JSON object of MapParams fields. h0/h1 are derived from lambda
/// unless given explicitly. Throws ConfigError.
MapParams params_from_json(std::string_view json_text);
std::string params_to_json(const MapParams& params);

/// Sets one named MapParams field. Throws ConfigError for an unknown name.
void set_param(MapParams& params, const std::string& key, double value);

/// Copy of params with the overrides applied; h0/h1 follow lambda unless
/// they are overridden too.
MapParams apply_perturbation(const MapParams& params, const Perturbation& p);

/// Parses "<nx>x<ny>"; throws ConfigError.
std::pair<std::size_t, std::size_t> parse_resolution(std::string_view text);

}  // namespace coexist
