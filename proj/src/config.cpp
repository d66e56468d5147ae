#include "coexist/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "coexist/errors.hpp"

namespace coexist {

using nlohmann::json;

std::string_view to_string(Command c) {
    switch (c) {
        case Command::FindOrbits: return "find-orbits";
        case Command::CheckTheory: return "check-theory";
        case Command::Manifolds: return "manifolds";
        case Command::Basins: return "basins";
    }
    return "?";
}

std::optional<Command> command_from_string(std::string_view name) {
    for (Command c : {Command::FindOrbits, Command::CheckTheory, Command::Manifolds,
                      Command::Basins})
        if (to_string(c) == name) return c;
    return std::nullopt;
}

namespace {

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

const json& require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected a JSON object");
    return j;
}

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) throw ConfigError(join(path, key), "unknown key");
}

double number(const json& obj, const std::string& key, const std::string& path) {
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(join(path, key), "must be finite");
    return d;
}

long long integer(const json& obj, const std::string& key, const std::string& path,
                  long long min_value) {
    const json& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
    const long long n = v.get<long long>();
    if (n < min_value)
        throw ConfigError(join(path, key), "must be at least " + std::to_string(min_value));
    return n;
}

std::string string_value(const json& obj, const std::string& key, const std::string& path) {
    const json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
    return v.get<std::string>();
}

bool boolean(const json& obj, const std::string& key, const std::string& path) {
    const json& v = obj.at(key);
    if (!v.is_boolean()) throw ConfigError(join(path, key), "expected true or false");
    return v.get<bool>();
}

const std::set<std::string>& param_keys() {
    static const std::set<std::string> keys{"lambda", "sigma", "c2", "d1", "d5", "h0", "h1",
                                            "x_star", "y_star", "a1", "b1", "c1", "d2", "d3",
                                            "d4"};
    return keys;
}

MapParams parse_params(const json& j, const std::string& path) {
    require_object(j, path);
    check_keys(j, path, param_keys());
    for (const char* key : {"lambda", "sigma", "c2", "d1", "d5"})
        if (!j.contains(key)) throw ConfigError(join(path, key), "missing required key");
    MapParams p;
    for (const auto& [key, value] : j.items()) set_param(p, key, number(j, key, path));
    if (!j.contains("h0") || !j.contains("h1")) {
        const MapParams derived = [&] {
            MapParams d = p;
            d.derive_thresholds();
            return d;
        }();
        if (!j.contains("h0")) p.h0 = derived.h0;
        if (!j.contains("h1")) p.h1 = derived.h1;
    }
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path, e.what());
    }
    return p;
}

Window parse_window(const json& j, const std::string& path) {
    require_object(j, path);
    check_keys(j, path, {"x_min", "x_max", "y_min", "y_max"});
    Window w;
    for (const char* key : {"x_min", "x_max", "y_min", "y_max"})
        if (!j.contains(key)) throw ConfigError(join(path, key), "missing required key");
    w.x_min = number(j, "x_min", path);
    w.x_max = number(j, "x_max", path);
    w.y_min = number(j, "y_min", path);
    w.y_max = number(j, "y_max", path);
    if (!w.valid()) throw ConfigError(path, "window must have positive width and height");
    return w;
}

OrbitsSection parse_orbits(const json& j, const std::string& path) {
    require_object(j, path);
    check_keys(j, path, {"k_min", "k_max"});
    OrbitsSection s;
    if (j.contains("k_min")) s.k_min = static_cast<int>(integer(j, "k_min", path, 0));
    if (j.contains("k_max")) s.k_max = static_cast<int>(integer(j, "k_max", path, 0));
    if (s.k_min > s.k_max) throw ConfigError(join(path, "k_max"), "must not be below k_min");
    if (s.k_max > 150) throw ConfigError(join(path, "k_max"), "sigma^k overflows beyond 150");
    return s;
}

TheorySection parse_theory(const json& j, const std::string& path) {
    require_object(j, path);
    check_keys(j, path, {"perturbations", "k_min", "k_max"});
    TheorySection s;
    if (j.contains("k_min")) s.k_min = static_cast<int>(integer(j, "k_min", path, 0));
    if (j.contains("k_max")) s.k_max = static_cast<int>(integer(j, "k_max", path, 0));
    if (s.k_min > s.k_max) throw ConfigError(join(path, "k_max"), "must not be below k_min");
    if (j.contains("perturbations")) {
        const std::string ppath = join(path, "perturbations");
        const json& list = j.at("perturbations");
        if (!list.is_array()) throw ConfigError(ppath, "expected an array of objects");
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string ipath = ppath + "[" + std::to_string(i) + "]";
            require_object(list[i], ipath);
            check_keys(list[i], ipath, param_keys());
            Perturbation p;
            for (const auto& [key, value] : list[i].items()) p[key] = number(list[i], key, ipath);
            s.perturbations.push_back(std::move(p));
        }
    }
    return s;
}

ManifoldsSection parse_manifolds(const json& j, const std::string& path) {
    require_object(j, path);
    check_keys(j, path, {"depth", "n_images", "clip", "refinement", "axis_tol"});
    ManifoldsSection s;
    if (j.contains("depth")) s.depth = static_cast<int>(integer(j, "depth", path, 0));
    if (j.contains("n_images")) s.n_images = static_cast<int>(integer(j, "n_images", path, 1));
    if (j.contains("clip")) s.clip = parse_window(j.at("clip"), join(path, "clip"));
    if (j.contains("axis_tol")) {
        s.axis_tol = number(j, "axis_tol", path);
        if (!(s.axis_tol > 0.0)) throw ConfigError(join(path, "axis_tol"), "must be positive");
    }
    if (j.contains("refinement")) {
        const std::string rpath = join(path, "refinement");
        const json& r = require_object(j.at("refinement"), rpath);
        check_keys(r, rpath, {"max_gap", "max_angle", "budget", "seed"});
        const auto positive = [&](const char* key, double& out) {
            if (!r.contains(key)) return;
            out = number(r, key, rpath);
            if (!(out > 0.0)) throw ConfigError(join(rpath, key), "must be positive");
        };
        positive("max_gap", s.refinement.max_gap);
        positive("max_angle", s.refinement.max_angle);
        positive("seed", s.refinement.seed);
        if (r.contains("budget"))
            s.refinement.budget = static_cast<std::size_t>(integer(r, "budget", rpath, 2));
    }
    return s;
}

BasinsSection parse_basins(const json& j, const std::string& path) {
    require_object(j, path);
    check_keys(j, path,
               {"window", "resolution", "limits", "registry", "k_min", "k_max", "threads",
                "labels_csv"});
    BasinsSection s;
    if (j.contains("window")) s.window = parse_window(j.at("window"), join(path, "window"));
    if (j.contains("resolution")) {
        const std::string rpath = join(path, "resolution");
        const json& r = j.at("resolution");
        if (r.is_string()) {
            std::tie(s.nx, s.ny) = parse_resolution(r.get<std::string>());
        } else if (r.is_array() && r.size() == 2 && r[0].is_number_integer() &&
                   r[1].is_number_integer() && r[0].get<long long>() > 0 &&
                   r[1].get<long long>() > 0) {
            s.nx = r[0].get<std::size_t>();
            s.ny = r[1].get<std::size_t>();
        } else {
            throw ConfigError(rpath, "expected [nx, ny] or \"<nx>x<ny>\"");
        }
        if (s.nx < 2 || s.ny < 2) throw ConfigError(rpath, "must be at least 2x2");
    }
    if (j.contains("limits")) {
        const std::string lpath = join(path, "limits");
        const json& l = require_object(j.at("limits"), lpath);
        check_keys(l, lpath, {"max_iter", "escape", "prox_tol"});
        if (l.contains("max_iter"))
            s.limits.max_iter = static_cast<std::size_t>(integer(l, "max_iter", lpath, 1));
        if (l.contains("escape")) {
            s.limits.escape_radius = number(l, "escape", lpath);
            if (!(s.limits.escape_radius > 0.0))
                throw ConfigError(join(lpath, "escape"), "must be positive");
        }
        if (l.contains("prox_tol")) {
            s.limits.prox_tol = number(l, "prox_tol", lpath);
            if (!(s.limits.prox_tol > 0.0))
                throw ConfigError(join(lpath, "prox_tol"), "must be positive");
        }
    }
    if (j.contains("registry")) {
        s.registry = string_value(j, "registry", path);
        if (s.registry.empty()) throw ConfigError(join(path, "registry"), "must not be empty");
    }
    if (j.contains("k_min")) s.k_min = static_cast<int>(integer(j, "k_min", path, 0));
    if (j.contains("k_max")) s.k_max = static_cast<int>(integer(j, "k_max", path, 0));
    if (s.k_min > s.k_max) throw ConfigError(join(path, "k_max"), "must not be below k_min");
    if (j.contains("threads")) s.threads = static_cast<unsigned>(integer(j, "threads", path, 0));
    if (j.contains("labels_csv")) s.labels_csv = boolean(j, "labels_csv", path);
    return s;
}

json parse_document(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text, Command command) {
    const json doc = parse_document(json_text);
    require_object(doc, "");
    check_keys(doc, "",
               {"params", "output_dir", "seed", "orbits", "theory", "manifolds", "basins"});
    if (!doc.contains("params")) throw ConfigError("params", "missing required key");

    ExperimentConfig cfg;
    cfg.command = command;
    cfg.params = parse_params(doc.at("params"), "params");
    if (doc.contains("output_dir")) cfg.output_dir = string_value(doc, "output_dir", "");
    if (doc.contains("seed")) cfg.seed = static_cast<std::uint64_t>(integer(doc, "seed", "", 0));

    const auto section = [&](const char* key) -> const json* {
        return doc.contains(key) ? &doc.at(key) : nullptr;
    };
    switch (command) {
        case Command::FindOrbits:
            if (auto s = section("orbits")) cfg.orbits = parse_orbits(*s, "orbits");
            break;
        case Command::CheckTheory:
            if (auto s = section("theory")) cfg.theory = parse_theory(*s, "theory");
            break;
        case Command::Manifolds:
            if (auto s = section("manifolds")) cfg.manifolds = parse_manifolds(*s, "manifolds");
            break;
        case Command::Basins:
            if (auto s = section("basins")) cfg.basins = parse_basins(*s, "basins");
            break;
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, Command command) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot read config file " + path.string());
    std::ostringstream buf;
    buf << is.rdbuf();
    ExperimentConfig cfg = parse_config(buf.str(), command);
    cfg.base_dir = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
    return cfg;
}

MapParams params_from_json(std::string_view json_text) {
    return parse_params(parse_document(json_text), "params");
}

std::string params_to_json(const MapParams& p) {
    nlohmann::ordered_json j{{"lambda", p.lambda}, {"sigma", p.sigma}, {"c2", p.c2},
                             {"d1", p.d1},         {"d5", p.d5},       {"h0", p.h0},
                             {"h1", p.h1},         {"x_star", p.x_star}, {"y_star", p.y_star},
                             {"a1", p.a1},         {"b1", p.b1},       {"c1", p.c1},
                             {"d2", p.d2},         {"d3", p.d3},       {"d4", p.d4}};
    return j.dump(2);
}

void set_param(MapParams& p, const std::string& key, double v) {
    static const std::map<std::string, double MapParams::*> fields{
        {"lambda", &MapParams::lambda}, {"sigma", &MapParams::sigma}, {"c2", &MapParams::c2},
        {"d1", &MapParams::d1},         {"d5", &MapParams::d5},       {"h0", &MapParams::h0},
        {"h1", &MapParams::h1},         {"x_star", &MapParams::x_star},
        {"y_star", &MapParams::y_star}, {"a1", &MapParams::a1},       {"b1", &MapParams::b1},
        {"c1", &MapParams::c1},         {"d2", &MapParams::d2},       {"d3", &MapParams::d3},
        {"d4", &MapParams::d4}};
    const auto it = fields.find(key);
    if (it == fields.end()) throw ConfigError(key, "unknown parameter");
    p.*(it->second) = v;
}

MapParams apply_perturbation(const MapParams& params, const Perturbation& pert) {
    MapParams p = params;
    for (const auto& [key, value] : pert) set_param(p, key, value);
    if (pert.count("lambda")) {
        MapParams d = p;
        d.derive_thresholds();
        if (!pert.count("h0")) p.h0 = d.h0;
        if (!pert.count("h1")) p.h1 = d.h1;
    }
    return p;
}

std::pair<std::size_t, std::size_t> parse_resolution(std::string_view text) {
    const auto bad = [&] {
        return ConfigError("resolution", "expected <nx>x<ny>, got '" + std::string(text) + "'");
    };
    const auto sep = text.find('x');
    if (sep == std::string_view::npos) throw bad();
    std::size_t nx = 0, ny = 0;
    const auto a = text.substr(0, sep);
    const auto b = text.substr(sep + 1);
    if (a.empty() || b.empty()) throw bad();
    auto r1 = std::from_chars(a.data(), a.data() + a.size(), nx);
    auto r2 = std::from_chars(b.data(), b.data() + b.size(), ny);
    if (r1.ec != std::errc() || r1.ptr != a.data() + a.size() || r2.ec != std::errc() ||
        r2.ptr != b.data() + b.size())
        throw bad();
    if (nx < 2 || ny < 2) throw ConfigError("resolution", "must be at least 2x2");
    return {nx, ny};
}

}  // namespace coexist
