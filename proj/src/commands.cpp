#include "coexist/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "coexist/csv.hpp"
#include "coexist/errors.hpp"
#include "coexist/orbit.hpp"
#include "coexist/theory.hpp"

namespace coexist {

namespace fs = std::filesystem;

namespace {

fs::path prepare_output(const ExperimentConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec || !fs::is_directory(cfg.output_dir))
        throw IoError("cannot create output directory " + cfg.output_dir.string());
    return cfg.output_dir;
}

int guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const IoError& e) {
        err << "io error: " << e.what() << '\n';
        return kExitIoError;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitConfigError;
    }
}

std::string fixed(double v, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

std::string branch_cell(const BranchResult& b) {
    if (b.orbit)
        return std::string(to_string(b.orbit->stability)) + " tau=" + fixed(b.orbit->trace) +
               " det=" + fixed(b.orbit->det);
    if (b.fallback)
        return "(newton) " + std::string(to_string(b.fallback->stability)) +
               " tau=" + fixed(b.fallback->trace) + " det=" + fixed(b.fallback->det);
    return "-- " + std::string(to_string(b.status));
}

nlohmann::ordered_json growth_json(const MapParams& params, int k_min, int k_max,
                                   std::ostream& out) {
    nlohmann::ordered_json g;
    try {
        const GrowthDiagnostic d = tau_growth_experiment(params, k_min, k_max);
        g["k_values"] = d.k_values;
        g["tau_values"] = d.tau_values;
        g["fitted_ratio"] = d.fitted_ratio;
        g["degenerate"] = d.degenerate;
        out << "  growth of |tau_k| over k=" << k_min << ".." << k_max << ": ratio "
            << fixed(d.fitted_ratio, 4) << " from " << d.k_values.size() << " orbits"
            << (d.degenerate ? " (flat: all tau_k vanish)" : "") << '\n';
        out << "  reference ratios: sqrt|sigma| = " << fixed(std::sqrt(std::abs(params.sigma)), 4)
            << ", |sigma| = " << fixed(std::abs(params.sigma), 4) << '\n';
    } catch (const Error& e) {
        g["error"] = e.what();
        out << "  growth diagnostic unavailable: " << e.what() << '\n';
    }
    return g;
}

}  // namespace

int cmd_find_orbits(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const fs::path dir = prepare_output(cfg);
        const ScanResult scan = scan_srk(cfg.params, cfg.orbits.k_min, cfg.orbits.k_max);
        write_text(dir / "orbits.csv", orbits_csv(scan));
        write_text(dir / "orbits_summary.csv", orbit_summary_csv(scan));
        write_text(dir / "newton_orbits.csv", fallback_orbits_csv(scan));

        out << pad("k", 4) << pad("minus branch", 56) << "plus branch\n";
        for (const ScanEntry& e : scan.entries)
            out << pad(std::to_string(e.k), 4) << pad(branch_cell(e.minus()), 56)
                << branch_cell(e.plus()) << '\n';
        const auto all = scan.orbits();
        out << all.size() << " SR_k orbits ("
            << scan.orbits_with(StabilityClass::AsymptoticallyStable).size() << " stable, "
            << scan.orbits_with(StabilityClass::Saddle).size() << " saddle) written to "
            << (dir / "orbits.csv").string() << '\n';
        return static_cast<int>(kExitOk);
    });
}

int cmd_check_theory(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const fs::path dir = prepare_output(cfg);
        const TheoryReport report = full_report(cfg.params);
        out << format_report(report);

        nlohmann::ordered_json doc;
        doc["report"] = nlohmann::ordered_json::parse(report_json(report));
        doc["perturbations"] = nlohmann::ordered_json::array();
        for (const Perturbation& pert : cfg.theory.perturbations) {
            const MapParams p = apply_perturbation(cfg.params, pert);
            std::string name;
            for (const auto& [k, v] : pert) name += (name.empty() ? "" : ", ") + k + "=" + format_double(v);
            out << "\nperturbation " << name << '\n';
            const TheoryReport r = full_report(p);
            out << "  hypotheses " << (r.hypotheses_pass ? "all pass" : "NOT satisfied") << '\n';
            nlohmann::ordered_json entry;
            entry["overrides"] = pert;
            entry["report"] = nlohmann::ordered_json::parse(report_json(r));
            entry["growth"] = growth_json(p, cfg.theory.k_min, cfg.theory.k_max, out);
            doc["perturbations"].push_back(std::move(entry));
        }
        write_text(dir / "theory.json", doc.dump(2) + "\n");
        return static_cast<int>(report.hypotheses_pass ? kExitOk : kExitHypothesesFail);
    });
}

int cmd_manifolds(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const fs::path dir = prepare_output(cfg);
        const ManifoldsSection& m = cfg.manifolds;
        const ManifoldCurve unstable =
            trace_unstable(cfg.params, m.n_images, m.clip, m.refinement);
        const std::vector<ManifoldCurve> stable =
            trace_stable(cfg.params, m.depth, m.clip, m.refinement);
        const std::vector<TangencyHit> hits = detect_tangencies(unstable, m.axis_tol);

        write_text(dir / "unstable.csv", curves_csv({unstable}));
        write_text(dir / "stable.csv", curves_csv(stable));
        write_text(dir / "tangencies.csv", tangencies_csv(hits));

        if (unstable.partial)
            err << "warning: point budget exhausted; unstable curve is partial\n";
        for (const ManifoldCurve& c : stable)
            if (c.partial) {
                err << "warning: point budget exhausted; stable tree is partial\n";
                break;
            }
        out << "unstable manifold: " << unstable.points.size() << " points in "
            << unstable.piece_count() << " pieces, arc length " << fixed(unstable.arc_length, 4)
            << '\n';
        out << "stable set: " << stable.size() << " branches to depth " << m.depth << '\n';
        for (const ManifoldCurve& c : stable)
            out << "  [" << c.index << "] " << pad(c.label, 18) << c.points.size() << " points\n";
        out << "axis intersections: " << hits.size() << '\n';
        for (const TangencyHit& h : hits)
            out << "  (" << fixed(h.location.x, 9) << ", " << fixed(h.location.y, 9) << ") "
                << to_string(h.contact) << " curvature " << fixed(h.curvature_sign, 4) << '\n';
        return static_cast<int>(kExitOk);
    });
}

int cmd_basins(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const BasinsSection& b = cfg.basins;
        if (b.nx < 2 || b.ny < 2) throw ConfigError("basins.resolution", "must be at least 2x2");
        AttractorRegistry registry;
        if (b.registry == "auto") {
            registry = registry_from_scan(cfg.params, scan_srk(cfg.params, b.k_min, b.k_max));
        } else {
            fs::path src = b.registry;
            if (src.is_relative()) src = cfg.base_dir / src;
            registry = registry_from_csv(cfg.params, src);
        }
        if (registry.empty()) throw ConfigError("basins.registry", "no stable attractor to register");

        const fs::path dir = prepare_output(cfg);
        const BasinGrid grid = raster(cfg.params, registry, b.window, b.nx, b.ny, b.limits, b.threads);
        write_ppm(grid, registry, dir / "basins.ppm");
        write_text(dir / "legend.csv", legend_csv(registry));
        write_text(dir / "basin_stats.csv", basin_stats_csv(grid, registry));
        if (b.labels_csv) write_text(dir / "labels.csv", labels_csv(grid));

        out << "basins " << b.nx << "x" << b.ny << ", " << registry.size()
            << " registered attractors\n";
        for (const auto& [label, frac] : grid.fractions()) {
            std::string name = label == kUnknown ? "Unknown" : label == kDivergent ? "Divergent" : "";
            if (const Attractor* a = registry.find(label)) name = a->label;
            out << "  " << pad(name, 10) << fixed(100.0 * frac, 2) << "%\n";
        }
        return static_cast<int>(kExitOk);
    });
}

int run_command(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    switch (cfg.command) {
        case Command::FindOrbits: return cmd_find_orbits(cfg, out, err);
        case Command::CheckTheory: return cmd_check_theory(cfg, out, err);
        case Command::Manifolds: return cmd_manifolds(cfg, out, err);
        case Command::Basins: return cmd_basins(cfg, out, err);
    }
    return kExitConfigError;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Coexisting stable periodic orbits near a homoclinic tangency", "coexist"};
    app.require_subcommand(1);

    std::string config_path, out_dir, resolution;
    std::optional<unsigned> threads;
    for (Command c : {Command::FindOrbits, Command::CheckTheory, Command::Manifolds,
                      Command::Basins}) {
        auto* sub = app.add_subcommand(std::string(to_string(c)));
        sub->add_option("--config", config_path, "experiment config (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
        sub->add_option("--threads", threads, "basin worker threads (0 = all cores)");
        sub->add_option("--resolution", resolution, "basin raster size <nx>x<ny>");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    Command command = Command::FindOrbits;
    for (const auto* sub : app.get_subcommands())
        if (auto c = command_from_string(sub->get_name())) command = *c;

    ExperimentConfig cfg;
    const int load = guarded(err, [&] {
        cfg = load_config(config_path, command);
        if (!out_dir.empty()) cfg.output_dir = out_dir;
        if (threads) cfg.basins.threads = *threads;
        if (!resolution.empty()) std::tie(cfg.basins.nx, cfg.basins.ny) = parse_resolution(resolution);
        return static_cast<int>(kExitOk);
    });
    if (load != kExitOk) return load;
    return run_command(cfg, out, err);
}

}  // namespace coexist
