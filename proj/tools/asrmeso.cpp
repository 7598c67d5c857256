// asrmeso: meso-scale concrete expansion simulator.
//
// Subcommands:
//   generate   pack aggregates, build the mesh, write structure + mesh files
//   run        generate inline, run the scenario, write time-series CSV
//   sweep      rerun a base config across values of one parameter
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 packing saturation.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"

#include "asrmeso/config.hpp"
#include "asrmeso/errors.hpp"
#include "asrmeso/meshgen.hpp"
#include "asrmeso/mesogen.hpp"
#include "asrmeso/observables.hpp"
#include "asrmeso/solver.hpp"

namespace {

using namespace asrmeso;

constexpr const char* kVersion = "1.0.0";

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> sets;
    std::uint64_t seed = 0;
    bool has_seed = false;
    std::string out_dir;
    int threads = 0;
    bool dry_run = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("config", args.config_path, "scenario config file")->required();
    cmd->add_option("--set", args.sets, "override a value, section.key=value (repeatable)");
    cmd->add_option("--seed", args.seed, "override geometry.seed");
    cmd->add_option("-o,--out", args.out_dir, "override output.dir");
    cmd->add_option("-t,--threads", args.threads,
                    "worker thread count (default: ASRMESO_THREADS or all cores)");
    cmd->add_flag("--dry-run", args.dry_run, "validate the config, print it resolved, exit");
}

void apply_threads(int threads) {
#ifdef _OPENMP
    if (threads <= 0) {
        if (const char* env = std::getenv("ASRMESO_THREADS")) {
            threads = std::atoi(env);
        }
    }
    if (threads > 0) {
        omp_set_num_threads(threads);
    }
#else
    (void)threads;
#endif
}

ConfigDoc load_doc(const CommonArgs& args) {
    ConfigDoc doc = parse_config_file(args.config_path);
    for (const std::string& s : args.sets) {
        apply_override(doc, s);
    }
    if (args.has_seed) {
        apply_override(doc, "geometry.seed", std::to_string(args.seed));
    }
    if (!args.out_dir.empty()) {
        apply_override(doc, "output.dir", args.out_dir);
    }
    return doc;
}

struct Realization {
    MesoStructure structure;
    Mesh mesh;
    double discrete_v_agg = 0.0;
    double achieved_gel_ratio = 0.0;
};

Realization realize(const SimulationConfig& cfg) {
    Realization r;
    r.structure = pack(cfg.geometry.sieve, cfg.geometry.box, cfg.geometry.clearance_mm(),
                       cfg.geometry.seed, static_cast<int>(cfg.geometry.max_rejects));
    r.mesh = build_grid_mesh(cfg.geometry.box, cfg.geometry.h);
    r.discrete_v_agg = assign_phases(r.mesh, r.structure);
    if (cfg.geometry.gel_ratio > 0.0) {
        r.achieved_gel_ratio = seed_gel_elements(r.mesh, cfg.geometry.gel_ratio, cfg.geometry.seed);
    }
    return r;
}

std::string fingerprint_hex(const SimulationConfig& cfg) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, cfg.fingerprint());
    return buf;
}

void write_manifest(const std::filesystem::path& path, const SimulationConfig& cfg,
                    const Realization& r, const RunResult* run) {
    nlohmann::json m;
    m["schema"] = 1;
    m["version"] = kVersion;
    m["fingerprint"] = fingerprint_hex(cfg);
    m["seed"] = cfg.geometry.seed;
    m["config"] = cfg.canonical_text();
    m["structure"] = {{"spheres", r.structure.spheres.size()},
                      {"target_v_agg", cfg.geometry.sieve.v_agg()},
                      {"placed_v_agg", r.structure.achieved_v_agg},
                      {"discrete_v_agg", r.discrete_v_agg},
                      {"gel_ratio", r.achieved_gel_ratio}};
    m["mesh"] = {{"nodes", r.mesh.nodes.size()},
                 {"elements", r.mesh.n_elements()},
                 {"h", {r.mesh.hx, r.mesh.hy, r.mesh.hz}}};
    if (run) {
        m["run"] = {{"dt", run->dt},
                    {"dt_real", run->dt_real},
                    {"steps", run->steps},
                    {"preload_steps", run->preload_steps},
                    {"rows", run->series.rows.size()}};
    }
    std::ofstream out(path);
    if (!out) {
        throw NumericalError("cannot write manifest: " + path.string());
    }
    out << m.dump(2) << '\n';
}

int cmd_generate(const CommonArgs& args) {
    const ConfigDoc doc = load_doc(args);
    const SimulationConfig cfg = resolve_config(doc);
    if (args.dry_run) {
        std::fputs(cfg.canonical_text().c_str(), stdout);
        return 0;
    }
    const Realization r = realize(cfg);

    const std::filesystem::path dir(cfg.output.dir);
    std::filesystem::create_directories(dir);
    const std::filesystem::path structure_path = dir / "structure.txt";
    const std::filesystem::path mesh_path = dir / "mesh.vtk";
    write_structure(r.structure, structure_path.string());
    write_vtk(mesh_path.string(), r.mesh);
    write_manifest(dir / "manifest.json", cfg, r, nullptr);

    std::size_t counts[3] = {0, 0, 0};
    for (Phase p : r.mesh.phase) {
        ++counts[static_cast<int>(p)];
    }
    std::printf("structure:\n");
    std::printf("  spheres: %zu\n", r.structure.spheres.size());
    std::printf("  target_v_agg: %.6g\n", cfg.geometry.sieve.v_agg());
    std::printf("  placed_v_agg: %.6g\n", r.structure.achieved_v_agg);
    std::printf("  discrete_v_agg: %.6g\n", r.discrete_v_agg);
    std::printf("  gel_ratio: %.6g\n", r.achieved_gel_ratio);
    std::printf("mesh:\n");
    std::printf("  nodes: %zu\n", r.mesh.nodes.size());
    std::printf("  elements: %zu\n", r.mesh.n_elements());
    std::printf("  cells: %d %d %d\n", r.mesh.nx, r.mesh.ny, r.mesh.nz);
    std::printf("  h: %.6g %.6g %.6g\n", r.mesh.hx, r.mesh.hy, r.mesh.hz);
    std::printf("elements_per_phase:\n");
    std::printf("  paste: %zu\n", counts[0]);
    std::printf("  aggregate: %zu\n", counts[1]);
    std::printf("  gel: %zu\n", counts[2]);
    std::printf("files:\n");
    std::printf("  %s\n", structure_path.c_str());
    std::printf("  %s\n", mesh_path.c_str());
    return 0;
}

RunResult run_one(const SimulationConfig& cfg, const Realization& r, const std::string& tag) {
    const RunResult run = run_scenario(r.mesh, cfg, [&](const ObservableRow& row) {
        std::printf("%st_real=%10.4f d  eps_z=% .6e\n", tag.c_str(), row.t_real, row.eps_z);
        std::fflush(stdout);
    });

    const std::filesystem::path dir(cfg.output.dir);
    std::filesystem::create_directories(dir);
    const std::filesystem::path csv_path = dir / cfg.output.csv;
    write_csv(csv_path.string(), run.series);
    write_manifest(dir / "manifest.json", cfg, r, &run);
    std::printf("%swrote %s (%zu rows)\n", tag.c_str(), csv_path.c_str(), run.series.rows.size());
    return run;
}

int cmd_run(const CommonArgs& args) {
    const ConfigDoc doc = load_doc(args);
    const SimulationConfig cfg = resolve_config(doc);
    if (args.dry_run) {
        std::fputs(cfg.canonical_text().c_str(), stdout);
        return 0;
    }
    apply_threads(args.threads);
    std::printf("run: %s  fingerprint=%s  seed=%" PRIu64 "\n", args.config_path.c_str(),
                fingerprint_hex(cfg).c_str(), cfg.geometry.seed);
    const Realization r = realize(cfg);
    std::printf("mesh: %zu elements, placed v_agg %.4f, gel ratio %.4f\n", r.mesh.n_elements(),
                r.structure.achieved_v_agg, r.achieved_gel_ratio);
    run_one(cfg, r, "");
    return 0;
}

int cmd_sweep(const CommonArgs& args, const std::string& param,
              const std::vector<std::string>& values) {
    const std::vector<std::string> known = known_parameter_paths();
    if (std::find(known.begin(), known.end(), param) == known.end()) {
        std::string msg = "unknown parameter path '" + param + "'; valid paths:\n";
        for (const std::string& p : known) {
            msg += "  " + p + "\n";
        }
        throw ConfigError(msg);
    }
    if (values.empty()) {
        throw ConfigError("sweep needs at least one --values entry");
    }

    const ConfigDoc base = load_doc(args);
    apply_threads(args.threads);

    std::vector<TimeSeries> series;
    std::filesystem::path sweep_dir;
    for (const std::string& value : values) {
        ConfigDoc doc = base;
        apply_override(doc, param, value);
        SimulationConfig cfg = resolve_config(doc);
        if (sweep_dir.empty()) {
            sweep_dir = cfg.output.dir;
        }
        const std::string label = param + "=" + value;
        cfg.output.dir = (sweep_dir / label).string();
        if (args.dry_run) {
            std::printf("# %s\n", label.c_str());
            std::fputs(cfg.canonical_text().c_str(), stdout);
            continue;
        }
        std::printf("sweep %s  fingerprint=%s\n", label.c_str(), fingerprint_hex(cfg).c_str());
        const Realization r = realize(cfg);
        series.push_back(run_one(cfg, r, "  ").series);
    }
    if (args.dry_run) {
        return 0;
    }

    // Aligned comparison table. Variants must share the sampling grid, which
    // holds whenever the swept parameter leaves solver timing alone.
    const std::size_t n_rows = series.front().rows.size();
    for (const TimeSeries& ts : series) {
        if (ts.rows.size() != n_rows) {
            throw NumericalError("sweep variants produced different sampling grids");
        }
        for (std::size_t i = 0; i < n_rows; ++i) {
            const double a = ts.rows[i].t_real;
            const double b = series.front().rows[i].t_real;
            if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(b))) {
                throw NumericalError("sweep variants produced different sampling grids");
            }
        }
    }

    const std::filesystem::path table_path = sweep_dir / ("sweep_" + param + ".csv");
    std::ofstream out(table_path);
    if (!out) {
        throw NumericalError("cannot write sweep table: " + table_path.string());
    }
    out << "t_real";
    for (const std::string& value : values) {
        for (const char* col : {"eps_z", "frac_dmg_agg", "frac_dmg_paste", "mean_eps_gel"}) {
            out << ',' << col << '(' << value << ')';
        }
    }
    out << '\n';
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (std::size_t i = 0; i < n_rows; ++i) {
        put(series.front().rows[i].t_real);
        for (const TimeSeries& ts : series) {
            const ObservableRow& row = ts.rows[i];
            for (double v : {row.eps_z, row.frac_dmg_agg, row.frac_dmg_paste, row.mean_eps_gel}) {
                out << ',';
                put(v);
            }
        }
        out << '\n';
    }
    out.close();
    std::printf("wrote %s (%zu variants, %zu rows)\n", table_path.c_str(), series.size(), n_rows);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"meso-scale concrete expansion simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    CommonArgs gen_args, run_args, sweep_args;
    std::string sweep_param;
    std::vector<std::string> sweep_values;

    CLI::App* gen = app.add_subcommand("generate", "pack spheres and build the phase mesh");
    add_common(gen, gen_args);
    CLI::App* run = app.add_subcommand("run", "run a scenario end to end");
    add_common(run, run_args);
    CLI::App* sweep = app.add_subcommand("sweep", "run variants of one parameter");
    add_common(sweep, sweep_args);
    sweep->add_option("--param", sweep_param, "parameter path, section.key")->required();
    sweep->add_option("--values", sweep_values, "comma-separated values")
        ->required()
        ->delimiter(',');

    try {
        app.parse(argc, argv);
        for (auto [cmd, args] : {std::pair{gen, &gen_args}, {run, &run_args}, {sweep, &sweep_args}}) {
            args->has_seed = cmd->count("--seed") > 0;
        }
        if (gen->parsed()) {
            return cmd_generate(gen_args);
        }
        if (run->parsed()) {
            return cmd_run(run_args);
        }
        return cmd_sweep(sweep_args, sweep_param, sweep_values);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const CalibrationError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const PackingError& e) {
        std::fprintf(stderr, "packing error: %s\n", e.what());
        return 4;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
