#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "asrmeso/geom.hpp"
#include "asrmeso/materials.hpp"
#include "asrmeso/sieve.hpp"

namespace asrmeso {

// Scenario files are INI-style text: [section] headers, key = value lines,
// full-line and trailing # comments. Sections hold ordered entries with the
// line they came from so every diagnostic can say path:line. Entries with
// line 0 were injected from the command line.

struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
};

struct ConfigSection {
    std::string name;
    int line = 0;
    std::vector<ConfigEntry> entries;
};

struct ConfigDoc {
    std::string path;  // label used in error messages
    std::vector<ConfigSection> sections;
};

ConfigDoc parse_config_text(const std::string& text, const std::string& path);
ConfigDoc parse_config_file(const std::string& path);

// "section.key" = value. Replaces every entry with that key (repeatable keys
// collapse to the single override) and creates the section when absent.
void apply_override(ConfigDoc& doc, const std::string& path, const std::string& value);
// Convenience for --set arguments of the form "section.key=value".
void apply_override(ConfigDoc& doc, const std::string& assignment);

// Every settable "section.key", for sweep validation and error listings.
std::vector<std::string> known_parameter_paths();

// ---------------------------------------------------------------------------
// Resolved configuration. Geometry lengths are mm; moduli Pa; times days
// except the solver's simulated clock, which runs in seconds.

struct GeometryConfig {
    Vec3 box{70.0, 70.0, 140.0};  // specimen edges, mm
    double h = 2.0;               // target element edge, mm
    SieveCurve sieve;             // built from d_min/d_max/n_f/v_agg keys
    double clearance = -1.0;      // min sphere surface gap, mm; < 0 means h
    double gel_ratio = 0.025;     // gel volume / aggregate volume
    std::uint64_t seed = 1;
    std::uint64_t max_rejects = 100000;

    double clearance_mm() const { return clearance < 0.0 ? h : clearance; }
};

struct PasteConfig {
    // E0 of the chain doubles as the elastic modulus when creep is off.
    KelvinChain chain{20e9, {12e9, 8e9, 0.7e9}, {5.0, 50.0, 300.0}, 0.001, 1.0, 28.0};
    double nu = 0.2;
    MazarsParams damage{2e-4, 0.65, 3100.0, 1.0, 2300.0, 0.0};
    double G_f = 60.0;  // N/m
    bool creep = true;
    bool damage_on = true;
};

struct AggregateConfig {
    ElasticParams elastic{60e9, 0.2};
    MazarsParams damage{1.67e-4, 0.65, 3550.0, 1.2, 1800.0, 0.0};
    double G_f = 150.0;
    bool damage_on = true;
};

struct GelConfig {
    ElasticParams elastic{10e9, 0.2};
};

struct TemperaturePoint {
    double t_days;
    double celsius;
};

struct SolverSettings {
    double T_sim = 1.0;     // simulated duration, s
    double T_real = 450.0;  // physical duration it stands for, days
    double dt = 0.0;        // step, s; 0 = derive from the mesh (CFL)
    // Fraction of h_min/c taken when dt is derived. The six-tet cell split
    // turns unstable near 0.65 * h_min / c (measured on bar meshes), so the
    // default keeps a wide margin below that boundary.
    double safety = 0.5;
    double mass_scaling = 1.0;
    double damping = -1.0;  // mass-proportional, 1/s; < 0 = lowest-mode estimate
    std::array<double, 3> density{2400.0, 2400.0, 2400.0};  // paste, aggregate, gel
    int preload = -1;       // 1 on, 0 off, -1 = on iff tractions are present
    double preload_fraction = 0.02;  // traction ramp length as a share of T_sim
    std::vector<TemperaturePoint> temperature{{0.0, 30.0}};
};

struct BcFix {
    int component;   // displacement component held at zero, 0..2
    int plane_axis;  // face selector: axis 0..2 ...
    int plane_side;  // ... and side, 0 = min face, 1 = max face
};

struct BcTraction {
    int component;  // force direction, 0..2
    int plane_axis;
    int plane_side;
    double value;  // Pa, signed along the component axis
};

enum class Restraint { none, minimal };

struct BcConfig {
    // minimal = pin 3+2+1 displacement components at three corner nodes,
    // removing rigid-body motion without constraining deformation.
    Restraint restraint = Restraint::none;
    std::vector<BcFix> fixes;
    std::vector<BcTraction> tractions;
};

struct OutputConfig {
    std::string dir = "out";
    std::string csv = "timeseries.csv";
    int samples = 500;   // observable rows per run
    int snapshots = 0;   // VTK field dumps per run
    double damage_threshold = 0.05;
};

struct SimulationConfig {
    GeometryConfig geometry;
    PasteConfig paste;
    AggregateConfig aggregate;
    GelConfig gel;
    GelKinetics kinetics;
    SolverSettings solver;
    BcConfig bc;
    OutputConfig output;

    bool preload_enabled() const {
        return solver.preload == 1 || (solver.preload == -1 && !bc.tractions.empty());
    }

    // Piecewise-constant schedule lookup, converted to kelvin.
    double temperature_kelvin(double t_days) const;

    // Deterministic dump of every resolved field; equal text means the runs
    // are reproductions of each other.
    std::string canonical_text() const;
    std::uint64_t fingerprint() const;  // FNV-1a over canonical_text()
};

// Applies defaults, converts and checks every entry. Unknown sections or
// keys, malformed values, and inconsistent combinations all throw
// ConfigError carrying path:line and the valid alternatives. eps_ult given
// as "auto" (the default) is calibrated from G_f and the element size here.
SimulationConfig resolve_config(const ConfigDoc& doc);

std::uint64_t fnv1a(const std::string& text);

}
