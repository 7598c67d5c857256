#pragma once

#include <string>
#include <vector>

#include "asrmeso/config.hpp"
#include "asrmeso/meshgen.hpp"

namespace asrmeso {

// Macroscopic diagnostics recorded while a scenario runs: specimen strains
// along the three edges, damaged volume fractions per phase, and the shared
// gel eigen-strain.

struct ObservableRow {
    double t_real = 0.0;  // days
    double eps_x = 0.0, eps_y = 0.0, eps_z = 0.0;
    double frac_dmg_agg = 0.0, frac_dmg_paste = 0.0;
    double mean_eps_gel = 0.0;
};

struct TimeSeries {
    std::vector<ObservableRow> rows;

    // Enforces what recorded rows must satisfy: strictly increasing time,
    // damaged fractions inside [0,1] and never decreasing. A violation means
    // a solver bug, reported as NumericalError.
    void append(const ObservableRow& row);
};

// The stable CSV schema; golden-tested, do not reorder.
inline constexpr const char* kCsvHeader =
    "t_real,eps_x,eps_y,eps_z,frac_dmg_agg,frac_dmg_paste,mean_eps_gel";

void write_csv(const std::string& path, const TimeSeries& ts);
TimeSeries read_csv(const std::string& path);

// Corner-to-corner engineering strain of the specimen edges meeting at the
// origin corner. Mesh coordinates are mm, displacements metres.
Vec3 edge_strains(const Mesh& mesh, const std::vector<double>& displacement);

// Volume share of the given phase whose damage reaches the threshold.
// Returns 0 when the phase has no elements. threshold must lie in (0, 1].
double damaged_fraction(const Mesh& mesh, const std::vector<double>& damage, Phase phase,
                        double threshold);

// How much of the final axial expansion survives when damage is switched
// off; shares sum to 1. Not applicable when the reference expansion is zero.
struct ExpansionSplit {
    bool applicable = false;
    double elastic_share = 0.0;
    double damage_share = 0.0;
};

// Both series must cover the same final time; the companion run is the one
// with damage (and creep) disabled.
ExpansionSplit expansion_split(const TimeSeries& with_damage, const TimeSeries& elastic_only);

// The split only makes sense between runs of the same specimen and gel
// kinetics; material switches are exactly what the companion run changes.
bool split_compatible(const SimulationConfig& a, const SimulationConfig& b);

// Every column divided by its final value (curve-shape comparison); columns
// whose final value is zero are left zeroed. Time is kept as-is.
TimeSeries normalized(const TimeSeries& ts);

}
