#include "asrmeso/observables.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "asrmeso/errors.hpp"

namespace asrmeso {

void TimeSeries::append(const ObservableRow& row) {
    if (!std::isfinite(row.t_real) || !std::isfinite(row.eps_x) || !std::isfinite(row.eps_y) ||
        !std::isfinite(row.eps_z) || !std::isfinite(row.frac_dmg_agg) ||
        !std::isfinite(row.frac_dmg_paste) || !std::isfinite(row.mean_eps_gel)) {
        throw NumericalError("non-finite observable at t_real=" + std::to_string(row.t_real));
    }
    if (row.frac_dmg_agg < 0.0 || row.frac_dmg_agg > 1.0 || row.frac_dmg_paste < 0.0 ||
        row.frac_dmg_paste > 1.0) {
        throw NumericalError("damaged fraction outside [0,1] at t_real=" +
                             std::to_string(row.t_real));
    }
    if (!rows.empty()) {
        const ObservableRow& prev = rows.back();
        if (row.t_real <= prev.t_real) {
            throw NumericalError("time series not strictly increasing: " +
                                 std::to_string(prev.t_real) + " then " +
                                 std::to_string(row.t_real));
        }
        if (row.frac_dmg_agg < prev.frac_dmg_agg || row.frac_dmg_paste < prev.frac_dmg_paste) {
            throw NumericalError("damaged fraction decreased at t_real=" +
                                 std::to_string(row.t_real));
        }
    }
    rows.push_back(row);
}

void write_csv(const std::string& path, const TimeSeries& ts) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << kCsvHeader << '\n';
    char buf[512];
    for (const ObservableRow& r : ts.rows) {
        std::snprintf(buf, sizeof buf,
                      "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t_real, r.eps_x,
                      r.eps_y, r.eps_z, r.frac_dmg_agg, r.frac_dmg_paste, r.mean_eps_gel);
        out << buf;
    }
    if (!out) throw ConfigError("write failed for " + path);
}

TimeSeries read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw ConfigError(path + ": unexpected CSV header");
    TimeSeries ts;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        double v[7];
        std::string cell;
        for (int i = 0; i < 7; ++i) {
            if (!std::getline(ss, cell, ',')) {
                throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 7 columns");
            }
            try {
                v[i] = std::stod(cell);
            } catch (const std::exception&) {
                throw ConfigError(path + ":" + std::to_string(lineno) + ": bad number '" + cell +
                                  "'");
            }
        }
        if (std::getline(ss, cell, ',')) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": extra columns");
        }
        ts.append({v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
    }
    return ts;
}

Vec3 edge_strains(const Mesh& mesh, const std::vector<double>& displacement) {
    const size_t n_nodes = mesh.nodes.size();
    if (displacement.size() != 3 * n_nodes) {
        throw NumericalError("displacement size does not match mesh");
    }
    const size_t o = mesh.node_id(0, 0, 0);
    const size_t ex = mesh.node_id(mesh.nx, 0, 0);
    const size_t ey = mesh.node_id(0, mesh.ny, 0);
    const size_t ez = mesh.node_id(0, 0, mesh.nz);
    // Edge lengths in metres; displacements already metres.
    const double lx = mesh.box.x * 1e-3;
    const double ly = mesh.box.y * 1e-3;
    const double lz = mesh.box.z * 1e-3;
    Vec3 s;
    s.x = (displacement[3 * ex + 0] - displacement[3 * o + 0]) / lx;
    s.y = (displacement[3 * ey + 1] - displacement[3 * o + 1]) / ly;
    s.z = (displacement[3 * ez + 2] - displacement[3 * o + 2]) / lz;
    return s;
}

double damaged_fraction(const Mesh& mesh, const std::vector<double>& damage, Phase phase,
                        double threshold) {
    if (!(threshold > 0.0) || threshold > 1.0) {
        throw ConfigError("damage threshold must lie in (0, 1]");
    }
    if (damage.size() != mesh.n_elements()) {
        throw NumericalError("damage size does not match mesh");
    }
    double total = 0.0, hit = 0.0;
    for (size_t e = 0; e < mesh.n_elements(); ++e) {
        if (mesh.phase[e] != phase) continue;
        total += mesh.volume[e];
        if (damage[e] >= threshold) hit += mesh.volume[e];
    }
    return total > 0.0 ? hit / total : 0.0;
}

ExpansionSplit expansion_split(const TimeSeries& with_damage, const TimeSeries& elastic_only) {
    if (with_damage.rows.empty() || elastic_only.rows.empty()) {
        throw NumericalError("expansion split needs non-empty series");
    }
    const ObservableRow& a = with_damage.rows.back();
    const ObservableRow& b = elastic_only.rows.back();
    if (std::abs(a.t_real - b.t_real) > 1e-9 * std::max(1.0, std::abs(a.t_real))) {
        throw NumericalError("expansion split needs matching final times");
    }
    ExpansionSplit out;
    if (a.eps_z == 0.0) return out;
    out.applicable = true;
    out.elastic_share = b.eps_z / a.eps_z;
    out.damage_share = 1.0 - out.elastic_share;
    return out;
}

bool split_compatible(const SimulationConfig& a, const SimulationConfig& b) {
    // Compare only the lines that pin down the specimen and the gel driver.
    auto relevant = [](const SimulationConfig& c) {
        std::istringstream in(c.canonical_text());
        std::string line, keep;
        while (std::getline(in, line)) {
            if (line.rfind("geometry.", 0) == 0 || line.rfind("kinetics.", 0) == 0) {
                keep += line;
                keep += '\n';
            }
        }
        return keep;
    };
    return relevant(a) == relevant(b);
}

TimeSeries normalized(const TimeSeries& ts) {
    TimeSeries out = ts;
    if (out.rows.empty()) return out;
    const ObservableRow f = out.rows.back();
    auto scale = [](double v, double fin) { return fin != 0.0 ? v / fin : 0.0; };
    for (ObservableRow& r : out.rows) {
        r.eps_x = scale(r.eps_x, f.eps_x);
        r.eps_y = scale(r.eps_y, f.eps_y);
        r.eps_z = scale(r.eps_z, f.eps_z);
        r.frac_dmg_agg = scale(r.frac_dmg_agg, f.frac_dmg_agg);
        r.frac_dmg_paste = scale(r.frac_dmg_paste, f.frac_dmg_paste);
        r.mean_eps_gel = scale(r.mean_eps_gel, f.mean_eps_gel);
    }
    return out;
}

}
