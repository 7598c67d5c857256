#include "asrmeso/meshgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "asrmeso/errors.hpp"
#include "asrmeso/rng.hpp"

namespace asrmeso {

namespace {

// Corner offsets (bit triples) of the six tetrahedra splitting a cell along
// its (0,0,0)-(1,1,1) diagonal. Every entry is ordered for positive signed
// volume.
constexpr int kTetTable[6][4][3] = {
    {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}},
    {{0, 0, 0}, {1, 0, 0}, {1, 1, 1}, {1, 0, 1}},
    {{0, 0, 0}, {0, 1, 0}, {1, 1, 1}, {1, 1, 0}},
    {{0, 0, 0}, {0, 1, 0}, {0, 1, 1}, {1, 1, 1}},
    {{0, 0, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}},
    {{0, 0, 0}, {0, 0, 1}, {1, 1, 1}, {0, 1, 1}},
};

int divisor_count(double extent, double h) {
    const int n = static_cast<int>(std::lround(extent / h));
    return std::max(1, n);
}

}

Mesh build_grid_mesh(const Vec3& box, double h) {
    if (!(box.x > 0 && box.y > 0 && box.z > 0))
        throw ConfigError("mesh box dimensions must be positive");
    if (!(h > 0))
        throw ConfigError("mesh cell size h must be positive");

    Mesh m;
    m.box = box;
    m.nx = divisor_count(box.x, h);
    m.ny = divisor_count(box.y, h);
    m.nz = divisor_count(box.z, h);
    m.hx = box.x / m.nx;
    m.hy = box.y / m.ny;
    m.hz = box.z / m.nz;

    m.nodes.resize(std::size_t(m.nx + 1) * (m.ny + 1) * (m.nz + 1));
    for (int k = 0; k <= m.nz; ++k)
        for (int j = 0; j <= m.ny; ++j)
            for (int i = 0; i <= m.nx; ++i)
                m.nodes[m.node_id(i, j, k)] = {i * m.hx, j * m.hy, k * m.hz};

    const std::size_t n_cells = std::size_t(m.nx) * m.ny * m.nz;
    m.tets.reserve(n_cells * 6);
    for (int k = 0; k < m.nz; ++k)
        for (int j = 0; j < m.ny; ++j)
            for (int i = 0; i < m.nx; ++i)
                for (const auto& tet : kTetTable) {
                    std::array<int, 4> ids;
                    for (int v = 0; v < 4; ++v)
                        ids[v] = m.node_id(i + tet[v][0], j + tet[v][1], k + tet[v][2]);
                    m.tets.push_back(ids);
                }

    m.phase.assign(m.tets.size(), Phase::Paste);
    m.volume.assign(m.tets.size(), m.hx * m.hy * m.hz / 6.0);
    return m;
}

double assign_phases(Mesh& mesh, const MesoStructure& structure) {
    if (structure.box.x != mesh.box.x || structure.box.y != mesh.box.y ||
        structure.box.z != mesh.box.z)
        throw ConfigError("structure box does not match mesh box");

    const std::size_t n = mesh.n_elements();
    double v_agg = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : v_agg)
    for (std::size_t e = 0; e < n; ++e) {
        const auto& t = mesh.tets[e];
        Vec3 c = mesh.nodes[t[0]] + mesh.nodes[t[1]] + mesh.nodes[t[2]] + mesh.nodes[t[3]];
        c = c * 0.25;
        for (const Sphere& s : structure.spheres) {
            const double r = 0.5 * s.d;
            if (dist2(c, s.center) <= r * r) {
                mesh.phase[e] = Phase::Aggregate;
                v_agg += mesh.volume[e];
                break;
            }
        }
    }
    const double v_box = mesh.box.x * mesh.box.y * mesh.box.z;
    return v_agg / v_box;
}

double seed_gel_elements(Mesh& mesh, double target_ratio, std::uint64_t seed) {
    if (!(target_ratio > 0.0) || target_ratio >= 1.0)
        throw ConfigError("gel target ratio must be in (0,1)");

    std::vector<std::size_t> agg;
    double v_agg = 0.0;
    for (std::size_t e = 0; e < mesh.n_elements(); ++e)
        if (mesh.phase[e] == Phase::Aggregate || mesh.phase[e] == Phase::Gel) {
            mesh.phase[e] = Phase::Aggregate;
            agg.push_back(e);
            v_agg += mesh.volume[e];
        }
    if (agg.empty())
        throw ConfigError("gel seeding requires aggregate elements in the mesh");

    // Seeded Fisher-Yates; the shortest permutation prefix reaching the
    // target volume ratio becomes gel (never fewer than one element).
    Rng rng(seed);
    for (std::size_t i = agg.size() - 1; i > 0; --i)
        std::swap(agg[i], agg[rng.index(i + 1)]);

    double v_gel = 0.0;
    std::size_t taken = 0;
    do {
        mesh.phase[agg[taken]] = Phase::Gel;
        v_gel += mesh.volume[agg[taken]];
        ++taken;
    } while (v_gel < target_ratio * v_agg && taken < agg.size());
    return v_gel / v_agg;
}

void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<std::pair<std::string, const std::vector<double>*>>& cell_arrays) {
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot open VTK file for writing: " + path);
    char line[128];

    out << "# vtk DataFile Version 3.0\n";
    out << "asrmeso mesh\n";
    out << "ASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.nodes.size() << " double\n";
    for (const Vec3& p : mesh.nodes) {
        std::snprintf(line, sizeof line, "%.9g %.9g %.9g\n", p.x, p.y, p.z);
        out << line;
    }
    const std::size_t n = mesh.n_elements();
    out << "CELLS " << n << " " << n * 5 << "\n";
    for (const auto& t : mesh.tets)
        out << "4 " << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
    out << "CELL_TYPES " << n << "\n";
    for (std::size_t e = 0; e < n; ++e)
        out << "10\n";
    out << "CELL_DATA " << n << "\n";
    out << "SCALARS phase int 1\nLOOKUP_TABLE default\n";
    for (std::size_t e = 0; e < n; ++e)
        out << int(mesh.phase[e]) << "\n";
    for (const auto& [name, data] : cell_arrays) {
        out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (double v : *data) {
            std::snprintf(line, sizeof line, "%.9g\n", v);
            out << line;
        }
    }
    if (!out)
        throw ConfigError("write failed for VTK file: " + path);
}

}
