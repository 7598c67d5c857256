#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "asrmeso/geom.hpp"
#include "asrmeso/mesogen.hpp"

namespace asrmeso {

enum class Phase : std::uint8_t { Paste = 0, Aggregate = 1, Gel = 2 };

// Structured tetrahedral mesh of a box: a regular grid of cells, each split
// into six tetrahedra sharing the cell's main diagonal. The split is applied
// with the same orientation in every cell, which makes neighbouring cells
// agree on their face diagonals, so the mesh is conforming by construction.
// Coordinates in millimetres.
struct Mesh {
    Vec3 box;
    double hx = 0, hy = 0, hz = 0;  // cell edges per axis after divisor rounding
    int nx = 0, ny = 0, nz = 0;     // cell counts
    std::vector<Vec3> nodes;
    std::vector<std::array<int, 4>> tets;
    std::vector<Phase> phase;      // per element
    std::vector<double> volume;    // per element, mm^3

    int node_id(int i, int j, int k) const {
        return i + (nx + 1) * (j + (ny + 1) * k);
    }
    std::size_t n_elements() const { return tets.size(); }
};

// Builds the grid mesh with requested cell edge h. Cell counts are rounded
// per axis to the nearest integer divisor; the effective edges hx/hy/hz are
// reported in the mesh and may differ slightly from h if it does not divide
// a box dimension. All elements start as paste.
Mesh build_grid_mesh(const Vec3& box, double h);

// Marks every element whose centroid falls inside a sphere as aggregate.
// Requires structure.box == mesh.box. Returns the discrete aggregate volume
// fraction.
double assign_phases(Mesh& mesh, const MesoStructure& structure);

// Converts a random subset of aggregate elements into gel pockets: a seeded
// permutation of the aggregate elements is taken and the shortest prefix
// whose volume reaches target_ratio of the total aggregate volume (at least
// one element) is relabelled. Existing gel elements are treated as aggregate
// before selection, so repeating the call with the same seed reproduces the
// same subset. Returns the achieved volume ratio.
double seed_gel_elements(Mesh& mesh, double target_ratio, std::uint64_t seed);

// Legacy ASCII VTK unstructured-grid export with named per-cell scalar
// arrays; the phase array is always included.
void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<std::pair<std::string, const std::vector<double>*>>& cell_arrays = {});

}
