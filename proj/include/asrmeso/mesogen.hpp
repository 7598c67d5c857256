#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asrmeso/geom.hpp"
#include "asrmeso/sieve.hpp"

namespace asrmeso {

struct Sphere {
    Vec3 center;     // mm, relative to the box corner at the origin
    double d = 0.0;  // diameter, mm
};

// A packed aggregate arrangement inside an axis-aligned box. All lengths in
// millimetres. Spheres lie fully inside the box and keep at least
// `clearance` of surface-to-surface separation from each other.
struct MesoStructure {
    Vec3 box;
    SieveCurve curve;
    double clearance = 0.0;
    std::uint64_t seed = 0;
    double target_v_agg = 0.0;    // simulated fraction implied by the curve
    double achieved_v_agg = 0.0;  // sum of sphere volumes / box volume
    std::vector<Sphere> spheres;
};

// Sequential rejection packing. Diameters are drawn from the grading curve
// until their total volume first crosses the target fraction, then placed
// largest-first at uniformly sampled positions; a candidate position is
// rejected on any overlap (surface gap < clearance) or if the sphere would
// cross the box boundary. Throws PackingError after `max_rejects`
// consecutive rejections for one sphere, ConfigError if a box dimension is
// smaller than d_max. Deterministic for a fixed seed.
MesoStructure pack(const SieveCurve& curve, const Vec3& box, double clearance,
                   std::uint64_t seed, int max_rejects = 100000);

// Versioned plain-text serialization, one sphere per line. Doubles are
// written with 17 significant digits so that read(write(s)) == s bit-exactly.
void write_structure(const MesoStructure& s, const std::string& path);
MesoStructure read_structure(const std::string& path);

}
