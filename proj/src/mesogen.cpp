#include "asrmeso/mesogen.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "asrmeso/errors.hpp"
#include "asrmeso/rng.hpp"

namespace asrmeso {

namespace {

double sphere_volume(double d) { return M_PI / 6.0 * d * d * d; }

}

MesoStructure pack(const SieveCurve& curve, const Vec3& box, double clearance,
                   std::uint64_t seed, int max_rejects) {
    curve.validate();
    if (box.x < curve.d_max || box.y < curve.d_max || box.z < curve.d_max)
        throw ConfigError("packing box smaller than d_max in at least one dimension");
    if (clearance < 0.0)
        throw ConfigError("packing clearance must be >= 0");

    const double v_box = box.x * box.y * box.z;
    const double target = curve.v_agg();
    Rng rng(seed);

    // Draw the batch first: diameters until the summed volume crosses the
    // target, so the overshoot is bounded by the last sphere drawn.
    std::vector<double> diameters;
    double v_sum = 0.0;
    while (v_sum < target * v_box) {
        const double d = sample_diameter(curve, rng.uniform());
        diameters.push_back(d);
        v_sum += sphere_volume(d);
    }
    std::sort(diameters.begin(), diameters.end(), std::greater<double>());

    MesoStructure s;
    s.box = box;
    s.curve = curve;
    s.clearance = clearance;
    s.seed = seed;
    s.target_v_agg = target;
    s.spheres.reserve(diameters.size());

    double v_placed = 0.0;
    for (const double d : diameters) {
        const double r = 0.5 * d;
        int rejects = 0;
        for (;;) {
            const Vec3 c = {rng.uniform(r, box.x - r),
                            rng.uniform(r, box.y - r),
                            rng.uniform(r, box.z - r)};
            bool ok = true;
            for (const Sphere& p : s.spheres) {
                const double min_dist = r + 0.5 * p.d + clearance;
                if (dist2(c, p.center) < min_dist * min_dist) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                s.spheres.push_back({c, d});
                v_placed += sphere_volume(d);
                break;
            }
            if (++rejects > max_rejects) {
                char msg[160];
                std::snprintf(msg, sizeof msg,
                              "packing saturated after %d rejections: achieved v_agg %.4f "
                              "of target %.4f (%zu of %zu spheres placed)",
                              max_rejects, v_placed / v_box, target, s.spheres.size(),
                              diameters.size());
                throw PackingError(msg, v_placed / v_box, target);
            }
        }
    }
    s.achieved_v_agg = v_placed / v_box;
    return s;
}

void write_structure(const MesoStructure& s, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot open structure file for writing: " + path);
    char line[256];
    out << "asrmeso-structure 1\n";
    std::snprintf(line, sizeof line, "box %.17g %.17g %.17g\n", s.box.x, s.box.y, s.box.z);
    out << line;
    std::snprintf(line, sizeof line, "seed %" PRIu64 "\n", s.seed);
    out << line;
    std::snprintf(line, sizeof line, "curve %.17g %.17g %.17g %.17g\n",
                  s.curve.d_min, s.curve.d_max, s.curve.n_f, s.curve.v0_agg);
    out << line;
    std::snprintf(line, sizeof line, "clearance %.17g\n", s.clearance);
    out << line;
    std::snprintf(line, sizeof line, "target_v_agg %.17g\n", s.target_v_agg);
    out << line;
    std::snprintf(line, sizeof line, "achieved_v_agg %.17g\n", s.achieved_v_agg);
    out << line;
    out << "spheres " << s.spheres.size() << "\n";
    for (const Sphere& sp : s.spheres) {
        std::snprintf(line, sizeof line, "%.17g %.17g %.17g %.17g\n",
                      sp.center.x, sp.center.y, sp.center.z, sp.d);
        out << line;
    }
    if (!out)
        throw ConfigError("write failed for structure file: " + path);
}

namespace {

[[noreturn]] void structure_error(const std::string& path, int line_no, const std::string& what) {
    throw ConfigError(path + ":" + std::to_string(line_no) + ": " + what);
}

}

MesoStructure read_structure(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open structure file: " + path);

    MesoStructure s;
    std::string line, key;
    int line_no = 0;

    auto next_line = [&]() -> std::istringstream {
        if (!std::getline(in, line))
            structure_error(path, line_no, "unexpected end of file");
        ++line_no;
        return std::istringstream(line);
    };

    {
        auto ls = next_line();
        int version = 0;
        ls >> key >> version;
        if (key != "asrmeso-structure" || version != 1)
            structure_error(path, line_no, "not an asrmeso-structure v1 file");
    }
    {
        auto ls = next_line();
        if (!(ls >> key >> s.box.x >> s.box.y >> s.box.z) || key != "box")
            structure_error(path, line_no, "expected 'box x y z'");
    }
    {
        auto ls = next_line();
        if (!(ls >> key >> s.seed) || key != "seed")
            structure_error(path, line_no, "expected 'seed n'");
    }
    {
        auto ls = next_line();
        if (!(ls >> key >> s.curve.d_min >> s.curve.d_max >> s.curve.n_f >> s.curve.v0_agg) ||
            key != "curve")
            structure_error(path, line_no, "expected 'curve d_min d_max n_f v0_agg'");
    }
    {
        auto ls = next_line();
        if (!(ls >> key >> s.clearance) || key != "clearance")
            structure_error(path, line_no, "expected 'clearance c'");
    }
    {
        auto ls = next_line();
        if (!(ls >> key >> s.target_v_agg) || key != "target_v_agg")
            structure_error(path, line_no, "expected 'target_v_agg v'");
    }
    {
        auto ls = next_line();
        if (!(ls >> key >> s.achieved_v_agg) || key != "achieved_v_agg")
            structure_error(path, line_no, "expected 'achieved_v_agg v'");
    }
    std::size_t count = 0;
    {
        auto ls = next_line();
        if (!(ls >> key >> count) || key != "spheres")
            structure_error(path, line_no, "expected 'spheres n'");
    }
    s.spheres.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto ls = next_line();
        Sphere& sp = s.spheres[i];
        if (!(ls >> sp.center.x >> sp.center.y >> sp.center.z >> sp.d))
            structure_error(path, line_no, "expected 'cx cy cz d'");
    }
    return s;
}

}
