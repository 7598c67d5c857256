// End-to-end checks of the command-line tool: exit codes, file outputs, and
// determinism, driven through std::system on the installed binary. The test
// runner passes --bin=<path> and --presets=<dir>; see CMakeLists.txt.

#define DOCTEST_CONFIG_IMPLEMENT
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "asrmeso/observables.hpp"

namespace {

std::string g_bin;
std::string g_presets;

namespace fs = std::filesystem;

struct RunCapture {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Runs the CLI with stdout/stderr captured to files in `dir`.
RunCapture run_cli(const fs::path& dir, const std::string& args) {
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd =
        "\"" + g_bin + "\" " + args + " > \"" + out.string() + "\" 2> \"" + err.string() + "\"";
    const int raw = std::system(cmd.c_str());
    RunCapture r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path fresh_dir(const char* name) {
    const fs::path dir = fs::temp_directory_path() / "asrmeso_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

// Small specimen that still exercises every phase; heavy mass scaling keeps
// the step count low enough for a test suite.
const char* kTinyGel =
    "[geometry]\n"
    "box = 8 8 16\n"
    "h = 2\n"
    "d_min = 2\n"
    "d_max = 4\n"
    "v_agg = 0.2\n"
    "clearance = 0.5\n"
    "gel_ratio = 0.05\n"
    "seed = 3\n"
    "[solver]\n"
    "dt = 5e-4\n"
    "T_sim = 1\n"
    "T_real = 100\n"
    "mass_scaling = 1e7\n"
    "[bc]\n"
    "restraint = minimal\n"
    "[output]\n"
    "samples = 10\n";

const char* kTinyCreep =
    "[geometry]\n"
    "box = 8 8 16\n"
    "h = 2\n"
    "d_min = 2\n"
    "d_max = 4\n"
    "v_agg = 0.2\n"
    "clearance = 0.5\n"
    "gel_ratio = 0\n"
    "seed = 3\n"
    "[solver]\n"
    "dt = 5e-4\n"
    "T_sim = 1\n"
    "T_real = 100\n"
    "mass_scaling = 1e7\n"
    "[bc]\n"
    "fix = x x0\n"
    "fix = y y0\n"
    "fix = z z0\n"
    "traction = z z1 -5e6\n"
    "[output]\n"
    "samples = 10\n";

TEST_SUITE_BEGIN("cli");

TEST_CASE("dry-run validates a preset and prints the resolved config") {
    const fs::path dir = fresh_dir("dry_run");
    const RunCapture r =
        run_cli(dir, "run \"" + g_presets + "/asr-free-30C.cfg\" --dry-run");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("geometry.box = 70 70 140") != std::string::npos);
    CHECK(r.out.find("kinetics.K = 2500") != std::string::npos);
    CHECK(r.err.empty());
}

TEST_CASE("every shipped preset resolves") {
    const fs::path dir = fresh_dir("presets");
    std::size_t n = 0;
    for (const auto& entry : fs::directory_iterator(g_presets)) {
        if (entry.path().extension() != ".cfg") continue;
        ++n;
        CAPTURE(entry.path().string());
        const RunCapture r = run_cli(dir, "run \"" + entry.path().string() + "\" --dry-run");
        CHECK(r.exit_code == 0);
    }
    CHECK(n == 5);
}

TEST_CASE("missing config exits with the config code and names the path") {
    const fs::path dir = fresh_dir("missing");
    const RunCapture r = run_cli(dir, "run \"" + (dir / "nope.cfg").string() + "\"");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("nope.cfg") != std::string::npos);
}

TEST_CASE("generate writes identical structures for a fixed seed") {
    const fs::path dir = fresh_dir("generate");
    write_file(dir / "tiny.cfg", kTinyGel);
    const std::string cfg = "\"" + (dir / "tiny.cfg").string() + "\"";
    const RunCapture a =
        run_cli(dir, "generate " + cfg + " --seed 42 -o \"" + (dir / "a").string() + "\"");
    const RunCapture b =
        run_cli(dir, "generate " + cfg + " --seed 42 -o \"" + (dir / "b").string() + "\"");
    REQUIRE(a.exit_code == 0);
    REQUIRE(b.exit_code == 0);
    CHECK(a.out.find("spheres:") != std::string::npos);
    const std::string sa = slurp(dir / "a" / "structure.txt");
    REQUIRE(!sa.empty());
    CHECK(sa == slurp(dir / "b" / "structure.txt"));
    CHECK(fs::exists(dir / "a" / "mesh.vtk"));
    CHECK(fs::exists(dir / "a" / "manifest.json"));
}

TEST_CASE("run produces a monotone creep column and a manifest") {
    const fs::path dir = fresh_dir("run_creep");
    write_file(dir / "creep.cfg", kTinyCreep);
    const RunCapture r = run_cli(dir, "run \"" + (dir / "creep.cfg").string() + "\" -o \"" +
                                          (dir / "out").string() + "\"");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("t_real=") != std::string::npos);

    const asrmeso::TimeSeries ts = asrmeso::read_csv((dir / "out" / "timeseries.csv").string());
    REQUIRE(ts.rows.size() == 11);
    CHECK(ts.rows.front().t_real == 0.0);
    CHECK(ts.rows.back().t_real == doctest::Approx(100.0));
    // Constant compression: creep keeps shortening the column.
    CHECK(ts.rows[1].eps_z < -1e-4);
    for (std::size_t i = 1; i < ts.rows.size(); ++i) {
        CHECK(ts.rows[i].eps_z < ts.rows[i - 1].eps_z);
    }

    const std::string manifest = slurp(dir / "out" / "manifest.json");
    CHECK(manifest.find("\"fingerprint\"") != std::string::npos);
    CHECK(manifest.find("\"seed\"") != std::string::npos);
    CHECK(manifest.find("\"version\"") != std::string::npos);
}

TEST_CASE("sweep rejects unknown parameter paths and lists valid ones") {
    const fs::path dir = fresh_dir("sweep_bad");
    write_file(dir / "tiny.cfg", kTinyGel);
    const RunCapture r = run_cli(dir, "sweep \"" + (dir / "tiny.cfg").string() +
                                          "\" --param bogus.path --values 1,2");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("bogus.path") != std::string::npos);
    CHECK(r.err.find("kinetics.K") != std::string::npos);
}

TEST_CASE("sweep emits an aligned comparison table") {
    const fs::path dir = fresh_dir("sweep_ok");
    write_file(dir / "tiny.cfg", kTinyGel);
    const RunCapture r =
        run_cli(dir, "sweep \"" + (dir / "tiny.cfg").string() + "\" --param kinetics.K" +
                         " --values 1500,2500 -o \"" + (dir / "out").string() + "\"");
    REQUIRE(r.exit_code == 0);

    const fs::path table = dir / "out" / "sweep_kinetics.K.csv";
    REQUIRE(fs::exists(table));
    std::ifstream in(table);
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header.find("t_real") == 0);
    CHECK(header.find("eps_z(1500)") != std::string::npos);
    CHECK(header.find("eps_z(2500)") != std::string::npos);
    CHECK(header.find("mean_eps_gel(2500)") != std::string::npos);
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 11);

    // Slower kinetics mean less gel strain at every shared time.
    const asrmeso::TimeSeries slow =
        asrmeso::read_csv((dir / "out" / "kinetics.K=1500" / "timeseries.csv").string());
    const asrmeso::TimeSeries fast =
        asrmeso::read_csv((dir / "out" / "kinetics.K=2500" / "timeseries.csv").string());
    REQUIRE(slow.rows.size() == fast.rows.size());
    for (std::size_t i = 1; i < slow.rows.size(); ++i) {
        CHECK(slow.rows[i].mean_eps_gel < fast.rows[i].mean_eps_gel);
    }
}

TEST_SUITE_END();

}  // namespace

int main(int argc, char** argv) {
    doctest::Context ctx;
    std::vector<char*> fwd;
    for (int i = 0; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg.rfind("--bin=", 0) == 0) {
            g_bin = arg.substr(6);
        } else if (arg.rfind("--presets=", 0) == 0) {
            g_presets = arg.substr(10);
        } else {
            fwd.push_back(argv[i]);
        }
    }
    if (g_bin.empty() || g_presets.empty()) {
        std::fprintf(stderr, "usage: test_cli --bin=<asrmeso binary> --presets=<dir> [doctest args]\n");
        return 1;
    }
    ctx.applyCommandLine(static_cast<int>(fwd.size()), fwd.data());
    return ctx.run();
}
