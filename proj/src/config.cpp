#include "asrmeso/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "asrmeso/errors.hpp"
#include "asrmeso/mazars.hpp"

namespace asrmeso {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

// A '#' opens a comment at line start or after whitespace, so values such as
// file names may still contain the character.
void strip_comment(std::string& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '#')
            continue;
        if (i == 0 || std::isspace(static_cast<unsigned char>(s[i - 1]))) {
            s.erase(i);
            return;
        }
    }
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty())
            out += ", ";
        out += p;
    }
    return out;
}

[[noreturn]] void fail_at(const std::string& path, int line, const std::string& msg) {
    const std::string where = path.empty() ? "config" : path;
    if (line > 0)
        throw ConfigError(where + ":" + std::to_string(line) + ": " + msg);
    throw ConfigError(where + " (command line): " + msg);
}

std::vector<std::string> tokens_of(const std::string& value) {
    std::istringstream in(value);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok)
        out.push_back(tok);
    return out;
}

// The single schema both resolve_config and the sweep validator consult.
const std::vector<std::pair<std::string, std::vector<std::string>>>& schema() {
    static const std::vector<std::pair<std::string, std::vector<std::string>>> s = {
        {"geometry",
         {"box", "h", "d_min", "d_max", "n_f", "v_agg", "clearance", "gel_ratio", "seed",
          "max_rejects"}},
        {"paste",
         {"E0", "E_mu", "tau_mu", "alpha", "lambda0", "age_offset", "nu", "k0", "A_t", "B_t",
          "A_c", "B_c", "G_f", "eps_ult", "creep", "damage"}},
        {"aggregate", {"E", "nu", "k0", "A_t", "B_t", "A_c", "B_c", "G_f", "eps_ult", "damage"}},
        {"gel", {"E", "nu"}},
        {"kinetics", {"K", "C", "E_a", "R"}},
        {"solver",
         {"T_sim", "T_real", "dt", "safety", "mass_scaling", "damping", "density", "preload",
          "preload_fraction", "temperature"}},
        {"bc", {"restraint", "fix", "traction"}},
        {"output", {"dir", "csv", "samples", "snapshots", "damage_threshold"}},
    };
    return s;
}

double parse_number(const std::string& path, const ConfigEntry& e, const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v))
        fail_at(path, e.line, "value of '" + e.key + "' is not a number: '" + text + "'");
    return v;
}

// Reads one section, tracking which entries were consumed so leftovers can
// be reported with the full key listing.
class SectionReader {
  public:
    SectionReader(const ConfigDoc& doc, const std::string& name) : doc_(doc), name_(name) {
        for (const auto& s : doc.sections)
            if (s.name == name) {
                sec_ = &s;
                break;
            }
        if (sec_)
            used_.assign(sec_->entries.size(), false);
    }

    const ConfigEntry* find(const std::string& key) {
        if (!sec_)
            return nullptr;
        const ConfigEntry* hit = nullptr;
        for (std::size_t i = 0; i < sec_->entries.size(); ++i) {
            if (sec_->entries[i].key != key)
                continue;
            if (hit)
                fail_at(doc_.path, sec_->entries[i].line,
                        "duplicate key '" + key + "' in [" + name_ + "]");
            hit = &sec_->entries[i];
            used_[i] = true;
        }
        return hit;
    }

    std::vector<const ConfigEntry*> repeated(const std::string& key) {
        std::vector<const ConfigEntry*> out;
        if (!sec_)
            return out;
        for (std::size_t i = 0; i < sec_->entries.size(); ++i)
            if (sec_->entries[i].key == key) {
                out.push_back(&sec_->entries[i]);
                used_[i] = true;
            }
        return out;
    }

    double number(const std::string& key, double def) {
        const ConfigEntry* e = find(key);
        return e ? parse_number(doc_.path, *e, trim(e->value)) : def;
    }

    // Accepts "auto" as the sentinel for derived values.
    double number_or_auto(const std::string& key, double def, double sentinel) {
        const ConfigEntry* e = find(key);
        if (!e)
            return def;
        const std::string v = trim(e->value);
        if (v == "auto")
            return sentinel;
        return parse_number(doc_.path, *e, v);
    }

    std::uint64_t unsigned_number(const std::string& key, std::uint64_t def) {
        const ConfigEntry* e = find(key);
        if (!e)
            return def;
        const std::string v = trim(e->value);
        char* end = nullptr;
        const unsigned long long r = std::strtoull(v.c_str(), &end, 10);
        if (end == v.c_str() || *end != '\0' || v[0] == '-')
            fail_at(doc_.path, e->line,
                    "value of '" + key + "' is not a non-negative integer: '" + v + "'");
        return r;
    }

    bool flag(const std::string& key, bool def) {
        const ConfigEntry* e = find(key);
        if (!e)
            return def;
        const std::string v = trim(e->value);
        if (v == "on" || v == "true" || v == "1")
            return true;
        if (v == "off" || v == "false" || v == "0")
            return false;
        fail_at(doc_.path, e->line, "value of '" + key + "' must be on or off: '" + v + "'");
    }

    std::string text(const std::string& key, const std::string& def) {
        const ConfigEntry* e = find(key);
        return e ? trim(e->value) : def;
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> def) {
        const ConfigEntry* e = find(key);
        if (!e)
            return def;
        std::vector<double> out;
        for (const auto& tok : tokens_of(e->value))
            out.push_back(parse_number(doc_.path, *e, tok));
        if (out.empty())
            fail_at(doc_.path, e->line, "value of '" + key + "' is empty");
        return out;
    }

    const ConfigDoc& doc() const { return doc_; }
    const ConfigSection* section() const { return sec_; }

    void finish(const std::vector<std::string>& valid) {
        if (!sec_)
            return;
        for (std::size_t i = 0; i < sec_->entries.size(); ++i)
            if (!used_[i])
                fail_at(doc_.path, sec_->entries[i].line,
                        "unknown key '" + sec_->entries[i].key + "' in [" + name_ +
                            "]; valid keys: " + join(valid));
    }

  private:
    const ConfigDoc& doc_;
    std::string name_;
    const ConfigSection* sec_ = nullptr;
    std::vector<bool> used_;
};

int axis_of(const std::string& path, int line, const std::string& tok) {
    if (tok == "x")
        return 0;
    if (tok == "y")
        return 1;
    if (tok == "z")
        return 2;
    fail_at(path, line, "expected a component x, y, or z, got '" + tok + "'");
}

void plane_of(const std::string& path, int line, const std::string& tok, int& axis, int& side) {
    if (tok.size() == 2 && (tok[1] == '0' || tok[1] == '1')) {
        const char a = tok[0];
        if (a == 'x' || a == 'y' || a == 'z') {
            axis = a - 'x';
            side = tok[1] - '0';
            return;
        }
    }
    fail_at(path, line, "expected a face name x0, x1, y0, y1, z0, or z1, got '" + tok + "'");
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ConfigDoc parse_config_text(const std::string& text, const std::string& path) {
    ConfigDoc doc;
    doc.path = path;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        strip_comment(raw);
        const std::string s = trim(raw);
        if (s.empty())
            continue;
        if (s.front() == '[') {
            if (s.back() != ']' || s.size() < 3)
                fail_at(path, line, "malformed section header '" + s + "'");
            const std::string name = trim(s.substr(1, s.size() - 2));
            if (name.empty())
                fail_at(path, line, "empty section name");
            for (const auto& sec : doc.sections)
                if (sec.name == name)
                    fail_at(path, line,
                            "section [" + name + "] already opened at line " +
                                std::to_string(sec.line));
            doc.sections.push_back({name, line, {}});
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            fail_at(path, line, "expected 'key = value' or '[section]', got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty())
            fail_at(path, line, "missing key before '='");
        if (value.empty())
            fail_at(path, line, "missing value for key '" + key + "'");
        if (doc.sections.empty())
            fail_at(path, line, "key '" + key + "' appears before any [section]");
        doc.sections.back().entries.push_back({key, value, line});
    }
    return doc;
}

ConfigDoc parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

void apply_override(ConfigDoc& doc, const std::string& path, const std::string& value) {
    const std::size_t dot = path.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == path.size())
        throw ConfigError("parameter path must look like section.key, got '" + path + "'");
    const std::string section = trim(path.substr(0, dot));
    const std::string key = trim(path.substr(dot + 1));
    const std::string val = trim(value);
    if (val.empty())
        throw ConfigError("empty value for parameter '" + path + "'");

    ConfigSection* sec = nullptr;
    for (auto& s : doc.sections)
        if (s.name == section)
            sec = &s;
    if (!sec) {
        doc.sections.push_back({section, 0, {}});
        sec = &doc.sections.back();
    }
    auto& es = sec->entries;
    es.erase(std::remove_if(es.begin(), es.end(),
                            [&](const ConfigEntry& e) { return e.key == key; }),
             es.end());
    es.push_back({key, val, 0});
}

void apply_override(ConfigDoc& doc, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("expected section.key=value, got '" + assignment + "'");
    apply_override(doc, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

std::vector<std::string> known_parameter_paths() {
    std::vector<std::string> out;
    for (const auto& [section, keys] : schema())
        for (const auto& key : keys)
            out.push_back(section + "." + key);
    return out;
}

double SimulationConfig::temperature_kelvin(double t_days) const {
    double celsius = solver.temperature.front().celsius;
    for (const auto& p : solver.temperature)
        if (p.t_days <= t_days)
            celsius = p.celsius;
    return celsius + 273.15;
}

std::string SimulationConfig::canonical_text() const {
    std::string s;
    auto put = [&](const char* key, const std::string& v) {
        s += key;
        s += " = ";
        s += v;
        s += '\n';
    };
    auto num = [&](const char* key, double v) { put(key, fmt(v)); };
    auto flag = [&](const char* key, bool v) { put(key, v ? "on" : "off"); };

    put("geometry.box", fmt(geometry.box.x) + " " + fmt(geometry.box.y) + " " + fmt(geometry.box.z));
    num("geometry.h", geometry.h);
    num("geometry.d_min", geometry.sieve.d_min);
    num("geometry.d_max", geometry.sieve.d_max);
    num("geometry.n_f", geometry.sieve.n_f);
    num("geometry.v_agg", geometry.sieve.v_agg());
    num("geometry.clearance", geometry.clearance_mm());
    num("geometry.gel_ratio", geometry.gel_ratio);
    put("geometry.seed", std::to_string(geometry.seed));
    put("geometry.max_rejects", std::to_string(geometry.max_rejects));

    num("paste.E0", paste.chain.E0);
    std::string emu, tmu;
    for (std::size_t i = 0; i < paste.chain.E_inf.size(); ++i) {
        if (i) {
            emu += ' ';
            tmu += ' ';
        }
        emu += fmt(paste.chain.E_inf[i]);
        tmu += fmt(paste.chain.tau[i]);
    }
    put("paste.E_mu", emu);
    put("paste.tau_mu", tmu);
    num("paste.alpha", paste.chain.alpha);
    num("paste.lambda0", paste.chain.lambda0);
    num("paste.age_offset", paste.chain.age_offset);
    num("paste.nu", paste.nu);
    num("paste.k0", paste.damage.k0);
    num("paste.A_t", paste.damage.A_t);
    num("paste.B_t", paste.damage.B_t);
    num("paste.A_c", paste.damage.A_c);
    num("paste.B_c", paste.damage.B_c);
    num("paste.G_f", paste.G_f);
    num("paste.eps_ult", paste.damage.eps_ult);
    flag("paste.creep", paste.creep);
    flag("paste.damage", paste.damage_on);

    num("aggregate.E", aggregate.elastic.E);
    num("aggregate.nu", aggregate.elastic.nu);
    num("aggregate.k0", aggregate.damage.k0);
    num("aggregate.A_t", aggregate.damage.A_t);
    num("aggregate.B_t", aggregate.damage.B_t);
    num("aggregate.A_c", aggregate.damage.A_c);
    num("aggregate.B_c", aggregate.damage.B_c);
    num("aggregate.G_f", aggregate.G_f);
    num("aggregate.eps_ult", aggregate.damage.eps_ult);
    flag("aggregate.damage", aggregate.damage_on);

    num("gel.E", gel.elastic.E);
    num("gel.nu", gel.elastic.nu);

    num("kinetics.K", kinetics.K);
    num("kinetics.C", kinetics.C);
    num("kinetics.E_a", kinetics.E_a);
    num("kinetics.R", kinetics.R);

    num("solver.T_sim", solver.T_sim);
    num("solver.T_real", solver.T_real);
    num("solver.dt", solver.dt);
    num("solver.safety", solver.safety);
    num("solver.mass_scaling", solver.mass_scaling);
    num("solver.damping", solver.damping);
    put("solver.density",
        fmt(solver.density[0]) + " " + fmt(solver.density[1]) + " " + fmt(solver.density[2]));
    flag("solver.preload", preload_enabled());
    num("solver.preload_fraction", solver.preload_fraction);
    std::string sched;
    for (const auto& p : solver.temperature) {
        if (!sched.empty())
            sched += ' ';
        sched += fmt(p.t_days) + ":" + fmt(p.celsius);
    }
    put("solver.temperature", sched);

    put("bc.restraint", bc.restraint == Restraint::minimal ? "minimal" : "none");
    const char* axes = "xyz";
    for (const auto& f : bc.fixes)
        put("bc.fix", std::string(1, axes[f.component]) + " " + axes[f.plane_axis] +
                          std::to_string(f.plane_side));
    for (const auto& t : bc.tractions)
        put("bc.traction", std::string(1, axes[t.component]) + " " + axes[t.plane_axis] +
                               std::to_string(t.plane_side) + " " + fmt(t.value));

    put("output.dir", output.dir);
    put("output.csv", output.csv);
    put("output.samples", std::to_string(output.samples));
    put("output.snapshots", std::to_string(output.snapshots));
    num("output.damage_threshold", output.damage_threshold);
    return s;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t SimulationConfig::fingerprint() const {
    return fnv1a(canonical_text());
}

SimulationConfig resolve_config(const ConfigDoc& doc) {
    for (const auto& sec : doc.sections) {
        bool known = false;
        for (const auto& [name, keys] : schema())
            known = known || name == sec.name;
        if (!known) {
            std::vector<std::string> names;
            for (const auto& [name, keys] : schema())
                names.push_back(name);
            fail_at(doc.path, sec.line,
                    "unknown section [" + sec.name + "]; valid sections: " + join(names));
        }
    }

    SimulationConfig c;

    {
        SectionReader r(doc, "geometry");
        if (const ConfigEntry* e = r.find("box")) {
            std::vector<double> box;
            for (const auto& tok : tokens_of(e->value))
                box.push_back(parse_number(doc.path, *e, tok));
            if (box.size() != 3)
                fail_at(doc.path, e->line, "'box' needs exactly three lengths (mm)");
            c.geometry.box = {box[0], box[1], box[2]};
        }
        c.geometry.h = r.number("h", c.geometry.h);
        const double d_min = r.number("d_min", 4.0);
        const double d_max = r.number("d_max", 20.0);
        const double n_f = r.number("n_f", 0.5);
        const double v_agg = r.number("v_agg", 0.4);
        c.geometry.clearance = r.number_or_auto("clearance", -1.0, -1.0);
        c.geometry.gel_ratio = r.number("gel_ratio", c.geometry.gel_ratio);
        c.geometry.seed = r.unsigned_number("seed", c.geometry.seed);
        c.geometry.max_rejects = r.unsigned_number("max_rejects", c.geometry.max_rejects);
        r.finish(schema()[0].second);

        if (!(c.geometry.h > 0.0))
            throw ConfigError("geometry: h must be positive");
        if (!(c.geometry.box.x > 0.0 && c.geometry.box.y > 0.0 && c.geometry.box.z > 0.0))
            throw ConfigError("geometry: box edges must be positive");
        if (!(v_agg > 0.0 && v_agg < 1.0))
            throw ConfigError("geometry: v_agg must lie in (0, 1)");
        if (!(c.geometry.gel_ratio >= 0.0 && c.geometry.gel_ratio < 1.0))
            throw ConfigError("geometry: gel_ratio must lie in [0, 1)");
        // The configured fraction is the placed (simulated) one; the curve
        // stores the batch fraction it derives from.
        c.geometry.sieve = SieveCurve{d_min, d_max, n_f, 0.5};
        c.geometry.sieve.validate();
        const double coverage = 1.0 - std::pow(d_min / d_max, n_f);
        c.geometry.sieve.v0_agg = v_agg / coverage;
        if (!(c.geometry.sieve.v0_agg < 1.0))
            throw ConfigError(
                "geometry: v_agg is unreachable, the implied batch fraction reaches " +
                fmt(c.geometry.sieve.v0_agg));
        c.geometry.sieve.validate();
    }

    {
        SectionReader r(doc, "paste");
        c.paste.chain.E0 = r.number("E0", c.paste.chain.E0);
        c.paste.chain.E_inf = r.numbers("E_mu", c.paste.chain.E_inf);
        c.paste.chain.tau = r.numbers("tau_mu", c.paste.chain.tau);
        c.paste.chain.alpha = r.number("alpha", c.paste.chain.alpha);
        c.paste.chain.lambda0 = r.number("lambda0", c.paste.chain.lambda0);
        c.paste.chain.age_offset = r.number("age_offset", c.paste.chain.age_offset);
        c.paste.nu = r.number("nu", c.paste.nu);
        c.paste.damage.k0 = r.number("k0", c.paste.damage.k0);
        c.paste.damage.A_t = r.number("A_t", c.paste.damage.A_t);
        c.paste.damage.B_t = r.number("B_t", c.paste.damage.B_t);
        c.paste.damage.A_c = r.number("A_c", c.paste.damage.A_c);
        c.paste.damage.B_c = r.number("B_c", c.paste.damage.B_c);
        c.paste.G_f = r.number("G_f", c.paste.G_f);
        c.paste.damage.eps_ult = r.number_or_auto("eps_ult", 0.0, 0.0);
        c.paste.creep = r.flag("creep", c.paste.creep);
        c.paste.damage_on = r.flag("damage", c.paste.damage_on);
        r.finish(schema()[1].second);
        c.paste.chain.validate();
    }

    {
        SectionReader r(doc, "aggregate");
        c.aggregate.elastic.E = r.number("E", c.aggregate.elastic.E);
        c.aggregate.elastic.nu = r.number("nu", c.aggregate.elastic.nu);
        c.aggregate.damage.k0 = r.number("k0", c.aggregate.damage.k0);
        c.aggregate.damage.A_t = r.number("A_t", c.aggregate.damage.A_t);
        c.aggregate.damage.B_t = r.number("B_t", c.aggregate.damage.B_t);
        c.aggregate.damage.A_c = r.number("A_c", c.aggregate.damage.A_c);
        c.aggregate.damage.B_c = r.number("B_c", c.aggregate.damage.B_c);
        c.aggregate.G_f = r.number("G_f", c.aggregate.G_f);
        c.aggregate.damage.eps_ult = r.number_or_auto("eps_ult", 0.0, 0.0);
        c.aggregate.damage_on = r.flag("damage", c.aggregate.damage_on);
        r.finish(schema()[2].second);
    }

    {
        SectionReader r(doc, "gel");
        c.gel.elastic.E = r.number("E", c.gel.elastic.E);
        c.gel.elastic.nu = r.number("nu", c.gel.elastic.nu);
        r.finish(schema()[3].second);
        if (!(c.gel.elastic.E > 0.0))
            throw ConfigError("gel: E must be positive");
    }

    {
        SectionReader r(doc, "kinetics");
        c.kinetics.K = r.number("K", 2500.0);
        c.kinetics.C = r.number("C", 50e-5);
        c.kinetics.E_a = r.number("E_a", c.kinetics.E_a);
        c.kinetics.R = r.number("R", c.kinetics.R);
        r.finish(schema()[4].second);
        c.kinetics.validate();
    }

    {
        SectionReader r(doc, "solver");
        c.solver.T_sim = r.number("T_sim", c.solver.T_sim);
        c.solver.T_real = r.number("T_real", c.solver.T_real);
        c.solver.dt = r.number_or_auto("dt", 0.0, 0.0);
        c.solver.safety = r.number("safety", c.solver.safety);
        c.solver.mass_scaling = r.number("mass_scaling", c.solver.mass_scaling);
        c.solver.damping = r.number_or_auto("damping", -1.0, -1.0);
        if (const ConfigEntry* e = r.find("density")) {
            std::vector<double> rho;
            for (const auto& tok : tokens_of(e->value))
                rho.push_back(parse_number(doc.path, *e, tok));
            if (rho.size() == 1)
                c.solver.density = {rho[0], rho[0], rho[0]};
            else if (rho.size() == 3)
                c.solver.density = {rho[0], rho[1], rho[2]};
            else
                fail_at(doc.path, e->line,
                        "'density' takes one value or three (paste aggregate gel)");
        }
        const ConfigEntry* pre = r.find("preload");
        if (pre) {
            const std::string v = trim(pre->value);
            if (v == "auto")
                c.solver.preload = -1;
            else if (v == "on" || v == "true" || v == "1")
                c.solver.preload = 1;
            else if (v == "off" || v == "false" || v == "0")
                c.solver.preload = 0;
            else
                fail_at(doc.path, pre->line, "'preload' must be on, off, or auto");
        }
        c.solver.preload_fraction = r.number("preload_fraction", c.solver.preload_fraction);
        const ConfigEntry* temp = r.find("temperature");
        if (temp) {
            const auto toks = tokens_of(temp->value);
            std::vector<TemperaturePoint> sched;
            if (toks.size() == 1 && toks[0].find(':') == std::string::npos) {
                sched.push_back({0.0, parse_number(doc.path, *temp, toks[0])});
            } else {
                for (const auto& tok : toks) {
                    const std::size_t colon = tok.find(':');
                    if (colon == std::string::npos)
                        fail_at(doc.path, temp->line,
                                "temperature schedule entries look like day:celsius, got '" +
                                    tok + "'");
                    sched.push_back({parse_number(doc.path, *temp, tok.substr(0, colon)),
                                     parse_number(doc.path, *temp, tok.substr(colon + 1))});
                }
                if (sched.empty() || sched.front().t_days != 0.0)
                    fail_at(doc.path, temp->line, "temperature schedule must start at day 0");
                for (std::size_t i = 1; i < sched.size(); ++i)
                    if (!(sched[i].t_days > sched[i - 1].t_days))
                        fail_at(doc.path, temp->line,
                                "temperature schedule times must increase");
            }
            c.solver.temperature = sched;
        }
        r.finish(schema()[5].second);

        if (!(c.solver.T_sim > 0.0) || !(c.solver.T_real > 0.0))
            throw ConfigError("solver: T_sim and T_real must be positive");
        if (c.solver.dt < 0.0)
            throw ConfigError("solver: dt must be positive or auto");
        if (!(c.solver.safety > 0.0 && c.solver.safety <= 1.0))
            throw ConfigError("solver: safety must lie in (0, 1]");
        if (!(c.solver.mass_scaling > 0.0))
            throw ConfigError("solver: mass_scaling must be positive");
        for (double rho_i : c.solver.density)
            if (!(rho_i > 0.0))
                throw ConfigError("solver: densities must be positive");
        if (!(c.solver.preload_fraction > 0.0 && c.solver.preload_fraction <= 0.5))
            throw ConfigError("solver: preload_fraction must lie in (0, 0.5]");
        for (const auto& p : c.solver.temperature)
            if (!(p.celsius > -273.15))
                throw ConfigError("solver: temperatures must exceed absolute zero");
    }

    {
        SectionReader r(doc, "bc");
        const std::string restraint = r.text("restraint", "none");
        if (restraint == "minimal")
            c.bc.restraint = Restraint::minimal;
        else if (restraint != "none")
            throw ConfigError("bc: restraint must be none or minimal");
        for (const ConfigEntry* e : r.repeated("fix")) {
            const auto toks = tokens_of(e->value);
            if (toks.size() != 2)
                fail_at(doc.path, e->line, "'fix' takes a component and a face, e.g. 'x x0'");
            BcFix f{};
            f.component = axis_of(doc.path, e->line, toks[0]);
            plane_of(doc.path, e->line, toks[1], f.plane_axis, f.plane_side);
            c.bc.fixes.push_back(f);
        }
        for (const ConfigEntry* e : r.repeated("traction")) {
            const auto toks = tokens_of(e->value);
            if (toks.size() != 3)
                fail_at(doc.path, e->line,
                        "'traction' takes a component, a face, and a value in Pa, "
                        "e.g. 'z z1 -5e6'");
            BcTraction t{};
            t.component = axis_of(doc.path, e->line, toks[0]);
            plane_of(doc.path, e->line, toks[1], t.plane_axis, t.plane_side);
            t.value = parse_number(doc.path, *e, toks[2]);
            c.bc.tractions.push_back(t);
        }
        r.finish(schema()[6].second);
    }

    {
        SectionReader r(doc, "output");
        c.output.dir = r.text("dir", c.output.dir);
        c.output.csv = r.text("csv", c.output.csv);
        c.output.samples = static_cast<int>(r.unsigned_number("samples", c.output.samples));
        c.output.snapshots = static_cast<int>(r.unsigned_number("snapshots", c.output.snapshots));
        c.output.damage_threshold = r.number("damage_threshold", c.output.damage_threshold);
        r.finish(schema()[7].second);
        if (c.output.samples < 2)
            throw ConfigError("output: samples must be at least 2");
        if (!(c.output.damage_threshold > 0.0 && c.output.damage_threshold <= 1.0))
            throw ConfigError("output: damage_threshold must lie in (0, 1]");
    }

    // Calibrate the fully-cracked strains that were left on auto. The band
    // size is the configured element edge.
    const double h_m = c.geometry.h * 1e-3;
    if (c.paste.damage_on) {
        if (c.paste.damage.eps_ult == 0.0)
            c.paste.damage.eps_ult =
                crack_band_eps_ult(c.paste.damage, c.paste.chain.E0, c.paste.G_f, h_m);
        c.paste.damage.validate();
    }
    if (c.aggregate.damage_on) {
        if (c.aggregate.damage.eps_ult == 0.0)
            c.aggregate.damage.eps_ult = crack_band_eps_ult(
                c.aggregate.damage, c.aggregate.elastic.E, c.aggregate.G_f, h_m);
        c.aggregate.damage.validate();
    }
    if (!(c.paste.nu > -1.0 && c.paste.nu < 0.5) || !(c.aggregate.elastic.nu > -1.0 && c.aggregate.elastic.nu < 0.5) ||
        !(c.gel.elastic.nu > -1.0 && c.gel.elastic.nu < 0.5))
        throw ConfigError("Poisson ratios must lie in (-1, 0.5)");

    return c;
}

}
