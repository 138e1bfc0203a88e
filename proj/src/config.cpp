#include "spindd/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "spindd/errors.hpp"

namespace spindd {

namespace {

struct Entry {
    std::string value;
    int line = -1;
    bool used = false;
};

struct Sections {
    std::map<std::string, std::map<std::string, Entry>> data;
    std::map<std::string, int> section_lines;

    bool has(const std::string& sec) const { return data.count(sec) > 0; }

    Entry* find(const std::string& sec, const std::string& key) {
        auto s = data.find(sec);
        if (s == data.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        k->second.used = true;
        return &k->second;
    }
};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

Sections tokenize_sections(const std::string& text) {
    Sections out;
    std::istringstream in(text);
    std::string raw;
    std::string section;  // "" = top level
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("unterminated section header '" + line + "'", lineno);
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError("empty section name", lineno);
            out.section_lines.emplace(section, lineno);
            out.data[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value', got '" + line + "'", lineno);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key before '='", lineno);
        if (value.empty()) throw ConfigError("missing value for key '" + key + "'", lineno);
        auto& sec = out.data[section];
        if (sec.count(key))
            throw ConfigError("duplicate key '" + key + "' in section [" + section + "]", lineno);
        sec[key] = Entry{value, lineno, false};
    }
    return out;
}

double parse_number(const Entry& e, const std::string& field) {
    try {
        size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument(e.value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("field '" + field + "': expected a number, got '" + e.value + "'", e.line,
                          field);
    }
}

int parse_int(const Entry& e, const std::string& field) {
    const double v = parse_number(e, field);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw ConfigError("field '" + field + "': expected an integer", e.line, field);
    return i;
}

std::vector<double> parse_numbers(const Entry& e, const std::string& field) {
    std::istringstream in(e.value);
    std::vector<double> vals;
    std::string tok;
    while (in >> tok) {
        try {
            size_t pos = 0;
            vals.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ConfigError("field '" + field + "': expected numbers, got '" + tok + "'", e.line,
                              field);
        }
    }
    return vals;
}

Profile parse_profile(const Entry& e, const std::string& field, const std::string& base_dir) {
    try {
        return Profile::parse(e.value, base_dir);
    } catch (const ConfigError& err) {
        throw ConfigError("field '" + field + "': " + err.what(), e.line, field);
    }
}

void require_section(const Sections& s, const std::string& name) {
    if (!s.has(name)) throw ConfigError("missing required section [" + name + "]", -1, name);
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& base_dir) {
    Sections s = tokenize_sections(text);
    RunConfig cfg;
    cfg.base_dir = base_dir;

    if (Entry* e = s.find("", "schema_version")) {
        cfg.schema_version = parse_int(*e, "schema_version");
        if (cfg.schema_version != 1)
            throw ConfigError("unsupported schema_version " + std::to_string(cfg.schema_version),
                              e->line, "schema_version");
    }

    require_section(s, "grid");
    if (Entry* e = s.find("grid", "n_cells"))
        cfg.n_cells = parse_int(*e, "n_cells");
    else
        throw ConfigError("[grid] requires n_cells", s.section_lines.at("grid"), "n_cells");
    if (cfg.n_cells < 1)
        throw ConfigError("n_cells must be >= 1", -1, "n_cells");
    if (Entry* e = s.find("grid", "length")) cfg.length = parse_number(*e, "length");
    if (!(cfg.length > 0.0)) throw ConfigError("length must be > 0", -1, "length");

    require_section(s, "model");
    if (Entry* e = s.find("model", "gamma")) cfg.gamma = parse_number(*e, "gamma");
    if (Entry* e = s.find("model", "p")) cfg.p = parse_number(*e, "p");
    if (Entry* e = s.find("model", "D")) cfg.diff = parse_number(*e, "D");
    if (Entry* e = s.find("model", "mu")) {
        const auto vals = parse_numbers(*e, "mu");
        if (vals.size() != 3) throw ConfigError("mu needs 3 components", e->line, "mu");
        cfg.mu = {vals[0], vals[1], vals[2]};
    }
    if (Entry* e = s.find("model", "lambda2")) {
        cfg.has_lambda2 = true;
        cfg.lambda2 = parse_number(*e, "lambda2");
    }
    if (Entry* e = s.find("model", "tau")) {
        cfg.has_tau = true;
        cfg.tau = parse_number(*e, "tau");
    }

    cfg.has_physical = s.has("physical");
    if (cfg.has_physical) {
        auto phys_field = [&](const char* key) {
            Entry* e = s.find("physical", key);
            if (!e)
                throw ConfigError("[physical] requires " + std::string(key),
                                  s.section_lines.at("physical"), key);
            return parse_number(*e, key);
        };
        cfg.phys.q = phys_field("q");
        cfg.phys.eps_s = phys_field("eps_s");
        cfg.phys.mu0 = phys_field("mu0");
        cfg.phys.u_t = phys_field("U_T");
        cfg.phys.g_star = phys_field("g_star");
        cfg.phys.tau0 = phys_field("tau0");
        cfg.phys.length = phys_field("L");
    }

    if (cfg.has_physical == cfg.has_lambda2)
        throw ConfigError("exactly one of [model].lambda2 or a [physical] section must be present",
                          -1, "lambda2");
    if (!cfg.has_physical && !cfg.has_tau)
        throw ConfigError("[model] requires tau when no [physical] section is present", -1, "tau");
    if (cfg.has_physical && cfg.has_tau)
        throw ConfigError("tau is derived from [physical]; remove [model].tau", -1, "tau");

    if (s.has("doping")) {
        if (Entry* e = s.find("doping", "profile"))
            cfg.doping = parse_profile(*e, "doping.profile", base_dir);
    }

    require_section(s, "boundary");
    if (Entry* e = s.find("boundary", "n_D")) {
        const auto vals = parse_numbers(*e, "n_D");
        if (vals.size() == 1) {
            cfg.nd_left = cfg.nd_right = vals[0];
        } else if (vals.size() == 2) {
            cfg.nd_left = vals[0];
            cfg.nd_right = vals[1];
        } else {
            throw ConfigError("n_D takes 1 or 2 values", e->line, "n_D");
        }
    } else {
        throw ConfigError("[boundary] requires n_D", s.section_lines.at("boundary"), "n_D");
    }
    if (!(cfg.nd_left > 0.0 && cfg.nd_right > 0.0))
        throw ConfigError("boundary densities n_D must be > 0", -1, "n_D");
    if (Entry* e = s.find("boundary", "V_D")) {
        const auto vals = parse_numbers(*e, "V_D");
        if (vals.size() == 1) {
            cfg.vd_left = cfg.vd_right = vals[0];
        } else if (vals.size() == 2) {
            cfg.vd_left = vals[0];
            cfg.vd_right = vals[1];
        } else {
            throw ConfigError("V_D takes 1 or 2 values", e->line, "V_D");
        }
        cfg.has_vd = true;
    }
    if (Entry* e = s.find("boundary", "phi_D")) {
        cfg.has_phid = true;
        cfg.phi_profile = parse_profile(*e, "phi_D", base_dir);
    }
    if (Entry* e = s.find("boundary", "delta")) cfg.delta = parse_number(*e, "delta");
    if (cfg.has_vd && cfg.has_phid)
        throw ConfigError("[boundary] takes either V_D or phi_D, not both", -1, "V_D");
    if (!cfg.has_vd && !cfg.has_phid)
        throw ConfigError("[boundary] requires V_D or phi_D", s.section_lines.at("boundary"),
                          "V_D");

    if (s.has("initial")) {
        cfg.has_initial = true;
        if (Entry* e = s.find("initial", "n0")) cfg.init_n0 = parse_profile(*e, "initial.n0", base_dir);
        if (Entry* e = s.find("initial", "n1")) cfg.init_n1 = parse_profile(*e, "initial.n1", base_dir);
        if (Entry* e = s.find("initial", "n2")) cfg.init_n2 = parse_profile(*e, "initial.n2", base_dir);
        if (Entry* e = s.find("initial", "n3")) cfg.init_n3 = parse_profile(*e, "initial.n3", base_dir);
    }

    if (s.has("time")) {
        cfg.has_time = true;
        Entry* edt = s.find("time", "dt");
        Entry* ete = s.find("time", "t_end");
        if (!edt || !ete)
            throw ConfigError("[time] requires dt and t_end", s.section_lines.at("time"), "time");
        cfg.dt = parse_number(*edt, "dt");
        cfg.t_end = parse_number(*ete, "t_end");
        if (Entry* e = s.find("time", "dt_min")) cfg.dt_min = parse_number(*e, "dt_min");
        if (!(cfg.dt > 0.0)) throw ConfigError("dt must be > 0", edt->line, "dt");
        if (cfg.t_end < 0.0) throw ConfigError("t_end must be >= 0", ete->line, "t_end");
    }

    if (s.has("solver")) {
        if (Entry* e = s.find("solver", "gummel_tol")) cfg.gummel.tol = parse_number(*e, "gummel_tol");
        if (Entry* e = s.find("solver", "max_iter")) cfg.gummel.max_iter = parse_int(*e, "max_iter");
        if (Entry* e = s.find("solver", "stationary_tol"))
            cfg.stationary.tol = parse_number(*e, "stationary_tol");
        if (Entry* e = s.find("solver", "stationary_max_iter"))
            cfg.stationary.max_iter = parse_int(*e, "stationary_max_iter");
    }

    if (s.has("output")) {
        if (Entry* e = s.find("output", "directory")) cfg.out_dir = e->value;
        if (Entry* e = s.find("output", "record_every")) {
            cfg.record_every = parse_int(*e, "record_every");
            if (cfg.record_every < 1)
                throw ConfigError("record_every must be >= 1", e->line, "record_every");
        }
    }

    // Reject unknown keys; silent typos in tolerance names are worse
    // than a hard error.
    for (const auto& [sec, entries] : s.data)
        for (const auto& [key, entry] : entries)
            if (!entry.used)
                throw ConfigError("unknown key '" + key + "' in section [" + sec + "]", entry.line,
                                  key);

    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    std::string dir = ".";
    const auto slash = path.find_last_of('/');
    if (slash != std::string::npos) dir = path.substr(0, slash);
    return parse_config_text(buf.str(), dir);
}

ModelSetup build_setup(const RunConfig& cfg) {
    Grid1D grid(cfg.n_cells, cfg.length);
    CellField doping = sample(grid, cfg.doping);

    ScaledParams params;
    double t_star = 0.0;
    if (cfg.has_physical) {
        ScalingResult r = scale(cfg.phys, cfg.p, cfg.gamma, cfg.diff, doping, cfg.mu);
        params = std::move(r.params);
        t_star = r.t_star;
    } else {
        params = ScaledParams::create(cfg.gamma, cfg.tau, cfg.diff, cfg.lambda2, cfg.p, cfg.mu,
                                      std::move(doping));
    }

    BoundaryData bc;
    bc.n_left = cfg.nd_left;
    bc.n_right = cfg.nd_right;
    if (cfg.has_vd) {
        bc.v_left = cfg.vd_left;
        bc.v_right = cfg.vd_right;
    } else {
        // phi_D = delta * profile; V_D = phi_D - log n_D.
        bc.v_left = cfg.delta * cfg.phi_profile.eval(0.0, cfg.length) - std::log(cfg.nd_left);
        bc.v_right =
            cfg.delta * cfg.phi_profile.eval(cfg.length, cfg.length) - std::log(cfg.nd_right);
    }

    return ModelSetup{std::move(grid), std::move(params), bc, t_star};
}

SpinState build_initial_state(const RunConfig& cfg, const Grid1D& grid, const Vec3& mu) {
    if (!cfg.has_initial)
        throw ConfigError("missing required section [initial]", -1, "initial");
    const int n = grid.n_cells();
    std::vector<double> n0(static_cast<size_t>(n));
    std::vector<Vec3> nvec(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = grid.cell_center(i);
        n0[static_cast<size_t>(i)] = cfg.init_n0.eval(x, grid.length());
        nvec[static_cast<size_t>(i)] = {cfg.init_n1.eval(x, grid.length()),
                                        cfg.init_n2.eval(x, grid.length()),
                                        cfg.init_n3.eval(x, grid.length())};
    }
    SpinState state = to_spin_state(n0, nvec, mu);
    state.n_plus.bc_left = 0.5 * cfg.nd_left;
    state.n_plus.bc_right = 0.5 * cfg.nd_right;
    state.n_minus.bc_left = 0.5 * cfg.nd_left;
    state.n_minus.bc_right = 0.5 * cfg.nd_right;
    return state;
}

}  // namespace spindd
