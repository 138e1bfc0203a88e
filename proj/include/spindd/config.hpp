#pragma once

#include <string>

#include "spindd/model.hpp"
#include "spindd/params.hpp"
#include "spindd/profiles.hpp"
#include "spindd/stationary.hpp"
#include "spindd/transport.hpp"

namespace spindd {

/// Parsed run configuration. The file format is bracketed sections of
/// `key = value` lines with `#` comments; see the README for the schema.
/// Exactly one of [model].lambda2/tau or a [physical] block must be
/// present; mu is normalized on load.
struct RunConfig {
    int schema_version = 1;

    // [grid]
    int n_cells = 0;
    double length = 1.0;

    // [model]
    double gamma = 1.0;
    double p = 0.0;
    double diff = 1.0;
    Vec3 mu{0.0, 0.0, 1.0};
    bool has_lambda2 = false;
    double lambda2 = 0.0;
    bool has_tau = false;
    double tau = 0.0;

    // [physical]
    bool has_physical = false;
    PhysicalParams phys{};

    // [doping]
    Profile doping = Profile::constant(1.0);

    // [boundary]
    double nd_left = 1.0, nd_right = 1.0;
    bool has_vd = false;
    double vd_left = 0.0, vd_right = 0.0;
    bool has_phid = false;
    Profile phi_profile = Profile::constant(0.0);
    double delta = 1.0;

    // [initial]
    bool has_initial = false;
    Profile init_n0 = Profile::constant(1.0);
    Profile init_n1 = Profile::constant(0.0);
    Profile init_n2 = Profile::constant(0.0);
    Profile init_n3 = Profile::constant(0.0);

    // [time]
    bool has_time = false;
    double dt = 0.0;
    double t_end = 0.0;
    double dt_min = 0.0;

    // [solver]
    GummelOptions gummel{};
    StationaryOptions stationary{};

    // [output]
    std::string out_dir = "out";
    int record_every = 1;

    std::string base_dir = ".";
};

/// Parse and validate a config file. Throws ConfigError with line/field
/// diagnostics on malformed input or missing sections.
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& base_dir = ".");

/// Derived quantities assembled from a config.
struct ModelSetup {
    Grid1D grid;
    ScaledParams params;
    BoundaryData bc;
    double t_star = 0.0;  // 0 when lambda2/tau were given directly
};

ModelSetup build_setup(const RunConfig& cfg);

/// Initial decomposed state from the [initial] profiles.
SpinState build_initial_state(const RunConfig& cfg, const Grid1D& grid, const Vec3& mu);

}  // namespace spindd
