#include "spindd/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "spindd/errors.hpp"

namespace spindd {

namespace {

std::vector<std::string> tokenize(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> toks;
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

double to_number(const std::string& s, const std::string& context) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("profile " + context + ": expected a number, got '" + s + "'");
    }
}

}  // namespace

Profile Profile::constant(double v) {
    Profile p;
    p.kind_ = Kind::constant;
    p.par_ = {v};
    return p;
}

Profile Profile::parse(const std::string& spec, const std::string& base_dir) {
    const auto toks = tokenize(spec);
    if (toks.empty()) throw ConfigError("profile: empty specification");

    Profile p;
    const std::string& name = toks[0];
    auto need = [&](size_t n) {
        if (toks.size() != n + 1)
            throw ConfigError("profile '" + name + "': expected " + std::to_string(n) +
                              " parameters, got " + std::to_string(toks.size() - 1));
    };

    if (name == "constant") {
        // Bare numbers are shorthand for a constant profile.
        need(1);
        p.kind_ = Kind::constant;
        p.par_ = {to_number(toks[1], name)};
    } else if (name == "linear") {
        need(2);
        p.kind_ = Kind::linear;
        p.par_ = {to_number(toks[1], name), to_number(toks[2], name)};
    } else if (name == "gaussian_bump") {
        need(4);
        p.kind_ = Kind::gaussian_bump;
        p.par_ = {to_number(toks[1], name), to_number(toks[2], name), to_number(toks[3], name),
                  to_number(toks[4], name)};
        if (!(p.par_[3] > 0.0)) throw ConfigError("profile gaussian_bump: width must be > 0");
    } else if (name == "sine") {
        need(3);
        p.kind_ = Kind::sine;
        p.par_ = {to_number(toks[1], name), to_number(toks[2], name), to_number(toks[3], name)};
    } else if (name == "table") {
        need(1);
        p.kind_ = Kind::table;
        const std::string path = base_dir.empty() ? toks[1] : base_dir + "/" + toks[1];
        std::ifstream in(path);
        if (!in) throw ConfigError("profile table: cannot open '" + path + "'");
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream row(line);
            double x, y;
            if (row >> x >> y) {
                p.xs_.push_back(x);
                p.ys_.push_back(y);
            }
        }
        if (p.xs_.size() < 2) throw ConfigError("profile table: need at least 2 rows in '" + path + "'");
        for (size_t i = 1; i < p.xs_.size(); ++i)
            if (!(p.xs_[i] > p.xs_[i - 1]))
                throw ConfigError("profile table: abscissae must be strictly increasing");
    } else if (toks.size() == 1) {
        p.kind_ = Kind::constant;
        p.par_ = {to_number(toks[0], "constant")};
    } else {
        throw ConfigError("profile: unknown family '" + name + "'");
    }
    return p;
}

double Profile::eval(double x, double length) const {
    switch (kind_) {
        case Kind::constant:
            return par_[0];
        case Kind::linear:
            return par_[0] + (par_[1] - par_[0]) * x / length;
        case Kind::gaussian_bump: {
            const double r = (x - par_[2]) / par_[3];
            return par_[0] + par_[1] * std::exp(-r * r);
        }
        case Kind::sine:
            return par_[0] + par_[1] * std::sin(par_[2] * std::numbers::pi * x / length);
        case Kind::table: {
            if (x <= xs_.front()) return ys_.front();
            if (x >= xs_.back()) return ys_.back();
            const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
            const size_t i = static_cast<size_t>(it - xs_.begin());
            const double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
            return ys_[i - 1] + t * (ys_[i] - ys_[i - 1]);
        }
    }
    return 0.0;
}

CellField sample(const Grid1D& grid, const Profile& profile) {
    CellField f(grid.n_cells());
    for (int i = 0; i < grid.n_cells(); ++i) f[i] = profile.eval(grid.cell_center(i), grid.length());
    f.bc_left = profile.eval(0.0, grid.length());
    f.bc_right = profile.eval(grid.length(), grid.length());
    return f;
}

}  // namespace spindd
