#pragma once

#include <string>
#include <vector>

#include "spindd/grid.hpp"

namespace spindd {

/// Closed family of 1D data profiles used for doping, initial data and
/// boundary specifications:
///   constant v
///   linear a b                     a at x = 0, b at x = L
///   gaussian_bump base amp c w     base + amp exp(-((x-c)/w)^2)
///   sine base amp k                base + amp sin(k pi x / L)
///   table <csv-path>               two-column x,value; linear interpolation
class Profile {
public:
    enum class Kind { constant, linear, gaussian_bump, sine, table };

    static Profile constant(double v);
    /// Parse "name p1 p2 ..." (whitespace separated). Table paths are
    /// resolved relative to base_dir.
    static Profile parse(const std::string& spec, const std::string& base_dir = ".");

    double eval(double x, double length) const;
    Kind kind() const { return kind_; }

private:
    Kind kind_ = Kind::constant;
    std::vector<double> par_;
    std::vector<double> xs_, ys_;  // table nodes
};

/// Sample a profile at the cell centers; traces take the values at 0 and L.
CellField sample(const Grid1D& grid, const Profile& profile);

}  // namespace spindd
