#include "spindd/grid.hpp"

#include <cmath>
#include <string>

namespace spindd {

Grid1D::Grid1D(int n_cells, double length) : n_cells_(n_cells), length_(length) {
    if (n_cells < 1)
        throw ValidationError("Grid1D: n_cells must be >= 1, got " + std::to_string(n_cells));
    if (!(length > 0.0))
        throw ValidationError("Grid1D: length must be > 0, got " + std::to_string(length));
    h_ = length_ / n_cells_;
}

namespace {

void check_size(const Grid1D& grid, const CellField& f, const char* op) {
    if (f.size() != grid.n_cells())
        throw ValidationError(std::string(op) + ": field has " + std::to_string(f.size()) +
                              " cells, grid has " + std::to_string(grid.n_cells()));
}

}  // namespace

double l2_norm(const Grid1D& grid, const CellField& f) {
    check_size(grid, f, "l2_norm");
    double s = 0.0;
    for (double v : f.values) s += v * v;
    return std::sqrt(grid.h() * s);
}

double h1_seminorm(const Grid1D& grid, const CellField& f) {
    check_size(grid, f, "h1_seminorm");
    double s = 0.0;
    for (int face = 0; face < grid.n_faces(); ++face) {
        const double d = grid.face_dist(face);
        const double diff = f.right_of_face(face) - f.left_of_face(face);
        s += grid.face_weight(face) * (diff / d) * (diff / d);
    }
    return std::sqrt(s);
}

double h1_norm(const Grid1D& grid, const CellField& f) {
    const double a = l2_norm(grid, f);
    const double b = h1_seminorm(grid, f);
    return std::sqrt(a * a + b * b);
}

}  // namespace spindd
