#pragma once

#include <vector>

#include "spindd/errors.hpp"

namespace spindd {

/// Uniform cell-centered 1D mesh on (0, length). Cell i has center
/// (i + 1/2)*h. Faces are indexed 0..n_cells; faces 0 and n_cells lie on
/// the boundary, where Dirichlet traces sit directly on the face, so the
/// center-to-trace distance is h/2 instead of h.
class Grid1D {
public:
    Grid1D(int n_cells, double length);

    int n_cells() const { return n_cells_; }
    int n_faces() const { return n_cells_ + 1; }
    double length() const { return length_; }
    double h() const { return h_; }

    double cell_center(int i) const { return (i + 0.5) * h_; }

    bool is_boundary_face(int f) const { return f == 0 || f == n_cells_; }

    /// Distance between the two values a face difference is taken over.
    double face_dist(int f) const { return is_boundary_face(f) ? 0.5 * h_ : h_; }

    /// Quadrature weight of a face; weights sum to the domain length.
    double face_weight(int f) const { return face_dist(f); }

private:
    int n_cells_;
    double length_;
    double h_;
};

/// One real value per cell plus the two Dirichlet boundary traces.
struct CellField {
    std::vector<double> values;
    double bc_left = 0.0;
    double bc_right = 0.0;

    CellField() = default;
    explicit CellField(int n, double fill = 0.0, double bcl = 0.0, double bcr = 0.0)
        : values(static_cast<size_t>(n), fill), bc_left(bcl), bc_right(bcr) {}

    int size() const { return static_cast<int>(values.size()); }
    double& operator[](int i) { return values[static_cast<size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<size_t>(i)]; }

    /// Value on the left/right side of face f (trace at boundary faces).
    double left_of_face(int f) const { return f == 0 ? bc_left : values[static_cast<size_t>(f - 1)]; }
    double right_of_face(int f) const {
        return f == size() ? bc_right : values[static_cast<size_t>(f)];
    }
};

/// sqrt(h * sum f_i^2), the discrete L2 norm of a cell field.
double l2_norm(const Grid1D& grid, const CellField& f);

/// Discrete H1 seminorm: face-difference quotients against the traces at
/// the boundary faces, quadrature weights summing to the domain length.
/// Exact for linear fields with matching traces.
double h1_seminorm(const Grid1D& grid, const CellField& f);

/// Full H1 norm, sqrt(l2^2 + seminorm^2).
double h1_norm(const Grid1D& grid, const CellField& f);

}  // namespace spindd
