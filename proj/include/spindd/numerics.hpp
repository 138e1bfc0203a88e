#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "spindd/errors.hpp"

namespace spindd {

/// Solve a tridiagonal system in place (Thomas algorithm, no pivoting;
/// intended for the diagonally dominant systems assembled here).
/// sub[0] and sup[n-1] are unused. rhs is overwritten with the solution.
void thomas_solve(std::span<const double> sub, std::span<const double> diag,
                  std::span<const double> sup, std::span<double> rhs);

/// Dense K x K system solved by LU with partial pivoting. a is row-major
/// and destroyed; b is overwritten with the solution.
template <int K>
void solve_small(std::array<double, K * K>& a, std::array<double, K>& b);

/// Block-tridiagonal solver with dense K x K blocks (block Thomas).
/// Diagonal blocks are general dense; off-diagonal blocks are general
/// dense as well. Storage is row-major per block.
template <int K>
class BlockTridiag {
public:
    explicit BlockTridiag(int n);

    int n() const { return n_; }

    std::array<double, K * K>& diag(int i) { return diag_[static_cast<size_t>(i)]; }
    std::array<double, K * K>& lower(int i) { return lower_[static_cast<size_t>(i)]; }  // couples to i-1
    std::array<double, K * K>& upper(int i) { return upper_[static_cast<size_t>(i)]; }  // couples to i+1
    std::array<double, K>& rhs(int i) { return rhs_[static_cast<size_t>(i)]; }

    void clear();

    /// Factor-and-solve; overwrites rhs blocks with the solution.
    void solve();

private:
    int n_;
    std::vector<std::array<double, K * K>> diag_, lower_, upper_;
    std::vector<std::array<double, K>> rhs_;
};

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least-squares line through (x_i, y_i). r_squared is 1 for an
/// exact fit; a zero-variance y series also reports 1.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

extern template class BlockTridiag<2>;
extern template class BlockTridiag<3>;
extern template class BlockTridiag<4>;

}  // namespace spindd
