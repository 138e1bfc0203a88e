#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spindd/grid.hpp"

using namespace spindd;

namespace {

CellField sample_fn(const Grid1D& g, double (*fn)(double)) {
    CellField f(g.n_cells());
    for (int i = 0; i < g.n_cells(); ++i) f[i] = fn(g.cell_center(i));
    f.bc_left = fn(0.0);
    f.bc_right = fn(g.length());
    return f;
}

}  // namespace

TEST_CASE("grid construction and geometry") {
    Grid1D g(4, 2.0);
    CHECK(g.h() == doctest::Approx(0.5));
    CHECK(g.cell_center(0) == doctest::Approx(0.25));
    CHECK(g.cell_center(3) == doctest::Approx(1.75));
    CHECK(g.face_dist(0) == doctest::Approx(0.25));
    CHECK(g.face_dist(2) == doctest::Approx(0.5));
    CHECK(g.face_dist(4) == doctest::Approx(0.25));

    // face weights partition the domain
    double total = 0.0;
    for (int f = 0; f < g.n_faces(); ++f) total += g.face_weight(f);
    CHECK(total == doctest::Approx(2.0).epsilon(1e-14));

    CHECK_THROWS_AS(Grid1D(0, 1.0), ValidationError);
    CHECK_THROWS_AS(Grid1D(10, -1.0), ValidationError);
}

TEST_CASE("l2 norm: zero, constant, linear") {
    Grid1D g(1000, 1.0);
    CHECK(l2_norm(g, CellField(1000, 0.0)) == 0.0);
    CHECK(l2_norm(g, CellField(1000, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));

    // integral of x^2 over [0,1] is 1/3
    auto f = sample_fn(g, [](double x) { return x; });
    CHECK(l2_norm(g, f) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-3));
}

TEST_CASE("h1 seminorm: constant, linear exactness, sine") {
    Grid1D g(1000, 1.0);
    CellField c(1000, 3.5, 3.5, 3.5);
    CHECK(h1_seminorm(g, c) == doctest::Approx(0.0).epsilon(1e-14));

    auto lin = sample_fn(g, [](double x) { return x; });
    CHECK(std::abs(h1_seminorm(g, lin) - 1.0) < 1e-12);

    // integral of (pi cos(pi x))^2 over [0,1] is pi^2/2
    auto s = sample_fn(g, [](double x) { return std::sin(std::numbers::pi * x); });
    CHECK(h1_seminorm(g, s) ==
          doctest::Approx(std::numbers::pi / std::sqrt(2.0)).epsilon(1e-2));
}

TEST_CASE("norm homogeneity") {
    Grid1D g(64, 1.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    CellField f(64);
    for (auto& v : f.values) v = dist(rng);
    f.bc_left = dist(rng);
    f.bc_right = dist(rng);

    for (double c : {0.5, -3.0, 7.25}) {
        CellField cf = f;
        for (auto& v : cf.values) v *= c;
        cf.bc_left *= c;
        cf.bc_right *= c;
        CHECK(l2_norm(g, cf) == doctest::Approx(std::abs(c) * l2_norm(g, f)).epsilon(1e-12));
        CHECK(h1_seminorm(g, cf) ==
              doctest::Approx(std::abs(c) * h1_seminorm(g, f)).epsilon(1e-12));
    }
}

TEST_CASE("refinement consistency: order >= 2 on a smooth function") {
    auto fn = [](double x) { return std::sin(std::numbers::pi * x); };
    const double l2_exact = 1.0 / std::sqrt(2.0);
    const double h1_exact = std::numbers::pi / std::sqrt(2.0);

    double prev_l2 = 0.0, prev_h1 = 0.0;
    for (int k = 0; k < 3; ++k) {
        const int n = 50 << k;
        Grid1D g(n, 1.0);
        CellField f(n);
        for (int i = 0; i < n; ++i) f[i] = fn(g.cell_center(i));
        f.bc_left = fn(0.0);
        f.bc_right = fn(1.0);
        const double e_l2 = std::abs(l2_norm(g, f) - l2_exact);
        const double e_h1 = std::abs(h1_seminorm(g, f) - h1_exact);
        if (k > 0) {
            CHECK(std::log2(prev_l2 / e_l2) > 1.9);
            CHECK(std::log2(prev_h1 / e_h1) > 1.9);
        }
        prev_l2 = e_l2;
        prev_h1 = e_h1;
    }
}
