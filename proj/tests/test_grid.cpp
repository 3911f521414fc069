#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"
#include "tumorfd/grid.hpp"

using namespace tumorfd;

TEST_CASE("cell centers follow x_i = origin + (i - 1/2) h") {
    Grid g = make_grid(1, {4, 1, 1}, 0.25, {0.0, 0.0, 0.0});
    REQUIRE(g.center(0, 1) == Catch::Approx(0.125).margin(0));
    REQUIRE(g.center(0, 2) == Catch::Approx(0.375).margin(0));
    REQUIRE(g.center(0, 3) == Catch::Approx(0.625).margin(0));
    REQUIRE(g.center(0, 4) == Catch::Approx(0.875).margin(0));
}

TEST_CASE("paper-scale grid covers [-3,3]^2") {
    Grid g = make_grid(2, {384, 384, 1}, 1.0 / 64.0, {-3.0, -3.0, 0.0});
    REQUIRE(g.interior_count() == 384 * 384);
    REQUIRE(g.center(0, 1) - 0.5 * g.h == Catch::Approx(-3.0).margin(1e-15));
    REQUIRE(g.center(1, 384) + 0.5 * g.h == Catch::Approx(3.0).margin(1e-15));
}

TEST_CASE("2x2 grid carries a 12-cell ghost ring") {
    Grid g = make_grid(2, {2, 2, 1}, 0.5, {0.0, 0.0, 0.0});
    REQUIRE(g.interior_count() == 4);
    // enumeration: every allocated cell that is not interior
    long ghosts = 0;
    for (int j = 0; j < g.alloc[1]; ++j)
        for (int i = 0; i < g.alloc[0]; ++i)
            if (i < 1 || i > 2 || j < 1 || j > 2) ++ghosts;
    REQUIRE(ghosts == 12);
    REQUIRE(g.total == 16);
}

TEST_CASE("malformed grids are rejected") {
    REQUIRE_THROWS_AS(make_grid(2, {1, 4, 1}, 0.1, {0, 0, 0}), ConfigError);
    REQUIRE_THROWS_AS(make_grid(2, {4, 4, 1}, 0.0, {0, 0, 0}), ConfigError);
    REQUIRE_THROWS_AS(make_grid(2, {4, 4, 1}, -0.5, {0, 0, 0}), ConfigError);
    REQUIRE_THROWS_AS(make_grid(4, {4, 4, 4}, 0.5, {0, 0, 0}), ConfigError);
}

TEST_CASE("difference operators") {
    SECTION("constant field differences vanish") {
        Grid g = make_grid(2, {6, 6, 1}, 0.3, {0, 0, 0});
        Field f(g, FieldTag::n, 4.2);
        fill_ghosts(f, BcKind::neumann);
        for (int a = 0; a < 2; ++a) {
            Field d = diff_forward(f, a);
            for_each_interior(g, [&](int, int, int, std::ptrdiff_t idx) { REQUIRE(d[idx] == 0.0); });
        }
    }
    SECTION("hand values: 1D, h = 0.5, f = (1, 2, 4)") {
        Grid g = make_grid(1, {3, 1, 1}, 0.5, {0, 0, 0});
        Field f(g, FieldTag::n);
        f.at(1) = 1.0;
        f.at(2) = 2.0;
        f.at(3) = 4.0;
        fill_ghosts(f, BcKind::neumann);
        Field d = diff_forward(f, 0);
        REQUIRE(d.at(1) == Catch::Approx(2.0).margin(0));
        REQUIRE(d.at(2) == Catch::Approx(4.0).margin(0));
    }
    SECTION("backward difference is the shifted forward difference, bitwise") {
        Grid g = make_grid(2, {8, 8, 1}, 0.125, {0, 0, 0});
        Field f(g, FieldTag::n);
        testutil::Rng rng(11);
        for (auto& v : f.v) v = rng.uniform(-1, 1);
        for (int a = 0; a < 2; ++a) {
            Field fwd = diff_forward(f, a);
            Field bwd = diff_backward(f, a);
            const std::ptrdiff_t s = g.stride[static_cast<size_t>(a)];
            for_each_interior(g, [&](int i, int j, int, std::ptrdiff_t idx) {
                const bool inner = (a == 0 ? i : j) >= 2;
                if (inner) REQUIRE(bwd[idx] == fwd[idx - s]);
            });
        }
    }
    SECTION("mixed second differences commute bitwise away from the boundary") {
        Grid g = make_grid(1, {10, 1, 1}, 0.2, {0, 0, 0});
        Field f(g, FieldTag::n);
        testutil::Rng rng(12);
        for (auto& v : f.v) v = rng.uniform(-2, 2);
        Field a = diff_backward(diff_forward(f, 0), 0);
        Field b = diff_forward(diff_backward(f, 0), 0);
        for (int i = 2; i <= 9; ++i) REQUIRE(a.at(i) == b.at(i));
    }
}

TEST_CASE("discrete Laplacian") {
    SECTION("constants are harmonic") {
        Grid g = make_grid(2, {5, 5, 1}, 0.2, {0, 0, 0});
        Field f(g, FieldTag::n, -1.25);
        fill_ghosts(f, BcKind::periodic);
        Field lap = laplace_h(f);
        for_each_interior(g, [&](int, int, int, std::ptrdiff_t idx) { REQUIRE(lap[idx] == 0.0); });
    }
    SECTION("hand stencil: 1D, h = 1, f = (0, 1, 0)") {
        Grid g = make_grid(1, {3, 1, 1}, 1.0, {0, 0, 0});
        Field f(g, FieldTag::n);
        f.at(2) = 1.0;
        fill_ghosts(f, BcKind::neumann);
        REQUIRE(laplace_h(f).at(2) == Catch::Approx(-2.0).margin(0));
    }
    SECTION("exact for quadratics on interior cells") {
        Grid g = make_grid(1, {16, 1, 1}, 0.25, {-2.0, 0, 0});
        Field f(g, FieldTag::n);
        for (int i = 0; i <= 17; ++i) {
            const double x = g.center(0, i);
            f.at(i) = x * x;
        }
        Field lap = laplace_h(f);
        for (int i = 2; i <= 15; ++i) REQUIRE(lap.at(i) == Catch::Approx(2.0).margin(1e-12));
    }
    SECTION("linear profile under Neumann mirror ghosts bends only at the boundary") {
        Grid g = make_grid(1, {8, 1, 1}, 0.5, {0, 0, 0});
        Field f(g, FieldTag::n);
        for (int i = 1; i <= 8; ++i) f.at(i) = 3.0 * g.center(0, i);
        fill_ghosts(f, BcKind::neumann);
        Field lap = laplace_h(f);
        REQUIRE(lap.at(1) != 0.0);
        REQUIRE(lap.at(8) != 0.0);
        for (int i = 2; i <= 7; ++i) REQUIRE(lap.at(i) == Catch::Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("ghost filling") {
    SECTION("neumann mirrors the adjacent interior value") {
        Grid g = make_grid(1, {4, 1, 1}, 0.5, {0, 0, 0});
        Field f(g, FieldTag::n);
        f.at(1) = 3.7;
        f.at(4) = -1.5;
        fill_ghosts(f, BcKind::neumann);
        REQUIRE(f.at(0) == 3.7);
        REQUIRE(f.at(5) == -1.5);
    }
    SECTION("periodic wraps to the opposite face") {
        Grid g = make_grid(1, {3, 1, 1}, 0.5, {0, 0, 0}, BcKind::periodic);
        Field f(g, FieldTag::n);
        f.at(1) = 1.0;
        f.at(2) = 2.0;
        f.at(3) = 3.0;
        fill_ghosts(f, BcKind::periodic);
        REQUIRE(f.at(0) == 3.0);
        REQUIRE(f.at(4) == 1.0);
    }
    SECTION("dirichlet samples the boundary function at ghost centers") {
        Grid g = make_grid(2, {4, 4, 1}, 0.25, {0, 0, 0});
        Field f(g, FieldTag::c);
        BoundaryData bd;
        bd.c_inf = 2.0;
        bd.c_b = [](double, const std::array<double, 3>&) { return 1.0; };
        fill_ghosts(f, BcKind::dirichlet, &bd, 0.0);
        REQUIRE(f.at(0, 2) == 1.0);
        REQUIRE(f.at(5, 3) == 1.0);
        REQUIRE(f.at(2, 0) == 1.0);
        REQUIRE(f.at(3, 5) == 1.0);
    }
    SECTION("dirichlet without boundary data is a configuration error") {
        Grid g = make_grid(1, {4, 1, 1}, 0.5, {0, 0, 0});
        Field f(g, FieldTag::c);
        REQUIRE_THROWS_AS(fill_ghosts(f, BcKind::dirichlet), ConfigError);
    }
    SECTION("boundary samples outside [0, bound] are rejected") {
        Grid g = make_grid(1, {4, 1, 1}, 0.5, {0, 0, 0});
        Field f(g, FieldTag::c);
        BoundaryData bd;
        bd.c_inf = 0.5;
        bd.c_b = [](double, const std::array<double, 3>&) { return 0.9; };
        REQUIRE_THROWS_AS(fill_ghosts(f, BcKind::dirichlet, &bd, 0.0), ConfigError);
    }
    SECTION("idempotent for every kind") {
        Grid g = make_grid(2, {5, 4, 1}, 0.25, {0, 0, 0});
        testutil::Rng rng(5);
        for (BcKind kind : {BcKind::neumann, BcKind::periodic, BcKind::dirichlet}) {
            Field f(g, FieldTag::c);
            for_each_interior(g, [&](int, int, int, std::ptrdiff_t idx) { f[idx] = rng.uniform(); });
            BoundaryData bd;
            bd.c_inf = 10.0;
            bd.c_b = [](double, const std::array<double, 3>& x) { return 1.0 + 0.1 * x[0] * x[0]; };
            fill_ghosts(f, kind, &bd, 0.25);
            const std::vector<double> once = f.v;
            fill_ghosts(f, kind, &bd, 0.25);
            REQUIRE(f.v == once);
        }
    }
}
