#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "test_util.hpp"
#include "tumorfd/initial.hpp"
#include "tumorfd/run.hpp"
#include "tumorfd/snapshot.hpp"

using namespace tumorfd;

TEST_CASE("preset fidelity: the published parameter values, verbatim") {
    SECTION("necrotic_core") {
        const RunConfig c = preset("necrotic_core");
        REQUIRE(c.dim == 2);
        REQUIRE(c.h == 1.0 / 64.0);
        REQUIRE(c.n_cells[0] == 384);
        REQUIRE(c.n_cells[1] == 384);
        REQUIRE(c.origin[0] == -3.0);
        REQUIRE(c.origin[1] == -3.0);
        REQUIRE(c.bc_n == BcKind::neumann);
        REQUIRE(c.model.gamma == 10.0);
        REQUIRE(c.model.mu == 1.0);
        REQUIRE(c.model.alpha == 1.0);
        REQUIRE(c.model.beta == 1.0);
        REQUIRE(c.model.theta == 1.0);
        REQUIRE(c.model.k1 == 8.0);
        REQUIRE(c.model.k2 == 8.0);
        REQUIRE(c.model.c_crit == 0.25);
        REQUIRE(c.model.lambda_c == 20.0);
        REQUIRE(c.model.c_supp == 1.0);
        REQUIRE(c.c_b.kind == BoundarySpec::Kind::constant);
        REQUIRE(c.c_b.value == 1.0);
        REQUIRE(c.c0.kind == ProfileSpec::Kind::constant);
        REQUIRE(c.c0.value == 1.0);
        REQUIRE_FALSE(c.model.drug_enabled);
        REQUIRE(c.n0.bumps.size() == 2);
        REQUIRE(c.n0.bumps[0].amp == 0.5);
        REQUIRE(c.n0.bumps[0].center[0] == 0.7);
        REQUIRE(c.n0.bumps[0].center[1] == 0.0);
        REQUIRE(c.n0.bumps[0].width == 10.0);
        REQUIRE(c.n0.bumps[1].amp == 0.5);
        REQUIRE(c.n0.bumps[1].center[0] == -0.6);
        REQUIRE(c.n0.bumps[1].center[1] == 0.2);
        REQUIRE(c.n0.bumps[1].width == 20.0);
    }
    SECTION("drug") {
        const RunConfig c = preset("drug");
        REQUIRE(c.model.drug_enabled);
        REQUIRE(c.model.lambda_q == 15.0);
        REQUIRE(c.model.k3 == 4.0);
        REQUIRE(c.model.q_crit == 0.0);
        REQUIRE(c.model.q_supp == 1.0);
        REQUIRE(c.q0.kind == ProfileSpec::Kind::constant);
        REQUIRE(c.q0.value == 1.0);
        REQUIRE(c.q_b.value == 1.0);
        REQUIRE(c.model.k1 == 8.0); // rest carried over
        REQUIRE(c.model.c_crit == 0.25);
    }
    SECTION("shape_irregular") {
        const RunConfig c = preset("shape_irregular");
        REQUIRE(c.h == 1.0 / 64.0);
        REQUIRE(c.n_cells[0] == 640);
        REQUIRE(c.origin[0] == -5.0);
        REQUIRE(c.model.gamma == 30.0);
        REQUIRE(c.model.mu == 0.1);
        REQUIRE(c.model.k1 == 200.0);
        REQUIRE(c.model.k2 == 200.0);
        REQUIRE(c.model.c_crit == 0.5);
        REQUIRE(c.model.lambda_c == 20.0);
        REQUIRE(c.model.r_c == 0.0001);
        REQUIRE(c.model.nu_c == 5.0);
        REQUIRE(c.n0.bumps.size() == 1);
        REQUIRE(c.n0.bumps[0].center[0] == 0.0);
    }
    SECTION("inhom_boundary") {
        const RunConfig c = preset("inhom_boundary");
        REQUIRE(c.c0.kind == ProfileSpec::Kind::sin_y);
        REQUIRE(c.c0.offset == 0.8);
        REQUIRE(c.c0.amp == 0.5);
        REQUIRE(c.c0.freq == 0.2);
        REQUIRE(c.c_b.kind == BoundarySpec::Kind::trace_of_initial);
        REQUIRE(c.model.gamma == 30.0); // rest as in shape_irregular
        REQUIRE(c.model.c_inf >= 1.3);  // sup c0
    }
    SECTION("unknown preset") { REQUIRE_THROWS_AS(preset("nope"), ConfigError); }
}

TEST_CASE("config round-trips through serialize/parse") {
    for (const char* name : {"necrotic_core", "drug", "shape_irregular", "inhom_boundary"}) {
        const std::string text = serialize_config(preset(name));
        const RunConfig back = parse_config(text);
        REQUIRE(serialize_config(back) == text);
    }
}

TEST_CASE("parse errors carry line information") {
    const std::string base = serialize_config(preset("necrotic_core"));
    SECTION("gamma below 2 is rejected") {
        std::string text = base;
        const auto pos = text.find("model.gamma = 10");
        text.replace(pos, 16, "model.gamma = -1");
        REQUIRE_THROWS_WITH(parse_config(text), Catch::Matchers::ContainsSubstring("gamma"));
    }
    SECTION("duplicate key names both lines") {
        std::string text = base + "model.mu = 2\n";
        try {
            parse_config(text);
            FAIL("expected a duplicate-key error");
        } catch (const ConfigError& e) {
            const std::string msg = e.what();
            REQUIRE(msg.find("duplicate key") != std::string::npos);
            REQUIRE(msg.find("model.mu") != std::string::npos);
            REQUIRE(msg.find("first set on line") != std::string::npos);
        }
    }
    SECTION("unknown keys are hard errors") {
        REQUIRE_THROWS_WITH(parse_config(base + "model.gamm = 3\n"),
                            Catch::Matchers::ContainsSubstring("unknown key"));
    }
    SECTION("missing required key") {
        std::string text = base;
        const auto pos = text.find("solver.tol");
        text.erase(pos, text.find('\n', pos) - pos + 1);
        REQUIRE_THROWS_WITH(parse_config(text), Catch::Matchers::ContainsSubstring("solver.tol"));
    }
    SECTION("type mismatch points at the line") {
        std::string text = base;
        const auto pos = text.find("model.mu = 1");
        text.replace(pos, 12, "model.mu = abc");
        REQUIRE_THROWS_WITH(parse_config(text), Catch::Matchers::ContainsSubstring("line"));
    }
}

TEST_CASE("initial projection") {
    SECTION("constants are averaged exactly") {
        RunConfig cfg = preset("necrotic_core");
        rescale_grid(cfg, 1.0 / 4.0);
        cfg.n0 = ProfileSpec{};
        cfg.n0.kind = ProfileSpec::Kind::constant;
        cfg.n0.value = 0.3;
        const Grid g = cfg.make_grid();
        const SimState st = init_fields(cfg, g);
        for_each_interior(g, [&](int, int, int, std::ptrdiff_t idx) {
            REQUIRE(st.n[idx] == Catch::Approx(0.3).epsilon(1e-15));
        });
    }
    SECTION("gaussian bump is symmetric under its mirror axis") {
        RunConfig cfg = preset("necrotic_core");
        rescale_grid(cfg, 1.0 / 8.0);
        cfg.n0.bumps.resize(1); // keep only the bump at (0.7, 0)
        const Grid g = cfg.make_grid();
        const Field n = project_profile(g, cfg.n0, FieldTag::n);
        const int N = g.n_cells[1];
        for (int j = 1; j <= N / 2; ++j)
            for (int i = 1; i <= g.n_cells[0]; ++i)
                REQUIRE(n.at(i, j) == Catch::Approx(n.at(i, N + 1 - j)).margin(1e-14));
    }
    SECTION("quadrature refinement: the integral settles at second order or better") {
        RunConfig cfg = preset("necrotic_core");
        std::array<double, 3> mass{};
        int k = 0;
        for (double h : {1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0}) {
            RunConfig c = cfg;
            rescale_grid(c, h);
            const Grid g = c.make_grid();
            const Field n = project_profile(g, c.n0, FieldTag::n);
            mass[static_cast<size_t>(k++)] = sum_interior(n) * g.cell_volume();
        }
        const double e1 = std::abs(mass[0] - mass[2]);
        const double e2 = std::abs(mass[1] - mass[2]);
        REQUIRE(e2 <= e1 / 4.0 + 1e-15);
    }
    SECTION("initial data violating the pressure constraint is rejected") {
        RunConfig cfg = preset("necrotic_core");
        rescale_grid(cfg, 1.0 / 4.0);
        cfg.n0 = ProfileSpec{};
        cfg.n0.kind = ProfileSpec::Kind::constant;
        cfg.n0.value = 1.2; // n_inf = 1
        const Grid g = cfg.make_grid();
        REQUIRE_THROWS_AS(init_fields(cfg, g), ConfigError);
    }
    SECTION("trace-of-initial boundary equals the profile at ghost centers") {
        RunConfig cfg = preset("inhom_boundary");
        rescale_grid(cfg, 1.0 / 4.0);
        const Grid g = cfg.make_grid();
        const BoundaryData bd = boundary_data_from(cfg);
        const auto x = g.cell_center(0, 3, 0);
        REQUIRE(bd.sample(FieldTag::c, 0.0, x) == cfg.c0.eval(x, 2));
    }
}

TEST_CASE("snapshot write/read round-trip is bit-identical") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "tumorfd_snap_test";
    fs::create_directories(dir);
    Grid g = make_grid(2, {7, 5, 1}, 0.37, {-1.1, 2.2, 0});
    Field f(g, FieldTag::n);
    testutil::Rng rng(71);
    for_each_interior(g, [&](int, int, int, std::ptrdiff_t idx) { f[idx] = rng.uniform(-10, 10) / 3.0; });

    const std::string path = (dir / "n_test.snap").string();
    write_snapshot(path, f, 1.234567890123456789, 42);
    const SnapshotData s = read_snapshot(path);
    REQUIRE(s.field == "n");
    REQUIRE(s.step == 42);
    REQUIRE(s.dim == 2);
    REQUIRE(s.n_cells[0] == 7);
    REQUIRE(s.n_cells[1] == 5);
    REQUIRE(s.h == 0.37);
    REQUIRE(s.origin[0] == -1.1);
    const Field f2 = to_field(s, g, FieldTag::n);
    for_each_interior(g, [&](int, int, int, std::ptrdiff_t idx) { REQUIRE(f2[idx] == f[idx]); });

    SECTION("grid mismatch is an i/o error") {
        Grid g2 = make_grid(2, {5, 5, 1}, 0.37, {0, 0, 0});
        REQUIRE_THROWS_AS(to_field(s, g2, FieldTag::n), IoError);
    }
    fs::remove_all(dir);
}

TEST_CASE("run: t_end = 0 emits exactly the initial snapshot set") {
    namespace fs = std::filesystem;
    RunConfig cfg = preset("necrotic_core");
    rescale_grid(cfg, 1.0 / 4.0);
    cfg.t_end = 0.0;
    cfg.out_dir = (fs::temp_directory_path() / "tumorfd_t0_test").string();
    const RunResult res = run(cfg);
    REQUIRE(res.steps == 0);
    REQUIRE(fs::exists(fs::path(cfg.out_dir) / "n_0000.snap"));
    REQUIRE_FALSE(fs::exists(fs::path(cfg.out_dir) / "n_0001.snap"));
    const auto manifest = nlohmann::json::parse(std::ifstream(fs::path(cfg.out_dir) / "manifest.json"));
    REQUIRE(manifest["status"] == "ok");
    REQUIRE(manifest["dt_history"].empty());
    fs::remove_all(cfg.out_dir);
}

TEST_CASE("verify: manufactured battery passes on a desk-scale grid") {
    RunConfig cfg = preset("necrotic_core");
    rescale_grid(cfg, 1.0 / 8.0);
    const VerifyReport rep = verify(cfg, "manufactured");
    for (const auto& chk : rep.checks) {
        INFO(chk.name << ": " << chk.detail);
        REQUIRE(chk.pass);
    }
    REQUIRE_THROWS_AS(verify(cfg, "bogus"), ConfigError);
}
