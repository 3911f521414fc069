// Run orchestration: the macro-step loop with snapshot/diagnostics output
// and a JSON manifest, plus the verification batteries behind the `verify`
// CLI subcommand and the CFL report.
#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tumorfd/config.hpp"
#include "tumorfd/diagnostics.hpp"
#include "tumorfd/initial.hpp"
#include "tumorfd/snapshot.hpp"
#include "tumorfd/stepper.hpp"

namespace tumorfd {

namespace detail {

// Deterministic generator for verification randomness (independent of the
// standard library's distribution implementations).
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

} // namespace detail

struct RunResult {
    long steps = 0;
    double t_final = 0.0;
    double wall_seconds = 0.0;
    int w_bound_violations = 0;
    std::string manifest_path;
};

// Executes the configured simulation: snapshots at t = 0, every
// `snapshot_every` time units, and at t_end; one diagnostics CSV row per
// macro step; a manifest with the resolved config, the chosen dt history
// and solver iteration counts.  Numerical hard errors propagate after the
// partial outputs and an error-marked manifest are flushed.
inline RunResult run(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    const auto t0 = std::chrono::steady_clock::now();

    const Grid grid = cfg.make_grid();
    const BoundaryData bd = boundary_data_from(cfg);
    const SchemeBounds bounds = make_scheme_bounds(cfg.model, grid.h, cfg.kappa);
    MacroControls ctl;
    ctl.kappa = cfg.kappa;
    ctl.tol = cfg.tol;
    ctl.max_iter = cfg.max_iter;
    ctl.strict = cfg.strict;
    ctl.boundary = &bd;

    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + cfg.out_dir + "': " + ec.message());

    {
        std::ofstream rc(fs::path(cfg.out_dir) / "config.resolved");
        if (!rc) throw IoError("cannot write resolved config");
        rc << serialize_config(cfg);
    }

    SimState st = init_fields(cfg, grid);

    std::ofstream csv(fs::path(cfg.out_dir) / "diagnostics.csv", std::ios::binary);
    if (!csv) throw IoError("cannot open diagnostics.csv for writing");
    csv << diagnostics_csv_header() << "\n";

    const double probe_radius = cfg.probe_radius > 0.0
                                    ? cfg.probe_radius
                                    : 1e300; // whole-domain probe when unset
    EntropyAccumulators acc;

    int snap_index = 0;
    long last_snap_step = -1;
    nlohmann::json snapshots = nlohmann::json::array();
    auto write_set = [&](const SimState& s) {
        char suffix[32];
        std::snprintf(suffix, sizeof(suffix), "_%04d.snap", snap_index);
        for (const Field* f : {&s.n, &s.W, &s.c, &s.q})
            write_snapshot((fs::path(cfg.out_dir) / (std::string(to_string(f->tag)) + suffix)).string(),
                           *f, s.t, s.step, cfg.format_version);
        snapshots.push_back({{"index", snap_index}, {"t", s.t}, {"step", s.step}});
        ++snap_index;
        last_snap_step = s.step;
    };

    auto record = [&](const DiagnosticsRecord& r) { csv << diagnostics_csv_row(r) << "\n"; };

    auto initial_record = [&]() {
        DiagnosticsRecord r;
        r.t = st.t;
        r.step = st.step;
        r.n_min = min_interior(st.n);
        r.n_max = max_interior(st.n);
        r.c_min = min_interior(st.c);
        r.c_max = max_interior(st.c);
        r.q_min = min_interior(st.q);
        r.q_max = max_interior(st.q);
        r.w_min = min_interior(st.W);
        r.w_max = max_interior(st.W);
        r.mass_n = sum_interior(st.n) * grid.cell_volume();
        r.entropy_n2 = entropy_n2(st.n);
        const CoreMetrics cm = core_metrics(st.n, st.c, cfg.probe_center, probe_radius, cfg.model.c_crit);
        r.core_min_n = cm.core_min_n;
        r.core_area_c = cm.core_area_c;
        return r;
    };

    RunResult result;
    nlohmann::json dt_history = nlohmann::json::array();
    nlohmann::json solver_iters = nlohmann::json::array();
    std::string error_msg;

    try {
        record(initial_record());
        write_set(st);

        double next_mark = cfg.snapshot_every;
        const double t_eps = 1e-12 * std::max(1.0, cfg.t_end);
        while (cfg.t_end - st.t > t_eps) {
            ctl.dt_limit = cfg.t_end - st.t;

            Field n_old = st.n;
            fill_ghosts(n_old, grid.bc_n);
            const Field W_old = st.W; // ghosts valid from the last solve
            Field phi_old(grid, FieldTag::p);
            for_each_interior(grid, [&](int, int, int, std::ptrdiff_t idx) {
                phi_old[idx] = Phi(pressure(st.n[idx], cfg.model), st.c[idx], st.q[idx], cfg.model);
            });

            const StepReport rep = macro_step(st, cfg.model, bounds, ctl);
            if (!rep.w_bounds.pass) ++result.w_bound_violations;

            acc.space += entropy_space_increment(n_old, W_old, rep.dt);
            acc.time += entropy_time_increment(n_old, st.n, rep.dt);

            DiagnosticsRecord r;
            r.t = st.t;
            r.step = st.step;
            r.n_min = rep.n_min;
            r.n_max = rep.n_max;
            r.c_min = rep.c_min;
            r.c_max = rep.c_max;
            r.q_min = rep.q_min;
            r.q_max = rep.q_max;
            r.w_min = rep.w_bounds.w_min;
            r.w_max = rep.w_bounds.w_max;
            r.mass_n = sum_interior(st.n) * grid.cell_volume();
            r.mass_residual = mass_budget(n_old, st.n, phi_old, rep.dt, grid.h, grid.dim);
            r.entropy_n2 = entropy_n2(st.n);
            r.dissipation_space = acc.space;
            r.dissipation_time = acc.time;
            const CoreMetrics cm =
                core_metrics(st.n, st.c, cfg.probe_center, probe_radius, cfg.model.c_crit);
            r.core_min_n = cm.core_min_n;
            r.core_area_c = cm.core_area_c;
            record(r);

            dt_history.push_back(rep.dt);
            solver_iters.push_back(rep.solve_iterations);

            if (cfg.snapshot_every > 0.0 && st.t + t_eps >= next_mark &&
                cfg.t_end - st.t > t_eps) {
                write_set(st);
                while (next_mark <= st.t + t_eps) next_mark += cfg.snapshot_every;
            }
        }
        if (last_snap_step != st.step) write_set(st);
    } catch (const std::exception& e) {
        error_msg = e.what();
    }

    csv.flush();
    result.steps = st.step;
    result.t_final = st.t;
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    nlohmann::json manifest;
    manifest["status"] = error_msg.empty() ? "ok" : "error";
    if (!error_msg.empty()) manifest["error"] = error_msg;
    manifest["config"] = serialize_config(cfg);
    manifest["steps"] = result.steps;
    manifest["t_final"] = result.t_final;
    manifest["wall_time_seconds"] = result.wall_seconds;
    manifest["dt_history"] = dt_history;
    manifest["solver_iterations"] = solver_iters;
    manifest["w_bound_violations"] = result.w_bound_violations;
    manifest["snapshots"] = snapshots;
    manifest["scheme_bounds"] = {{"S", bounds.S},
                                 {"phi_inf", bounds.phi_inf},
                                 {"dt_cap", bounds.dt_cap},
                                 {"n_bar", bounds.n_bar}};
    const std::string mpath = (std::filesystem::path(cfg.out_dir) / "manifest.json").string();
    {
        std::ofstream mf(mpath, std::ios::binary);
        if (!mf) throw IoError("cannot write manifest");
        mf << manifest.dump(2) << "\n";
    }
    result.manifest_path = mpath;

    if (!error_msg.empty()) throw NumericalError(error_msg);
    return result;
}

struct VerifyCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyReport {
    std::string mode;
    std::vector<VerifyCheck> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : checks)
            arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        return {{"mode", mode}, {"pass", pass()}, {"checks", arr}};
    }
};

namespace detail {

// Random smooth field: a few low-order trigonometric modes.
inline Field random_smooth_field(const Grid& g, Rng& rng) {
    Field f(g, FieldTag::W);
    struct Mode {
        double a, kx, ky, kz, px, py, pz;
    };
    std::vector<Mode> modes;
    for (int m = 0; m < 4; ++m)
        modes.push_back({rng.uniform(-1.0, 1.0), std::floor(rng.uniform(0.0, 3.0)),
                         std::floor(rng.uniform(0.0, 3.0)), std::floor(rng.uniform(0.0, 3.0)),
                         rng.uniform(0.0, 6.28), rng.uniform(0.0, 6.28), rng.uniform(0.0, 6.28)});
    const double tau = 6.283185307179586;
    for_each_interior(g, [&](int i, int j, int k, std::ptrdiff_t idx) {
        const auto x = g.cell_center(i, j, k);
        double ext[3];
        for (int a = 0; a < 3; ++a)
            ext[a] = g.n_cells[static_cast<size_t>(a)] * g.h;
        double v = 0.0;
        for (const auto& mo : modes) {
            double t = mo.a;
            t *= std::cos(tau * mo.kx * (x[0] - g.origin[0]) / ext[0] + mo.px);
            if (g.dim > 1) t *= std::cos(tau * mo.ky * (x[1] - g.origin[1]) / ext[1] + mo.py);
            if (g.dim > 2) t *= std::cos(tau * mo.kz * (x[2] - g.origin[2]) / ext[2] + mo.pz);
            v += t;
        }
        f[idx] = v;
    });
    return f;
}

inline double rel_l2_diff(const Field& a, const Field& b) {
    double num = 0.0, den = 0.0;
    for_each_interior(*a.grid, [&](int, int, int, std::ptrdiff_t idx) {
        const double d = a[idx] - b[idx];
        num += d * d;
        den += b[idx] * b[idx];
    });
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

// In-memory run to t_end without file output; throws on invariant breach.
inline SimState dry_run(const RunConfig& cfg, const Grid& grid, const BoundaryData& bd) {
    const SchemeBounds bounds = make_scheme_bounds(cfg.model, grid.h, cfg.kappa);
    MacroControls ctl;
    ctl.kappa = cfg.kappa;
    ctl.tol = cfg.tol;
    ctl.max_iter = cfg.max_iter;
    ctl.strict = cfg.strict;
    ctl.boundary = &bd;
    SimState st = init_fields(cfg, grid);
    const double t_eps = 1e-12 * std::max(1.0, cfg.t_end);
    while (cfg.t_end - st.t > t_eps) {
        ctl.dt_limit = cfg.t_end - st.t;
        macro_step(st, cfg.model, bounds, ctl);
    }
    return st;
}

// Averages each 2x2(x2) block of the fine field onto the coarse grid.
inline Field coarsen_by_two(const Field& fine, const Grid& coarse) {
    const Grid& gf = *fine.grid;
    Field out(coarse, fine.tag);
    const int fac = 2;
    const double w = 1.0 / std::pow(fac, gf.dim);
    for_each_interior(coarse, [&](int i, int j, int k, std::ptrdiff_t idx) {
        double acc = 0.0;
        for (int dk = 0; dk < (gf.dim > 2 ? fac : 1); ++dk)
            for (int dj = 0; dj < (gf.dim > 1 ? fac : 1); ++dj)
                for (int di = 0; di < fac; ++di)
                    acc += fine.at(2 * i - 1 + di, gf.dim > 1 ? 2 * j - 1 + dj : 0,
                                   gf.dim > 2 ? 2 * k - 1 + dk : 0);
        out[idx] = acc * w;
    });
    return out;
}

inline double l1_interior(const Field& f) {
    double s = 0.0;
    for_each_interior(*f.grid, [&](int, int, int, std::ptrdiff_t idx) { s += std::abs(f[idx]); });
    return s * f.grid->cell_volume();
}

} // namespace detail

inline VerifyReport verify_manufactured(const RunConfig& cfg) {
    VerifyReport rep;
    rep.mode = "manufactured";
    const Grid grid = cfg.make_grid();
    const double mu = cfg.model.mu;

    {
        Field one(grid, FieldTag::p, 1.0);
        HelmholtzProblem prob{&grid, mu, &one, cfg.tol, cfg.max_iter};
        Field W = solve(prob);
        double err = 0.0;
        for_each_interior(grid, [&](int, int, int, std::ptrdiff_t idx) {
            err = std::max(err, std::abs(W[idx] - 1.0));
        });
        rep.checks.push_back({"constant_rhs_exact", err <= 1e-12,
                              "max|W - 1| = " + std::to_string(err)});
    }
    {
        detail::Rng rng(2024);
        bool ok = true;
        double worst = 0.0;
        for (int t = 0; t < 5; ++t) {
            Field u = detail::random_smooth_field(grid, rng);
            Field v = detail::random_smooth_field(grid, rng);
            Field Au = apply_operator(u, mu);
            Field Av = apply_operator(v, mu);
            const double a = detail::dot_interior(Au, v);
            const double b = detail::dot_interior(u, Av);
            const double rel = std::abs(a - b) / (1.0 + std::abs(a));
            worst = std::max(worst, rel);
            ok = ok && rel <= 1e-12;
        }
        rep.checks.push_back({"operator_symmetry", ok, "worst relative asymmetry " + std::to_string(worst)});
    }
    {
        detail::Rng rng(7);
        bool ok = true;
        double worst = 0.0;
        for (int t = 0; t < 50; ++t) {
            Field w0 = detail::random_smooth_field(grid, rng);
            Field rhs = apply_operator(w0, mu);
            rhs.tag = FieldTag::p;
            HelmholtzProblem prob{&grid, mu, &rhs, cfg.tol, cfg.max_iter};
            Field w = solve(prob);
            const double rel = detail::rel_l2_diff(w, w0);
            worst = std::max(worst, rel);
            ok = ok && rel <= 10.0 * cfg.tol;
        }
        char buf[96];
        std::snprintf(buf, sizeof(buf), "worst relative L2 error %.3e (limit %.3e)", worst, 10.0 * cfg.tol);
        rep.checks.push_back({"roundtrip_50_random_fields", ok, buf});
    }
    return rep;
}

inline VerifyReport verify_convergence(const RunConfig& cfg) {
    VerifyReport rep;
    rep.mode = "convergence";
    std::vector<RunConfig> cfgs(3, cfg);
    rescale_grid(cfgs[1], cfg.h / 2.0);
    rescale_grid(cfgs[2], cfg.h / 4.0);

    std::vector<Grid> grids;
    std::vector<Field> finals;
    for (const auto& c : cfgs) {
        grids.push_back(c.make_grid());
    }
    for (size_t i = 0; i < cfgs.size(); ++i) {
        const BoundaryData bd = boundary_data_from(cfgs[i]);
        finals.push_back(detail::dry_run(cfgs[i], grids[i], bd).n);
    }

    Field mid_on_coarse = detail::coarsen_by_two(finals[1], grids[0]);
    Field fine_on_mid = detail::coarsen_by_two(finals[2], grids[1]);
    Field diff1(grids[0], FieldTag::n);
    for_each_interior(grids[0], [&](int, int, int, std::ptrdiff_t idx) {
        diff1[idx] = mid_on_coarse[idx] - finals[0][idx];
    });
    Field diff2(grids[1], FieldTag::n);
    for_each_interior(grids[1], [&](int, int, int, std::ptrdiff_t idx) {
        diff2[idx] = fine_on_mid[idx] - finals[1][idx];
    });
    const double d1 = detail::l1_interior(diff1);
    const double d2 = detail::l1_interior(diff2);
    const double order = std::log2(d1 / d2);

    char buf[128];
    std::snprintf(buf, sizeof(buf), "L1 diffs %.6e -> %.6e, empirical order %.3f", d1, d2, order);
    rep.checks.push_back({"l1_differences_decrease", d2 < d1, buf});
    rep.checks.push_back({"empirical_order", order >= 0.5, buf});
    return rep;
}

inline VerifyReport verify_invariants(const RunConfig& cfg) {
    VerifyReport rep;
    rep.mode = "invariants";
    RunConfig base = cfg;
    base.strict = true;

    auto one_run = [&](const RunConfig& c, const std::string& name) {
        VerifyCheck chk;
        chk.name = name;
        try {
            const Grid grid = c.make_grid();
            const BoundaryData bd = boundary_data_from(c);
            detail::dry_run(c, grid, bd);
            chk.pass = true;
            chk.detail = "all per-step invariants held";
        } catch (const std::exception& e) {
            chk.pass = false;
            chk.detail = e.what();
        }
        rep.checks.push_back(chk);
    };

    one_run(base, "base_initial_data");

    detail::Rng rng(99);
    for (int r = 0; r < 5; ++r) {
        RunConfig c = base;
        const double sn = rng.uniform(0.4, 1.0);
        const double sc = rng.uniform(0.4, 1.0);
        switch (c.n0.kind) {
            case ProfileSpec::Kind::constant:
                c.n0.value *= sn;
                break;
            case ProfileSpec::Kind::gaussians:
                for (auto& b : c.n0.bumps) b.amp *= sn;
                break;
            case ProfileSpec::Kind::sin_y:
                c.n0.amp *= sn;
                break;
        }
        if (c.c0.kind == ProfileSpec::Kind::constant) c.c0.value *= sc;
        one_run(c, "perturbed_initial_data_" + std::to_string(r));
    }
    return rep;
}

inline VerifyReport verify(const RunConfig& cfg, const std::string& mode) {
    if (mode == "manufactured") return verify_manufactured(cfg);
    if (mode == "convergence") return verify_convergence(cfg);
    if (mode == "invariants") return verify_invariants(cfg);
    throw ConfigError("unknown verify mode '" + mode + "' (expected invariants, convergence or manufactured)");
}

// Prints the CFL bounds without advancing the simulation.
inline std::string cfl_report(const RunConfig& cfg) {
    const Grid grid = cfg.make_grid();
    const SchemeBounds b = make_scheme_bounds(cfg.model, grid.h, cfg.kappa);
    SimState st = init_fields(cfg, grid);
    const CflNumbers cf = cfl_macro(st.W, cfg.model, b, cfg.kappa);
    std::ostringstream os;
    os << "Phi_inf              = " << b.phi_inf << "\n";
    os << "S (sup p^{1/g} Phi)  = " << b.S << "\n";
    os << "dt_cap               = " << b.dt_cap << "\n";
    os << "n_bar                = " << b.n_bar << "\n";
    os << "max |D+ W| at t=0    = " << cf.grad_max << "\n";
    os << "transport bound      = " << cf.bound1 << "\n";
    os << "stiffness bound      = " << cf.bound2 << "\n";
    os << "dt (kappa-scaled)    = " << cf.dt << "\n";
    const SubStepSizes sc = cfl_sub(cfg.model, cf.dt, grid.h, grid.dim, b.n_bar, cfg.kappa, FieldTag::c);
    os << "nutrient: bounds " << sc.bound1 << " / " << sc.bound2 << ", dt_c = " << sc.dt_k
       << ", substeps = " << sc.n_sub << "\n";
    if (cfg.model.drug_enabled) {
        const SubStepSizes sq =
            cfl_sub(cfg.model, cf.dt, grid.h, grid.dim, b.n_bar, cfg.kappa, FieldTag::q);
        os << "drug: bounds " << sq.bound1 << " / " << sq.bound2 << ", dt_q = " << sq.dt_k
           << ", substeps = " << sq.n_sub << "\n";
    }
    return os.str();
}

} // namespace tumorfd
