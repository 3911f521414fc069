// One macro time step of the explicit scheme: CFL step-size selection,
// upwinded transport update for the cell density, and operator-split
// explicit reaction-diffusion substeps for nutrient and drug.
//
// Update formulas (interior cells, ghosts encode the boundary conditions):
//   transport   n' = n - dt div_h^- F + dt n Phi(p, c, q)
//   flux        F_j = -D_j^+ W (n_i + n_{i+e_j})/2 - (h/2)|D_j^+ W| D_j^+ n
//   diffusion   k' = k + dt_k (nu_k Lap_h k + k Psi_k(n, k) + r_k (k_supp - k))
// The macro step size obeys
//   dt <= min{ h / (4 d max|D_j^+ W| + h Phi_inf), mu / (4 gamma n_bar^gamma) }
// and each substep size obeys
//   dt_k <= min{ h dt / nu_k, h^2 / (2^d nu_k + h^2 r_k + h^2 Psi_k_inf) }.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include "tumorfd/constitutive.hpp"
#include "tumorfd/grid.hpp"
#include "tumorfd/helmholtz.hpp"

namespace tumorfd {

struct SimState {
    Field n, W, c, q;
    double t = 0.0;
    long step = 0;
};

struct StepSizes {
    double dt = 0.0;
    double dt_c = 0.0, dt_q = 0.0;
    int n_sub_c = 0, n_sub_q = 0;
    double kappa = 0.9;
};

// Precomputed quantities the CFL conditions need.  dt_cap is the unique
// fixed point of  x = kappa min(h, mu / (4 gamma n_bar_inf(x)^gamma)),
// so n_bar = n_bar_inf(dt_cap) bounds the density for every realized step
// size while keeping the stiffness bound self-consistent.  (Evaluating
// n_bar_inf at kappa h directly is monotone-safe but blows up for large
// gamma: n_bar_inf(kappa h)^gamma can overflow any usable step size.)
struct SchemeBounds {
    double S = 0.0;       // sup p^{1/gamma} Phi
    double phi_inf = 0.0; // Phi_inf
    double dt_cap = 0.0;
    double n_bar = 0.0;   // n_bar_inf(dt_cap)
};

inline double stiffness_bound(const ModelParams& mp, double n_bar) {
    const double den = 4.0 * mp.gamma * std::pow(n_bar, mp.gamma);
    return den > 0.0 ? mp.mu / den : std::numeric_limits<double>::infinity();
}

inline SchemeBounds make_scheme_bounds(const ModelParams& mp, double h, double kappa) {
    SchemeBounds b;
    b.S = growth_density_sup(mp);
    b.phi_inf = phi_sup(mp);
    auto cap_map = [&](double x) {
        return kappa * std::min(h, stiffness_bound(mp, n_bar_inf(x, mp, b.S)));
    };
    double lo = 0.0, hi = kappa * h;
    if (cap_map(hi) >= hi) {
        b.dt_cap = hi;
    } else {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (cap_map(mid) > mid)
                lo = mid;
            else
                hi = mid;
        }
        b.dt_cap = lo; // lower end of the bracket: cap_map(lo) >= lo
    }
    b.n_bar = n_bar_inf(b.dt_cap, mp, b.S);
    return b;
}

struct CflNumbers {
    double grad_max = 0.0; // max_{i,j} |D_j^+ W|
    double bound1 = 0.0;   // transport bound
    double bound2 = 0.0;   // stiffness bound at n_bar
    double dt = 0.0;       // kappa * min(bound1, bound2, h), capped at dt_cap
};

// W must carry valid ghosts (true after solve()).
inline CflNumbers cfl_macro(const Field& W, const ModelParams& mp, const SchemeBounds& b,
                            double kappa) {
    const Grid& g = *W.grid;
    CflNumbers out;
    double gm = 0.0;
    double probe = 0.0; // NaN-safe: max() would silently drop non-finite entries
    for_each_interior(g, [&](int, int, int, std::ptrdiff_t idx) {
        for (int a = 0; a < g.dim; ++a) {
            const double d = std::abs(W[idx + g.stride[static_cast<size_t>(a)]] - W[idx]) / g.h;
            gm = std::max(gm, d);
            probe += d;
        }
    });
    if (!std::isfinite(probe)) throw NumericalError("cfl_macro: non-finite potential gradient");
    out.grad_max = gm;
    const double den1 = 4.0 * g.dim * gm + g.h * b.phi_inf;
    out.bound1 = den1 > 0.0 ? g.h / den1 : std::numeric_limits<double>::infinity();
    out.bound2 = stiffness_bound(mp, b.n_bar);
    out.dt = std::min(kappa * std::min(std::min(out.bound1, out.bound2), g.h), b.dt_cap);
    if (!std::isfinite(out.dt) || !(out.dt > 0.0))
        throw NumericalError("cfl_macro: degenerate step size (non-finite W?)");
    return out;
}

struct SubStepSizes {
    double bound1 = 0.0;   // h dt / nu
    double bound2 = 0.0;   // h^2 / (2^d nu + h^2 (r + Psi_inf))
    double dt_k_star = 0.0;
    double dt_k = 0.0;     // dt / n_sub, tiles the macro step exactly
    int n_sub = 1;
};

inline SubStepSizes cfl_sub(const ModelParams& mp, double dt, double h, int dim, double n_bar,
                            double kappa, FieldTag which) {
    const bool is_c = (which == FieldTag::c);
    const double nu = is_c ? mp.nu_c : mp.nu_q;
    const double r = is_c ? mp.r_c : mp.r_q;
    const double psi_inf = is_c ? psi_c_sup(mp, n_bar) : psi_q_sup(mp, n_bar);
    const double inf = std::numeric_limits<double>::infinity();

    SubStepSizes s;
    s.bound1 = nu > 0.0 ? h * dt / nu : inf;
    const double den2 = std::pow(2.0, dim) * nu + h * h * (r + psi_inf);
    s.bound2 = den2 > 0.0 ? h * h / den2 : inf;
    s.dt_k_star = kappa * std::min(s.bound1, s.bound2);
    if (!(s.dt_k_star > 0.0)) throw NumericalError("cfl_sub: degenerate substep size");
    if (s.dt_k_star >= dt || std::isinf(s.dt_k_star)) {
        s.n_sub = 1;
        s.dt_k = dt;
    } else {
        const double ratio = dt / s.dt_k_star;
        if (ratio > 1e9) throw NumericalError("cfl_sub: substep count overflow");
        s.n_sub = static_cast<int>(std::ceil(ratio));
        s.dt_k = dt / s.n_sub;
    }
    return s;
}

// Face flux in direction `axis`, stored at the lower cell of each face.
// Defined for cells whose axis index runs from the lower ghost (0) to N, so
// div_h^- F is available on every interior cell.  Ghosts of W and n must be
// filled.
inline Field numerical_flux(const Field& W, const Field& n, int axis) {
    const Grid& g = *W.grid;
    Field F(g, FieldTag::n);
    const std::ptrdiff_t s = g.stride[static_cast<size_t>(axis)];
    const double invh = 1.0 / g.h;
    const auto lo = [&](int a) { return a == axis ? 0 : g.lo(a); };
    for (int k = lo(2); k <= g.hi(2); ++k)
        for (int j = lo(1); j <= g.hi(1); ++j)
            for (int i = lo(0); i <= g.hi(0); ++i) {
                const std::ptrdiff_t idx = g.index(i, j, k);
                const double dw = (W[idx + s] - W[idx]) * invh;
                F[idx] = -dw * 0.5 * (n[idx] + n[idx + s]) - 0.5 * std::abs(dw) * (n[idx + s] - n[idx]);
            }
    return F;
}

namespace detail {

[[noreturn]] inline void invariant_failure(const char* what, FieldTag tag, int i, int j, int k,
                                           double value) {
    std::ostringstream os;
    os << what << " for field " << to_string(tag) << " at cell (" << i << "," << j << "," << k
       << "): value " << value;
    throw NumericalError(os.str());
}

inline void check_range(const Field& f, double lo, double hi, double* mn = nullptr,
                        double* mx = nullptr) {
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -vmin;
    for_each_interior(*f.grid, [&](int i, int j, int k, std::ptrdiff_t idx) {
        const double v = f[idx];
        if (!std::isfinite(v)) invariant_failure("non-finite value", f.tag, i, j, k, v);
        if (v < lo || v > hi) invariant_failure("maximum-principle violation", f.tag, i, j, k, v);
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    });
    if (mn) *mn = vmin;
    if (mx) *mx = vmax;
}

} // namespace detail

// Explicit transport update for n; W must be the Helmholtz solution for
// pressure(n) with valid ghosts.  Enforces 0 <= n <= n_hi up to 1e-12
// (no clipping: violations abort, they indicate a CFL or state bug).
inline Field transport_step(const SimState& st, const ModelParams& mp, double dt, double n_hi) {
    const Grid& g = *st.n.grid;
    Field n = st.n; // ghost fill below mutates, keep caller's field const
    fill_ghosts(n, g.bc_n);

    std::array<Field, 3> flux;
    for (int a = 0; a < g.dim; ++a) flux[static_cast<size_t>(a)] = numerical_flux(st.W, n, a);

    Field out(g, FieldTag::n);
    const double dtoh = dt / g.h;
    for_each_interior(g, [&](int, int, int, std::ptrdiff_t idx) {
        double div = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const Field& F = flux[static_cast<size_t>(a)];
            div += F[idx] - F[idx - g.stride[static_cast<size_t>(a)]];
        }
        const double phi = Phi(pressure(n[idx], mp), st.c[idx], st.q[idx], mp);
        out[idx] = n[idx] - dtoh * div + dt * (n[idx] * phi);
    });
    detail::check_range(out, -1e-12, n_hi + 1e-12);
    return out;
}

// One explicit substep of (d/dt) k - nu_k Lap k = k Psi_k(n, k) + r_k (k_supp - k),
// n frozen at its macro-step value.  Ghosts of k are refreshed at the
// substep time t_sub before the stencil is applied.
inline Field reaction_diffusion_substep(const Field& k_field, const Field& n,
                                        const ModelParams& mp, double dt_k, double t_sub,
                                        const BoundaryData* bd, double k_hi,
                                        double* out_min = nullptr, double* out_max = nullptr) {
    const Grid& g = *k_field.grid;
    const bool is_c = (k_field.tag == FieldTag::c);
    const double nu = is_c ? mp.nu_c : mp.nu_q;
    const double r = is_c ? mp.r_c : mp.r_q;
    const double supp = is_c ? mp.c_supp : mp.q_supp;
    const double lambda = is_c ? mp.lambda_c : mp.lambda_q;

    Field k = k_field;
    fill_ghosts(k, g.bc_scalar, bd, t_sub);

    Field out(g, k.tag);
    const double invh2 = 1.0 / (g.h * g.h);
    for_each_interior(g, [&](int, int, int, std::ptrdiff_t idx) {
        double lap = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const std::ptrdiff_t s = g.stride[static_cast<size_t>(a)];
            lap += k[idx + s] - 2.0 * k[idx] + k[idx - s];
        }
        const double psi = -lambda * n[idx] * k[idx];
        out[idx] = k[idx] + dt_k * (nu * (lap * invh2) + k[idx] * psi + r * (supp - k[idx]));
    });
    detail::check_range(out, -1e-12, k_hi + 1e-12, out_min, out_max);
    return out;
}

struct MacroControls {
    double kappa = 0.9;
    double tol = 1e-10;
    int max_iter = 0;
    bool strict = true;                                    // abort on W-bound failure
    double dt_limit = std::numeric_limits<double>::infinity(); // e.g. t_end - t
    const BoundaryData* boundary = nullptr;
};

struct StepReport {
    double dt = 0.0;
    CflNumbers cfl;
    SubStepSizes sub_c, sub_q;
    int solve_iterations = 0; // both Helmholtz solves of this step
    WBoundsResult w_bounds;   // worst-case over this step's solves
    bool cfl_satisfied = true; // chosen steps within the raw bounds (kappa <= 1)
    double n_min = 0.0, n_max = 0.0;
    double c_min = 0.0, c_max = 0.0; // extrema over all substep levels
    double q_min = 0.0, q_max = 0.0;
};

namespace detail {

inline Field pressure_field(const Field& n, const ModelParams& mp) {
    Field p(*n.grid, FieldTag::p);
    for_each_interior(*n.grid, [&](int, int, int, std::ptrdiff_t idx) { p[idx] = pressure(n[idx], mp); });
    return p;
}

inline void merge_w_bounds(WBoundsResult& acc, const WBoundsResult& r, bool first) {
    if (first) {
        acc = r;
        return;
    }
    acc.pass = acc.pass && r.pass;
    acc.w_min = std::min(acc.w_min, r.w_min);
    acc.w_max = std::max(acc.w_max, r.w_max);
    acc.p_max = std::max(acc.p_max, r.p_max);
}

} // namespace detail

// Advances the state by one macro step:
//   (1) solve the Brinkman equation for W from p = |n|^gamma,
//   (2) pick dt from the CFL bounds, (3) transport update for n,
//   (4) nutrient substeps, (5) drug substeps (skipped when disabled),
//   (6) advance time, then re-solve W for the new density so the returned
//       state is internally consistent.
// Phi is evaluated at start-of-step (c, q); n stays frozen during substeps.
inline StepReport macro_step(SimState& st, const ModelParams& mp, const SchemeBounds& b,
                             const MacroControls& ctl) {
    const Grid& g = *st.n.grid;
    StepReport rep;

    Field p = detail::pressure_field(st.n, mp);
    HelmholtzProblem prob{&g, mp.mu, &p, ctl.tol, ctl.max_iter};
    SolveStats stats;
    st.W = solve(prob, &st.W, &stats);
    rep.solve_iterations += stats.iterations;
    detail::merge_w_bounds(rep.w_bounds, w_bounds_check(st.W, p), true);

    rep.cfl = cfl_macro(st.W, mp, b, ctl.kappa);
    const double dt = std::min(rep.cfl.dt, ctl.dt_limit);
    rep.dt = dt;

    // Chosen step sizes must sit inside the raw stability bounds; a safety
    // factor above 1 lands outside the proven-stable region and is flagged
    // even when the fields happen to stay in range.
    const double slack = 1.0 + 1e-12;
    auto check_cfl = [&](double step, double lo1, double lo2, double lo3) {
        if (step > std::min(std::min(lo1, lo2), lo3) * slack) {
            rep.cfl_satisfied = false;
            if (ctl.strict)
                throw NumericalError("CFL condition violated by the chosen step size "
                                     "(safety factor above 1?)");
        }
    };
    check_cfl(dt, rep.cfl.bound1, rep.cfl.bound2, g.h);

    Field n_new = transport_step(st, mp, dt, b.n_bar);

    rep.sub_c = cfl_sub(mp, dt, g.h, g.dim, b.n_bar, ctl.kappa, FieldTag::c);
    check_cfl(rep.sub_c.dt_k, rep.sub_c.bound1, rep.sub_c.bound2,
              std::numeric_limits<double>::infinity());
    Field c = st.c;
    rep.c_min = std::numeric_limits<double>::infinity();
    rep.c_max = -rep.c_min;
    for (int s = 0; s < rep.sub_c.n_sub; ++s) {
        double mn, mx;
        c = reaction_diffusion_substep(c, st.n, mp, rep.sub_c.dt_k, st.t + s * rep.sub_c.dt_k,
                                       ctl.boundary, mp.c_inf, &mn, &mx);
        rep.c_min = std::min(rep.c_min, mn);
        rep.c_max = std::max(rep.c_max, mx);
    }

    if (mp.drug_enabled) {
        rep.sub_q = cfl_sub(mp, dt, g.h, g.dim, b.n_bar, ctl.kappa, FieldTag::q);
        check_cfl(rep.sub_q.dt_k, rep.sub_q.bound1, rep.sub_q.bound2,
                  std::numeric_limits<double>::infinity());
        Field q = st.q;
        rep.q_min = std::numeric_limits<double>::infinity();
        rep.q_max = -rep.q_min;
        for (int s = 0; s < rep.sub_q.n_sub; ++s) {
            double mn, mx;
            q = reaction_diffusion_substep(q, st.n, mp, rep.sub_q.dt_k, st.t + s * rep.sub_q.dt_k,
                                           ctl.boundary, mp.q_inf, &mn, &mx);
            rep.q_min = std::min(rep.q_min, mn);
            rep.q_max = std::max(rep.q_max, mx);
        }
        st.q = std::move(q);
    } else {
        rep.sub_q = SubStepSizes{};
        rep.sub_q.n_sub = 0;
        rep.q_min = min_interior(st.q);
        rep.q_max = max_interior(st.q);
    }

    st.n = std::move(n_new);
    st.c = std::move(c);
    st.t += dt;
    st.step += 1;

    p = detail::pressure_field(st.n, mp);
    prob.rhs = &p;
    st.W = solve(prob, &st.W, &stats);
    rep.solve_iterations += stats.iterations;
    detail::merge_w_bounds(rep.w_bounds, w_bounds_check(st.W, p), false);
    if (ctl.strict && !rep.w_bounds.pass) {
        std::ostringstream os;
        os << "W-bound violation: W in [" << rep.w_bounds.w_min << ", " << rep.w_bounds.w_max
           << "], max p = " << rep.w_bounds.p_max;
        throw NumericalError(os.str());
    }

    rep.n_min = min_interior(st.n);
    rep.n_max = max_interior(st.n);
    return rep;
}

// Convex-combination coefficients of the transport update (the rewrite the
// positivity proof uses).  At cell idx with W ghosts filled:
//   n' = (alpha1 + alpha2) n_i + sum_j (beta_p[j] n_{i+e_j} + beta_m[j] n_{i-e_j})
// with alpha1 + sum_j (beta_p[j] + beta_m[j]) = 1.
struct ConvexCoeffs {
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    std::array<double, 3> beta_p{0.0, 0.0, 0.0};
    std::array<double, 3> beta_m{0.0, 0.0, 0.0};
};

inline ConvexCoeffs convex_coeffs(const Field& W, std::ptrdiff_t idx, double dt, double phi) {
    const Grid& g = *W.grid;
    ConvexCoeffs cc;
    double lap = 0.0;
    double absgrad = 0.0;
    const double invh = 1.0 / g.h;
    for (int a = 0; a < g.dim; ++a) {
        const std::ptrdiff_t s = g.stride[static_cast<size_t>(a)];
        const double dp = (W[idx + s] - W[idx]) * invh;
        const double dm = (W[idx] - W[idx - s]) * invh;
        lap += (dp - dm) * invh;
        absgrad += std::abs(dp) + std::abs(dm);
        cc.beta_p[static_cast<size_t>(a)] = 0.5 * dt * invh * (std::abs(dp) + dp);
        cc.beta_m[static_cast<size_t>(a)] = 0.5 * dt * invh * (std::abs(dm) - dm);
    }
    cc.alpha1 = 1.0 - 0.5 * dt * lap - 0.5 * dt * invh * absgrad;
    cc.alpha2 = dt * phi + dt * lap;
    return cc;
}

} // namespace tumorfd
