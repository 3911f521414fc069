// Initial data: cell averages of the configured analytic profiles via
// per-axis 3-point Gauss-Legendre quadrature, followed by the admissibility
// checks 0 <= n0, p(n0) <= P_M and the bounds for c0, q0.
#pragma once

#include <array>
#include <cmath>

#include "tumorfd/config.hpp"
#include "tumorfd/grid.hpp"
#include "tumorfd/helmholtz.hpp"
#include "tumorfd/stepper.hpp"

namespace tumorfd {

namespace detail {

// 3-point Gauss-Legendre on [-1/2, 1/2] (weights sum to 1).
struct Gauss3 {
    static constexpr double node = 0.387298334620741688; // sqrt(3/5)/2
    std::array<double, 3> x{-node, 0.0, node};
    std::array<double, 3> w{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
};

} // namespace detail

// Cell average of `profile` over every interior cell.
inline Field project_profile(const Grid& g, const ProfileSpec& profile, FieldTag tag) {
    detail::Gauss3 gl;
    Field out(g, tag);
    const int nq = 3;
    for_each_interior(g, [&](int i, int j, int k, std::ptrdiff_t idx) {
        const auto xc = g.cell_center(i, j, k);
        double acc = 0.0;
        const int nj = g.dim > 1 ? nq : 1;
        const int nk = g.dim > 2 ? nq : 1;
        for (int a = 0; a < nq; ++a)
            for (int b = 0; b < nj; ++b)
                for (int c = 0; c < nk; ++c) {
                    std::array<double, 3> x = xc;
                    x[0] = xc[0] + gl.x[static_cast<size_t>(a)] * g.h;
                    double w = gl.w[static_cast<size_t>(a)];
                    if (g.dim > 1) {
                        x[1] = xc[1] + gl.x[static_cast<size_t>(b)] * g.h;
                        w *= gl.w[static_cast<size_t>(b)];
                    }
                    if (g.dim > 2) {
                        x[2] = xc[2] + gl.x[static_cast<size_t>(c)] * g.h;
                        w *= gl.w[static_cast<size_t>(c)];
                    }
                    acc += w * profile.eval(x, g.dim);
                }
        out[idx] = acc;
    });
    return out;
}

// Builds the state at t = 0: projected n0, c0, q0, and W0 solved from
// p0 = |n0|^gamma.  Violations of the initial-data constraints are
// configuration errors.
inline SimState init_fields(const RunConfig& cfg, const Grid& grid) {
    const ModelParams& m = cfg.model;
    SimState st;
    st.n = project_profile(grid, cfg.n0, FieldTag::n);
    st.c = project_profile(grid, cfg.c0, FieldTag::c);
    st.q = m.drug_enabled ? project_profile(grid, cfg.q0, FieldTag::q) : Field(grid, FieldTag::q);

    const double n_hi = m.n_inf();
    const double slack = 1e-12;
    for_each_interior(grid, [&](int i, int j, int k, std::ptrdiff_t idx) {
        auto bad = [&](const char* what, double v) {
            std::ostringstream os;
            os << "initial data: " << what << " at cell (" << i << "," << j << "," << k
               << "): value " << v;
            throw ConfigError(os.str());
        };
        if (!(st.n[idx] >= 0.0) || !std::isfinite(st.n[idx])) bad("n0 negative or non-finite", st.n[idx]);
        if (st.n[idx] > n_hi * (1.0 + slack) + slack) bad("p(n0) exceeds the homeostatic pressure", st.n[idx]);
        if (!(st.c[idx] >= 0.0) || st.c[idx] > m.c_inf + slack) bad("c0 outside [0, c_inf]", st.c[idx]);
        if (!(st.q[idx] >= 0.0) || st.q[idx] > m.q_inf + slack) bad("q0 outside [0, q_inf]", st.q[idx]);
    });

    Field p = detail::pressure_field(st.n, m);
    HelmholtzProblem prob{&grid, m.mu, &p, cfg.tol, cfg.max_iter};
    st.W = solve(prob);
    st.t = 0.0;
    st.step = 0;
    return st;
}

} // namespace tumorfd
