// Model parameters and pointwise constitutive functions: pressure law,
// growth rate Phi and its factors, consumption terms, and the analytic
// bounds the CFL conditions consume.
//
// The implemented family is
//   p(n)     = |n|^gamma
//   G(p)     = alpha - beta p^theta
//   g1(c,q)  = k1 (c - c_crit)_+
//   g2(c,q)  = k2 (c_crit - c)_+ + k3 (q - q_crit)_+
//   Phi      = g1 G - g2
//   Psi_c    = -lambda_c n c,   Psi_q = -lambda_q n q
#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "tumorfd/errors.hpp"

namespace tumorfd {

struct ModelParams {
    double gamma = 2.0;   // pressure exponent, >= 2
    double mu = 1.0;      // Brinkman viscosity, > 0
    double nu_c = 0.0;    // nutrient diffusion
    double nu_q = 0.0;    // drug diffusion
    double r_c = 0.0;     // nutrient supply rate
    double r_q = 0.0;     // drug supply rate
    double c_supp = 0.0;  // nutrient supply concentration
    double q_supp = 0.0;  // drug supply concentration
    double alpha = 1.0;   // G(p) = alpha - beta p^theta
    double beta = 1.0;
    double theta = 1.0;
    double k1 = 0.0;      // g1 slope
    double k2 = 0.0;      // g2 starvation slope
    double k3 = 0.0;      // g2 drug-kill slope
    double c_crit = 0.0;
    double q_crit = 0.0;
    double lambda_c = 0.0;
    double lambda_q = 0.0;
    double c_inf = 0.0;   // a-priori bound for c
    double q_inf = 0.0;   // a-priori bound for q
    bool drug_enabled = false;

    // Homeostatic pressure: G(P_M) = 0.
    double P_M() const { return std::pow(alpha / beta, 1.0 / theta); }
    // Density bound for admissible initial data: p(n_inf) = P_M.
    double n_inf() const { return std::pow(P_M(), 1.0 / gamma); }

    void validate() const {
        auto bad = [](const std::string& what) { throw ConfigError("model: " + what); };
        if (!(gamma >= 2.0)) bad("gamma must be >= 2");
        if (!(mu > 0.0)) bad("mu must be > 0");
        if (!(nu_c >= 0.0) || !(nu_q >= 0.0)) bad("nu_c, nu_q must be >= 0");
        if (!(r_c >= 0.0) || !(r_q >= 0.0)) bad("r_c, r_q must be >= 0");
        if (!(c_supp >= 0.0) || !(q_supp >= 0.0)) bad("c_supp, q_supp must be >= 0");
        if (!(alpha > 0.0) || !(beta > 0.0) || !(theta > 0.0)) bad("alpha, beta, theta must be > 0");
        if (!(k1 >= 0.0) || !(k2 >= 0.0) || !(k3 >= 0.0)) bad("k1, k2, k3 must be >= 0");
        if (!(c_crit >= 0.0) || !(q_crit >= 0.0)) bad("c_crit, q_crit must be >= 0");
        if (!(lambda_c >= 0.0) || !(lambda_q >= 0.0)) bad("lambda_c, lambda_q must be >= 0");
        if (!(c_inf >= 0.0) || !(q_inf >= 0.0)) bad("c_inf, q_inf must be >= 0");
        if (!(c_supp <= c_inf)) bad("c_supp must not exceed c_inf");
        if (drug_enabled && !(q_supp <= q_inf)) bad("q_supp must not exceed q_inf");
    }
};

inline double pressure(double n, const ModelParams& p) { return std::pow(std::abs(n), p.gamma); }

inline double growth_G(double pr, const ModelParams& p) {
    return p.alpha - p.beta * std::pow(pr, p.theta);
}

inline double g1(double c, double q, const ModelParams& p) {
    (void)q;
    return c > p.c_crit ? p.k1 * (c - p.c_crit) : 0.0;
}

inline double g2(double c, double q, const ModelParams& p) {
    double v = 0.0;
    if (c < p.c_crit) v += p.k2 * (p.c_crit - c);
    if (q > p.q_crit) v += p.k3 * (q - p.q_crit);
    return v;
}

inline double Phi(double pr, double c, double q, const ModelParams& p) {
    return g1(c, q, p) * growth_G(pr, p) - g2(c, q, p);
}

inline double Psi_c(double n, double c, const ModelParams& p) { return -p.lambda_c * n * c; }
inline double Psi_q(double n, double q, const ModelParams& p) { return -p.lambda_q * n * q; }

// Phi^inf: upper bound for Phi over p >= 0, 0 <= c <= c_inf, 0 <= q <= q_inf.
// G <= G(0) = alpha and g2 >= 0, so the supremum candidate sits at p = 0,
// c = c_inf, q = 0.
inline double phi_sup(const ModelParams& p) {
    return p.k1 * std::max(p.c_inf - p.c_crit, 0.0) * p.alpha;
}

// S := sup over admissible (p,c,q) of p^{1/gamma} Phi(p,c,q).  Phi <= 0 for
// p >= P_M and the (c,q) maximizer is (c_inf, 0), so a 1-D scan over
// [0, P_M] at that corner suffices.  Scan plus local ternary refinement.
inline double growth_density_sup(const ModelParams& p) {
    const double pm = p.P_M();
    auto f = [&](double pr) { return std::pow(pr, 1.0 / p.gamma) * Phi(pr, p.c_inf, 0.0, p); };
    const int nscan = 1'000'000;
    double best = 0.0; // value at p = 0
    int best_i = 0;
    for (int i = 1; i <= nscan; ++i) {
        const double pr = pm * static_cast<double>(i) / nscan;
        const double val = f(pr);
        if (val > best) {
            best = val;
            best_i = i;
        }
    }
    if (best_i == 0) return best;
    double lo = pm * static_cast<double>(best_i - 1) / nscan;
    double hi = pm * static_cast<double>(std::min(best_i + 1, nscan)) / nscan;
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (f(m1) < f(m2))
            lo = m1;
        else
            hi = m2;
    }
    return std::max(best, f(0.5 * (lo + hi)));
}

// n_bar_inf(dt) = n_inf + 4 dt S; the density bound of the transport
// maximum principle at step size dt.
inline double n_bar_inf(double dt, const ModelParams& p, double S) { return p.n_inf() + 4.0 * dt * S; }

inline double n_bar_inf(double dt, const ModelParams& p) {
    return n_bar_inf(dt, p, growth_density_sup(p));
}

// Psi_c^inf = max |Psi_c| over [0, n_bar] x [0, c_inf], and the q analogue.
inline double psi_c_sup(const ModelParams& p, double n_bar) { return p.lambda_c * n_bar * p.c_inf; }
inline double psi_q_sup(const ModelParams& p, double n_bar) { return p.lambda_q * n_bar * p.q_inf; }

} // namespace tumorfd
