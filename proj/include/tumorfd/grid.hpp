// Uniform cell-centered grid with one ghost layer, scalar fields, and the
// discrete difference operators D_j^+, D_j^-, Laplacian.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "tumorfd/errors.hpp"

namespace tumorfd {

enum class BcKind { neumann, periodic, dirichlet };

enum class FieldTag { n, W, p, c, q };

inline const char* to_string(FieldTag t) {
    switch (t) {
        case FieldTag::n: return "n";
        case FieldTag::W: return "W";
        case FieldTag::p: return "p";
        case FieldTag::c: return "c";
        case FieldTag::q: return "q";
    }
    return "?";
}

inline const char* to_string(BcKind k) {
    switch (k) {
        case BcKind::neumann: return "neumann";
        case BcKind::periodic: return "periodic";
        case BcKind::dirichlet: return "dirichlet";
    }
    return "?";
}

// Cell centers sit at origin + (i - 1/2) h per axis, i = 1..N.  Storage
// holds one ghost cell per face (index 0 and N+1 on each active axis),
// laid out with axis 0 fastest.
struct Grid {
    int dim = 2;
    std::array<int, 3> n_cells{1, 1, 1};
    double h = 0.0;
    std::array<double, 3> origin{0.0, 0.0, 0.0};
    BcKind bc_n = BcKind::neumann;        // applies to n and W
    BcKind bc_scalar = BcKind::dirichlet; // applies to c and q

    std::array<std::ptrdiff_t, 3> stride{0, 0, 0};
    std::array<int, 3> alloc{1, 1, 1}; // per-axis allocation incl. ghosts
    std::ptrdiff_t total = 0;

    double center(int axis, int i) const { return origin[static_cast<size_t>(axis)] + (i - 0.5) * h; }

    std::array<double, 3> cell_center(int i, int j, int k) const {
        std::array<double, 3> x{0.0, 0.0, 0.0};
        x[0] = center(0, i);
        if (dim > 1) x[1] = center(1, j);
        if (dim > 2) x[2] = center(2, k);
        return x;
    }

    std::ptrdiff_t index(int i, int j = 0, int k = 0) const {
        return i * stride[0] + j * stride[1] + k * stride[2];
    }

    std::ptrdiff_t interior_count() const {
        std::ptrdiff_t m = 1;
        for (int a = 0; a < dim; ++a) m *= n_cells[static_cast<size_t>(a)];
        return m;
    }

    double cell_volume() const { return std::pow(h, dim); }

    // Loop bound helpers: interior multi-index ranges are 1..N on active
    // axes and exactly 0 on inactive ones.
    int lo(int axis) const { return axis < dim ? 1 : 0; }
    int hi(int axis) const { return axis < dim ? n_cells[static_cast<size_t>(axis)] : 0; }
};

inline Grid make_grid(int dim, std::array<int, 3> n_cells, double h,
                      std::array<double, 3> origin,
                      BcKind bc_n = BcKind::neumann,
                      BcKind bc_scalar = BcKind::dirichlet) {
    if (dim < 1 || dim > 3) throw ConfigError("grid: dim must be 1, 2 or 3");
    if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("grid: mesh width h must be positive");
    for (int a = 0; a < dim; ++a)
        if (n_cells[static_cast<size_t>(a)] < 2)
            throw ConfigError("grid: n_cells must be >= 2 on every axis");
    if (bc_n == BcKind::dirichlet)
        throw ConfigError("grid: boundary kind for n/W must be neumann or periodic");
    if (bc_scalar == BcKind::periodic)
        throw ConfigError("grid: boundary kind for c/q must be dirichlet or neumann");

    Grid g;
    g.dim = dim;
    g.n_cells = n_cells;
    g.h = h;
    g.origin = origin;
    g.bc_n = bc_n;
    g.bc_scalar = bc_scalar;
    for (int a = 0; a < 3; ++a)
        g.alloc[static_cast<size_t>(a)] = (a < dim) ? n_cells[static_cast<size_t>(a)] + 2 : 1;
    g.stride[0] = 1;
    g.stride[1] = g.alloc[0];
    g.stride[2] = static_cast<std::ptrdiff_t>(g.alloc[0]) * g.alloc[1];
    g.total = static_cast<std::ptrdiff_t>(g.alloc[0]) * g.alloc[1] * g.alloc[2];
    return g;
}

// One scalar unknown sampled at cell centers, ghost layer included.
struct Field {
    const Grid* grid = nullptr;
    FieldTag tag = FieldTag::n;
    std::vector<double> v;

    Field() = default;
    Field(const Grid& g, FieldTag t, double fill = 0.0)
        : grid(&g), tag(t), v(static_cast<size_t>(g.total), fill) {}

    double& at(int i, int j = 0, int k = 0) { return v[static_cast<size_t>(grid->index(i, j, k))]; }
    double at(int i, int j = 0, int k = 0) const { return v[static_cast<size_t>(grid->index(i, j, k))]; }
    double& operator[](std::ptrdiff_t idx) { return v[static_cast<size_t>(idx)]; }
    double operator[](std::ptrdiff_t idx) const { return v[static_cast<size_t>(idx)]; }
};

template <class Fn>
inline void for_each_interior(const Grid& g, Fn&& fn) {
    for (int k = g.lo(2); k <= g.hi(2); ++k)
        for (int j = g.lo(1); j <= g.hi(1); ++j) {
            std::ptrdiff_t row = g.index(0, j, k);
            for (int i = g.lo(0); i <= g.hi(0); ++i) fn(i, j, k, row + i);
        }
}

inline double min_interior(const Field& f) {
    double m = std::numeric_limits<double>::infinity();
    for_each_interior(*f.grid, [&](int, int, int, std::ptrdiff_t idx) { m = std::min(m, f[idx]); });
    return m;
}

inline double max_interior(const Field& f) {
    double m = -std::numeric_limits<double>::infinity();
    for_each_interior(*f.grid, [&](int, int, int, std::ptrdiff_t idx) { m = std::max(m, f[idx]); });
    return m;
}

inline double sum_interior(const Field& f) {
    double s = 0.0;
    for_each_interior(*f.grid, [&](int, int, int, std::ptrdiff_t idx) { s += f[idx]; });
    return s;
}

inline bool all_finite_interior(const Field& f, std::ptrdiff_t* bad = nullptr) {
    bool ok = true;
    for_each_interior(*f.grid, [&](int, int, int, std::ptrdiff_t idx) {
        if (ok && !std::isfinite(f[idx])) {
            ok = false;
            if (bad) *bad = idx;
        }
    });
    return ok;
}

// Dirichlet boundary values for the nutrient and drug.  Samples are taken
// at ghost-cell centers; each sample is range-checked against the a-priori
// bound for its variable.
struct BoundaryData {
    std::function<double(double, const std::array<double, 3>&)> c_b;
    std::function<double(double, const std::array<double, 3>&)> q_b;
    double c_inf = 0.0;
    double q_inf = 0.0;

    double sample(FieldTag tag, double t, const std::array<double, 3>& x) const {
        const bool is_c = (tag == FieldTag::c);
        const auto& fn = is_c ? c_b : q_b;
        if (!fn) throw ConfigError(std::string("missing boundary data for field ") + to_string(tag));
        const double val = fn(t, x);
        const double bound = is_c ? c_inf : q_inf;
        if (!(val >= 0.0) || !(val <= bound))
            throw ConfigError(std::string("boundary value for ") + to_string(tag) + " out of [0, " +
                              std::to_string(bound) + "]: " + std::to_string(val));
        return val;
    }
};

namespace detail {

// Visits every ghost cell of the face {axis, side} including the ghost rows
// of other axes, so corner ghosts end up consistent after the axis sweeps.
template <class Fn>
inline void for_each_face_ghost(const Grid& g, int axis, int side, Fn&& fn) {
    const int gpos = (side == 0) ? 0 : g.n_cells[static_cast<size_t>(axis)] + 1;
    std::array<int, 3> idx{0, 0, 0};
    const auto lo = [&](int a) { return a < g.dim ? 0 : 0; };
    const auto hi = [&](int a) { return a < g.dim ? g.alloc[static_cast<size_t>(a)] - 1 : 0; };
    for (int k = lo(2); k <= hi(2); ++k)
        for (int j = lo(1); j <= hi(1); ++j)
            for (int i = lo(0); i <= hi(0); ++i) {
                idx = {i, j, k};
                if (idx[static_cast<size_t>(axis)] != gpos) continue;
                fn(idx);
            }
}

} // namespace detail

// Writes the ghost layer of f according to `kind`.
//   neumann   ghost := adjacent interior value (zero difference across face)
//   periodic  ghost := opposite-face interior value
//   dirichlet ghost := boundary function at the ghost-cell center, time `t`
// Idempotent: a second application reproduces the same ghost values.
inline void fill_ghosts(Field& f, BcKind kind, const BoundaryData* bd = nullptr, double t = 0.0) {
    const Grid& g = *f.grid;
    if (kind == BcKind::dirichlet && bd == nullptr)
        throw ConfigError("fill_ghosts: dirichlet boundary requested without boundary data");
    for (int axis = 0; axis < g.dim; ++axis) {
        const int N = g.n_cells[static_cast<size_t>(axis)];
        for (int side = 0; side < 2; ++side) {
            detail::for_each_face_ghost(g, axis, side, [&](std::array<int, 3> idx) {
                std::array<int, 3> src = idx;
                switch (kind) {
                    case BcKind::neumann:
                        src[static_cast<size_t>(axis)] = (side == 0) ? 1 : N;
                        f.at(idx[0], idx[1], idx[2]) = f.at(src[0], src[1], src[2]);
                        break;
                    case BcKind::periodic:
                        src[static_cast<size_t>(axis)] = (side == 0) ? N : 1;
                        f.at(idx[0], idx[1], idx[2]) = f.at(src[0], src[1], src[2]);
                        break;
                    case BcKind::dirichlet: {
                        const auto x = g.cell_center(idx[0], idx[1], idx[2]);
                        f.at(idx[0], idx[1], idx[2]) = bd->sample(f.tag, t, x);
                        break;
                    }
                }
            });
        }
    }
}

// D_j^+ f_i = (f_{i+e_j} - f_i)/h on interior cells; ghosts of f must be
// filled.  Output ghost entries are zero.
inline Field diff_forward(const Field& f, int axis) {
    const Grid& g = *f.grid;
    Field out(g, f.tag);
    const std::ptrdiff_t s = g.stride[static_cast<size_t>(axis)];
    const double invh = 1.0 / g.h;
    for_each_interior(g, [&](int, int, int, std::ptrdiff_t idx) {
        out[idx] = (f[idx + s] - f[idx]) * invh;
    });
    return out;
}

// D_j^- f_i = D_j^+ f_{i-e_j}.
inline Field diff_backward(const Field& f, int axis) {
    const Grid& g = *f.grid;
    Field out(g, f.tag);
    const std::ptrdiff_t s = g.stride[static_cast<size_t>(axis)];
    const double invh = 1.0 / g.h;
    for_each_interior(g, [&](int, int, int, std::ptrdiff_t idx) {
        out[idx] = (f[idx] - f[idx - s]) * invh;
    });
    return out;
}

// (2d+1)-point discrete Laplacian, interior cells only; ghosts must be filled.
inline Field laplace_h(const Field& f) {
    const Grid& g = *f.grid;
    Field out(g, f.tag);
    const double invh2 = 1.0 / (g.h * g.h);
    for_each_interior(g, [&](int, int, int, std::ptrdiff_t idx) {
        double acc = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const std::ptrdiff_t s = g.stride[static_cast<size_t>(a)];
            acc += f[idx + s] - 2.0 * f[idx] + f[idx - s];
        }
        out[idx] = acc * invh2;
    });
    return out;
}

} // namespace tumorfd
