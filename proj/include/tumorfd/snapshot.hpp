// Plain-text field snapshots: a small self-describing header followed by
// interior cell values in storage order (axis 0 fastest), one value per
// line at full round-trip precision.
#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tumorfd/errors.hpp"
#include "tumorfd/grid.hpp"

namespace tumorfd {

struct SnapshotData {
    int format_version = 1;
    std::string field;
    double time = 0.0;
    long step = 0;
    int dim = 0;
    std::array<int, 3> n_cells{1, 1, 1};
    double h = 0.0;
    std::array<double, 3> origin{0.0, 0.0, 0.0};
    std::vector<double> values; // interior cells, axis 0 fastest
};

namespace snapdetail {

inline std::string fmt(double d) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", d);
    return buf;
}

} // namespace snapdetail

inline void write_snapshot(const std::string& path, const Field& f, double time, long step,
                           int format_version = 1) {
    const Grid& g = *f.grid;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open snapshot file for writing: " + path);
    os << "format " << format_version << "\n";
    os << "field " << to_string(f.tag) << "\n";
    os << "time " << snapdetail::fmt(time) << "\n";
    os << "step " << step << "\n";
    os << "dim " << g.dim << "\n";
    os << "n_cells";
    for (int a = 0; a < g.dim; ++a) os << " " << g.n_cells[static_cast<size_t>(a)];
    os << "\n";
    os << "h " << snapdetail::fmt(g.h) << "\n";
    os << "origin";
    for (int a = 0; a < g.dim; ++a) os << " " << snapdetail::fmt(g.origin[static_cast<size_t>(a)]);
    os << "\n";
    os << "data\n";
    for_each_interior(g, [&](int, int, int, std::ptrdiff_t idx) {
        os << snapdetail::fmt(f[idx]) << "\n";
    });
    os.flush();
    if (!os) throw IoError("write failure on snapshot file: " + path);
}

inline SnapshotData read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open snapshot file: " + path);
    SnapshotData s;
    std::string line;
    auto expect = [&](const std::string& key) {
        if (!std::getline(is, line)) throw IoError(path + ": truncated header (missing " + key + ")");
        if (line.rfind(key, 0) != 0) throw IoError(path + ": expected header line '" + key + "', got '" + line + "'");
        return line.size() > key.size() ? line.substr(key.size() + 1) : std::string();
    };
    s.format_version = std::stoi(expect("format"));
    if (s.format_version != 1) throw IoError(path + ": unsupported snapshot format");
    s.field = expect("field");
    s.time = std::stod(expect("time"));
    s.step = std::stol(expect("step"));
    s.dim = std::stoi(expect("dim"));
    if (s.dim < 1 || s.dim > 3) throw IoError(path + ": bad dim");
    {
        std::istringstream ns(expect("n_cells"));
        for (int a = 0; a < s.dim; ++a)
            if (!(ns >> s.n_cells[static_cast<size_t>(a)])) throw IoError(path + ": bad n_cells");
    }
    s.h = std::stod(expect("h"));
    {
        std::istringstream osl(expect("origin"));
        for (int a = 0; a < s.dim; ++a)
            if (!(osl >> s.origin[static_cast<size_t>(a)])) throw IoError(path + ": bad origin");
    }
    if (!std::getline(is, line) || line != "data") throw IoError(path + ": missing data marker");
    long count = 1;
    for (int a = 0; a < s.dim; ++a) count *= s.n_cells[static_cast<size_t>(a)];
    s.values.reserve(static_cast<size_t>(count));
    for (long i = 0; i < count; ++i) {
        if (!std::getline(is, line)) throw IoError(path + ": truncated data section");
        s.values.push_back(std::stod(line));
    }
    return s;
}

// Restores a Field from snapshot data onto a matching grid (ghosts zero).
inline Field to_field(const SnapshotData& s, const Grid& g, FieldTag tag) {
    if (g.dim != s.dim) throw IoError("snapshot/grid dimension mismatch");
    for (int a = 0; a < g.dim; ++a)
        if (g.n_cells[static_cast<size_t>(a)] != s.n_cells[static_cast<size_t>(a)])
            throw IoError("snapshot/grid cell-count mismatch");
    Field f(g, tag);
    size_t pos = 0;
    for_each_interior(g, [&](int, int, int, std::ptrdiff_t idx) { f[idx] = s.values[pos++]; });
    return f;
}

} // namespace tumorfd
