#pragma once

// Shared fixtures for the test binaries: seeded random fields and stencil
// oracles that locate neighbours by physical position rather than by index.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "nlmaxwell/grid.hpp"

namespace testutil {

using nlmaxwell::ComponentBlock;
using nlmaxwell::LocatedField;
using nlmaxwell::Location;
using nlmaxwell::StaggeredGrid;

inline std::string read_text(const std::string& path) {
    std::ifstream is(path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

inline std::string source_path(const std::string& rel) { return std::string(NLMAXWELL_SOURCE_DIR) + "/" + rel; }

inline LocatedField random_field(const StaggeredGrid& grid, Location loc, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    LocatedField f = LocatedField::zeros(grid, loc);
    for (double& v : f.values) v = u(rng);
    if (loc == Location::electric) nlmaxwell::apply_pec(grid, f.values);
    return f;
}

/// Maps (component, doubled lattice coordinates) to the flat sample index.
class PositionIndex {
public:
    PositionIndex(const StaggeredGrid& grid, Location loc) : grid_(grid) {
        for (const ComponentBlock& b : grid.blocks(loc))
            for (std::size_t i = 0; i < b.extent[0]; ++i)
                for (std::size_t j = 0; j < b.extent[1]; ++j)
                    for (std::size_t k = 0; k < b.extent[2]; ++k)
                        map_[key(b.component, grid.position(b, i, j, k))] = b.index(i, j, k);
    }

    /// Sample of component c at position p, or nullptr when absent.
    const double* find(const LocatedField& f, int c, std::array<double, 3> p) const {
        const auto it = map_.find(key(c, p));
        return it == map_.end() ? nullptr : &f.values[it->second];
    }

private:
    std::array<long, 4> key(int c, const std::array<double, 3>& p) const {
        std::array<long, 4> k{c, 0, 0, 0};
        for (int a = 0; a < grid_.dim(); ++a)
            k[static_cast<std::size_t>(a) + 1] = std::lround(2.0 * (p[a] - grid_.extent(a).lower) / grid_.spacing(a));
        return k;
    }

    const StaggeredGrid& grid_;
    std::map<std::array<long, 4>, std::size_t> map_;
};

/// Central difference of component c of `f` along axis a at position p,
/// using the samples half a cell away on either side. Zero along unused axes.
inline double diff(const StaggeredGrid& grid, const PositionIndex& idx, const LocatedField& f, int c, int a,
                   std::array<double, 3> p) {
    if (a >= grid.dim()) return 0.0;
    const double h = grid.spacing(a);
    std::array<double, 3> lo = p, hi = p;
    lo[static_cast<std::size_t>(a)] -= 0.5 * h;
    hi[static_cast<std::size_t>(a)] += 0.5 * h;
    const double* fl = idx.find(f, c, lo);
    const double* fh = idx.find(f, c, hi);
    if (!fl || !fh) return std::nan("");
    return (*fh - *fl) / h;
}

inline bool present(const StaggeredGrid& grid, Location loc, int component) {
    for (const ComponentBlock& b : grid.blocks(loc))
        if (b.component == component) return true;
    return false;
}

/// curl of `in` evaluated at every sample of location `out_loc`; samples with
/// keep[n] == 0 are left at zero.
inline LocatedField curl_oracle(const StaggeredGrid& grid, const LocatedField& in, Location out_loc,
                                const unsigned char* keep = nullptr) {
    const PositionIndex idx(grid, in.location);
    LocatedField out = LocatedField::zeros(grid, out_loc);
    for (const ComponentBlock& b : grid.blocks(out_loc))
        for (std::size_t i = 0; i < b.extent[0]; ++i)
            for (std::size_t j = 0; j < b.extent[1]; ++j)
                for (std::size_t k = 0; k < b.extent[2]; ++k) {
                    const std::size_t n = b.index(i, j, k);
                    if (keep && !keep[n]) continue;
                    const auto p = grid.position(b, i, j, k);
                    const int c = b.component, a1 = (c + 1) % 3, a2 = (c + 2) % 3;
                    // (curl F)_c = d_{a1} F_{a2} - d_{a2} F_{a1}; components absent from the grid count as zero.
                    const double t1 = present(grid, in.location, a2) ? diff(grid, idx, in, a2, a1, p) : 0.0;
                    const double t2 = present(grid, in.location, a1) ? diff(grid, idx, in, a1, a2, p) : 0.0;
                    out.values[n] = t1 - t2;
                }
    return out;
}

/// Divergence at cell centres by position lookup.
inline LocatedField div_oracle(const StaggeredGrid& grid, const LocatedField& h) {
    const PositionIndex idx(grid, Location::magnetic);
    LocatedField out = LocatedField::zeros(grid, Location::cell);
    for (const ComponentBlock& b : grid.blocks(Location::cell))
        for (std::size_t i = 0; i < b.extent[0]; ++i)
            for (std::size_t j = 0; j < b.extent[1]; ++j)
                for (std::size_t k = 0; k < b.extent[2]; ++k) {
                    const auto p = grid.position(b, i, j, k);
                    double v = 0.0;
                    for (int a = 0; a < grid.dim(); ++a) v += diff(grid, idx, h, a, a, p);
                    out.values[b.index(i, j, k)] = v;
                }
    return out;
}

inline double max_abs_diff(const LocatedField& a, const LocatedField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double d = std::abs(a.values[i] - b.values[i]);
        if (std::isnan(d)) return d;
        m = std::max(m, d);
    }
    return m;
}

inline double max_abs(const LocatedField& a) {
    double m = 0.0;
    for (double v : a.values) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace testutil
