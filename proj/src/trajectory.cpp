#include "nlmaxwell/trajectory.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>

#include "nlmaxwell/errors.hpp"

namespace nlmaxwell {

void check_compatible(const Trajectory& a, const Trajectory& b) {
    if (!(a.grid == b.grid)) throw StructuralError("trajectories live on different grids");
    if (a.snapshots.size() != b.snapshots.size())
        throw StructuralError("trajectories have different snapshot counts (" +
                              std::to_string(a.snapshots.size()) + " vs " + std::to_string(b.snapshots.size()) +
                              ")");
    double t_end = 0.0;
    for (const Snapshot& s : a.snapshots) t_end = std::max(t_end, std::abs(s.t));
    const double tol = 1e-12 * std::max(1.0, t_end);
    for (std::size_t k = 0; k < a.snapshots.size(); ++k)
        if (std::abs(a.snapshots[k].t - b.snapshots[k].t) > tol)
            throw StructuralError("snapshot " + std::to_string(k) + " is taken at different times");
}

std::vector<GapPoint> solution_gap(const Trajectory& a, const Trajectory& b, double epsilon) {
    if (!(epsilon >= 0.0)) throw ParameterError("solution_gap: epsilon must be >= 0");
    check_compatible(a, b);
    if (a.dt > 0.0 && b.dt > 0.0 && a.dt != b.dt) throw StructuralError("solution_gap: runs use different time steps");
    std::vector<GapPoint> out;
    out.reserve(a.snapshots.size());
    LocatedField de{Location::electric, {}};
    LocatedField dh{Location::magnetic, {}};
    for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
        const Snapshot& sa = a.snapshots[k];
        const Snapshot& sb = b.snapshots[k];
        de.values.resize(sa.e.values.size());
        dh.values.resize(sa.h.values.size());
        for (std::size_t i = 0; i < de.values.size(); ++i) de.values[i] = sa.e.values[i] - sb.e.values[i];
        for (std::size_t i = 0; i < dh.values.size(); ++i) dh.values[i] = sa.h.values[i] - sb.h.values[i];
        double gap = inner_product(a.grid, dh, dh);
        if (epsilon > 0.0) gap += epsilon * inner_product(a.grid, de, de);
        out.push_back({sa.t, gap});
    }
    return out;
}

void write_ledger_csv(const std::vector<EnergyRecord>& ledger, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    os << "t,e_electric,e_magnetic,dissipation,work\n";
    os << std::setprecision(17);
    for (const EnergyRecord& r : ledger)
        os << r.t << ',' << r.electric << ',' << r.magnetic << ',' << r.dissipation << ',' << r.work << '\n';
    if (!os) throw Error("write failed: " + path);
}

}  // namespace nlmaxwell
