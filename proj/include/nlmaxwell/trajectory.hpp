#pragma once

// Run outputs shared by both solvers: energy ledger rows and snapshot storage.

#include <cstddef>
#include <string>
#include <vector>

#include "nlmaxwell/grid.hpp"

namespace nlmaxwell {

struct EnergyRecord {
    double t = 0.0;
    double electric = 0.0;     // 1/2 eps ||E||^2
    double magnetic = 0.0;     // 1/2 <H^{n-1/2}, H^{n+1/2}> (leapfrog) or 1/2 ||H||^2
    double dissipation = 0.0;  // int sigma_eff |E|^2
    double work = 0.0;         // int E . F
    double current_norm = 0.0; // ||sigma_eff E|| in L^{(p+2)/(p+1)}

    double stored() const { return electric + magnetic; }
};

/// Fields at one output time. The magnetic field is time-centred (leapfrog
/// runs average H^{n-1/2} and H^{n+1/2}); current = sigma_eff E.
struct Snapshot {
    double t = 0.0;
    LocatedField e{Location::electric, {}};
    LocatedField h{Location::magnetic, {}};
    LocatedField current{Location::electric, {}};
};

struct Trajectory {
    StaggeredGrid grid;
    double epsilon = 0.0;       // 0 for quasi-static runs
    double dt = 0.0;            // 0 when the step was adaptive
    double growth_exponent = 0.0;
    std::vector<Snapshot> snapshots;
};

/// Per-snapshot gap eps ||E_A - E_B||^2 + ||H_A - H_B||^2.
struct GapPoint {
    double t = 0.0;
    double gap = 0.0;
};

/// Throws StructuralError unless both trajectories share grid and snapshot times.
void check_compatible(const Trajectory& a, const Trajectory& b);

/// Also requires equal time steps when both runs are fixed-step.
std::vector<GapPoint> solution_gap(const Trajectory& a, const Trajectory& b, double epsilon);

/// Ledger CSV with columns t, e_electric, e_magnetic, dissipation, work.
void write_ledger_csv(const std::vector<EnergyRecord>& ledger, const std::string& path);

}  // namespace nlmaxwell
