#pragma once

// Leapfrog integration of
//     eps E_t + sigma(|E|) E = curl H + F,    H_t + curl E = 0,
// with PEC walls. H lives at half steps, E at integer steps. The conductive
// term is handled pointwise through the scalar resolvent, so the only step
// restriction is the wave CFL condition dt <= c_s sqrt(eps) h_min / sqrt(d).
//
// Two conduction updates are available. The default evaluates the conductive
// term at the step midpoint Ebar = (E^n + E^{n+1}) / 2:
//     (2 eps / dt) Ebar + sigma(|Ebar|) Ebar = (2 eps / dt) E^n + curl_H H^{n+1/2} + F^{n+1/2},
//     E^{n+1} = 2 Ebar - E^n,
// which makes the staggered energy balance exact:
//     W^{n+1} - W^n = -dt <sigma Ebar, Ebar> + dt <F, Ebar>.
// The backward Euler variant solves the same relation with eps / dt and
// sigma(|E^{n+1}|) E^{n+1}; it is first order in time.
//
// In 3D each edge carries one component and the conductive term uses the
// magnitude of that component.

#include <cstddef>
#include <vector>

#include "nlmaxwell/conductivity.hpp"
#include "nlmaxwell/grid.hpp"
#include "nlmaxwell/presets.hpp"
#include "nlmaxwell/trajectory.hpp"

namespace nlmaxwell {

enum class ConductionUpdate { midpoint, backward_euler };

struct FullSolverConfig {
    double epsilon = 1.0;
    double dt = 0.0;                  // 0 picks the largest admissible step
    double T = 1.0;
    double cfl = 0.9;                 // safety factor c_s in (0, 1]
    double resolve_tolerance = 1e-12; // relative residual accepted from the resolvent
    double snapshot_interval = 0.0;   // 0 keeps only the initial and final states
    std::size_t max_steps = 10'000'000;
    std::size_t max_snapshots = 20'000;
    ConductionUpdate update = ConductionUpdate::midpoint;
    bool track_divergence = false;    // record max ||div_H(H) - div_H(H_0)||_inf
};

/// Largest step allowed by the wave CFL condition.
double cfl_limit(const StaggeredGrid& grid, double epsilon, double cfl);

/// Throws ConfigError for out-of-range fields.
void validate(const StaggeredGrid& grid, const FullSolverConfig& cfg);

/// Time grid of a run: the step divides the snapshot interval, which divides T.
struct TimeGrid {
    double dt = 0.0;
    std::size_t steps = 0;
    std::size_t steps_per_snapshot = 0;
};

/// Resolves cfg.dt (0 = CFL limit) into a step compatible with the snapshot
/// cadence. Throws ConfigError if cfg.dt violates the CFL condition or the
/// step cap is exceeded.
TimeGrid plan_time_grid(const StaggeredGrid& grid, const FullSolverConfig& cfg);

/// Staggers collocated initial data: H^{-1/2} = H_0 + (dt / 2) curl_E(E_0).
FieldState make_leapfrog_state(const StaggeredGrid& grid, const FieldState& init, double dt);

/// Rates over one step, evaluated at the state where the conductive term was resolved.
struct StepDiagnostics {
    double dissipation = 0.0;  // <sigma_eff E, E>
    double work = 0.0;         // <F, E>
    double current_norm = 0.0; // ||sigma_eff E|| in L^{(p+2)/(p+1)}
};

/// One leapfrog step from (E^n, H^{n-1/2}) to (E^{n+1}, H^{n+1/2}) with cfg.dt.
FieldState step_full(const StaggeredGrid& grid, const FieldState& state, const FullSolverConfig& cfg,
                     const ConductivityField& conductivity, const Forcing& forcing,
                     StepDiagnostics* diagnostics = nullptr);

/// Ledger entry for a state. Leapfrog states use the staggered magnetic energy
/// 1/2 <H^{n-1/2}, H^{n+1/2}> (dt required); dissipation uses state.sigma_eff
/// when present and sigma(|E|) otherwise.
EnergyRecord energy_record(const StaggeredGrid& grid, const FieldState& state,
                           const ConductivityField& conductivity, const Forcing& forcing, double epsilon,
                           double dt = 0.0);

struct FullRun {
    Trajectory trajectory;
    /// One row per time level (steps + 1). Row n > 0 carries the dissipation
    /// and work rates of the step that ended at t_n.
    std::vector<EnergyRecord> ledger;
    FieldState final_state;
    TimeGrid time;
    double max_div_drift = 0.0;
};

/// Integrates collocated initial data to cfg.T. Rejects non-solenoidal H_0
/// and electric data violating PEC with ConfigError.
FullRun run_full(const StaggeredGrid& grid, const FieldState& init, const FullSolverConfig& cfg,
                 const ConductivityField& conductivity, const Forcing& forcing);

}  // namespace nlmaxwell
