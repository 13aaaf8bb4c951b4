#pragma once

// Quasi-static limit (no displacement current):
//     sigma(|E|) E = curl H + F,    H_t + curl E = 0.
// E is eliminated pointwise through the inverse of s -> sigma(s) s and H is
// advanced with explicit Euler steps. The step adapts to the observed
// conductivity so that dt <= c_d h_min^2 sigma_min / (2 d).

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nlmaxwell/conductivity.hpp"
#include "nlmaxwell/grid.hpp"
#include "nlmaxwell/presets.hpp"
#include "nlmaxwell/trajectory.hpp"

namespace nlmaxwell {

struct QsSolverConfig {
    double dt = 0.0;                 // upper bound on the step; 0 = stability limit only
    double T = 1.0;
    double delta = kDefaultResistivityFloor;  // |G| is floored at delta before inversion
    double tau_gamma = 1e-3;         // interface tolerance
    double cd = 0.5;                 // diffusion safety factor in (0, 1]
    double snapshot_interval = 0.0;  // 0 keeps only the initial and final states
    std::size_t max_steps = 50'000'000;
    std::size_t max_snapshots = 20'000;
    bool track_divergence = false;
};

void validate(const QsSolverConfig& cfg);

struct QsField {
    LocatedField e{Location::electric, {}};
    std::vector<double> sigma_eff;
};

/// E from G = curl_H(H) + F: |E| = s with s sigma_eff = max(|G|, delta), E parallel to G,
/// E = 0 where G = 0. Boundary tangential samples are zero.
QsField qs_electric_field(const StaggeredGrid& grid, const LocatedField& h, const LocatedField& f,
                          const ConductivityField& conductivity, double delta);

/// Explicit diffusion limit c_d h_min^2 min(sigma_eff) / (2 d) over free samples.
double qs_stable_dt(const StaggeredGrid& grid, const std::vector<double>& sigma_eff, double cd);

/// One explicit step H^{n+1} = H^n - dt curl_E(E(H^n)). The step is
/// min(cfg.dt, stability limit, t_limit - t). The returned state stores the E
/// used for the step, so its layout is e_one_step_behind. Throws StiffnessError
/// when the step falls below 1e-12 T.
FieldState step_qs(const StaggeredGrid& grid, const FieldState& state, const QsSolverConfig& cfg,
                   const ConductivityField& conductivity, const Forcing& forcing,
                   double t_limit = std::numeric_limits<double>::infinity());

/// Free electric samples with ||E| - level| <= tau, ascending.
std::vector<std::size_t> interface_cells(const StaggeredGrid& grid, const LocatedField& e, double level, double tau);

/// Jump level tracked as the interface, if the conductivity has one.
std::optional<double> interface_level(const ConductivityField& conductivity);

struct InterfaceRecord {
    double t = 0.0;
    std::vector<std::size_t> cells;
};

struct QsRun {
    Trajectory trajectory;
    /// One row per time level; electric energy is 0.
    std::vector<EnergyRecord> ledger;
    std::vector<InterfaceRecord> interface;
    FieldState final_state;
    std::size_t steps = 0;
    double min_dt = 0.0;
    double max_div_drift = 0.0;
};

/// Integrates H_0 to cfg.T. Every graph must admit the inverse
/// (DegeneracyError otherwise) and be monotone (ConfigError).
QsRun run_qs(const StaggeredGrid& grid, const LocatedField& h0, const QsSolverConfig& cfg,
             const ConductivityField& conductivity, const Forcing& forcing);

/// Interface CSV with columns t, cells (space-separated sample indices), count.
void write_interface_csv(const std::vector<InterfaceRecord>& records, const std::string& path);

}  // namespace nlmaxwell
