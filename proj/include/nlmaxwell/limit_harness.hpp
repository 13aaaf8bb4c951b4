#pragma once

// Experiments built on both solvers: space-time norms between trajectories,
// the eps -> 0 sweep against the quasi-static run, and manufactured-solution
// refinement studies.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlmaxwell/conductivity.hpp"
#include "nlmaxwell/grid.hpp"
#include "nlmaxwell/presets.hpp"
#include "nlmaxwell/solver_full.hpp"
#include "nlmaxwell/solver_qs.hpp"
#include "nlmaxwell/trajectory.hpp"

namespace nlmaxwell {

enum class FieldSelector { electric, magnetic, current };

std::string to_string(FieldSelector selector);

/// Spatial lq_norm of the difference at each snapshot, then a time norm over
/// the snapshot times: trapezoid quadrature of the q_time power, or the max
/// for q_time = kInfinityNorm. Throws StructuralError for mismatched snapshots.
double spacetime_norm(const Trajectory& a, const Trajectory& b, FieldSelector selector, double q_space,
                      double q_time);

/// Norm of a single trajectory (difference against zero).
double spacetime_norm(const Trajectory& a, FieldSelector selector, double q_space, double q_time);

/// Everything both solvers need to run the same physical problem.
struct Scenario {
    std::string name;
    StaggeredGrid grid;
    ConductivityField conductivity;
    FieldState init;            // collocated E_0, H_0
    Forcing forcing;
    double T = 0.5;
    double snapshot_interval = 0.0;
    double cfl = 0.9;
    double delta = kDefaultResistivityFloor;
    double tau_gamma = 1e-3;
    double cd = 0.5;
    double qs_dt = 0.0;
    /// Full runs start from E_0 = E_qs(H_0) instead of init.e.
    bool well_prepared = true;
    std::uint64_t seed = 0;
    /// Short description of the material, initial data and forcing presets.
    std::string data_description;

    QsSolverConfig qs_config() const;
    FullSolverConfig full_config(double epsilon) const;
    /// Grid, graphs, step policy and seed in one line.
    std::string fingerprint() const;
};

struct SweepRow {
    double epsilon = 0.0;
    double e_gap = 0.0;            // ||E_eps - E_qs|| in L^2(Q_T)
    double h_gap = 0.0;            // ||H_eps - H_qs|| in L^inf(0,T; L^2)
    double dissipation_gap = 0.0;  // ||J_eps - J_qs|| in L^{(p+2)/(p+1)}(Q_T)
    double dt = 0.0;
    std::size_t steps = 0;
    double wall_time = 0.0;        // seconds
};

struct SweepFailure {
    std::string kind;     // "config", "degeneracy", "solver", "structural", "other"
    std::string message;
};

struct SweepReport {
    std::string scenario;
    std::string fingerprint;
    std::vector<SweepRow> rows;    // decreasing epsilon
    std::size_t qs_steps = 0;
    double qs_min_dt = 0.0;
    double qs_wall_time = 0.0;
    /// Least-squares slope of log h_gap against log eps; unset with fewer than
    /// two rows or a non-positive gap.
    std::optional<double> slope;
    double slope_residual = 0.0;   // RMS residual of the fit
    bool monotone = false;         // h_gap non-increasing in eps within 5%
    bool reduced = false;          // h_gap(smallest eps) <= 0.2 h_gap(largest eps)
    bool confirming = false;
    bool complete = false;
    std::optional<SweepFailure> failure;
};

/// One quasi-static run and one full run per epsilon, at most `threads` runs
/// at a time. eps_list must be strictly decreasing and positive (ParameterError).
/// A failed member run leaves complete = false and records the failure.
SweepReport run_sweep(const Scenario& scenario, std::span<const double> eps_list, unsigned threads = 1);

/// Confirmation logic applied to a list of rows (sorted by decreasing eps).
void assess(SweepReport& report);

/// Wall-time fields are left out when include_wall_time is false so that
/// repeated runs produce identical bytes.
std::string sweep_report_json(const SweepReport& report, bool include_wall_time = true);
std::string sweep_report_csv(const SweepReport& report, bool include_wall_time = true);

struct MmsConfig {
    double sigma0 = 1.0;
    double epsilon = 1.0;
    double amplitude = 1.0;            // 0 gives the zero manufactured solution
    std::size_t n_coarse = 16;         // h_0 = 1 / n_coarse on the unit square
    std::size_t levels = 3;
    double full_T = 0.5;
    double full_cfl = 0.5;
    std::size_t qs_cells = 32;         // fixed grid of the temporal study
    double qs_T = 0.1;
    double qs_dt0 = 1e-4;              // coarsest step, halved per level
    double qs_omega = 2.0 * 3.141592653589793;
    bool delta_study = true;
    std::vector<double> deltas{1e-4, 1e-3, 1e-2};
    double delta_reference = 1e-5;
    bool operator==(const MmsConfig&) const = default;
};

struct MmsRow {
    double h = 0.0;
    double dt = 0.0;
    std::size_t steps = 0;
    double error = 0.0;
    std::optional<double> order;       // log2(previous error / error)
};

struct MmsSeries {
    std::string name;
    std::vector<MmsRow> rows;
    std::optional<double> min_order;
};

struct DeltaRow {
    double delta = 0.0;
    double h_difference = 0.0;         // ||H_delta(T) - H_reference(T)||
    std::size_t steps = 0;
};

struct MmsReport {
    MmsSeries full_spatial;
    MmsSeries qs_temporal;
    std::vector<DeltaRow> delta_sensitivity;
    double delta_reference = 0.0;
};

/// Full solver: standing mode E = cos(w t) phi, H = -(sin(w t) / w) curl phi on
/// [0,1]^2 with F = sigma0 E, refined in h at fixed CFL ratio; error
/// sqrt(eps ||dE||^2 + ||dH||^2) at T.
/// Quasi-static solver: H = cos(w t) curl_E psi for the discrete eigenmode psi,
/// forcing chosen so the spatial discretization is exact; refined in dt.
MmsReport mms_study(const MmsConfig& cfg);

std::string mms_report_json(const MmsReport& report);
std::string mms_report_csv(const MmsReport& report);

}  // namespace nlmaxwell
