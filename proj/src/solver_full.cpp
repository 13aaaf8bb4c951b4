#include "nlmaxwell/solver_full.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "checks.hpp"
#include "nlmaxwell/errors.hpp"

namespace nlmaxwell {

double cfl_limit(const StaggeredGrid& grid, double epsilon, double cfl) {
    return cfl * std::sqrt(epsilon) * grid.min_spacing() / std::sqrt(static_cast<double>(grid.dim()));
}

void validate(const StaggeredGrid& grid, const FullSolverConfig& cfg) {
    (void)grid;
    if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon)) throw ConfigError("full solver: epsilon must be > 0");
    if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) throw ConfigError("full solver: T must be > 0");
    if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) throw ConfigError("full solver: CFL factor must lie in (0, 1]");
    if (!(cfg.dt >= 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("full solver: dt must be >= 0");
    if (!(cfg.snapshot_interval >= 0.0)) throw ConfigError("full solver: snapshot interval must be >= 0");
    if (!(cfg.resolve_tolerance > 0.0)) throw ConfigError("full solver: resolve tolerance must be > 0");
}

TimeGrid plan_time_grid(const StaggeredGrid& grid, const FullSolverConfig& cfg) {
    validate(grid, cfg);
    const double limit = cfl_limit(grid, cfg.epsilon, cfg.cfl);
    if (cfg.dt > limit * (1.0 + 1e-12))
        throw ConfigError("full solver: dt = " + std::to_string(cfg.dt) + " violates the CFL bound " +
                          std::to_string(limit));
    const double dt_max = cfg.dt > 0.0 ? cfg.dt : limit;

    std::size_t n_snap = 1;
    if (cfg.snapshot_interval > 0.0) {
        const double ratio = cfg.T / cfg.snapshot_interval;
        if (ratio > static_cast<double>(cfg.max_snapshots))
            throw ConfigError("full solver: snapshot cadence exceeds the snapshot budget");
        n_snap = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(ratio)));
    }
    const double interval = cfg.T / static_cast<double>(n_snap);
    const double per = std::ceil(interval / dt_max * (1.0 - 1e-12));
    if (!(per * static_cast<double>(n_snap) <= static_cast<double>(cfg.max_steps)))
        throw ConfigError("full solver: step count exceeds the configured cap");
    TimeGrid tg;
    tg.steps_per_snapshot = std::max<std::size_t>(1, static_cast<std::size_t>(per));
    tg.steps = tg.steps_per_snapshot * n_snap;
    tg.dt = interval / static_cast<double>(tg.steps_per_snapshot);
    return tg;
}

FieldState make_leapfrog_state(const StaggeredGrid& grid, const FieldState& init, double dt) {
    init.validate(grid);
    if (init.layout != FieldState::Layout::collocated)
        throw StructuralError("make_leapfrog_state: initial data must be collocated");
    FieldState s = init;
    const LocatedField c = curl_E(grid, init.e);
    for (std::size_t i = 0; i < s.h.values.size(); ++i) s.h.values[i] += 0.5 * dt * c.values[i];
    s.layout = FieldState::Layout::h_half_step_behind;
    return s;
}

namespace {

double current_exponent(const ConductivityField& conductivity) {
    const double p = conductivity.growth_exponent();
    return (p + 2.0) / (p + 1.0);
}

void check_cfl(const StaggeredGrid& grid, const FullSolverConfig& cfg) {
    validate(grid, cfg);
    if (!(cfg.dt > 0.0)) throw ConfigError("full solver: step requires dt > 0");
    if (cfg.dt > cfl_limit(grid, cfg.epsilon, cfg.cfl) * (1.0 + 1e-12))
        throw ConfigError("full solver: dt violates the CFL bound");
}

// Conduction update given H^{n+1/2}. Writes E^{n+1} and sigma_eff.
void electric_update(const StaggeredGrid& grid, const FullSolverConfig& cfg, const ConductivityField& conductivity,
                     const Forcing& forcing, double t, const LocatedField& e_n, const LocatedField& h_half,
                     LocatedField& e_next, std::vector<double>& sigma_eff, StepDiagnostics* diag) {
    const LocatedField c = curl_H(grid, h_half);
    const LocatedField f = forcing.at(grid, t + 0.5 * cfg.dt);
    const bool midpoint = cfg.update == ConductionUpdate::midpoint;
    const double lambda = (midpoint ? 2.0 : 1.0) * cfg.epsilon / cfg.dt;
    const auto interior = grid.electric_interior();
    const auto w = grid.weights(Location::electric);
    const std::size_t n = e_n.values.size();

    e_next = LocatedField::zeros(grid, Location::electric);
    sigma_eff.assign(n, 0.0);
    std::vector<double> current(diag ? n : 0, 0.0);
    double dissipation = 0.0;
    double work = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const ConductivityGraph& g = conductivity.at(i);
        if (!interior[i]) {
            sigma_eff[i] = sigma_value(g, 0.0);
            continue;
        }
        const double rv = lambda * e_n.values[i] + c.values[i] + f.values[i];
        const double r = std::abs(rv);
        detail::require_finite(r, "full solver update");
        double ebar = 0.0;
        if (r == 0.0) {
            sigma_eff[i] = sigma_value(g, 0.0);
        } else {
            const ResolveResult res = resolve(g, lambda, r);
            if (std::abs((lambda + res.sigma_eff) * res.s - r) > cfg.resolve_tolerance * std::max(1.0, r))
                throw ConvergenceError("full solver: resolvent residual above tolerance at sample " +
                                       std::to_string(i));
            sigma_eff[i] = res.sigma_eff;
            ebar = res.s / r * rv;
        }
        e_next.values[i] = midpoint ? 2.0 * ebar - e_n.values[i] : ebar;
        if (diag) {
            const double j = sigma_eff[i] * ebar;
            dissipation += w[i] * j * ebar;
            work += w[i] * f.values[i] * ebar;
            current[i] = j;
        }
    }
    if (diag) {
        diag->dissipation = dissipation;
        diag->work = work;
        diag->current_norm = lq_norm(current, w, current_exponent(conductivity));
    }
}

}  // namespace

FieldState step_full(const StaggeredGrid& grid, const FieldState& state, const FullSolverConfig& cfg,
                     const ConductivityField& conductivity, const Forcing& forcing, StepDiagnostics* diagnostics) {
    check_cfl(grid, cfg);
    state.validate(grid);
    if (state.layout != FieldState::Layout::h_half_step_behind)
        throw StructuralError("step_full: state must hold H half a step behind E");
    conductivity.check_size(grid.size(Location::electric));

    FieldState next;
    next.layout = FieldState::Layout::h_half_step_behind;
    next.h = curl_E(grid, state.e);
    for (std::size_t i = 0; i < next.h.values.size(); ++i)
        next.h.values[i] = state.h.values[i] - cfg.dt * next.h.values[i];
    electric_update(grid, cfg, conductivity, forcing, state.t, state.e, next.h, next.e, next.sigma_eff, diagnostics);
    next.t = state.t + cfg.dt;
    return next;
}

EnergyRecord energy_record(const StaggeredGrid& grid, const FieldState& state, const ConductivityField& conductivity,
                           const Forcing& forcing, double epsilon, double dt) {
    state.validate(grid);
    conductivity.check_size(grid.size(Location::electric));
    EnergyRecord rec;
    rec.t = state.t;
    rec.electric = 0.5 * epsilon * inner_product(grid, state.e, state.e);
    if (state.layout == FieldState::Layout::h_half_step_behind) {
        if (!(dt > 0.0)) throw ParameterError("energy_record: staggered state needs dt > 0");
        LocatedField ahead = curl_E(grid, state.e);
        for (std::size_t i = 0; i < ahead.values.size(); ++i)
            ahead.values[i] = state.h.values[i] - dt * ahead.values[i];
        rec.magnetic = 0.5 * inner_product(grid, state.h, ahead);
    } else {
        rec.magnetic = 0.5 * inner_product(grid, state.h, state.h);
    }
    const auto w = grid.weights(Location::electric);
    const bool have_sigma = state.sigma_eff.size() == state.e.values.size();
    std::vector<double> current(state.e.values.size());
    for (std::size_t i = 0; i < current.size(); ++i) {
        const double e = state.e.values[i];
        const double sigma = have_sigma ? state.sigma_eff[i] : sigma_value(conductivity.at(i), std::abs(e));
        current[i] = sigma * e;
        rec.dissipation += w[i] * current[i] * e;
    }
    rec.work = inner_product(grid, state.e, forcing.at(grid, state.t));
    rec.current_norm = lq_norm(current, w, current_exponent(conductivity));
    return rec;
}

FullRun run_full(const StaggeredGrid& grid, const FieldState& init, const FullSolverConfig& cfg,
                 const ConductivityField& conductivity, const Forcing& forcing) {
    init.validate(grid);
    if (init.layout != FieldState::Layout::collocated)
        throw StructuralError("run_full: initial data must be collocated");
    conductivity.check_size(grid.size(Location::electric));
    for (const ConductivityGraph& g : conductivity.graphs())
        if (!is_monotone(g)) throw ConfigError("run_full: conductivity " + describe(g) + " is not monotone");
    detail::require_pec(grid, init.e, "run_full");
    detail::require_solenoidal(grid, init.h, "run_full");

    FullRun run;
    run.time = plan_time_grid(grid, cfg);
    FullSolverConfig c = cfg;
    c.dt = run.time.dt;
    const double dt = c.dt;

    run.trajectory.grid = grid;
    run.trajectory.epsilon = c.epsilon;
    run.trajectory.dt = dt;
    run.trajectory.growth_exponent = conductivity.growth_exponent();
    run.ledger.reserve(run.time.steps + 1);

    const LocatedField div0 = c.track_divergence ? div_H(grid, init.h) : LocatedField{};
    const auto w = grid.weights(Location::electric);
    const double q_current = current_exponent(conductivity);

    FieldState state = make_leapfrog_state(grid, init, dt);
    // h_ahead holds H^{n+1/2} for the current level n.
    LocatedField h_ahead = curl_E(grid, state.e);
    for (std::size_t i = 0; i < h_ahead.values.size(); ++i)
        h_ahead.values[i] = state.h.values[i] - dt * h_ahead.values[i];

    auto snapshot = [&](const FieldState& s, const LocatedField& ahead) {
        Snapshot snap;
        snap.t = s.t;
        snap.e = s.e;
        snap.h = ahead;
        for (std::size_t i = 0; i < ahead.values.size(); ++i)
            snap.h.values[i] = 0.5 * (s.h.values[i] + ahead.values[i]);
        snap.current = s.e;
        for (std::size_t i = 0; i < s.e.values.size(); ++i)
            snap.current.values[i] = sigma_value(conductivity.at(i), std::abs(s.e.values[i])) * s.e.values[i];
        run.trajectory.snapshots.push_back(std::move(snap));
    };
    auto track = [&](const LocatedField& h) {
        if (!c.track_divergence) return;
        const LocatedField d = div_H(grid, h);
        for (std::size_t i = 0; i < d.values.size(); ++i)
            run.max_div_drift = std::max(run.max_div_drift, std::abs(d.values[i] - div0.values[i]));
    };

    {
        EnergyRecord rec;
        rec.t = state.t;
        rec.electric = 0.5 * c.epsilon * inner_product(grid, state.e, state.e);
        rec.magnetic = 0.5 * inner_product(grid, state.h, h_ahead);
        std::vector<double> current(state.e.values.size());
        for (std::size_t i = 0; i < current.size(); ++i) {
            current[i] = sigma_value(conductivity.at(i), std::abs(state.e.values[i])) * state.e.values[i];
            rec.dissipation += w[i] * current[i] * state.e.values[i];
        }
        rec.work = inner_product(grid, state.e, forcing.at(grid, state.t));
        rec.current_norm = lq_norm(current, w, q_current);
        run.ledger.push_back(rec);
    }
    snapshot(state, h_ahead);
    track(h_ahead);

    for (std::size_t n = 0; n < run.time.steps; ++n) {
        FieldState next;
        next.layout = FieldState::Layout::h_half_step_behind;
        StepDiagnostics diag;
        electric_update(grid, c, conductivity, forcing, state.t, state.e, h_ahead, next.e, next.sigma_eff, &diag);
        next.h = std::move(h_ahead);
        next.t = static_cast<double>(n + 1) * dt;

        h_ahead = curl_E(grid, next.e);
        for (std::size_t i = 0; i < h_ahead.values.size(); ++i)
            h_ahead.values[i] = next.h.values[i] - dt * h_ahead.values[i];

        EnergyRecord rec;
        rec.t = next.t;
        rec.electric = 0.5 * c.epsilon * inner_product(grid, next.e, next.e);
        rec.magnetic = 0.5 * inner_product(grid, next.h, h_ahead);
        rec.dissipation = diag.dissipation;
        rec.work = diag.work;
        rec.current_norm = diag.current_norm;
        detail::require_finite(rec.electric + rec.magnetic, "full solver energy");
        run.ledger.push_back(rec);

        state = std::move(next);
        track(h_ahead);
        if ((n + 1) % run.time.steps_per_snapshot == 0) snapshot(state, h_ahead);
    }
    run.final_state = std::move(state);
    return run;
}

}  // namespace nlmaxwell
