#include "nlmaxwell/solver_qs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "checks.hpp"
#include "nlmaxwell/errors.hpp"

namespace nlmaxwell {

void validate(const QsSolverConfig& cfg) {
    if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) throw ConfigError("qs solver: T must be > 0");
    if (!(cfg.dt >= 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("qs solver: dt must be >= 0");
    if (!(cfg.delta > 0.0) || !std::isfinite(cfg.delta)) throw ConfigError("qs solver: delta must be > 0");
    if (!(cfg.tau_gamma > 0.0)) throw ConfigError("qs solver: interface tolerance must be > 0");
    if (!(cfg.cd > 0.0 && cfg.cd <= 1.0)) throw ConfigError("qs solver: diffusion factor must lie in (0, 1]");
    if (!(cfg.snapshot_interval >= 0.0)) throw ConfigError("qs solver: snapshot interval must be >= 0");
}

QsField qs_electric_field(const StaggeredGrid& grid, const LocatedField& h, const LocatedField& f,
                          const ConductivityField& conductivity, double delta) {
    if (!(delta > 0.0)) throw ParameterError("qs_electric_field: delta must be > 0");
    conductivity.check_size(grid.size(Location::electric));
    const LocatedField c = curl_H(grid, h);
    if (f.location != Location::electric || f.values.size() != c.values.size())
        throw StructuralError("qs_electric_field: forcing does not match the electric samples");
    const auto interior = grid.electric_interior();

    QsField out;
    out.e = LocatedField::zeros(grid, Location::electric);
    out.sigma_eff.assign(c.values.size(), 0.0);
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        const double gv = interior[i] ? c.values[i] + f.values[i] : 0.0;
        const double r = std::abs(gv);
        detail::require_finite(r, "quasi-static field");
        const ResolveResult res = resolve(conductivity.at(i), 0.0, std::max(r, delta));
        out.sigma_eff[i] = res.sigma_eff;
        if (r > 0.0) out.e.values[i] = gv / res.sigma_eff;
    }
    return out;
}

double qs_stable_dt(const StaggeredGrid& grid, const std::vector<double>& sigma_eff, double cd) {
    const auto interior = grid.electric_interior();
    double sigma_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sigma_eff.size(); ++i)
        if (interior[i]) sigma_min = std::min(sigma_min, sigma_eff[i]);
    const double h = grid.min_spacing();
    return cd * h * h * sigma_min / (2.0 * static_cast<double>(grid.dim()));
}

namespace {

struct Advance {
    QsField field;
    LocatedField f{Location::electric, {}};
    double dt = 0.0;
};

// E(H^n), the admissible step and H^{n+1}, written into h_next.
Advance advance(const StaggeredGrid& grid, const LocatedField& h, double t, const QsSolverConfig& cfg,
                const ConductivityField& conductivity, const Forcing& forcing, double t_limit,
                LocatedField& h_next) {
    Advance a;
    a.f = forcing.at(grid, t);
    a.field = qs_electric_field(grid, h, a.f, conductivity, cfg.delta);
    double dt = qs_stable_dt(grid, a.field.sigma_eff, cfg.cd);
    if (cfg.dt > 0.0) dt = std::min(dt, cfg.dt);
    if (!(dt >= 1e-12 * cfg.T))
        throw StiffnessError("qs solver: step " + std::to_string(dt) + " fell below 1e-12 T at t = " +
                             std::to_string(t));
    if (!(t_limit > t)) throw ParameterError("step_qs: time limit must lie ahead of the state");
    a.dt = std::min(dt, t_limit - t);

    h_next = curl_E(grid, a.field.e);
    for (std::size_t i = 0; i < h_next.values.size(); ++i) h_next.values[i] = h.values[i] - a.dt * h_next.values[i];
    return a;
}

EnergyRecord record_of(const StaggeredGrid& grid, double t, const LocatedField& h, const QsField& field,
                       const LocatedField& f, double q_current) {
    EnergyRecord rec;
    rec.t = t;
    rec.magnetic = 0.5 * inner_product(grid, h, h);
    const auto w = grid.weights(Location::electric);
    std::vector<double> current(field.e.values.size());
    for (std::size_t i = 0; i < current.size(); ++i) {
        current[i] = field.sigma_eff[i] * field.e.values[i];
        rec.dissipation += w[i] * current[i] * field.e.values[i];
    }
    rec.work = inner_product(grid, field.e, f);
    rec.current_norm = lq_norm(current, w, q_current);
    return rec;
}

}  // namespace

FieldState step_qs(const StaggeredGrid& grid, const FieldState& state, const QsSolverConfig& cfg,
                   const ConductivityField& conductivity, const Forcing& forcing, double t_limit) {
    validate(cfg);
    state.validate(grid);
    FieldState next;
    Advance a = advance(grid, state.h, state.t, cfg, conductivity, forcing, t_limit, next.h);
    next.e = std::move(a.field.e);
    next.sigma_eff = std::move(a.field.sigma_eff);
    next.t = state.t + a.dt;
    next.layout = FieldState::Layout::e_one_step_behind;
    return next;
}

std::vector<std::size_t> interface_cells(const StaggeredGrid& grid, const LocatedField& e, double level, double tau) {
    if (!(tau > 0.0)) throw ParameterError("interface_cells: tolerance must be > 0");
    if (e.location != Location::electric || e.values.size() != grid.size(Location::electric))
        throw StructuralError("interface_cells: expected electric samples of the grid");
    const auto interior = grid.electric_interior();
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < e.values.size(); ++i)
        if (interior[i] && std::abs(std::abs(e.values[i]) - level) <= tau) out.push_back(i);
    return out;
}

std::optional<double> interface_level(const ConductivityField& conductivity) {
    for (const ConductivityGraph& g : conductivity.graphs()) {
        if (const auto* sm = std::get_if<Smoothed>(&g.shape()); sm && sm->jump) return sm->jump;
        const auto jumps = jump_points(g);
        if (!jumps.empty()) return jumps.front();
    }
    return std::nullopt;
}

QsRun run_qs(const StaggeredGrid& grid, const LocatedField& h0, const QsSolverConfig& cfg,
             const ConductivityField& conductivity, const Forcing& forcing) {
    validate(cfg);
    if (h0.location != Location::magnetic || h0.values.size() != grid.size(Location::magnetic))
        throw StructuralError("run_qs: initial field must hold the magnetic samples of the grid");
    conductivity.check_size(grid.size(Location::electric));
    for (const ConductivityGraph& g : conductivity.graphs()) {
        require_invertible(g);
        if (!is_monotone(g)) throw ConfigError("run_qs: conductivity " + describe(g) + " is not monotone");
    }
    detail::require_solenoidal(grid, h0, "run_qs");

    std::size_t n_snap = 1;
    if (cfg.snapshot_interval > 0.0) {
        const double ratio = cfg.T / cfg.snapshot_interval;
        if (ratio > static_cast<double>(cfg.max_snapshots))
            throw ConfigError("qs solver: snapshot cadence exceeds the snapshot budget");
        n_snap = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(ratio)));
    }
    const double interval = cfg.T / static_cast<double>(n_snap);
    const double q_current = (conductivity.growth_exponent() + 2.0) / (conductivity.growth_exponent() + 1.0);
    const std::optional<double> level = interface_level(conductivity);

    QsRun run;
    run.trajectory.grid = grid;
    run.trajectory.epsilon = 0.0;
    run.trajectory.dt = 0.0;
    run.trajectory.growth_exponent = conductivity.growth_exponent();
    run.min_dt = std::numeric_limits<double>::infinity();

    const LocatedField div0 = cfg.track_divergence ? div_H(grid, h0) : LocatedField{};
    auto track = [&](const LocatedField& h) {
        if (!cfg.track_divergence) return;
        const LocatedField d = div_H(grid, h);
        for (std::size_t i = 0; i < d.values.size(); ++i)
            run.max_div_drift = std::max(run.max_div_drift, std::abs(d.values[i] - div0.values[i]));
    };
    auto snapshot = [&](double t, const LocatedField& h, const QsField& field) {
        Snapshot snap;
        snap.t = t;
        snap.e = field.e;
        snap.h = h;
        snap.current = field.e;
        for (std::size_t i = 0; i < field.e.values.size(); ++i)
            snap.current.values[i] = field.sigma_eff[i] * field.e.values[i];
        run.trajectory.snapshots.push_back(std::move(snap));
        if (level) run.interface.push_back({t, interface_cells(grid, field.e, *level, cfg.tau_gamma)});
    };

    LocatedField h = h0;
    LocatedField h_next;
    double t = 0.0;
    std::size_t target = 1;
    bool at_snapshot = true;
    while (target <= n_snap) {
        const double t_target = static_cast<double>(target) * interval;
        Advance a = advance(grid, h, t, cfg, conductivity, forcing, t_target, h_next);
        run.ledger.push_back(record_of(grid, t, h, a.field, a.f, q_current));
        if (at_snapshot) snapshot(t, h, a.field);
        run.min_dt = std::min(run.min_dt, a.dt);
        if (++run.steps > cfg.max_steps) throw StiffnessError("qs solver: step cap exceeded");

        std::swap(h, h_next);
        t += a.dt;
        track(h);
        at_snapshot = false;
        if (t_target - t <= 1e-12 * cfg.T) {
            t = t_target;
            ++target;
            at_snapshot = true;
        }
    }

    const LocatedField f_end = forcing.at(grid, t);
    const QsField end = qs_electric_field(grid, h, f_end, conductivity, cfg.delta);
    run.ledger.push_back(record_of(grid, t, h, end, f_end, q_current));
    snapshot(t, h, end);

    run.final_state.e = end.e;
    run.final_state.h = std::move(h);
    run.final_state.t = t;
    run.final_state.sigma_eff = end.sigma_eff;
    run.final_state.layout = FieldState::Layout::collocated;
    return run;
}

void write_interface_csv(const std::vector<InterfaceRecord>& records, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    os << "t,cells,count\n" << std::setprecision(17);
    for (const InterfaceRecord& r : records) {
        os << r.t << ',';
        for (std::size_t k = 0; k < r.cells.size(); ++k) os << (k ? " " : "") << r.cells[k];
        os << ',' << r.cells.size() << '\n';
    }
    if (!os) throw Error("write failed: " + path);
}

}  // namespace nlmaxwell
