#include "nlmaxwell/limit_harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <thread>

#include "nlmaxwell/errors.hpp"

namespace nlmaxwell {

std::string to_string(FieldSelector selector) {
    switch (selector) {
        case FieldSelector::electric: return "electric";
        case FieldSelector::magnetic: return "magnetic";
        case FieldSelector::current: return "current";
    }
    return "unknown";
}

namespace {

const LocatedField& pick(const Snapshot& s, FieldSelector selector) {
    switch (selector) {
        case FieldSelector::electric: return s.e;
        case FieldSelector::magnetic: return s.h;
        case FieldSelector::current: return s.current;
    }
    return s.e;
}

void check_exponent(double q, const char* what) {
    if (q != kInfinityNorm && !(q >= 1.0))
        throw ParameterError(std::string("spacetime_norm: ") + what + " exponent must lie in [1, inf]");
}

double time_norm(const std::vector<double>& t, const std::vector<double>& values, double q_time) {
    if (q_time == kInfinityNorm || std::isinf(q_time)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, v);
        return m;
    }
    if (values.size() < 2) throw StructuralError("spacetime_norm: time quadrature needs at least two snapshots");
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < values.size(); ++k)
        sum += 0.5 * (t[k + 1] - t[k]) * (std::pow(values[k], q_time) + std::pow(values[k + 1], q_time));
    return std::pow(sum, 1.0 / q_time);
}

double spatial(const StaggeredGrid& grid, const LocatedField& a, const LocatedField* b, double q_space) {
    if (!b) return lq_norm(grid, a, q_space);
    LocatedField d = a;
    if (b->values.size() != a.values.size() || b->location != a.location)
        throw StructuralError("spacetime_norm: snapshot fields do not match");
    for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] -= b->values[i];
    return lq_norm(grid, d, q_space);
}

}  // namespace

double spacetime_norm(const Trajectory& a, const Trajectory& b, FieldSelector selector, double q_space,
                      double q_time) {
    check_exponent(q_space, "space");
    check_exponent(q_time, "time");
    check_compatible(a, b);
    std::vector<double> t, v;
    for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
        t.push_back(a.snapshots[k].t);
        v.push_back(spatial(a.grid, pick(a.snapshots[k], selector), &pick(b.snapshots[k], selector), q_space));
    }
    return time_norm(t, v, q_time);
}

double spacetime_norm(const Trajectory& a, FieldSelector selector, double q_space, double q_time) {
    check_exponent(q_space, "space");
    check_exponent(q_time, "time");
    std::vector<double> t, v;
    for (const Snapshot& s : a.snapshots) {
        t.push_back(s.t);
        v.push_back(spatial(a.grid, pick(s, selector), nullptr, q_space));
    }
    return time_norm(t, v, q_time);
}

QsSolverConfig Scenario::qs_config() const {
    QsSolverConfig c;
    c.T = T;
    c.dt = qs_dt;
    c.delta = delta;
    c.tau_gamma = tau_gamma;
    c.cd = cd;
    c.snapshot_interval = snapshot_interval;
    return c;
}

FullSolverConfig Scenario::full_config(double epsilon) const {
    FullSolverConfig c;
    c.epsilon = epsilon;
    c.T = T;
    c.cfl = cfl;
    c.snapshot_interval = snapshot_interval;
    return c;
}

std::string Scenario::fingerprint() const {
    std::ostringstream os;
    os << std::setprecision(17) << "grid=" << grid.describe() << ";graphs=";
    for (std::size_t k = 0; k < conductivity.graphs().size(); ++k)
        os << (k ? "|" : "") << describe(conductivity.graphs()[k]);
    os << ";data=" << data_description << ";T=" << T << ";snapshot=" << snapshot_interval << ";full_dt=cfl(" << cfl
       << ");qs_dt=adaptive(cd=" << cd << ",delta=" << delta << ",cap=" << qs_dt << ")"
       << ";well_prepared=" << (well_prepared ? 1 : 0) << ";seed=" << seed;
    return os.str();
}

namespace {

SweepFailure classify(std::exception_ptr ep) {
    try {
        std::rethrow_exception(ep);
    } catch (const DegeneracyError& e) {
        return {"degeneracy", e.what()};
    } catch (const SolverError& e) {
        return {"solver", e.what()};
    } catch (const ConfigError& e) {
        return {"config", e.what()};
    } catch (const ParameterError& e) {
        return {"config", e.what()};
    } catch (const StructuralError& e) {
        return {"structural", e.what()};
    } catch (const std::exception& e) {
        return {"other", e.what()};
    }
    return {"other", "unknown failure"};
}

// Runs jobs 0..n-1 on at most `threads` workers; job order does not affect results.
template <typename Fn>
void run_pool(std::size_t n, unsigned threads, Fn&& job) {
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) job(i);
        });
    for (std::thread& t : pool) t.join();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void assess(SweepReport& report) {
    const auto& rows = report.rows;
    report.slope.reset();
    report.slope_residual = 0.0;
    bool positive = rows.size() >= 2;
    for (const SweepRow& r : rows) positive = positive && r.h_gap > 0.0;
    if (positive) {
        const double n = static_cast<double>(rows.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const SweepRow& r : rows) {
            const double x = std::log(r.epsilon), y = std::log(r.h_gap);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double icpt = (sy - slope * sx) / n;
        double res = 0.0;
        for (const SweepRow& r : rows) {
            const double d = std::log(r.h_gap) - (icpt + slope * std::log(r.epsilon));
            res += d * d;
        }
        report.slope = slope;
        report.slope_residual = std::sqrt(res / n);
    }
    report.monotone = !rows.empty();
    for (std::size_t k = 1; k < rows.size(); ++k)
        if (rows[k].h_gap > 1.05 * rows[k - 1].h_gap) report.monotone = false;
    report.reduced = rows.size() >= 2 && rows.back().h_gap <= 0.2 * rows.front().h_gap;
    report.confirming = report.complete && report.monotone && report.reduced;
}

SweepReport run_sweep(const Scenario& scenario, std::span<const double> eps_list, unsigned threads) {
    if (eps_list.empty()) throw ParameterError("run_sweep: eps_list is empty");
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        if (!(eps_list[k] > 0.0)) throw ParameterError("run_sweep: every eps must be > 0");
        if (k > 0 && !(eps_list[k] < eps_list[k - 1]))
            throw ParameterError("run_sweep: eps_list must be strictly decreasing");
    }

    SweepReport report;
    report.scenario = scenario.name;
    report.fingerprint = scenario.fingerprint();

    const std::size_t n = eps_list.size();
    std::optional<QsRun> qs;
    double qs_time = 0.0;
    std::vector<std::optional<FullRun>> full(n);
    std::vector<double> full_time(n, 0.0);
    std::vector<std::exception_ptr> errors(n + 1);

    // The well-prepared start needs only H_0, so every job is independent.
    FieldState init = scenario.init;
    if (scenario.well_prepared) {
        try {
            init.e = qs_electric_field(scenario.grid, init.h, scenario.forcing.at(scenario.grid, 0.0),
                                       scenario.conductivity, scenario.delta)
                         .e;
        } catch (...) {
            report.failure = classify(std::current_exception());
            assess(report);
            return report;
        }
    }

    run_pool(n + 1, threads, [&](std::size_t job) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            if (job == 0) {
                qs = run_qs(scenario.grid, scenario.init.h, scenario.qs_config(), scenario.conductivity,
                            scenario.forcing);
                qs_time = seconds_since(t0);
            } else {
                full[job - 1] = run_full(scenario.grid, init, scenario.full_config(eps_list[job - 1]),
                                         scenario.conductivity, scenario.forcing);
                full_time[job - 1] = seconds_since(t0);
            }
        } catch (...) {
            errors[job] = std::current_exception();
        }
    });

    for (std::size_t job = 0; job <= n && !report.failure; ++job)
        if (errors[job]) report.failure = classify(errors[job]);

    if (qs) {
        report.qs_steps = qs->steps;
        report.qs_min_dt = qs->min_dt;
        report.qs_wall_time = qs_time;
        const double q = (qs->trajectory.growth_exponent + 2.0) / (qs->trajectory.growth_exponent + 1.0);
        for (std::size_t k = 0; k < n; ++k) {
            if (!full[k]) break;
            const Trajectory& tf = full[k]->trajectory;
            SweepRow row;
            row.epsilon = eps_list[k];
            row.e_gap = spacetime_norm(tf, qs->trajectory, FieldSelector::electric, 2.0, 2.0);
            row.h_gap = spacetime_norm(tf, qs->trajectory, FieldSelector::magnetic, 2.0, kInfinityNorm);
            row.dissipation_gap = spacetime_norm(tf, qs->trajectory, FieldSelector::current, q, q);
            row.dt = full[k]->time.dt;
            row.steps = full[k]->time.steps;
            row.wall_time = full_time[k];
            report.rows.push_back(row);
        }
    }
    report.complete = !report.failure && report.rows.size() == n;
    assess(report);
    return report;
}

namespace {

double l2_error(const StaggeredGrid& grid, const LocatedField& a, const LocatedField& b) {
    LocatedField d = a;
    for (std::size_t i = 0; i < d.values.size(); ++i) d.values[i] -= b.values[i];
    return inner_product(grid, d, d);
}

void fill_orders(MmsSeries& s) {
    for (std::size_t k = 1; k < s.rows.size(); ++k) {
        const double prev = s.rows[k - 1].error, cur = s.rows[k].error;
        if (prev > 0.0 && cur > 0.0) {
            s.rows[k].order = std::log2(prev / cur);
            s.min_order = s.min_order ? std::min(*s.min_order, *s.rows[k].order) : *s.rows[k].order;
        }
    }
}

MmsSeries full_spatial_study(const MmsConfig& cfg) {
    MmsSeries series;
    series.name = "full_spatial";
    const double pi = std::numbers::pi;
    const double k = pi * std::sqrt(2.0);
    const double omega = k / std::sqrt(cfg.epsilon);
    const double amp = cfg.amplitude, sigma0 = cfg.sigma0;
    auto phi = [pi, amp](double x, double y) { return amp * std::sin(pi * x) * std::sin(pi * y); };

    for (std::size_t level = 0; level < cfg.levels; ++level) {
        const std::size_t n = cfg.n_coarse << level;
        const StaggeredGrid grid = StaggeredGrid::make_2d(n, n, {0, 1}, {0, 1});
        FieldState init = FieldState::zeros(grid);
        init.e = sample(grid, Location::electric, [&](double x, double y, double) {
            return std::array<double, 3>{0, 0, phi(x, y)};
        });
        apply_pec(grid, init.e.values);
        const Forcing forcing = Forcing::custom([&, omega](const StaggeredGrid& g, double t) {
            return sample(g, Location::electric, [&](double x, double y, double) {
                return std::array<double, 3>{0, 0, sigma0 * std::cos(omega * t) * phi(x, y)};
            });
        });
        FullSolverConfig fc;
        fc.epsilon = cfg.epsilon;
        fc.T = cfg.full_T;
        fc.cfl = cfg.full_cfl;
        const FullRun run =
            run_full(grid, init, fc, ConductivityField(ConductivityGraph::constant(sigma0)), forcing);

        const double T = run.trajectory.snapshots.back().t;
        const LocatedField e_star = sample(grid, Location::electric, [&](double x, double y, double) {
            return std::array<double, 3>{0, 0, std::cos(omega * T) * phi(x, y)};
        });
        const double c = -std::sin(omega * T) / omega;
        const LocatedField h_star = sample(grid, Location::magnetic, [&](double x, double y, double) {
            const double dx = amp * pi * std::cos(pi * x) * std::sin(pi * y);
            const double dy = amp * pi * std::sin(pi * x) * std::cos(pi * y);
            return std::array<double, 3>{c * dy, -c * dx, 0};
        });
        const Snapshot& last = run.trajectory.snapshots.back();
        MmsRow row;
        row.h = 1.0 / static_cast<double>(n);
        row.dt = run.time.dt;
        row.steps = run.time.steps;
        row.error = std::sqrt(cfg.epsilon * l2_error(grid, last.e, e_star) + l2_error(grid, last.h, h_star));
        series.rows.push_back(row);
    }
    fill_orders(series);
    return series;
}

MmsSeries qs_temporal_study(const MmsConfig& cfg) {
    MmsSeries series;
    series.name = "qs_temporal";
    const double pi = std::numbers::pi;
    const std::size_t n = cfg.qs_cells;
    const StaggeredGrid grid = StaggeredGrid::make_2d(n, n, {0, 1}, {0, 1});
    const double h = 1.0 / static_cast<double>(n);
    // curl_H curl_E psi = mu psi at free nodes for psi = sin(pi x) sin(pi y).
    const double mu = 2.0 * 4.0 / (h * h) * std::pow(std::sin(pi * h / 2.0), 2);
    const LocatedField psi = electric_preset(grid, FieldPreset::sine_mode({{1, 1, 1}, cfg.amplitude}));
    const LocatedField curl_psi = curl_E(grid, psi);
    const double omega = cfg.qs_omega, sigma0 = cfg.sigma0;
    auto amp_at = [omega](double t) { return std::cos(omega * t); };
    auto amp_rate = [omega](double t) { return -omega * std::sin(omega * t); };
    const Forcing forcing = Forcing::custom([&](const StaggeredGrid&, double t) {
        LocatedField f = psi;
        const double c = -sigma0 * amp_rate(t) - mu * amp_at(t);
        for (double& v : f.values) v *= c;
        return f;
    });

    // The coarsest step must sit below the explicit limit, or every level runs at that limit.
    QsSolverConfig base;
    const double dt0 = std::min(cfg.qs_dt0, 0.9 * base.cd * h * h * sigma0 / 4.0);
    for (std::size_t level = 0; level < cfg.levels; ++level) {
        QsSolverConfig qc;
        qc.T = cfg.qs_T;
        qc.dt = dt0 / static_cast<double>(1u << level);
        const QsRun run =
            run_qs(grid, curl_psi, qc, ConductivityField(ConductivityGraph::constant(sigma0)), forcing);
        LocatedField h_star = curl_psi;
        const double a = amp_at(run.final_state.t);
        for (double& v : h_star.values) v *= a;
        MmsRow row;
        row.h = h;
        row.dt = qc.dt;
        row.steps = run.steps;
        row.error = std::sqrt(l2_error(grid, run.final_state.h, h_star));
        series.rows.push_back(row);
    }
    fill_orders(series);
    return series;
}

std::vector<DeltaRow> delta_study(const MmsConfig& cfg) {
    const StaggeredGrid grid = StaggeredGrid::make_2d(16, 16, {0, 1}, {0, 1});
    const LocatedField h0 = magnetic_preset(grid, FieldPreset::gaussian({{0.5, 0.5, 0.5}, 0.15, 1.0}));
    const ConductivityField cond(ConductivityGraph::power_law(2.0));
    auto final_h = [&](double delta, std::size_t* steps) {
        QsSolverConfig qc;
        qc.T = 0.01;
        qc.delta = delta;
        const QsRun run = run_qs(grid, h0, qc, cond, Forcing::zero());
        if (steps) *steps = run.steps;
        return run.final_state.h;
    };
    const LocatedField ref = final_h(cfg.delta_reference, nullptr);
    std::vector<DeltaRow> rows;
    for (double d : cfg.deltas) {
        DeltaRow row;
        row.delta = d;
        row.h_difference = std::sqrt(l2_error(grid, final_h(d, &row.steps), ref));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

MmsReport mms_study(const MmsConfig& cfg) {
    if (!(cfg.sigma0 > 0.0) || !(cfg.epsilon > 0.0)) throw ParameterError("mms_study: sigma0 and eps must be > 0");
    if (cfg.levels < 2) throw ParameterError("mms_study: at least two refinement levels are needed");
    if (cfg.n_coarse < 2 || cfg.qs_cells < 2) throw ParameterError("mms_study: grids need at least 2 cells");
    MmsReport report;
    report.full_spatial = full_spatial_study(cfg);
    report.qs_temporal = qs_temporal_study(cfg);
    if (cfg.delta_study) {
        report.delta_reference = cfg.delta_reference;
        report.delta_sensitivity = delta_study(cfg);
    }
    return report;
}

}  // namespace nlmaxwell
