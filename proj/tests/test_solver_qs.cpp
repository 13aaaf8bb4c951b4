#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "nlmaxwell/errors.hpp"
#include "nlmaxwell/presets.hpp"
#include "nlmaxwell/solver_qs.hpp"
#include "test_common.hpp"

using namespace nlmaxwell;
using testutil::max_abs;
using testutil::max_abs_diff;

namespace {

constexpr double kPi = std::numbers::pi;

StaggeredGrid square(std::size_t n) { return StaggeredGrid::make_2d(n, n, {0, kPi}, {0, kPi}); }

FieldPreset mode(int kx, int ky, double amp) { return FieldPreset::sine_mode({{kx, ky, 1}, amp}); }

LocatedField rotation(const StaggeredGrid& g, double c) {
    return sample(g, Location::magnetic, [c](double x, double y, double) {
        return std::array<double, 3>{-c * y, c * x, 0.0};
    });
}

// One explicit heat step H - (dt / sigma0) curl curl H for the 2D
// transverse-magnetic layout, written directly against the block extents.
LocatedField heat_step_2d(const StaggeredGrid& g, const LocatedField& h, double sigma0, double dt) {
    const ComponentBlock& ez = g.blocks(Location::electric)[0];
    const ComponentBlock& hx = g.blocks(Location::magnetic)[0];
    const ComponentBlock& hy = g.blocks(Location::magnetic)[1];
    const std::size_t nx = g.cells(0), ny = g.cells(1);
    const double dx = g.spacing(0), dy = g.spacing(1);
    std::vector<double> e(g.size(Location::electric), 0.0);
    for (std::size_t i = 1; i < nx; ++i)
        for (std::size_t j = 1; j < ny; ++j) {
            const double gz = (h.values[hy.index(i, j)] - h.values[hy.index(i - 1, j)]) / dx -
                              (h.values[hx.index(i, j)] - h.values[hx.index(i, j - 1)]) / dy;
            e[ez.index(i, j)] = gz / sigma0;
        }
    LocatedField out = h;
    for (std::size_t i = 0; i <= nx; ++i)
        for (std::size_t j = 0; j < ny; ++j)
            out.values[hx.index(i, j)] -= dt * (e[ez.index(i, j + 1)] - e[ez.index(i, j)]) / dy;
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j <= ny; ++j)
            out.values[hy.index(i, j)] += dt * (e[ez.index(i + 1, j)] - e[ez.index(i, j)]) / dx;
    return out;
}

}  // namespace

TEST_CASE("qs config validation") {
    QsSolverConfig cfg;
    CHECK_NOTHROW(validate(cfg));
    cfg.delta = 0.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.cd = 1.5;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.T = -1.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("qs_electric_field: power-law closed form") {
    std::mt19937_64 rng(41);
    const auto g = StaggeredGrid::make_2d(12, 12, {0, 1}, {0, 1});
    const auto zero = LocatedField::zeros(g, Location::electric);
    for (double p : {1.0, 2.0, 4.0}) {
        const auto h = testutil::random_field(g, Location::magnetic, rng);
        const double delta = 1e-8;
        const QsField f = qs_electric_field(g, h, zero, ConductivityField(ConductivityGraph::power_law(p)), delta);
        const auto gfield = curl_H(g, h);
        for (std::size_t i = 0; i < gfield.values.size(); ++i) {
            const double G = gfield.values[i];
            if (std::abs(G) <= delta) continue;
            const double expect = std::pow(std::abs(G), -p / (p + 1.0)) * G;
            CHECK(std::abs(f.e.values[i] - expect) <= 1e-12 * std::max(1.0, std::abs(expect)));
        }
    }
    // |G| = 8 under p = 2 gives |E| = 2.
    const auto f = qs_electric_field(g, rotation(g, 4.0), zero, ConductivityField(ConductivityGraph::power_law(2.0)), 1e-8);
    const auto interior = g.electric_interior();
    for (std::size_t i = 0; i < f.e.values.size(); ++i)
        CHECK(f.e.values[i] == doctest::Approx(interior[i] ? 2.0 : 0.0).epsilon(1e-12));
}

TEST_CASE("qs_electric_field: step law saturates at the jump") {
    const auto g = StaggeredGrid::make_2d(10, 10, {0, 1}, {0, 1});
    const auto zero = LocatedField::zeros(g, Location::electric);
    const QsField f = qs_electric_field(g, rotation(g, 0.75), zero, ConductivityField(ConductivityGraph::step(1.0, 2.0)), 1e-8);
    const auto interior = g.electric_interior();
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < f.e.values.size(); ++i) {
        if (!interior[i]) continue;
        free.push_back(i);
        CHECK(f.e.values[i] == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(f.sigma_eff[i] == doctest::Approx(1.5).epsilon(1e-13));
    }
    CHECK(interface_cells(g, f.e, 1.0, 1e-3) == free);
}

TEST_CASE("qs_electric_field: constant law is a plain division") {
    std::mt19937_64 rng(42);
    const auto g = StaggeredGrid::make_3d(4, 5, 3, {0, 1}, {0, 1}, {0, 1});
    const auto h = testutil::random_field(g, Location::magnetic, rng);
    const auto f = testutil::random_field(g, Location::electric, rng);
    const QsField q = qs_electric_field(g, h, f, ConductivityField(ConductivityGraph::constant(3.0)), 1e-8);
    auto G = curl_H(g, h);
    for (std::size_t i = 0; i < G.values.size(); ++i) G.values[i] = (G.values[i] + f.values[i]) / 3.0;
    CHECK(max_abs_diff(q.e, G) <= 1e-15);
}

TEST_CASE("step_qs: constant conductivity equals an explicit heat step") {
    const auto g = square(24);
    const double sigma0 = 2.0;
    const ConductivityField cond(ConductivityGraph::constant(sigma0));
    QsSolverConfig cfg;
    cfg.dt = 2e-4;
    FieldState s = FieldState::zeros(g);
    s.h = magnetic_preset(g, mode(1, 2, 1.0));
    for (int n = 0; n < 20; ++n) {
        const FieldState next = step_qs(g, s, cfg, cond, Forcing::zero());
        const double dt = next.t - s.t;
        CHECK(dt == doctest::Approx(2e-4).epsilon(1e-12));
        CHECK(max_abs_diff(next.h, heat_step_2d(g, s.h, sigma0, dt)) <= 1e-14);
        CHECK(next.layout == FieldState::Layout::e_one_step_behind);
        s = next;
    }
}

TEST_CASE("step_qs: adaptive step respects the diffusion limit and t_limit") {
    const auto g = square(16);
    const ConductivityField cond(ConductivityGraph::constant(1.0));
    QsSolverConfig cfg;
    FieldState s = FieldState::zeros(g);
    s.h = magnetic_preset(g, mode(1, 1, 1.0));
    const FieldState next = step_qs(g, s, cfg, cond, Forcing::zero());
    const double limit = cfg.cd * std::pow(g.min_spacing(), 2) * 1.0 / 4.0;
    CHECK(next.t == doctest::Approx(limit).epsilon(1e-12));
    CHECK(qs_stable_dt(g, next.sigma_eff, cfg.cd) == doctest::Approx(limit).epsilon(1e-12));
    const FieldState clipped = step_qs(g, s, cfg, cond, Forcing::zero(), 1e-5);
    CHECK(clipped.t == doctest::Approx(1e-5).epsilon(1e-12));
}

TEST_CASE("step_qs: equilibrium and divergence preservation") {
    const auto g = square(16);
    QsSolverConfig cfg;
    FieldState s = FieldState::zeros(g);
    for (double& v : s.h.values) v = -0.4;
    const FieldState next = step_qs(g, s, cfg, ConductivityField(ConductivityGraph::constant(1.0)), Forcing::zero());
    CHECK(next.h == s.h);

    std::mt19937_64 rng(43);
    s.h = testutil::random_field(g, Location::magnetic, rng);
    const FieldState moved = step_qs(g, s, cfg, ConductivityField(ConductivityGraph::power_law(2.0)), Forcing::zero());
    CHECK(max_abs_diff(div_H(g, moved.h), div_H(g, s.h)) <= 1e-13);
}

TEST_CASE("step_qs: a vanishing step is reported as stiffness") {
    const auto g = square(32);
    QsSolverConfig cfg;
    cfg.delta = 1e-14;
    CHECK_THROWS_AS(step_qs(g, FieldState::zeros(g), cfg, ConductivityField(ConductivityGraph::power_law(2.0)),
                            Forcing::zero()),
                    StiffnessError);
}

TEST_CASE("interface_cells: empty set, and an annulus matching a direct scan") {
    const auto g = StaggeredGrid::make_2d(40, 40, {-1, 1}, {-1, 1});
    const auto e = sample(g, Location::electric, [](double x, double y, double) {
        return std::array<double, 3>{0.0, 0.0, 2.0 * std::exp(-(x * x + y * y))};
    });
    CHECK(interface_cells(g, e, 3.0, 0.05).empty());

    const double tau = 0.05;
    const auto cells = interface_cells(g, e, 1.0, tau);
    const ComponentBlock& b = g.blocks(Location::electric)[0];
    std::vector<std::size_t> scan;
    const double r_in = std::sqrt(-std::log((1.0 + tau) / 2.0)), r_out = std::sqrt(-std::log((1.0 - tau) / 2.0));
    for (std::size_t i = 1; i < 40; ++i)
        for (std::size_t j = 1; j < 40; ++j) {
            const auto p = g.position(b, i, j);
            const double r = std::hypot(p[0], p[1]);
            const double v = 2.0 * std::exp(-r * r);
            if (std::abs(v - 1.0) <= tau) {
                scan.push_back(b.index(i, j));
                CHECK(r >= r_in - 1e-12);
                CHECK(r <= r_out + 1e-12);
            }
        }
    std::sort(scan.begin(), scan.end());
    CHECK_FALSE(scan.empty());
    CHECK(cells == scan);
    CHECK_THROWS_AS(interface_cells(g, e, 1.0, 0.0), ParameterError);
}

TEST_CASE("interface_level: jump of the graph or of the smoothed base") {
    CHECK(*interface_level(ConductivityField(ConductivityGraph::step(1.0, 2.0, 0.8))) == 0.8);
    CHECK(*interface_level(ConductivityField(smooth(ConductivityGraph::step(1.0, 2.0), 50.0))) == 1.0);
    CHECK_FALSE(interface_level(ConductivityField(ConductivityGraph::power_law(2.0))));
}

TEST_CASE("run_qs: magnetic energy is non-increasing without forcing") {
    const auto g = square(24);
    QsSolverConfig cfg;
    cfg.T = 0.2;
    cfg.delta = 1e-3;
    cfg.snapshot_interval = 0.05;
    for (const auto& graph : {ConductivityGraph::power_law(2.0), ConductivityGraph::step(1.0, 2.0),
                              ConductivityGraph::constant(1.0)}) {
        const QsRun run = run_qs(g, magnetic_preset(g, mode(1, 2, 1.0)), cfg, ConductivityField(graph), Forcing::zero());
        for (std::size_t n = 1; n < run.ledger.size(); ++n)
            CHECK(run.ledger[n].magnetic <= run.ledger[n - 1].magnetic * (1.0 + 1e-10));
        CHECK(run.ledger.size() == run.steps + 1);
        CHECK(run.trajectory.snapshots.size() == 5);
        CHECK(run.trajectory.snapshots.back().t == doctest::Approx(0.2).epsilon(1e-14));
    }
}

TEST_CASE("run_qs: step law below the jump reproduces the constant run") {
    const auto g = square(20);
    QsSolverConfig cfg;
    cfg.T = 0.1;
    const auto h0 = magnetic_preset(g, mode(1, 1, 0.2));
    const QsRun a = run_qs(g, h0, cfg, ConductivityField(ConductivityGraph::step(1.0, 2.0)), Forcing::zero());
    const QsRun b = run_qs(g, h0, cfg, ConductivityField(ConductivityGraph::constant(1.0)), Forcing::zero());
    double emax = 0.0;
    for (const Snapshot& s : a.trajectory.snapshots) emax = std::max(emax, max_abs(s.e));
    REQUIRE(emax < 1.0);
    CHECK(max_abs_diff(a.final_state.h, b.final_state.h) <= 1e-12);
}

TEST_CASE("run_qs: zero data, determinism and interface output") {
    const auto g = square(16);
    QsSolverConfig cfg;
    cfg.T = 0.05;
    cfg.tau_gamma = 0.05;
    cfg.snapshot_interval = 0.01;
    const ConductivityField cond(ConductivityGraph::step(1.0, 2.0));
    const QsRun zero = run_qs(g, LocatedField::zeros(g, Location::magnetic), cfg, cond, Forcing::zero());
    for (const Snapshot& s : zero.trajectory.snapshots) CHECK(max_abs(s.h) == 0.0);

    const auto h0 = magnetic_preset(g, mode(1, 1, 1.5));
    const QsRun a = run_qs(g, h0, cfg, cond, Forcing::zero());
    const QsRun b = run_qs(g, h0, cfg, cond, Forcing::zero());
    CHECK(a.final_state.h == b.final_state.h);
    CHECK(a.steps == b.steps);
    CHECK(a.interface.size() == a.trajectory.snapshots.size());
}

TEST_CASE("run_qs: rejects degenerate, non-monotone and non-solenoidal input") {
    const auto g = square(12);
    QsSolverConfig cfg;
    cfg.T = 0.01;
    const auto h0 = magnetic_preset(g, mode(1, 1, 0.1));
    const ConductivityField flat(ConductivityGraph::piecewise_linear({{0, 0}, {1, 0}, {1, 2}, {3, 2}}));
    CHECK_THROWS_AS(run_qs(g, h0, cfg, flat, Forcing::zero()), DegeneracyError);
    const ConductivityField decreasing(ConductivityGraph::piecewise_linear({{0, 2}, {1, 1}}));
    CHECK_THROWS_AS(run_qs(g, h0, cfg, decreasing, Forcing::zero()), ConfigError);
    std::mt19937_64 rng(44);
    CHECK_THROWS_AS(run_qs(g, testutil::random_field(g, Location::magnetic, rng), cfg,
                           ConductivityField(ConductivityGraph::constant(1.0)), Forcing::zero()),
                    ConfigError);
}
