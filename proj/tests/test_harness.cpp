#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nlmaxwell/errors.hpp"
#include "nlmaxwell/limit_harness.hpp"
#include "nlmaxwell/presets.hpp"
#include "test_common.hpp"

using namespace nlmaxwell;

namespace {

constexpr double kPi = std::numbers::pi;

Trajectory random_trajectory(const StaggeredGrid& g, const std::vector<double>& times, std::mt19937_64& rng) {
    Trajectory t;
    t.grid = g;
    for (double time : times) {
        Snapshot s;
        s.t = time;
        s.e = testutil::random_field(g, Location::electric, rng);
        s.h = testutil::random_field(g, Location::magnetic, rng);
        s.current = testutil::random_field(g, Location::electric, rng);
        t.snapshots.push_back(std::move(s));
    }
    return t;
}

// Node weights of a 2D grid, halved once per boundary axis.
double node_weight(const StaggeredGrid& g, std::size_t i, std::size_t j) {
    double w = g.spacing(0) * g.spacing(1);
    if (i == 0 || i == g.cells(0)) w *= 0.5;
    if (j == 0 || j == g.cells(1)) w *= 0.5;
    return w;
}

Scenario small_scenario(const ConductivityGraph& graph, std::size_t n = 12) {
    Scenario sc;
    sc.name = "small";
    sc.grid = StaggeredGrid::make_2d(n, n, {0, kPi}, {0, kPi});
    sc.conductivity = ConductivityField(graph);
    sc.init = FieldState::zeros(sc.grid);
    sc.init.h = magnetic_preset(sc.grid, FieldPreset::sine_mode({{1, 2, 1}, 1.0}));
    sc.forcing = Forcing::zero();
    sc.T = 0.2;
    sc.snapshot_interval = 0.05;
    sc.delta = 1e-3;
    sc.qs_dt = 1e-4;
    sc.data_description = "mode(1,2)";
    return sc;
}

SweepRow row(double eps, double gap) {
    SweepRow r;
    r.epsilon = eps;
    r.h_gap = gap;
    return r;
}

}  // namespace

TEST_CASE("spacetime_norm: self difference and constant unit gap") {
    std::mt19937_64 rng(51);
    const auto g = StaggeredGrid::make_2d(6, 6, {0, 1}, {0, 1});
    const Trajectory a = random_trajectory(g, {0.0, 0.3, 1.0}, rng);
    for (FieldSelector sel : {FieldSelector::electric, FieldSelector::magnetic, FieldSelector::current})
        CHECK(spacetime_norm(a, a, sel, 2.0, 2.0) == 0.0);

    Trajectory ones = a, zeros = a;
    for (auto& s : ones.snapshots)
        for (double& v : s.e.values) v = 1.0;
    for (auto& s : zeros.snapshots) std::fill(s.e.values.begin(), s.e.values.end(), 0.0);
    CHECK(spacetime_norm(ones, zeros, FieldSelector::electric, 2.0, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(spacetime_norm(ones, FieldSelector::electric, 3.0, kInfinityNorm) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("spacetime_norm: agrees with a double-loop quadrature") {
    std::mt19937_64 rng(52);
    const auto g = StaggeredGrid::make_2d(5, 7, {0, 2}, {0, 1});
    const std::vector<double> times{0.0, 0.1, 0.25, 0.7};
    const Trajectory a = random_trajectory(g, times, rng);
    const Trajectory b = random_trajectory(g, times, rng);
    const ComponentBlock& blk = g.blocks(Location::electric)[0];
    for (double q : {1.0, 1.5, 2.0, 3.0}) {
        std::vector<double> per_time;
        for (std::size_t k = 0; k < times.size(); ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i <= g.cells(0); ++i)
                for (std::size_t j = 0; j <= g.cells(1); ++j) {
                    const std::size_t n = blk.index(i, j);
                    const double d = a.snapshots[k].e.values[n] - b.snapshots[k].e.values[n];
                    s += node_weight(g, i, j) * std::pow(std::abs(d), q);
                }
            per_time.push_back(s);  // already the q-th power of the spatial norm
        }
        double total = 0.0;
        for (std::size_t k = 0; k + 1 < times.size(); ++k)
            total += 0.5 * (times[k + 1] - times[k]) * (per_time[k] + per_time[k + 1]);
        const double oracle = std::pow(total, 1.0 / q);
        CHECK(spacetime_norm(a, b, FieldSelector::electric, q, q) == doctest::Approx(oracle).epsilon(1e-13));
    }
}

TEST_CASE("spacetime_norm: Cauchy-Schwarz between L1 and L2 space-time norms") {
    std::mt19937_64 rng(53);
    const auto g = StaggeredGrid::make_2d(8, 8, {0, 1}, {0, 3});
    const std::vector<double> times{0.0, 0.2, 0.5, 0.9, 1.5};
    const Trajectory a = random_trajectory(g, times, rng);
    const Trajectory b = random_trajectory(g, times, rng);
    const double l1 = spacetime_norm(a, b, FieldSelector::magnetic, 1.0, 1.0);
    const double l2 = spacetime_norm(a, b, FieldSelector::magnetic, 2.0, 2.0);
    double total_weight = 0.0;
    for (double w : g.weights(Location::magnetic)) total_weight += w;
    CHECK(l1 <= std::sqrt(total_weight * 1.5) * l2 * (1.0 + 1e-14));
}

TEST_CASE("spacetime_norm: rejects mismatched trajectories and bad exponents") {
    std::mt19937_64 rng(54);
    const auto g = StaggeredGrid::make_2d(4, 4, {0, 1}, {0, 1});
    const Trajectory a = random_trajectory(g, {0.0, 1.0}, rng);
    const Trajectory shorter = random_trajectory(g, {0.0}, rng);
    const Trajectory shifted = random_trajectory(g, {0.0, 0.9}, rng);
    const Trajectory other_grid = random_trajectory(StaggeredGrid::make_2d(5, 4, {0, 1}, {0, 1}), {0.0, 1.0}, rng);
    CHECK_THROWS_AS(spacetime_norm(a, shorter, FieldSelector::electric, 2, 2), StructuralError);
    CHECK_THROWS_AS(spacetime_norm(a, shifted, FieldSelector::electric, 2, 2), StructuralError);
    CHECK_THROWS_AS(spacetime_norm(a, other_grid, FieldSelector::electric, 2, 2), StructuralError);
    CHECK_THROWS_AS(spacetime_norm(a, a, FieldSelector::electric, 0.5, 2), ParameterError);
    CHECK_THROWS_AS(spacetime_norm(shorter, FieldSelector::electric, 2, 2), StructuralError);
}

TEST_CASE("assess: confirmation logic") {
    SweepReport r;
    r.complete = true;
    r.rows = {row(1e-1, 1.0), row(1e-2, 0.1), row(1e-3, 0.01)};
    assess(r);
    CHECK(r.confirming);
    REQUIRE(r.slope);
    CHECK(*r.slope == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.slope_residual == doctest::Approx(0.0).epsilon(1e-12));

    r.rows = {row(1e-1, 1.0), row(1e-2, 1.04), row(1e-3, 0.1)};
    assess(r);
    CHECK(r.monotone);
    CHECK(r.confirming);

    r.rows = {row(1e-1, 1.0), row(1e-2, 1.1), row(1e-3, 0.1)};
    assess(r);
    CHECK_FALSE(r.monotone);
    CHECK_FALSE(r.confirming);

    r.rows = {row(1e-1, 1.0), row(1e-2, 0.5)};
    assess(r);
    CHECK_FALSE(r.reduced);
    CHECK_FALSE(r.confirming);

    r.rows = {row(1e-1, 1.0), row(1e-2, 0.0)};
    assess(r);
    CHECK_FALSE(r.slope);
}

TEST_CASE("run_sweep: input validation and a single-epsilon report") {
    const Scenario sc = small_scenario(ConductivityGraph::constant(1.0));
    CHECK_THROWS_AS(run_sweep(sc, std::vector<double>{}), ParameterError);
    CHECK_THROWS_AS(run_sweep(sc, std::vector<double>{0.01, 0.1}), ParameterError);
    CHECK_THROWS_AS(run_sweep(sc, std::vector<double>{0.1, -0.01}), ParameterError);

    const SweepReport r = run_sweep(sc, std::vector<double>{0.1});
    CHECK(r.complete);
    CHECK(r.rows.size() == 1);
    CHECK_FALSE(r.slope);
    CHECK_FALSE(r.confirming);
    CHECK(r.rows[0].h_gap > 0.0);
}

TEST_CASE("run_sweep: gaps shrink with epsilon and threading does not change results") {
    const Scenario sc = small_scenario(ConductivityGraph::constant(1.0));
    const std::vector<double> eps{1e-1, 1e-2, 1e-3};
    const SweepReport serial = run_sweep(sc, eps, 1);
    const SweepReport parallel = run_sweep(sc, eps, 4);
    REQUIRE(serial.complete);
    CHECK(serial.confirming);
    CHECK(serial.rows.back().h_gap < serial.rows.front().h_gap);
    CHECK(sweep_report_json(serial, false) == sweep_report_json(parallel, false));
    CHECK(sweep_report_csv(serial, false) == sweep_report_csv(parallel, false));
    CHECK(sweep_report_json(serial, false).find("wall_time") == std::string::npos);
    CHECK(sweep_report_json(serial, true).find("wall_time") != std::string::npos);
    CHECK(serial.fingerprint.find("constant(1)") != std::string::npos);
}

TEST_CASE("run_sweep: a degenerate law is reported as a failure") {
    Scenario sc = small_scenario(ConductivityGraph::piecewise_linear({{0, 0}, {1, 0}, {1, 2}, {3, 2}}));
    sc.well_prepared = false;
    const SweepReport r = run_sweep(sc, std::vector<double>{0.1, 0.01}, 2);
    REQUIRE(r.failure);
    CHECK(r.failure->kind == "degeneracy");
    CHECK_FALSE(r.complete);
    CHECK_FALSE(r.confirming);
}

TEST_CASE("mms_study: zero manufactured solution has zero error") {
    MmsConfig cfg;
    cfg.amplitude = 0.0;
    cfg.n_coarse = 8;
    cfg.levels = 2;
    cfg.qs_cells = 8;
    cfg.qs_T = 0.01;
    cfg.delta_study = false;
    const MmsReport r = mms_study(cfg);
    REQUIRE(r.full_spatial.rows.size() == 2);
    REQUIRE(r.qs_temporal.rows.size() == 2);
    for (const MmsRow& row : r.full_spatial.rows) CHECK(row.error == 0.0);
    for (const MmsRow& row : r.qs_temporal.rows) CHECK(row.error == 0.0);
    CHECK_FALSE(r.full_spatial.min_order);
}

TEST_CASE("mms_study: coarse refinement shows the expected orders") {
    MmsConfig cfg;
    cfg.n_coarse = 8;
    cfg.levels = 2;
    cfg.qs_cells = 16;
    cfg.qs_T = 0.05;
    cfg.qs_dt0 = 2e-4;
    cfg.deltas = {1e-3, 1e-2};
    const MmsReport r = mms_study(cfg);
    REQUIRE(r.full_spatial.min_order);
    REQUIRE(r.qs_temporal.min_order);
    CHECK(*r.full_spatial.min_order > 1.5);
    CHECK(*r.qs_temporal.min_order > 0.8);
    REQUIRE(r.delta_sensitivity.size() == 2);
    CHECK(r.delta_sensitivity[0].h_difference <= r.delta_sensitivity[1].h_difference);
    CHECK(mms_report_csv(r).find("full_spatial") != std::string::npos);
    CHECK_THROWS_AS(mms_study(MmsConfig{.levels = 1}), ParameterError);
}
