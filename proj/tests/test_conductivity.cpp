#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "nlmaxwell/conductivity.hpp"
#include "nlmaxwell/errors.hpp"

using namespace nlmaxwell;

namespace {

// m(s) = (lambda + sigma(s+)) s, using the upper end of the graph at jumps.
double product_upper(const ConductivityGraph& g, double lambda, double s) {
    return (lambda + sigma_eval(g, s).hi) * s;
}

// Root of the resolvent by repeated linear scans over shrinking windows: each
// pass tabulates m on 1000 points and keeps the first cell where m crosses r.
double scan_oracle(const ConductivityGraph& g, double lambda, double r) {
    if (r == 0.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (product_upper(g, lambda, hi) < r) hi *= 2.0;
    for (int pass = 0; pass < 8 && hi - lo > 1e-14 * std::max(1.0, hi); ++pass) {
        const int n = 1000;
        double prev = lo;
        for (int k = 1; k <= n; ++k) {
            const double s = lo + (hi - lo) * k / n;
            if (product_upper(g, lambda, s) >= r) {
                lo = prev;
                hi = s;
                break;
            }
            prev = s;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<ConductivityGraph> all_variants() {
    return {ConductivityGraph::power_law(0.0),
            ConductivityGraph::power_law(1.0),
            ConductivityGraph::power_law(2.0),
            ConductivityGraph::power_law(3.5),
            ConductivityGraph::step(1.0, 2.0),
            ConductivityGraph::step(0.5, 3.0, 0.7),
            ConductivityGraph::piecewise_linear({{0.0, 0.5}, {1.0, 1.0}, {1.0, 2.0}, {2.0, 4.0}}),
            ConductivityGraph::piecewise_linear({{0.0, 1.0}, {0.5, 1.5}, {3.0, 2.0}}),
            smooth(ConductivityGraph::step(1.0, 2.0), 10.0),
            smooth(ConductivityGraph::power_law(2.0), 5.0),
            ConductivityGraph::constant(0.3)};
}

}  // namespace

TEST_CASE("factories validate parameters") {
    CHECK_THROWS_AS(ConductivityGraph::power_law(-1.0), ParameterError);
    CHECK_THROWS_WITH_AS(ConductivityGraph::step(2.0, 1.0), doctest::Contains("0 < a < b"), ParameterError);
    CHECK_THROWS_AS(ConductivityGraph::step(1.0, 1.0), ParameterError);
    CHECK_THROWS_AS(ConductivityGraph::piecewise_linear({}), ParameterError);
    CHECK_THROWS_AS(ConductivityGraph::piecewise_linear({{1.0, 1.0}, {0.5, 1.0}}), ParameterError);
    CHECK_THROWS_AS(ConductivityGraph::piecewise_linear({{1.0, 1.0}, {1.0, 2.0}, {1.0, 3.0}}), ParameterError);
    CHECK_THROWS_AS(ConductivityGraph::constant(-0.1), ParameterError);
    CHECK_THROWS_AS(smooth(ConductivityGraph::step(1, 2), 0.5), ParameterError);
}

TEST_CASE("sigma_eval: closed forms and jump intervals") {
    const auto pl2 = ConductivityGraph::power_law(2.0);
    CHECK(sigma_eval(pl2, 3.0).lo == 9.0);
    CHECK(sigma_eval(pl2, 3.0).hi == 9.0);
    const auto st = ConductivityGraph::step(1.0, 2.0);
    CHECK(sigma_eval(st, 1.0).lo == 1.0);
    CHECK(sigma_eval(st, 1.0).hi == 2.0);
    CHECK(sigma_eval(st, 0.5).lo == 1.0);
    CHECK(sigma_eval(st, 0.5).hi == 1.0);
    CHECK(sigma_value(st, 1.0) == 1.5);
    CHECK_THROWS_AS(sigma_eval(st, -1.0), ParameterError);

    const auto pw = ConductivityGraph::piecewise_linear({{0.0, 0.0}, {1.0, 1.0}, {1.0, 3.0}, {2.0, 5.0}});
    CHECK(sigma_value(pw, 0.25) == doctest::Approx(0.25));
    CHECK(sigma_eval(pw, 1.0).lo == 1.0);
    CHECK(sigma_eval(pw, 1.0).hi == 3.0);
    CHECK(sigma_value(pw, 1.5) == doctest::Approx(4.0));
    CHECK(sigma_value(pw, 10.0) == 5.0);
    CHECK(jump_points(pw) == std::vector<double>{1.0});
}

TEST_CASE("resolve: closed-form examples") {
    auto r = resolve(ConductivityGraph::power_law(2.0), 0.0, 8.0);
    CHECK(r.s == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(r.sigma_eff == doctest::Approx(4.0).epsilon(1e-14));

    r = resolve(ConductivityGraph::power_law(1.0), 1.0, 2.0);
    CHECK(r.s == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.sigma_eff == doctest::Approx(1.0).epsilon(1e-14));

    r = resolve(ConductivityGraph::step(1.0, 2.0), 0.0, 1.5);
    CHECK(r.s == 1.0);
    CHECK(r.sigma_eff == doctest::Approx(1.5).epsilon(1e-15));

    r = resolve(ConductivityGraph::constant(4.0), 1.0, 10.0);
    CHECK(r.s == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(resolve(ConductivityGraph::power_law(2.0), 3.0, 0.0).s == 0.0);
}

TEST_CASE("resolve: agrees with the scan oracle on 200 random cases") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> ul(0.0, 5.0), ur(0.0, 20.0);
    const auto graphs = all_variants();
    for (int k = 0; k < 200; ++k) {
        const auto& g = graphs[static_cast<std::size_t>(k) % graphs.size()];
        const double lambda = k % 3 == 0 ? 0.0 : ul(rng);
        const double r = ur(rng);
        const ResolveResult res = resolve(g, lambda, r);
        const double oracle = scan_oracle(g, lambda, r);
        CAPTURE(describe(g));
        CAPTURE(lambda);
        CAPTURE(r);
        CHECK(std::abs(res.s - oracle) <= 1e-9);
        CHECK(std::abs((lambda + res.sigma_eff) * res.s - r) <= 1e-12 * std::max(1.0, r));
        const SigmaInterval iv = sigma_eval(g, res.s);
        CHECK(res.sigma_eff >= iv.lo - 1e-12 * std::max(1.0, iv.lo));
        CHECK(res.sigma_eff <= iv.hi + 1e-12 * std::max(1.0, iv.hi));
    }
}

TEST_CASE("resolve: monotone in r and exact at jumps") {
    const auto graphs = all_variants();
    for (const auto& g : graphs)
        for (double lambda : {0.0, 0.7}) {
            double prev = 0.0;
            for (int k = 0; k <= 400; ++k) {
                const double s = resolve(g, lambda, 0.05 * k).s;
                CHECK(s >= prev);
                prev = s;
            }
            for (double jump : jump_points(g)) {
                const SigmaInterval iv = sigma_eval(g, jump);
                for (double t : {0.0, 0.3, 1.0}) {
                    const double r = (lambda + iv.lo + t * (iv.hi - iv.lo)) * jump;
                    CHECK(resolve(g, lambda, r).s == jump);
                }
            }
        }
}

TEST_CASE("resolve: degenerate graphs are rejected without a displacement term") {
    const auto flat = ConductivityGraph::piecewise_linear({{0.0, 0.0}, {1.0, 0.0}, {1.0, 2.0}});
    CHECK_FALSE(admits_inverse(flat));
    CHECK(zero_region_end(flat) == 1.0);
    CHECK_THROWS_AS(resolve(flat, 0.0, 0.5), DegeneracyError);
    CHECK_THROWS_WITH_AS(require_invertible(flat), doctest::Contains("vanishes on (0, 1]"), DegeneracyError);
    CHECK(resolve(flat, 1.0, 0.5).s == doctest::Approx(0.5));
    CHECK_THROWS_AS(resolve(ConductivityGraph::constant(0.0), 0.0, 1.0), DegeneracyError);
    CHECK(admits_inverse(ConductivityGraph::power_law(2.0)));
    CHECK_THROWS_AS(resolve(ConductivityGraph::power_law(1.0), -1.0, 1.0), ParameterError);
}

TEST_CASE("resistivity: closed forms and the floor") {
    for (double p : {1.0, 2.0, 4.0}) {
        const auto g = ConductivityGraph::power_law(p);
        for (double r : {0.5, 3.0, 40.0})
            CHECK(resistivity(g, r, 1e-8) == doctest::Approx(std::pow(r, -p / (p + 1.0))).epsilon(1e-12));
    }
    CHECK(resistivity(ConductivityGraph::constant(4.0), 123.0) == 0.25);
    CHECK(resistivity(ConductivityGraph::power_law(2.0), 0.0, 1e-6) ==
          doctest::Approx(std::pow(1e-6, -2.0 / 3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(resistivity(ConductivityGraph::power_law(2.0), 1.0, 0.0), ParameterError);
}

TEST_CASE("monotonicity and growth exponent") {
    CHECK(is_monotone(ConductivityGraph::step(1, 2)));
    CHECK_FALSE(is_monotone(ConductivityGraph::piecewise_linear({{0.0, 2.0}, {1.0, 1.0}})));
    CHECK(growth_exponent(ConductivityGraph::power_law(3.0)) == 3.0);
    CHECK(growth_exponent(ConductivityGraph::step(1, 2)) == 0.0);
    CHECK(growth_exponent(smooth(ConductivityGraph::power_law(2.0), 4.0)) == 2.0);
}

TEST_CASE("integrate_sqrt_law: closed-form integrals") {
    for (double p : {0.0, 1.0, 2.0, 3.0}) {
        const auto g = ConductivityGraph::power_law(p);
        const double s = 2.3;
        CHECK(integrate_sqrt_law(g, 0.0, s * s) == doctest::Approx(2.0 * std::pow(s, p + 2.0) / (p + 2.0)).epsilon(1e-8));
    }
    const auto st = ConductivityGraph::step(1.0, 2.0);
    for (double s : {0.5, 1.0, 2.0, 3.7}) {
        const double expect = 1.0 * std::min(s * s, 1.0) + 2.0 * std::max(s * s - 1.0, 0.0);
        CHECK(integrate_sqrt_law(st, 0.0, s * s) == doctest::Approx(expect).epsilon(1e-8));
    }
}

TEST_CASE("validate_growth: passing and failing laws") {
    for (double p : {0.0, 1.0, 2.0, 3.0}) {
        GrowthParams gp;
        gp.p = p;
        gp.a0 = 2.0 / (p + 2.0);
        gp.a1 = 0.0;
        gp.b0 = 1.0;
        const GrowthReport rep = validate_growth(ConductivityGraph::power_law(p), gp);
        CHECK(rep.pass());
        CHECK_FALSE(rep.first_failure);
    }
    GrowthParams step_params{0.0, 1.0, 2.0, 2.0, 2.0, 10.0, 200};
    CHECK(validate_growth(ConductivityGraph::step(1.0, 2.0), step_params).pass());

    GrowthParams too_steep{2.0, 0.6, 0.0, 1.0, 0.0, 10.0, 200};
    const GrowthReport lower = validate_growth(ConductivityGraph::power_law(2.0), too_steep);
    CHECK_FALSE(lower.lower_pass);
    CHECK(lower.first_failure);

    GrowthParams tight{1.0, 0.1, 0.0, 0.5, 0.0, 10.0, 200};
    CHECK_FALSE(validate_growth(ConductivityGraph::power_law(1.0), tight).upper_pass);

    const auto decreasing = ConductivityGraph::piecewise_linear({{0.0, 3.0}, {1.0, 2.0}, {2.0, 1.0}});
    const GrowthReport mono = validate_growth(decreasing, GrowthParams{0.0, 0.1, 5.0, 3.0, 0.0, 10.0, 50});
    CHECK_FALSE(mono.monotone_pass);
    CHECK_FALSE(mono.pass());

    CHECK_THROWS_AS(validate_growth(ConductivityGraph::power_law(1.0), GrowthParams{1.0, 1.0, 0.0, 1.0, 5.0, 2.0, 200}),
                    ParameterError);
    CHECK_THROWS_AS(validate_growth(ConductivityGraph::power_law(1.0), GrowthParams{1.0, 1.0, 0.0, 1.0, 0.0, 10.0, 5}),
                    ParameterError);
}

TEST_CASE("smooth: linear ramp across the jump, identity elsewhere") {
    const auto st = ConductivityGraph::step(1.0, 2.0);
    const auto s10 = smooth(st, 10.0);
    CHECK(sigma_value(s10, 0.85) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sigma_value(s10, 1.15) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(sigma_value(s10, 1.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(sigma_value(s10, 0.95) == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(jump_points(s10).empty());
    CHECK(is_monotone(s10));

    const auto pl = ConductivityGraph::power_law(1.5);
    const auto spl = smooth(pl, 7.0);
    for (int k = 0; k < 1000; ++k) {
        const double s = 0.01 * k;
        CHECK(sigma_value(spl, s) == sigma_value(pl, s));
    }

    const auto two = ConductivityGraph::piecewise_linear({{0.0, 1.0}, {1.0, 1.0}, {1.0, 2.0}, {2.0, 2.0}, {2.0, 3.0}});
    CHECK_THROWS_AS(smooth(two, 10.0), UnsupportedShapeError);
}

TEST_CASE("smooth: resolve converges to the jump graph at rate 1/m") {
    const auto st = ConductivityGraph::step(1.0, 2.0);
    for (double lambda : {0.0, 0.5})
        for (double r : {1.0 + lambda, 1.2 + lambda, 1.5 + lambda, 1.9 + lambda, 2.0 + lambda}) {
            const double s = resolve(st, lambda, r).s;
            for (double m : {10.0, 100.0, 1000.0}) CHECK(std::abs(resolve(smooth(st, m), lambda, r).s - s) <= 2.0 / m);
        }
}

TEST_CASE("ConductivityField: per-sample selection") {
    ConductivityField f(ConductivityGraph::constant(1.0), ConductivityGraph::power_law(2.0), {0, 1, 1, 0});
    CHECK(f.at(1).kind() == "power_law");
    CHECK(f.at(3).kind() == "constant");
    CHECK(f.growth_exponent() == 2.0);
    CHECK_NOTHROW(f.check_size(4));
    CHECK_THROWS_AS(f.check_size(5), StructuralError);
    CHECK_THROWS_AS(ConductivityField(ConductivityGraph::constant(1.0), ConductivityGraph::constant(2.0), {0, 2}),
                    ParameterError);
}
