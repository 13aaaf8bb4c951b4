#include "nlmaxwell/conductivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nlmaxwell/errors.hpp"

namespace nlmaxwell {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

SigmaInterval eval_pwl(const PiecewiseLinear& g, double s) {
    const auto& k = g.knots;
    if (s < k.front().first) return {k.front().second, k.front().second};
    if (s > k.back().first) return {k.back().second, k.back().second};
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (s == k[i].first) {
            if (i + 1 < k.size() && k[i + 1].first == s) {
                const double a = k[i].second, b = k[i + 1].second;
                return {std::min(a, b), std::max(a, b)};
            }
            return {k[i].second, k[i].second};
        }
        if (i + 1 < k.size() && s > k[i].first && s < k[i + 1].first) {
            const double t = (s - k[i].first) / (k[i + 1].first - k[i].first);
            const double v = k[i].second + t * (k[i + 1].second - k[i].second);
            return {v, v};
        }
    }
    return {k.back().second, k.back().second};
}

struct Window {
    double left;
    double right;
};

Window window_of(const Smoothed& g) {
    return {std::max(0.0, *g.jump - 1.0 / g.m), *g.jump + 1.0 / g.m};
}

SigmaInterval eval(const ConductivityGraph& graph, double s) {
    return std::visit(
        overloaded{
            [&](const PowerLaw& g) {
                const double v = std::pow(s, g.p);
                return SigmaInterval{v, v};
            },
            [&](const Step& g) {
                if (s < g.threshold) return SigmaInterval{g.a, g.a};
                if (s > g.threshold) return SigmaInterval{g.b, g.b};
                return SigmaInterval{g.a, g.b};
            },
            [&](const PiecewiseLinear& g) { return eval_pwl(g, s); },
            [&](const Smoothed& g) {
                if (!g.jump) return eval(*g.base, s);
                const Window w = window_of(g);
                if (s <= w.left || s >= w.right) {
                    // the base is continuous away from its single jump
                    return eval(*g.base, s);
                }
                const double lo = eval(*g.base, w.left).lo;
                const double hi = eval(*g.base, w.right).hi;
                const double v = lo + (hi - lo) * (s - w.left) / (w.right - w.left);
                return SigmaInterval{v, v};
            },
            [&](const Constant& g) { return SigmaInterval{g.sigma, g.sigma}; },
        },
        graph.shape());
}

double clamp_sigma(double v, const SigmaInterval& iv) { return std::clamp(v, iv.lo, iv.hi); }

// Bracketing bisection on phi(s) = (lambda + sigma(s)) s for graphs without a
// closed form. Jump points are handled before the search.
ResolveResult bisect(const ConductivityGraph& g, double lambda, double r) {
    for (double sj : jump_points(g)) {
        const SigmaInterval iv = eval(g, sj);
        if ((lambda + iv.lo) * sj <= r && r <= (lambda + iv.hi) * sj)
            return {sj, clamp_sigma(r / sj - lambda, iv)};
    }

    auto phi_lo = [&](double s) { return (lambda + eval(g, s).lo) * s; };

    double hi = 1.0;
    if (lambda > 0.0) {
        hi = std::max(1.0, r / lambda);
    } else {
        hi = std::max(1.0, 2.0 * std::pow(r, 1.0 / (growth_exponent(g) + 1.0)));
    }
    int guard = 0;
    while (phi_lo(hi) < r) {
        hi *= 2.0;
        if (++guard > 2100 || !std::isfinite(hi))
            throw ConvergenceError("resolve: failed to bracket the root (r = " + std::to_string(r) + ")");
    }
    // shrink the upper end geometrically so the bracket is [hi/2, hi]
    guard = 0;
    while (hi > std::numeric_limits<double>::min() && phi_lo(0.5 * hi) >= r) {
        hi *= 0.5;
        if (++guard > 2200) throw ConvergenceError("resolve: bracket collapse did not terminate");
    }
    double lo = 0.5 * hi;

    constexpr int kMaxBisections = 200;
    bool converged = false;
    for (int it = 0; it < kMaxBisections; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) {
            converged = true;
            break;
        }
        const SigmaInterval iv = eval(g, mid);
        if ((lambda + iv.hi) * mid < r) {
            lo = mid;
        } else if ((lambda + iv.lo) * mid > r) {
            hi = mid;
        } else {
            return {mid, clamp_sigma(r / mid - lambda, iv)};
        }
    }
    if (!converged) throw ConvergenceError("resolve: bisection did not converge in 200 iterations");
    const double rl = std::abs(phi_lo(lo) - r);
    const double rh = std::abs(phi_lo(hi) - r);
    const double s = rl <= rh ? lo : hi;
    return {s, eval(g, s).lo};
}

// lambda s + s^{p+1} = r by Newton from above; the map is convex and increasing
// so the iterates decrease monotonically to the root.
ResolveResult power_law_newton(double p, double lambda, double r) {
    double s = std::min(r / lambda, std::pow(r, 1.0 / (p + 1.0)));
    for (int it = 0; it < 200; ++it) {
        const double sp = std::pow(s, p);
        const double f = lambda * s + sp * s - r;
        const double df = lambda + (p + 1.0) * sp;
        if (f <= 0.0 || df <= 0.0) return {s, sp};
        const double next = s - f / df;
        if (!(next < s) || next < 0.0) return {s, sp};
        s = next;
    }
    throw ConvergenceError("resolve: power-law Newton iteration did not converge");
}

}  // namespace

bool Smoothed::operator==(const Smoothed& other) const {
    const bool same_base = (base && other.base) ? (*base == *other.base) : (base == other.base);
    return same_base && m == other.m && jump == other.jump;
}

ConductivityGraph ConductivityGraph::power_law(double p) {
    if (!finite_nonneg(p)) throw ParameterError("power_law: exponent p must be finite and >= 0");
    return ConductivityGraph(PowerLaw{p});
}

ConductivityGraph ConductivityGraph::step(double a, double b, double threshold) {
    if (!(std::isfinite(a) && std::isfinite(b) && a > 0.0 && a < b))
        throw ParameterError("step: requires 0 < a < b");
    if (!(std::isfinite(threshold) && threshold > 0.0)) throw ParameterError("step: threshold must be > 0");
    return ConductivityGraph(Step{a, b, threshold});
}

ConductivityGraph ConductivityGraph::piecewise_linear(std::vector<std::pair<double, double>> knots) {
    if (knots.empty()) throw ParameterError("piecewise_linear: at least one knot required");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const auto [s, v] = knots[i];
        if (!finite_nonneg(s)) throw ParameterError("piecewise_linear: abscissae must be finite and >= 0");
        if (!finite_nonneg(v)) throw ParameterError("piecewise_linear: values must be finite and >= 0");
        if (i > 0 && s < knots[i - 1].first)
            throw ParameterError("piecewise_linear: abscissae must be non-decreasing");
        if (i > 1 && s == knots[i - 1].first && s == knots[i - 2].first)
            throw ParameterError("piecewise_linear: at most two knots may share an abscissa");
    }
    return ConductivityGraph(PiecewiseLinear{std::move(knots)});
}

ConductivityGraph ConductivityGraph::constant(double sigma) {
    if (!finite_nonneg(sigma)) throw ParameterError("constant: sigma must be finite and >= 0");
    return ConductivityGraph(Constant{sigma});
}

std::string ConductivityGraph::kind() const {
    return std::visit(overloaded{
                          [](const PowerLaw&) { return std::string("power_law"); },
                          [](const Step&) { return std::string("step"); },
                          [](const PiecewiseLinear&) { return std::string("piecewise_linear"); },
                          [](const Smoothed&) { return std::string("smoothed"); },
                          [](const Constant&) { return std::string("constant"); },
                      },
                      shape_);
}

SigmaInterval sigma_eval(const ConductivityGraph& graph, double s) {
    if (!(s >= 0.0)) throw ParameterError("sigma_eval: magnitude must be >= 0");
    return eval(graph, s);
}

double sigma_value(const ConductivityGraph& graph, double s) {
    const SigmaInterval iv = sigma_eval(graph, s);
    return iv.single() ? iv.lo : 0.5 * (iv.lo + iv.hi);
}

std::vector<double> jump_points(const ConductivityGraph& graph) {
    return std::visit(overloaded{
                          [](const PowerLaw&) { return std::vector<double>{}; },
                          [](const Step& g) { return std::vector<double>{g.threshold}; },
                          [](const PiecewiseLinear& g) {
                              std::vector<double> out;
                              for (std::size_t i = 1; i < g.knots.size(); ++i)
                                  if (g.knots[i].first == g.knots[i - 1].first &&
                                      g.knots[i].second != g.knots[i - 1].second)
                                      out.push_back(g.knots[i].first);
                              return out;
                          },
                          [](const Smoothed& g) {
                              std::vector<double> out = jump_points(*g.base);
                              if (g.jump) std::erase(out, *g.jump);
                              return out;
                          },
                          [](const Constant&) { return std::vector<double>{}; },
                      },
                      graph.shape());
}

double zero_region_end(const ConductivityGraph& graph) {
    return std::visit(overloaded{
                          [](const PowerLaw&) { return 0.0; },
                          [](const Step& g) { return g.a == 0.0 ? g.threshold : 0.0; },
                          [](const PiecewiseLinear& g) {
                              if (g.knots.back().second == 0.0) return kInf;
                              double z = 0.0;
                              for (const auto& [s, v] : g.knots)
                                  if (v == 0.0) z = std::max(z, s);
                              return z;
                          },
                          [](const Smoothed& g) {
                              const double zb = zero_region_end(*g.base);
                              if (!g.jump) return zb;
                              const Window w = window_of(g);
                              if (zb <= w.left || zb >= w.right) return zb;
                              return w.left;
                          },
                          [](const Constant& g) { return g.sigma == 0.0 ? kInf : 0.0; },
                      },
                      graph.shape());
}

bool admits_inverse(const ConductivityGraph& graph) { return zero_region_end(graph) == 0.0; }

void require_invertible(const ConductivityGraph& graph) {
    const double z = zero_region_end(graph);
    if (z != 0.0) {
        std::ostringstream os;
        os << "conductivity " << describe(graph) << " vanishes on (0, " << z
           << "]; without the displacement term the field-to-current relation is not invertible "
              "and the quasi-static solution is not unique";
        throw DegeneracyError(os.str());
    }
}

bool is_monotone(const ConductivityGraph& graph) {
    return std::visit(overloaded{
                          [](const PowerLaw&) { return true; },
                          [](const Step& g) { return g.a <= g.b; },
                          [](const PiecewiseLinear& g) {
                              for (std::size_t i = 1; i < g.knots.size(); ++i)
                                  if (g.knots[i].second < g.knots[i - 1].second) return false;
                              return true;
                          },
                          [](const Smoothed& g) { return is_monotone(*g.base); },
                          [](const Constant&) { return true; },
                      },
                      graph.shape());
}

double growth_exponent(const ConductivityGraph& graph) {
    return std::visit(overloaded{
                          [](const PowerLaw& g) { return g.p; },
                          [](const Smoothed& g) { return growth_exponent(*g.base); },
                          [](const auto&) { return 0.0; },
                      },
                      graph.shape());
}

ResolveResult resolve(const ConductivityGraph& graph, double lambda, double r) {
    if (!(std::isfinite(lambda) && lambda >= 0.0)) throw ParameterError("resolve: lambda must be finite and >= 0");
    if (!(std::isfinite(r) && r >= 0.0)) throw ParameterError("resolve: r must be finite and >= 0");
    if (lambda == 0.0) require_invertible(graph);
    if (r == 0.0) return {0.0, eval(graph, 0.0).lo};

    return std::visit(
        overloaded{
            [&](const Constant& g) { return ResolveResult{r / (lambda + g.sigma), g.sigma}; },
            [&](const PowerLaw& g) {
                if (g.p == 0.0) return ResolveResult{r / (lambda + 1.0), 1.0};
                if (lambda == 0.0) {
                    const double s = g.p == 2.0 ? std::cbrt(r) : std::pow(r, 1.0 / (g.p + 1.0));
                    return ResolveResult{s, std::pow(s, g.p)};
                }
                if (g.p == 1.0) {
                    // s^2 + lambda s - r = 0, cancellation-free root
                    const double s = 2.0 * r / (lambda + std::sqrt(lambda * lambda + 4.0 * r));
                    return ResolveResult{s, s};
                }
                return power_law_newton(g.p, lambda, r);
            },
            [&](const Step& g) {
                const double t = g.threshold;
                if (r < (lambda + g.a) * t) return ResolveResult{r / (lambda + g.a), g.a};
                if (r > (lambda + g.b) * t) return ResolveResult{r / (lambda + g.b), g.b};
                return ResolveResult{t, std::clamp(r / t - lambda, g.a, g.b)};
            },
            [&](const auto&) { return bisect(graph, lambda, r); },
        },
        graph.shape());
}

double resistivity(const ConductivityGraph& graph, double r, double delta) {
    if (!(delta > 0.0)) throw ParameterError("resistivity: floor delta must be > 0");
    if (!(r >= 0.0)) throw ParameterError("resistivity: r must be >= 0");
    const ResolveResult res = resolve(graph, 0.0, std::max(r, delta));
    return 1.0 / res.sigma_eff;
}

ConductivityGraph smooth(const ConductivityGraph& graph, double m) {
    if (!(std::isfinite(m) && m >= 1.0)) throw ParameterError("smooth: mollification index m must be >= 1");
    const std::vector<double> jumps = jump_points(graph);
    if (jumps.size() > 1) throw UnsupportedShapeError("smooth: graph has more than one jump");
    Smoothed out;
    out.base = std::make_shared<const ConductivityGraph>(graph);
    out.m = m;
    if (!jumps.empty()) out.jump = jumps.front();
    return ConductivityGraph(std::move(out));
}

std::string describe(const ConductivityGraph& graph) {
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
                   [&](const PowerLaw& g) { os << "power_law(p=" << g.p << ")"; },
                   [&](const Step& g) { os << "step(a=" << g.a << ",b=" << g.b << ",threshold=" << g.threshold << ")"; },
                   [&](const PiecewiseLinear& g) {
                       os << "piecewise_linear(";
                       for (std::size_t i = 0; i < g.knots.size(); ++i)
                           os << (i ? ";" : "") << g.knots[i].first << ":" << g.knots[i].second;
                       os << ")";
                   },
                   [&](const Smoothed& g) { os << "smoothed(m=" << g.m << "," << describe(*g.base) << ")"; },
                   [&](const Constant& g) { os << "constant(" << g.sigma << ")"; },
               },
               graph.shape());
    return os.str();
}

namespace {

double law_at(const ConductivityGraph& g, double u) { return sigma_value(g, std::sqrt(std::max(u, 0.0))); }

double adapt(const ConductivityGraph& g, double a, double b, double fa, double fb, double whole, double tol,
             int depth) {
    const double m = 0.5 * (a + b);
    const double fm = law_at(g, m);
    const double left = 0.5 * (fa + fm) * (m - a);
    const double right = 0.5 * (fm + fb) * (b - m);
    const double refined = left + right;
    if (depth >= 48 || std::abs(refined - whole) <= 3.0 * tol) return refined + (refined - whole) / 3.0;
    return adapt(g, a, m, fa, fm, left, 0.5 * tol, depth + 1) + adapt(g, m, b, fm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate_sqrt_law(const ConductivityGraph& graph, double u0, double u1, double rel_tol) {
    if (!(u1 >= u0)) throw ParameterError("integrate_sqrt_law: empty interval");
    if (u1 == u0) return 0.0;
    // split at the images u = s_j^2 of the jump points
    std::vector<double> cuts{u0};
    for (double sj : jump_points(graph)) {
        const double u = sj * sj;
        if (u > u0 && u < u1) cuts.push_back(u);
    }
    cuts.push_back(u1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        // one-sided limits at the cut points
        const double width = b - a;
        const double fa = law_at(graph, a + 1e-15 * width);
        const double fb = law_at(graph, b - 1e-15 * width);
        const double coarse = 0.5 * (fa + fb) * width;
        const double scale = std::max(std::abs(coarse), std::numeric_limits<double>::min());
        total += adapt(graph, a, b, fa, fb, coarse, rel_tol * scale, 0);
    }
    return total;
}

GrowthReport validate_growth(const ConductivityGraph& graph, const GrowthParams& params) {
    const GrowthParams& P = params;
    if (!(finite_nonneg(P.p))) throw ParameterError("validate_growth: p must be >= 0");
    if (!(P.a0 > 0.0)) throw ParameterError("validate_growth: a0 must be > 0");
    if (!(P.a1 >= 0.0)) throw ParameterError("validate_growth: a1 must be >= 0");
    if (!(P.b0 >= 0.0)) throw ParameterError("validate_growth: b0 must be >= 0");
    if (!(P.m0 >= 0.0 && P.s_max > P.m0 && std::isfinite(P.s_max)))
        throw ParameterError("validate_growth: requires s_max > M0 >= 0");
    if (P.n_samples < 10) throw ParameterError("validate_growth: at least 10 samples required");

    GrowthReport rep;
    rep.params = P;
    rep.lower_pass = rep.upper_pass = rep.monotone_pass = true;
    rep.worst_lower_margin = kInf;
    rep.worst_upper_ratio = 0.0;

    auto fail_at = [&](double s) {
        if (!rep.first_failure) rep.first_failure = s;
    };

    double integral = 0.0;
    double prev_s = 0.0;
    SigmaInterval prev_sigma = eval(graph, 0.0);
    const double n1 = static_cast<double>(P.n_samples - 1);
    for (std::size_t i = 0; i < P.n_samples; ++i) {
        const double s = P.s_max * static_cast<double>(i) / n1;
        if (i > 0) integral += integrate_sqrt_law(graph, prev_s * prev_s, s * s);
        const SigmaInterval sig = eval(graph, s);

        if (i > 0 && sig.lo < prev_sigma.hi - 1e-14 * std::max(1.0, prev_sigma.hi)) {
            rep.monotone_pass = false;
            fail_at(s);
        }
        const double cap = P.b0 * (1.0 + std::pow(s, P.p));
        const double ratio = cap > 0.0 ? sig.hi / cap : (sig.hi > 0.0 ? kInf : 0.0);
        rep.worst_upper_ratio = std::max(rep.worst_upper_ratio, ratio);
        if (sig.lo < 0.0 || sig.hi > cap * (1.0 + 1e-12)) {
            rep.upper_pass = false;
            fail_at(s);
        }
        if (s >= P.m0) {
            const double bound = P.a0 * std::pow(s, P.p + 2.0) - P.a1;
            const double margin = integral - bound;
            rep.worst_lower_margin = std::min(rep.worst_lower_margin, margin);
            // slack one order above the quadrature tolerance
            if (margin < -1e-7 * std::max(1.0, std::abs(bound))) {
                rep.lower_pass = false;
                fail_at(s);
            }
        }
        prev_s = s;
        prev_sigma = sig;
    }
    return rep;
}

ConductivityField::ConductivityField(ConductivityGraph g0, ConductivityGraph g1, std::vector<std::uint8_t> index)
    : graphs_{std::move(g0), std::move(g1)}, index_(std::move(index)) {
    for (auto v : index_)
        if (v > 1) throw ParameterError("ConductivityField: material index must be 0 or 1");
}

void ConductivityField::check_size(std::size_t n) const {
    if (graphs_.empty()) throw StructuralError("ConductivityField: no graph configured");
    if (!index_.empty() && index_.size() != n)
        throw StructuralError("ConductivityField: material index does not cover the electric samples");
}

double ConductivityField::growth_exponent() const {
    double p = 0.0;
    for (const auto& g : graphs_) p = std::max(p, nlmaxwell::growth_exponent(g));
    return p;
}

}  // namespace nlmaxwell
