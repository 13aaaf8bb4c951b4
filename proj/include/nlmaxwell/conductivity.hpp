#pragma once

// Monotone conductivity laws s -> sigma(s) and the scalar problems built on them.
//
// A graph may be multivalued at isolated jump points, where sigma(s*) is the
// whole interval [sigma(s*-), sigma(s*+)]. The product graph m(s) = sigma(s) s
// inherits the jumps; its resolvent
//
//     find s >= 0 with (lambda + sigma_eff) s = r,  sigma_eff in sigma(s),
//
// is single-valued for every lambda >= 0 as long as sigma does not vanish on an
// interval when lambda = 0.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace nlmaxwell {

class ConductivityGraph;

struct PowerLaw {
    double p = 0.0;  // sigma(s) = s^p
    bool operator==(const PowerLaw&) const = default;
};

struct Step {
    double a = 1.0;          // sigma for s < threshold
    double b = 2.0;          // sigma for s > threshold
    double threshold = 1.0;  // jump point s*
    bool operator==(const Step&) const = default;
};

/// Linear interpolation between knots (s_i, sigma_i), flat outside the table.
/// Two consecutive knots sharing an abscissa encode a jump at that point.
struct PiecewiseLinear {
    std::vector<std::pair<double, double>> knots;
    bool operator==(const PiecewiseLinear&) const = default;
};

/// Base graph with its (single) jump replaced by a linear ramp on
/// [s* - 1/m, s* + 1/m]. Without a jump the base is reproduced exactly.
struct Smoothed {
    std::shared_ptr<const ConductivityGraph> base;
    double m = 1.0;
    std::optional<double> jump;
    bool operator==(const Smoothed& other) const;
};

struct Constant {
    double sigma = 1.0;
    bool operator==(const Constant&) const = default;
};

class ConductivityGraph {
public:
    using Shape = std::variant<PowerLaw, Step, PiecewiseLinear, Smoothed, Constant>;

    // Factories validate the parameters and throw ParameterError.
    static ConductivityGraph power_law(double p);
    static ConductivityGraph step(double a, double b, double threshold = 1.0);
    /// Abscissae must be >= 0 and non-decreasing (at most two knots per abscissa),
    /// values >= 0. Monotonicity of the values is not enforced here; see is_monotone.
    static ConductivityGraph piecewise_linear(std::vector<std::pair<double, double>> knots);
    static ConductivityGraph constant(double sigma);

    const Shape& shape() const { return shape_; }
    std::string kind() const;
    bool operator==(const ConductivityGraph& other) const { return shape_ == other.shape_; }

private:
    friend ConductivityGraph smooth(const ConductivityGraph& graph, double m);
    explicit ConductivityGraph(Shape shape) : shape_(std::move(shape)) {}
    Shape shape_;
};

struct SigmaInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool single() const { return lo == hi; }
};

/// sigma(s) as a closed interval: degenerate at continuity points, the full
/// jump at a jump point. Throws ParameterError for s < 0.
SigmaInterval sigma_eval(const ConductivityGraph& graph, double s);

/// Representative single value (midpoint of the interval at a jump).
double sigma_value(const ConductivityGraph& graph, double s);

struct ResolveResult {
    double s = 0.0;
    double sigma_eff = 0.0;
};

/// Unique s >= 0 with (lambda + sigma_eff) s = r, sigma_eff in sigma_eval(graph, s).
/// lambda = 0 inverts the product graph. At a jump the selection
/// sigma_eff = r / s* - lambda is returned so that the relation holds exactly.
/// Throws DegeneracyError when lambda = 0 and sigma vanishes on an interval,
/// ConvergenceError if bracketing fails.
ResolveResult resolve(const ConductivityGraph& graph, double lambda, double r);

inline constexpr double kDefaultResistivityFloor = 1e-8;

/// 1 / sigma_eff for the quasi-static inverse at max(r, delta).
double resistivity(const ConductivityGraph& graph, double r, double delta = kDefaultResistivityFloor);

/// Jump points of the graph, ascending.
std::vector<double> jump_points(const ConductivityGraph& graph);

/// sup{ s : sigma(s) = 0 }, or 0 when sigma > 0 on (0, inf). Infinity when sigma == 0.
double zero_region_end(const ConductivityGraph& graph);

/// True when the product graph can be inverted without a displacement term.
bool admits_inverse(const ConductivityGraph& graph);

/// Throws DegeneracyError unless admits_inverse(graph).
void require_invertible(const ConductivityGraph& graph);

/// Checks the graph is non-decreasing; sampled for piecewise tables by their knots.
bool is_monotone(const ConductivityGraph& graph);

/// Growth exponent p used in the L^{p+2} / L^{(p+2)/(p+1)} diagnostics.
double growth_exponent(const ConductivityGraph& graph);

/// Continuous monotone mollification; m >= 1. Throws UnsupportedShapeError
/// when the graph has more than one jump.
ConductivityGraph smooth(const ConductivityGraph& graph, double m);

std::string describe(const ConductivityGraph& graph);

struct GrowthParams {
    double p = 0.0;
    double a0 = 1.0;
    double a1 = 0.0;
    double b0 = 1.0;
    double m0 = 0.0;
    double s_max = 10.0;
    std::size_t n_samples = 200;
    bool operator==(const GrowthParams&) const = default;
};

struct GrowthReport {
    GrowthParams params;
    bool lower_pass = false;
    bool upper_pass = false;
    bool monotone_pass = false;
    /// min over samples s >= M0 of  integral - (a0 s^{p+2} - a1)
    double worst_lower_margin = 0.0;
    /// max over samples of sigma(s) / (b0 (1 + s^p))
    double worst_upper_ratio = 0.0;
    /// first sample where a bound or monotonicity failed, if any
    std::optional<double> first_failure;

    bool pass() const { return lower_pass && upper_pass && monotone_pass; }
};

/// Checks the two growth bounds
///     int_0^{s^2} sigma(sqrt(u)) du >= a0 s^{p+2} - a1   for s >= M0,
///     0 <= sigma(s) <= b0 (1 + s^p),
/// and monotonicity on n_samples points of [0, s_max]. The integral uses
/// adaptive trapezoid quadrature with relative tolerance 1e-8. Failures are
/// reported in the result; invalid parameters throw ParameterError.
GrowthReport validate_growth(const ConductivityGraph& graph, const GrowthParams& params);

/// Adaptive trapezoid quadrature of sigma(sqrt(u)) over [u0, u1].
double integrate_sqrt_law(const ConductivityGraph& graph, double u0, double u1, double rel_tol = 1e-8);

/// Per-sample selection between up to two graphs (material index 0 or 1).
class ConductivityField {
public:
    ConductivityField() = default;
    explicit ConductivityField(ConductivityGraph graph) : graphs_{std::move(graph)} {}
    ConductivityField(ConductivityGraph g0, ConductivityGraph g1, std::vector<std::uint8_t> index);

    const ConductivityGraph& at(std::size_t sample) const {
        return graphs_[index_.empty() ? 0 : index_[sample]];
    }
    const std::vector<ConductivityGraph>& graphs() const { return graphs_; }
    const std::vector<std::uint8_t>& index() const { return index_; }
    bool uniform() const { return graphs_.size() == 1; }
    /// Throws StructuralError if the index does not cover n samples.
    void check_size(std::size_t n) const;
    /// Largest growth exponent over the graphs.
    double growth_exponent() const;

private:
    std::vector<ConductivityGraph> graphs_;
    std::vector<std::uint8_t> index_;
};

}  // namespace nlmaxwell
