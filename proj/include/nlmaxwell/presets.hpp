#pragma once

// Initial data, forcing and material-map presets.
//
// Magnetic initial data is always built as the discrete curl of an electric-
// located potential, so div_H of it vanishes up to roundoff. Electric data and
// forcing profiles vanish on the PEC boundary.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nlmaxwell/grid.hpp"

namespace nlmaxwell {

struct SolenoidalMode {
    std::array<int, 3> wavenumbers{1, 1, 1};
    double amplitude = 1.0;
    bool operator==(const SolenoidalMode&) const = default;
};

struct GaussianBump {
    std::array<double, 3> center{0.5, 0.5, 0.5};
    double width = 0.2;
    double amplitude = 1.0;
    bool operator==(const GaussianBump&) const = default;
};

struct ZeroField {
    bool operator==(const ZeroField&) const = default;
};

/// Scalar profile p(x) used by all field presets: a sine mode vanishing on the
/// boundary, a Gaussian bump, or zero.
struct FieldPreset {
    enum class Kind { zero, solenoidal_mode, gaussian_bump };
    Kind kind = Kind::zero;
    SolenoidalMode mode;
    GaussianBump bump;

    static FieldPreset zero() { return {}; }
    static FieldPreset sine_mode(SolenoidalMode m) { return {Kind::solenoidal_mode, m, {}}; }
    static FieldPreset gaussian(GaussianBump b) { return {Kind::gaussian_bump, {}, b}; }
    bool operator==(const FieldPreset&) const = default;
};

std::string to_string(FieldPreset::Kind kind);

/// Electric-located field whose z-component (2D) or every component (3D)
/// follows the preset profile; tangential boundary samples are zero.
LocatedField electric_preset(const StaggeredGrid& grid, const FieldPreset& preset);

/// H = curl_E(A) with A = electric_preset(grid, preset).
LocatedField magnetic_preset(const StaggeredGrid& grid, const FieldPreset& preset);

/// Time-dependent forcing F(x, t) at electric locations.
class Forcing {
public:
    using Fn = std::function<LocatedField(const StaggeredGrid&, double)>;

    static Forcing zero();
    /// F(x, t) = profile(x) * ramp(t) with the C^1 ramp 3u^2 - 2u^3, u = min(t / ramp_time, 1).
    /// ramp_time = 0 switches the profile on at t = 0.
    static Forcing ramped(LocatedField profile, double ramp_time);
    /// Arbitrary forcing; the result is projected onto PEC-compliant fields.
    static Forcing custom(Fn fn);

    LocatedField at(const StaggeredGrid& grid, double t) const;
    bool is_zero() const { return !fn_; }

private:
    Fn fn_;
};

/// Smooth ramp in [0, 1] with zero slope at both ends.
double smooth_ramp(double t, double ramp_time);

struct MaterialPreset {
    enum class Kind { uniform, half_space, ball };
    Kind kind = Kind::uniform;
    int axis = 0;             // half_space: material 1 where x[axis] > position
    double position = 0.5;
    std::array<double, 3> center{0.5, 0.5, 0.5};  // ball: material 1 inside
    double radius = 0.25;
    bool operator==(const MaterialPreset&) const = default;
};

std::string to_string(MaterialPreset::Kind kind);

/// Material index (0 or 1) per electric sample.
std::vector<std::uint8_t> material_index(const StaggeredGrid& grid, const MaterialPreset& preset);

}  // namespace nlmaxwell
