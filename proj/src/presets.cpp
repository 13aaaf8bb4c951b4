#include "nlmaxwell/presets.hpp"

#include <cmath>
#include <numbers>

#include "nlmaxwell/errors.hpp"

namespace nlmaxwell {

std::string to_string(FieldPreset::Kind kind) {
    switch (kind) {
        case FieldPreset::Kind::zero: return "zero";
        case FieldPreset::Kind::solenoidal_mode: return "solenoidal_mode";
        case FieldPreset::Kind::gaussian_bump: return "gaussian_bump";
    }
    return "unknown";
}

std::string to_string(MaterialPreset::Kind kind) {
    switch (kind) {
        case MaterialPreset::Kind::uniform: return "uniform";
        case MaterialPreset::Kind::half_space: return "half_space";
        case MaterialPreset::Kind::ball: return "ball";
    }
    return "unknown";
}

namespace {

double profile(const StaggeredGrid& grid, const FieldPreset& preset, const std::array<double, 3>& x) {
    switch (preset.kind) {
        case FieldPreset::Kind::zero: return 0.0;
        case FieldPreset::Kind::solenoidal_mode: {
            double v = preset.mode.amplitude;
            for (int a = 0; a < grid.dim(); ++a) {
                const auto& iv = grid.extent(a);
                const double k = preset.mode.wavenumbers[static_cast<std::size_t>(a)];
                v *= std::sin(k * std::numbers::pi * (x[static_cast<std::size_t>(a)] - iv.lower) / iv.length());
            }
            return v;
        }
        case FieldPreset::Kind::gaussian_bump: {
            double r2 = 0.0;
            for (int a = 0; a < grid.dim(); ++a) {
                const double d = x[static_cast<std::size_t>(a)] - preset.bump.center[static_cast<std::size_t>(a)];
                r2 += d * d;
            }
            const double w = preset.bump.width;
            return preset.bump.amplitude * std::exp(-r2 / (w * w));
        }
    }
    return 0.0;
}

}  // namespace

LocatedField electric_preset(const StaggeredGrid& grid, const FieldPreset& preset) {
    if (preset.kind == FieldPreset::Kind::gaussian_bump && !(preset.bump.width > 0.0))
        throw ParameterError("gaussian_bump: width must be > 0");
    LocatedField out = LocatedField::zeros(grid, Location::electric);
    for (const ComponentBlock& b : grid.blocks(Location::electric))
        for (std::size_t i = 0; i < b.extent[0]; ++i)
            for (std::size_t j = 0; j < b.extent[1]; ++j)
                for (std::size_t k = 0; k < b.extent[2]; ++k)
                    out.values[b.index(i, j, k)] = profile(grid, preset, grid.position(b, i, j, k));
    apply_pec(grid, out.values);
    return out;
}

LocatedField magnetic_preset(const StaggeredGrid& grid, const FieldPreset& preset) {
    return curl_E(grid, electric_preset(grid, preset));
}

double smooth_ramp(double t, double ramp_time) {
    if (ramp_time <= 0.0) return t >= 0.0 ? 1.0 : 0.0;
    const double u = std::clamp(t / ramp_time, 0.0, 1.0);
    return u * u * (3.0 - 2.0 * u);
}

Forcing Forcing::zero() { return Forcing{}; }

Forcing Forcing::ramped(LocatedField profile, double ramp_time) {
    if (profile.location != Location::electric) throw StructuralError("forcing profile must be electric-located");
    if (!(ramp_time >= 0.0)) throw ParameterError("forcing: ramp time must be >= 0");
    Forcing f;
    f.fn_ = [profile = std::move(profile), ramp_time](const StaggeredGrid&, double t) {
        LocatedField out = profile;
        const double r = smooth_ramp(t, ramp_time);
        for (double& v : out.values) v *= r;
        return out;
    };
    return f;
}

Forcing Forcing::custom(Fn fn) {
    Forcing f;
    f.fn_ = std::move(fn);
    return f;
}

LocatedField Forcing::at(const StaggeredGrid& grid, double t) const {
    if (!fn_) return LocatedField::zeros(grid, Location::electric);
    LocatedField out = fn_(grid, t);
    if (out.location != Location::electric || out.values.size() != grid.size(Location::electric))
        throw StructuralError("forcing: result does not match the electric samples of the grid");
    apply_pec(grid, out.values);
    return out;
}

std::vector<std::uint8_t> material_index(const StaggeredGrid& grid, const MaterialPreset& preset) {
    std::vector<std::uint8_t> index(grid.size(Location::electric), 0);
    if (preset.kind == MaterialPreset::Kind::uniform) return index;
    if (preset.kind == MaterialPreset::Kind::half_space && (preset.axis < 0 || preset.axis >= grid.dim()))
        throw ParameterError("half_space: axis out of range");
    for (const ComponentBlock& b : grid.blocks(Location::electric))
        for (std::size_t i = 0; i < b.extent[0]; ++i)
            for (std::size_t j = 0; j < b.extent[1]; ++j)
                for (std::size_t k = 0; k < b.extent[2]; ++k) {
                    const auto x = grid.position(b, i, j, k);
                    bool inside = false;
                    if (preset.kind == MaterialPreset::Kind::half_space) {
                        inside = x[static_cast<std::size_t>(preset.axis)] > preset.position;
                    } else {
                        double r2 = 0.0;
                        for (int a = 0; a < grid.dim(); ++a) {
                            const double d = x[static_cast<std::size_t>(a)] - preset.center[static_cast<std::size_t>(a)];
                            r2 += d * d;
                        }
                        inside = r2 < preset.radius * preset.radius;
                    }
                    index[b.index(i, j, k)] = inside ? 1 : 0;
                }
    return index;
}

}  // namespace nlmaxwell
