#pragma once

// Uniform tensor-product staggered grids.
//
// 2D runs use the transverse-magnetic reduction E = (0, 0, E_z), H = (H_x, H_y, 0):
//   E_z  at nodes            (i, j)          i = 0..nx, j = 0..ny
//   H_x  at y-edges          (i, j + 1/2)    i = 0..nx, j = 0..ny-1
//   H_y  at x-edges          (i + 1/2, j)    i = 0..nx-1, j = 0..ny
// 3D runs use Yee placement: E_a on edges parallel to axis a, H_a on faces
// normal to axis a.
//
// Every component occupies one contiguous block of the flat sample array.
// Inside a block the index map is row-major over (i, j, k): k varies fastest.
// A sample on a PEC boundary carries a tangential electric component; those
// samples are held at zero by every solver.
//
// Quadrature weights are the dual-cell volumes: the cell volume halved once
// for every axis along which the sample sits on a boundary node, so that the
// weights of every component block sum to |Omega|.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nlmaxwell {

enum class Location {
    electric,  // E samples: nodes (2D) or edges (3D)
    magnetic,  // H samples: staggered half points (2D) or faces (3D)
    cell,      // cell centres, used for divergence diagnostics
};

std::string to_string(Location loc);

struct Interval {
    double lower = 0.0;
    double upper = 1.0;

    double length() const { return upper - lower; }
    bool operator==(const Interval&) const = default;
};

/// One component of a located field.
struct ComponentBlock {
    int component = 0;                     // 0 = x, 1 = y, 2 = z
    std::array<std::size_t, 3> extent{};   // sample counts per axis (1 for unused axes)
    std::array<bool, 3> half{};            // sample sits at a half-integer offset on that axis
    std::size_t offset = 0;                // position of the block in the flat array

    std::size_t size() const { return extent[0] * extent[1] * extent[2]; }
    std::size_t index(std::size_t i, std::size_t j, std::size_t k = 0) const {
        return offset + (i * extent[1] + j) * extent[2] + k;
    }
};

class StaggeredGrid {
public:
    /// Placeholder without samples; use the factories for a usable grid.
    StaggeredGrid() = default;

    static StaggeredGrid make_2d(std::size_t nx, std::size_t ny, Interval x, Interval y);
    static StaggeredGrid make_3d(std::size_t nx, std::size_t ny, std::size_t nz,
                                 Interval x, Interval y, Interval z);

    int dim() const { return dim_; }
    std::size_t cells(int axis) const { return cells_[static_cast<std::size_t>(axis)]; }
    double spacing(int axis) const { return spacing_[static_cast<std::size_t>(axis)]; }
    const Interval& extent(int axis) const { return extents_[static_cast<std::size_t>(axis)]; }
    double min_spacing() const;
    double cell_volume() const { return cell_volume_; }
    double domain_volume() const;

    std::span<const ComponentBlock> blocks(Location loc) const;
    std::size_t size(Location loc) const;

    /// Dual-cell quadrature weights, one per sample.
    std::span<const double> weights(Location loc) const;

    /// 1 for electric samples that are free, 0 for tangential samples on the PEC boundary.
    std::span<const unsigned char> electric_interior() const { return interior_; }

    /// Physical coordinates of sample (i, j, k) of a block.
    std::array<double, 3> position(const ComponentBlock& block, std::size_t i, std::size_t j,
                                   std::size_t k = 0) const;

    /// Short human-readable description, used in report fingerprints.
    std::string describe() const;

    bool operator==(const StaggeredGrid& other) const;

private:
    void build();

    int dim_ = 2;
    std::array<std::size_t, 3> cells_{1, 1, 1};
    std::array<double, 3> spacing_{1.0, 1.0, 1.0};
    std::array<Interval, 3> extents_{};
    double cell_volume_ = 1.0;

    std::vector<ComponentBlock> e_blocks_;
    std::vector<ComponentBlock> h_blocks_;
    std::vector<ComponentBlock> c_blocks_;
    std::vector<double> e_weights_;
    std::vector<double> h_weights_;
    std::vector<double> c_weights_;
    std::vector<unsigned char> interior_;
};

/// Samples tagged with their location on a grid.
struct LocatedField {
    Location location = Location::electric;
    std::vector<double> values;

    static LocatedField zeros(const StaggeredGrid& grid, Location loc);
    bool operator==(const LocatedField&) const = default;
};

/// Sentinel exponent selecting the max norm in lq_norm.
inline constexpr double kInfinityNorm = -1.0;

// Pure staggered operators. Each throws StructuralError when the input does
// not match the grid or sits at the wrong location.

/// Staggered curl of an electric field, evaluated at magnetic locations.
LocatedField curl_E(const StaggeredGrid& grid, const LocatedField& e);

/// Staggered curl of a magnetic field at electric locations. Tangential samples
/// on the PEC boundary are returned as zero, which makes curl_H the adjoint of
/// curl_E for PEC-compliant electric fields under the dual-cell inner product.
LocatedField curl_H(const StaggeredGrid& grid, const LocatedField& h);

/// Divergence of a magnetic field at cell centres.
LocatedField div_H(const StaggeredGrid& grid, const LocatedField& h);

/// Weighted pairing sum_i w_i a_i b_i, compensated summation in index order.
double inner_product(const StaggeredGrid& grid, const LocatedField& a, const LocatedField& b);

/// (sum_i w_i |a_i|^q)^(1/q); q = kInfinityNorm gives max_i |a_i|. Throws
/// ParameterError for q < 1.
double lq_norm(const StaggeredGrid& grid, const LocatedField& a, double q);

/// Same norm for raw samples sharing one uniform weight (e.g. a cell volume).
double lq_norm(std::span<const double> values, double weight, double q);

/// Same norm with explicit per-sample weights.
double lq_norm(std::span<const double> values, std::span<const double> weights, double q);

/// Sets every tangential boundary sample of an electric field to zero.
void apply_pec(const StaggeredGrid& grid, std::vector<double>& e);

/// Max |value| over boundary tangential samples (0 for a PEC-compliant field).
double pec_violation(const StaggeredGrid& grid, std::span<const double> e);

/// Samples a vector function f(x, y, z) -> (fx, fy, fz) at the given location.
template <typename Fn>
LocatedField sample(const StaggeredGrid& grid, Location loc, Fn&& fn) {
    LocatedField out = LocatedField::zeros(grid, loc);
    for (const ComponentBlock& b : grid.blocks(loc)) {
        for (std::size_t i = 0; i < b.extent[0]; ++i)
            for (std::size_t j = 0; j < b.extent[1]; ++j)
                for (std::size_t k = 0; k < b.extent[2]; ++k) {
                    const auto p = grid.position(b, i, j, k);
                    const std::array<double, 3> v = fn(p[0], p[1], p[2]);
                    out.values[b.index(i, j, k)] = v[static_cast<std::size_t>(b.component)];
                }
    }
    return out;
}

/// Writes one CSV row per sample: i, j, k, component, value.
void write_field_csv(const StaggeredGrid& grid, const LocatedField& field, const std::string& path);

/// Pairs an electric and a magnetic array with their time convention.
struct FieldState {
    enum class Layout {
        collocated,          // E and H both at t
        h_half_step_behind,  // leapfrog: H stored at t - dt/2
        e_one_step_behind,   // explicit quasi-static step: E computed from H at t - dt
    };

    LocatedField e{Location::electric, {}};
    LocatedField h{Location::magnetic, {}};
    double t = 0.0;
    Layout layout = Layout::collocated;
    /// sigma_eff from the most recent resolvent solve, per electric sample (may be empty).
    std::vector<double> sigma_eff;

    static FieldState zeros(const StaggeredGrid& grid);
    /// Throws StructuralError on size mismatch and ParameterError on non-finite samples.
    void validate(const StaggeredGrid& grid) const;
};

}  // namespace nlmaxwell
