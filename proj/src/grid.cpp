#include "nlmaxwell/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "nlmaxwell/errors.hpp"

namespace nlmaxwell {

std::string to_string(Location loc) {
    switch (loc) {
        case Location::electric: return "electric";
        case Location::magnetic: return "magnetic";
        case Location::cell: return "cell";
    }
    return "unknown";
}

namespace {

void check_axis(std::size_t n, const Interval& iv, const char* name) {
    if (n < 2) throw ParameterError(std::string("grid: cell count along ") + name + " must be >= 2");
    if (!(iv.length() > 0.0) || !std::isfinite(iv.length()))
        throw ParameterError(std::string("grid: extent along ") + name + " must have positive length");
}

void expect(const StaggeredGrid& grid, const LocatedField& f, Location loc, const char* op) {
    if (f.location != loc)
        throw StructuralError(std::string(op) + ": expected " + to_string(loc) + " samples, got " +
                              to_string(f.location));
    if (f.values.size() != grid.size(loc))
        throw StructuralError(std::string(op) + ": sample count " + std::to_string(f.values.size()) +
                              " does not match grid (" + std::to_string(grid.size(loc)) + ")");
}

}  // namespace

StaggeredGrid StaggeredGrid::make_2d(std::size_t nx, std::size_t ny, Interval x, Interval y) {
    check_axis(nx, x, "x");
    check_axis(ny, y, "y");
    StaggeredGrid g;
    g.dim_ = 2;
    g.cells_ = {nx, ny, 1};
    g.extents_ = {x, y, Interval{0.0, 1.0}};
    g.spacing_ = {x.length() / static_cast<double>(nx), y.length() / static_cast<double>(ny), 1.0};
    g.build();
    return g;
}

StaggeredGrid StaggeredGrid::make_3d(std::size_t nx, std::size_t ny, std::size_t nz, Interval x,
                                     Interval y, Interval z) {
    check_axis(nx, x, "x");
    check_axis(ny, y, "y");
    check_axis(nz, z, "z");
    StaggeredGrid g;
    g.dim_ = 3;
    g.cells_ = {nx, ny, nz};
    g.extents_ = {x, y, z};
    g.spacing_ = {x.length() / static_cast<double>(nx), y.length() / static_cast<double>(ny),
                  z.length() / static_cast<double>(nz)};
    g.build();
    return g;
}

void StaggeredGrid::build() {
    cell_volume_ = 1.0;
    for (int a = 0; a < dim_; ++a) cell_volume_ *= spacing_[static_cast<std::size_t>(a)];

    auto make_block = [&](int component, std::array<bool, 3> half, std::size_t& offset) {
        ComponentBlock b;
        b.component = component;
        for (std::size_t a = 0; a < 3; ++a) {
            if (static_cast<int>(a) >= dim_) {
                b.half[a] = false;
                b.extent[a] = 1;
            } else {
                b.half[a] = half[a];
                b.extent[a] = half[a] ? cells_[a] : cells_[a] + 1;
            }
        }
        b.offset = offset;
        offset += b.size();
        return b;
    };

    std::size_t off = 0;
    if (dim_ == 2) {
        e_blocks_ = {make_block(2, {false, false, false}, off)};
        off = 0;
        h_blocks_ = {make_block(0, {false, true, false}, off), make_block(1, {true, false, false}, off)};
        off = 0;
        c_blocks_ = {make_block(2, {true, true, false}, off)};
    } else {
        e_blocks_ = {make_block(0, {true, false, false}, off), make_block(1, {false, true, false}, off),
                     make_block(2, {false, false, true}, off)};
        off = 0;
        h_blocks_ = {make_block(0, {false, true, true}, off), make_block(1, {true, false, true}, off),
                     make_block(2, {true, true, false}, off)};
        off = 0;
        c_blocks_ = {make_block(0, {true, true, true}, off)};
    }

    auto fill_weights = [&](const std::vector<ComponentBlock>& blocks, std::vector<double>& w,
                            std::vector<unsigned char>* interior) {
        std::size_t total = 0;
        for (const auto& b : blocks) total += b.size();
        w.assign(total, cell_volume_);
        if (interior) interior->assign(total, 1);
        for (const auto& b : blocks) {
            for (std::size_t i = 0; i < b.extent[0]; ++i)
                for (std::size_t j = 0; j < b.extent[1]; ++j)
                    for (std::size_t k = 0; k < b.extent[2]; ++k) {
                        const std::array<std::size_t, 3> idx{i, j, k};
                        double weight = cell_volume_;
                        bool on_boundary = false;
                        for (std::size_t a = 0; a < static_cast<std::size_t>(dim_); ++a) {
                            if (b.half[a]) continue;
                            if (idx[a] == 0 || idx[a] == cells_[a]) {
                                weight *= 0.5;
                                on_boundary = true;
                            }
                        }
                        w[b.index(i, j, k)] = weight;
                        if (interior) (*interior)[b.index(i, j, k)] = on_boundary ? 0 : 1;
                    }
        }
    };
    fill_weights(e_blocks_, e_weights_, &interior_);
    fill_weights(h_blocks_, h_weights_, nullptr);
    fill_weights(c_blocks_, c_weights_, nullptr);
}

double StaggeredGrid::min_spacing() const {
    double h = spacing_[0];
    for (int a = 1; a < dim_; ++a) h = std::min(h, spacing_[static_cast<std::size_t>(a)]);
    return h;
}

double StaggeredGrid::domain_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= extents_[static_cast<std::size_t>(a)].length();
    return v;
}

std::span<const ComponentBlock> StaggeredGrid::blocks(Location loc) const {
    switch (loc) {
        case Location::electric: return e_blocks_;
        case Location::magnetic: return h_blocks_;
        case Location::cell: return c_blocks_;
    }
    return {};
}

std::size_t StaggeredGrid::size(Location loc) const { return weights(loc).size(); }

std::span<const double> StaggeredGrid::weights(Location loc) const {
    switch (loc) {
        case Location::electric: return e_weights_;
        case Location::magnetic: return h_weights_;
        case Location::cell: return c_weights_;
    }
    return {};
}

std::array<double, 3> StaggeredGrid::position(const ComponentBlock& block, std::size_t i,
                                              std::size_t j, std::size_t k) const {
    const std::array<std::size_t, 3> idx{i, j, k};
    std::array<double, 3> p{0.0, 0.0, 0.0};
    for (std::size_t a = 0; a < static_cast<std::size_t>(dim_); ++a) {
        const double shift = block.half[a] ? 0.5 : 0.0;
        p[a] = extents_[a].lower + (static_cast<double>(idx[a]) + shift) * spacing_[a];
    }
    return p;
}

std::string StaggeredGrid::describe() const {
    std::ostringstream os;
    os << std::setprecision(17) << dim_ << "D ";
    for (int a = 0; a < dim_; ++a) os << (a ? "x" : "") << cells_[static_cast<std::size_t>(a)];
    os << " cells on ";
    for (int a = 0; a < dim_; ++a) {
        const auto& iv = extents_[static_cast<std::size_t>(a)];
        os << (a ? "x" : "") << "[" << iv.lower << "," << iv.upper << "]";
    }
    return os.str();
}

bool StaggeredGrid::operator==(const StaggeredGrid& other) const {
    return dim_ == other.dim_ && cells_ == other.cells_ && extents_ == other.extents_;
}

LocatedField LocatedField::zeros(const StaggeredGrid& grid, Location loc) {
    return LocatedField{loc, std::vector<double>(grid.size(loc), 0.0)};
}

LocatedField curl_E(const StaggeredGrid& grid, const LocatedField& e) {
    expect(grid, e, Location::electric, "curl_E");
    LocatedField out = LocatedField::zeros(grid, Location::magnetic);
    const auto eb = grid.blocks(Location::electric);
    const auto hb = grid.blocks(Location::magnetic);
    const auto& E = e.values;
    auto& H = out.values;

    if (grid.dim() == 2) {
        const double ihx = 1.0 / grid.spacing(0), ihy = 1.0 / grid.spacing(1);
        const auto& ez = eb[0];
        const auto& hx = hb[0];
        const auto& hy = hb[1];
        for (std::size_t i = 0; i < hx.extent[0]; ++i)
            for (std::size_t j = 0; j < hx.extent[1]; ++j)
                H[hx.index(i, j)] = (E[ez.index(i, j + 1)] - E[ez.index(i, j)]) * ihy;
        for (std::size_t i = 0; i < hy.extent[0]; ++i)
            for (std::size_t j = 0; j < hy.extent[1]; ++j)
                H[hy.index(i, j)] = -(E[ez.index(i + 1, j)] - E[ez.index(i, j)]) * ihx;
        return out;
    }

    const double ihx = 1.0 / grid.spacing(0), ihy = 1.0 / grid.spacing(1), ihz = 1.0 / grid.spacing(2);
    const auto &ex = eb[0], &ey = eb[1], &ez = eb[2];
    const auto &hx = hb[0], &hy = hb[1], &hz = hb[2];
    for (std::size_t i = 0; i < hx.extent[0]; ++i)
        for (std::size_t j = 0; j < hx.extent[1]; ++j)
            for (std::size_t k = 0; k < hx.extent[2]; ++k)
                H[hx.index(i, j, k)] = (E[ez.index(i, j + 1, k)] - E[ez.index(i, j, k)]) * ihy -
                                       (E[ey.index(i, j, k + 1)] - E[ey.index(i, j, k)]) * ihz;
    for (std::size_t i = 0; i < hy.extent[0]; ++i)
        for (std::size_t j = 0; j < hy.extent[1]; ++j)
            for (std::size_t k = 0; k < hy.extent[2]; ++k)
                H[hy.index(i, j, k)] = (E[ex.index(i, j, k + 1)] - E[ex.index(i, j, k)]) * ihz -
                                       (E[ez.index(i + 1, j, k)] - E[ez.index(i, j, k)]) * ihx;
    for (std::size_t i = 0; i < hz.extent[0]; ++i)
        for (std::size_t j = 0; j < hz.extent[1]; ++j)
            for (std::size_t k = 0; k < hz.extent[2]; ++k)
                H[hz.index(i, j, k)] = (E[ey.index(i + 1, j, k)] - E[ey.index(i, j, k)]) * ihx -
                                       (E[ex.index(i, j + 1, k)] - E[ex.index(i, j, k)]) * ihy;
    return out;
}

LocatedField curl_H(const StaggeredGrid& grid, const LocatedField& h) {
    expect(grid, h, Location::magnetic, "curl_H");
    LocatedField out = LocatedField::zeros(grid, Location::electric);
    const auto eb = grid.blocks(Location::electric);
    const auto hb = grid.blocks(Location::magnetic);
    const auto& H = h.values;
    auto& E = out.values;

    if (grid.dim() == 2) {
        const double ihx = 1.0 / grid.spacing(0), ihy = 1.0 / grid.spacing(1);
        const auto& ez = eb[0];
        const auto& hx = hb[0];
        const auto& hy = hb[1];
        for (std::size_t i = 1; i + 1 < ez.extent[0]; ++i)
            for (std::size_t j = 1; j + 1 < ez.extent[1]; ++j)
                E[ez.index(i, j)] = (H[hy.index(i, j)] - H[hy.index(i - 1, j)]) * ihx -
                                    (H[hx.index(i, j)] - H[hx.index(i, j - 1)]) * ihy;
        return out;
    }

    const double ihx = 1.0 / grid.spacing(0), ihy = 1.0 / grid.spacing(1), ihz = 1.0 / grid.spacing(2);
    const auto &ex = eb[0], &ey = eb[1], &ez = eb[2];
    const auto &hx = hb[0], &hy = hb[1], &hz = hb[2];
    for (std::size_t i = 0; i < ex.extent[0]; ++i)
        for (std::size_t j = 1; j + 1 < ex.extent[1]; ++j)
            for (std::size_t k = 1; k + 1 < ex.extent[2]; ++k)
                E[ex.index(i, j, k)] = (H[hz.index(i, j, k)] - H[hz.index(i, j - 1, k)]) * ihy -
                                       (H[hy.index(i, j, k)] - H[hy.index(i, j, k - 1)]) * ihz;
    for (std::size_t i = 1; i + 1 < ey.extent[0]; ++i)
        for (std::size_t j = 0; j < ey.extent[1]; ++j)
            for (std::size_t k = 1; k + 1 < ey.extent[2]; ++k)
                E[ey.index(i, j, k)] = (H[hx.index(i, j, k)] - H[hx.index(i, j, k - 1)]) * ihz -
                                       (H[hz.index(i, j, k)] - H[hz.index(i - 1, j, k)]) * ihx;
    for (std::size_t i = 1; i + 1 < ez.extent[0]; ++i)
        for (std::size_t j = 1; j + 1 < ez.extent[1]; ++j)
            for (std::size_t k = 0; k < ez.extent[2]; ++k)
                E[ez.index(i, j, k)] = (H[hy.index(i, j, k)] - H[hy.index(i - 1, j, k)]) * ihx -
                                       (H[hx.index(i, j, k)] - H[hx.index(i, j - 1, k)]) * ihy;
    return out;
}

LocatedField div_H(const StaggeredGrid& grid, const LocatedField& h) {
    expect(grid, h, Location::magnetic, "div_H");
    LocatedField out = LocatedField::zeros(grid, Location::cell);
    const auto hb = grid.blocks(Location::magnetic);
    const auto& c = grid.blocks(Location::cell)[0];
    const auto& H = h.values;

    if (grid.dim() == 2) {
        const double ihx = 1.0 / grid.spacing(0), ihy = 1.0 / grid.spacing(1);
        const auto& hx = hb[0];
        const auto& hy = hb[1];
        for (std::size_t i = 0; i < c.extent[0]; ++i)
            for (std::size_t j = 0; j < c.extent[1]; ++j)
                out.values[c.index(i, j)] = (H[hx.index(i + 1, j)] - H[hx.index(i, j)]) * ihx +
                                            (H[hy.index(i, j + 1)] - H[hy.index(i, j)]) * ihy;
        return out;
    }

    const double ihx = 1.0 / grid.spacing(0), ihy = 1.0 / grid.spacing(1), ihz = 1.0 / grid.spacing(2);
    const auto &hx = hb[0], &hy = hb[1], &hz = hb[2];
    for (std::size_t i = 0; i < c.extent[0]; ++i)
        for (std::size_t j = 0; j < c.extent[1]; ++j)
            for (std::size_t k = 0; k < c.extent[2]; ++k)
                out.values[c.index(i, j, k)] = (H[hx.index(i + 1, j, k)] - H[hx.index(i, j, k)]) * ihx +
                                               (H[hy.index(i, j + 1, k)] - H[hy.index(i, j, k)]) * ihy +
                                               (H[hz.index(i, j, k + 1)] - H[hz.index(i, j, k)]) * ihz;
    return out;
}

namespace {

// Neumaier compensated sum, in index order.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace

double inner_product(const StaggeredGrid& grid, const LocatedField& a, const LocatedField& b) {
    if (a.location != b.location)
        throw StructuralError("inner_product: mismatched locations " + to_string(a.location) + " and " +
                              to_string(b.location));
    expect(grid, a, a.location, "inner_product");
    expect(grid, b, b.location, "inner_product");
    const auto w = grid.weights(a.location);
    CompensatedSum sum;
    for (std::size_t i = 0; i < w.size(); ++i) sum.add(w[i] * (a.values[i] * b.values[i]));
    return sum.value();
}

double lq_norm(std::span<const double> values, std::span<const double> weights, double q) {
    if (values.size() != weights.size()) throw StructuralError("lq_norm: weights do not match samples");
    if (q == kInfinityNorm || std::isinf(q)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(q >= 1.0)) throw ParameterError("lq_norm: exponent must be >= 1");
    CompensatedSum sum;
    if (q == 2.0) {
        for (std::size_t i = 0; i < values.size(); ++i) sum.add(weights[i] * (values[i] * values[i]));
        return std::sqrt(sum.value());
    }
    for (std::size_t i = 0; i < values.size(); ++i) sum.add(weights[i] * std::pow(std::abs(values[i]), q));
    return std::pow(sum.value(), 1.0 / q);
}

double lq_norm(std::span<const double> values, double weight, double q) {
    const std::vector<double> w(values.size(), weight);
    return lq_norm(values, w, q);
}

double lq_norm(const StaggeredGrid& grid, const LocatedField& a, double q) {
    expect(grid, a, a.location, "lq_norm");
    return lq_norm(a.values, grid.weights(a.location), q);
}

void apply_pec(const StaggeredGrid& grid, std::vector<double>& e) {
    const auto interior = grid.electric_interior();
    if (e.size() != interior.size()) throw StructuralError("apply_pec: sample count does not match grid");
    for (std::size_t i = 0; i < e.size(); ++i)
        if (!interior[i]) e[i] = 0.0;
}

double pec_violation(const StaggeredGrid& grid, std::span<const double> e) {
    const auto interior = grid.electric_interior();
    if (e.size() != interior.size()) throw StructuralError("pec_violation: sample count does not match grid");
    double m = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i)
        if (!interior[i]) m = std::max(m, std::abs(e[i]));
    return m;
}

void write_field_csv(const StaggeredGrid& grid, const LocatedField& field, const std::string& path) {
    expect(grid, field, field.location, "write_field_csv");
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    os << "i,j,k,component,value\n" << std::setprecision(17);
    for (const ComponentBlock& b : grid.blocks(field.location))
        for (std::size_t i = 0; i < b.extent[0]; ++i)
            for (std::size_t j = 0; j < b.extent[1]; ++j)
                for (std::size_t k = 0; k < b.extent[2]; ++k)
                    os << i << ',' << j << ',' << k << ',' << "xyz"[b.component] << ','
                       << field.values[b.index(i, j, k)] << '\n';
}

FieldState FieldState::zeros(const StaggeredGrid& grid) {
    FieldState s;
    s.e = LocatedField::zeros(grid, Location::electric);
    s.h = LocatedField::zeros(grid, Location::magnetic);
    return s;
}

void FieldState::validate(const StaggeredGrid& grid) const {
    expect(grid, e, Location::electric, "FieldState");
    expect(grid, h, Location::magnetic, "FieldState");
    if (!sigma_eff.empty() && sigma_eff.size() != e.values.size())
        throw StructuralError("FieldState: sigma_eff does not match the electric samples");
    auto finite = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    if (!finite(e.values) || !finite(h.values) || !std::isfinite(t))
        throw ParameterError("FieldState: non-finite sample");
}

}  // namespace nlmaxwell
