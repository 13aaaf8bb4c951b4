#pragma once

// Preconditions shared by the solvers.

#include <algorithm>
#include <cmath>
#include <string>

#include "nlmaxwell/errors.hpp"
#include "nlmaxwell/grid.hpp"

namespace nlmaxwell::detail {

/// ||div_H(h)||_inf must stay at roundoff level relative to ||h||_inf / h_min.
inline void require_solenoidal(const StaggeredGrid& grid, const LocatedField& h, const std::string& who) {
    const double div = lq_norm(grid, div_H(grid, h), kInfinityNorm);
    const double scale = std::max(1.0, lq_norm(grid, h, kInfinityNorm) / grid.min_spacing());
    if (!(div <= 1e-12 * scale))
        throw ConfigError(who + ": initial magnetic field is not divergence-free (max |div H| = " +
                          std::to_string(div) + ")");
}

inline void require_pec(const StaggeredGrid& grid, const LocatedField& e, const std::string& who) {
    if (pec_violation(grid, e.values) != 0.0)
        throw ConfigError(who + ": electric field has nonzero tangential samples on the boundary");
}

inline void require_finite(double x, const char* what) {
    if (!std::isfinite(x)) throw SolverError(std::string("non-finite value in ") + what);
}

}  // namespace nlmaxwell::detail
