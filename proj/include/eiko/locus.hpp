#pragma once

// Zero-set extraction for complex scalar fields over a fixed-time slice:
// marching-cell candidate detection on the lattice followed by in-cell
// Gauss-Newton refinement of (Re f, Im f) = 0 and optional validation.

#include <functional>
#include <vector>

#include "eiko/core.hpp"
#include "eiko/roots.hpp"

namespace eiko::locus {

struct SingularLocus {
    struct Point {
        double x, y, z;
        double residual;  // |f| after refinement
    };
    std::vector<Point> points;
    double t = 0.0;
    double res = 0.0;
};

struct ExtractOptions {
    int max_refine = 48;
    double accept_tol = 1e-8;   // |f| at the refined point
    double step_clamp = 1.5;    // refinement step bound, in cells
};

/// Scan the slice for cells whose corners change sign in both Re f and
/// Im f, refine each candidate with Gauss-Newton, keep points that pass the
/// residual bound and the validator (when given). Deterministic.
SingularLocus extract_zero_locus(const std::function<Complex(const Event&)>& f,
                                 const roots::GridSpec& slice,
                                 const std::function<bool(const Event&)>& validate = {},
                                 const ExtractOptions& opts = {});

/// Directed Hausdorff-style helpers for tests and acceptance checks.
double max_distance_to_set(const std::vector<SingularLocus::Point>& from,
                           const std::function<double(double, double, double)>& dist_to_set);

}  // namespace eiko::locus
