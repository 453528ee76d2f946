#pragma once

// Cross-cutting numerical verification: eikonal residuals, the null-gradient
// factorization determinant, and gauge-symmetry checks. Works against any
// pointwise field evaluator.
//
// Convention: the eikonal form is the holomorphic square
// (dS/dt)^2 - (dS/dx)^2 - (dS/dy)^2 - (dS/dz)^2 with no conjugation; this is
// the tensor form eta^{mu nu} d_mu S d_nu S and the only reading under which
// complex-valued solutions close.

#include <functional>

#include "eiko/core.hpp"

namespace eiko::verify {

using FieldEvaluator = std::function<Complex(const Event&)>;

/// Centered finite-difference 4-gradient at step h (second order).
/// Throws InsufficientStencilError when the evaluator fails on the stencil.
struct FourGradient {
    Complex dt, dx, dy, dz;

    Complex du() const { return 0.5 * (dt + dz); }
    Complex dv() const { return 0.5 * (dt - dz); }
    Complex dw() const { return 0.5 * (dx + Complex(0, 1) * dy); }
    Complex dwbar() const { return 0.5 * (dx - Complex(0, 1) * dy); }
};

FourGradient fd_gradient(const FieldEvaluator& s, const Event& e, double h);

/// (d_t S)^2 - (d_x S)^2 - (d_y S)^2 - (d_z S)^2 by centered differences.
Complex eikonal_residual(const FieldEvaluator& s, const Event& e, double h);

/// d_u S d_v S - d_w S d_wbar S; algebraically equals one quarter of the
/// eikonal residual.
Complex factorization_check(const FieldEvaluator& s, const Event& e, double h);

/// Max componentwise deviation of (lambda phi) x (lambda^-1 psi) from
/// phi x psi. Zero up to rounding for any lambda != 0.
double gauge_invariance_check(const UnprimedSpinor& phi, const PrimedSpinor& psi,
                              const Complex& lambda);

struct ResidualReport {
    Event point;
    Complex eikonal;
    Complex determinant;
    double scale = 1.0;  // 1 + max |gradient component| over the stencil
    double h = 0.0;
    bool pass = false;
};

/// Run both residuals at a point against tol*scale.
ResidualReport report(const FieldEvaluator& s, const Event& e, double h, double tol = 1e-6);

/// Default step for residual checks at a point.
double default_step(const Event& e);

}  // namespace eiko::verify
