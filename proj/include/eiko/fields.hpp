#pragma once

// Electromagnetic sector of the second solution class: the field-strength
// spinor F_(AB) = (1/Q)[Pi_AB - d/dG(Pi_A Pi_B / Q)] assembled symbolically
// once per generating function and evaluated along the congruence branch,
// its complex 3-vector form F = E + iB, numeric vacuum-Maxwell residuals in
// the self-dual convention (div F = 0, curl F = i dF/dt), and charges by
// spherical flux integration.

#include <array>
#include <functional>
#include <utility>

#include "eiko/class2.hpp"
#include "eiko/core.hpp"
#include "eiko/genfun.hpp"

namespace eiko::em {

/// Symmetric spinor components of the field strength.
struct EMSpinor {
    Complex f00, f01, f11;
};

/// Self-dual vector F = E + iB: E = Re F, B = Im F.
struct ComplexFieldVector {
    Complex fx, fy, fz;
};

/// Spinor-to-vector normalization, fixed by calibration: with this value the
/// a -> 0 congruence field on the +z axis is +q/z^2 zhat with q = +1/4 on
/// the principal branch, and the flux charge comes out +-1/4.
inline constexpr double kSpinorVectorNorm = -0.5;

ComplexFieldVector to_vector(const EMSpinor& f, double norm = kSpinorVectorNorm);

struct FluxResult {
    double q = 0.0;
    double radius = 0.0;
    int order = 0;
    double err = 0.0;  // |q(order) - q(order/2)| from order doubling
};

/// Field evaluator bound to one congruence branch.
class EMField {
  public:
    EMField(const dsl::GenFun& pi, const dsl::Params& params, const Event& seed_point,
            const Complex& seed_g);

    /// Spinor components at a point; Newton-refines the branch from hint
    /// (or from the seed when no hint is given). Throws SingularPointError
    /// where Q ~ 0.
    EMSpinor spinor_at(const Event& e, std::optional<Complex> hint = std::nullopt) const;
    ComplexFieldVector vector_at(const Event& e,
                                 std::optional<Complex> hint = std::nullopt) const;

    /// Branch value at a point (adaptive continuation from the seed).
    Complex branch_at(const Event& e) const;

    const class2::Congruence& congruence() const { return cong_; }

    /// Flux charge q = (1/4pi) * surface integral of Re(F) . n over the
    /// sphere, Gauss-Legendre x trapezoid at the given order (order
    /// Legendre nodes in cos theta, 2*order azimuthal points). The reported
    /// value is computed at twice the requested order; err compares the two.
    FluxResult charge(const Event& center, double radius, int order) const;

  private:
    class2::Congruence cong_;
    Event seed_point_;
    Complex seed_g_;
    dsl::GenFun f_ast_[3];  // F00, F01, F11 numerically evaluable ASTs

    double flux_once(const Event& center, double radius, int order) const;
};

/// Vacuum Maxwell residuals (div F, curl F - i dF/dt) by centered
/// differences with Richardson extrapolation over steps h and h/2.
std::pair<Complex, std::array<Complex, 3>> maxwell_residual(
    const std::function<ComplexFieldVector(const Event&)>& field, const Event& e,
    double h);

}  // namespace eiko::em
