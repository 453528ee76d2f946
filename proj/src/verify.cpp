#include "eiko/verify.hpp"

#include <algorithm>
#include <cmath>

namespace eiko::verify {

static Complex eval_or_rethrow(const FieldEvaluator& s, const Event& e) {
    try {
        Complex v = s(e);
        if (!is_finite(v)) throw InsufficientStencilError("stencil value is not finite");
        return v;
    } catch (const InsufficientStencilError&) {
        throw;
    } catch (const Error& err) {
        throw InsufficientStencilError(std::string("stencil hit a singular point: ") +
                                       err.what());
    }
}

FourGradient fd_gradient(const FieldEvaluator& s, const Event& e, double h) {
    if (h <= 0.0) throw InvalidInputError("fd_gradient: step must be positive");
    FourGradient g;
    Event p = e, m = e;
    p.t = e.t + h; m.t = e.t - h;
    g.dt = (eval_or_rethrow(s, p) - eval_or_rethrow(s, m)) / (2.0 * h);
    p = m = e;
    p.x = e.x + h; m.x = e.x - h;
    g.dx = (eval_or_rethrow(s, p) - eval_or_rethrow(s, m)) / (2.0 * h);
    p = m = e;
    p.y = e.y + h; m.y = e.y - h;
    g.dy = (eval_or_rethrow(s, p) - eval_or_rethrow(s, m)) / (2.0 * h);
    p = m = e;
    p.z = e.z + h; m.z = e.z - h;
    g.dz = (eval_or_rethrow(s, p) - eval_or_rethrow(s, m)) / (2.0 * h);
    return g;
}

Complex eikonal_residual(const FieldEvaluator& s, const Event& e, double h) {
    FourGradient g = fd_gradient(s, e, h);
    return g.dt * g.dt - g.dx * g.dx - g.dy * g.dy - g.dz * g.dz;
}

Complex factorization_check(const FieldEvaluator& s, const Event& e, double h) {
    FourGradient g = fd_gradient(s, e, h);
    return g.du() * g.dv() - g.dw() * g.dwbar();
}

double gauge_invariance_check(const UnprimedSpinor& phi, const PrimedSpinor& psi,
                              const Complex& lambda) {
    if (lambda == 0.0) throw InvalidInputError("gauge_invariance_check: lambda must be nonzero");
    Complex inv = 1.0 / lambda;
    const Complex phis[2] = {phi.phi0, phi.phi1};
    const Complex psis[2] = {psi.psi0, psi.psi1};
    double dev = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            Complex orig = phis[a] * psis[b];
            Complex scaled = (lambda * phis[a]) * (inv * psis[b]);
            dev = std::max(dev, std::abs(scaled - orig));
        }
    return dev;
}

ResidualReport report(const FieldEvaluator& s, const Event& e, double h, double tol) {
    ResidualReport r;
    r.point = e;
    r.h = h;
    FourGradient g = fd_gradient(s, e, h);
    r.eikonal = g.dt * g.dt - g.dx * g.dx - g.dy * g.dy - g.dz * g.dz;
    r.determinant = g.du() * g.dv() - g.dw() * g.dwbar();
    r.scale = 1.0 + std::max({std::abs(g.dt), std::abs(g.dx), std::abs(g.dy), std::abs(g.dz)});
    r.pass = std::abs(r.eikonal) <= tol * r.scale &&
             std::abs(r.determinant) <= tol * r.scale;
    return r;
}

double default_step(const Event& e) {
    double m = std::max({std::abs(e.x), std::abs(e.y), std::abs(e.z), std::abs(e.t)});
    return 1e-5 * (1.0 + m);
}

}  // namespace eiko::verify
