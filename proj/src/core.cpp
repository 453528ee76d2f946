#include "eiko/core.hpp"

namespace eiko {

static void require_finite_event(const Event& e) {
    if (!(is_finite(e.x) && is_finite(e.y) && is_finite(e.z) && is_finite(e.t)))
        throw InvalidInputError("non-finite Event");
}

NullCoords to_null_coords(const Event& e) {
    require_finite_event(e);
    NullCoords nc;
    nc.u = Complex(e.t + e.z, 0.0);
    nc.v = Complex(e.t - e.z, 0.0);
    nc.w = Complex(e.x, -e.y);
    nc.wbar = Complex(e.x, e.y);
    return nc;
}

Event to_event(const NullCoords& nc) {
    Event e;
    e.t = 0.5 * (nc.u.real() + nc.v.real());
    e.z = 0.5 * (nc.u.real() - nc.v.real());
    e.x = 0.5 * (nc.w.real() + nc.wbar.real());
    e.y = 0.5 * (nc.wbar.imag() - nc.w.imag());
    return e;
}

NullTwistor incidence(const NullCoords& nc, const PrimedSpinor& psi) {
    if (psi.zero()) throw InvalidInputError("incidence: zero spinor");
    NullTwistor w;
    w.psi = psi;
    w.beta0 = nc.u * psi.psi0 + nc.w * psi.psi1;
    w.beta1 = nc.wbar * psi.psi0 + nc.v * psi.psi1;
    return w;
}

DualTwistor dual_incidence(const NullCoords& nc, const UnprimedSpinor& phi) {
    if (phi.zero()) throw InvalidInputError("dual_incidence: zero spinor");
    DualTwistor d;
    d.phi = phi;
    d.gamma0 = phi.phi0 * nc.u + phi.phi1 * nc.wbar;
    d.gamma1 = phi.phi0 * nc.w + phi.phi1 * nc.v;
    return d;
}

Complex ambitwistor_pairing(const NullTwistor& w, const DualTwistor& wd) {
    return wd.phi.phi0 * w.beta0 + wd.phi.phi1 * w.beta1 -
           (wd.gamma0 * w.psi.psi0 + wd.gamma1 * w.psi.psi1);
}

RayDirection ray_direction(const Complex& g) {
    if (!is_finite(g)) throw InvalidInputError("ray_direction: non-finite G");
    RayDirection k;
    k.kuu = std::norm(g);
    k.kvv = 1.0;
    k.kw = -std::conj(g);
    return k;
}

Event advance(const Event& e, const RayDirection& k, double tau) {
    Event r = e;
    r.t += tau * k.dt();
    r.x += tau * k.dx();
    r.y += tau * k.dy();
    r.z += tau * k.dz();
    return r;
}

}  // namespace eiko
