#pragma once

// Complex/spinor/twistor algebra on flat space-time, null-coordinate maps,
// incidence relations and the projective-gauge conventions used everywhere
// else. All types are immutable values, all functions are pure.
//
// Conventions (fixed once):
//   u = t+z,  v = t-z,  w = x-iy,  wbar = x+iy
//   X = [[u, w], [wbar, v]],  beta^A = X^{AA'} psi_{A'}  (row A, column A')
// The incidence relation carries no factor of i.

#include <complex>

#include "eiko/errors.hpp"

namespace eiko {

using Complex = std::complex<double>;

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// A real space-time point, units with c = 1.
struct Event {
    double x = 0, y = 0, z = 0, t = 0;
};

/// Null-coordinate image of a point: entries of the Hermitian matrix X.
/// When produced from an Event, u and v are real and wbar = conj(w).
struct NullCoords {
    Complex u, v, w, wbar;
};

struct PrimedSpinor {
    Complex psi0, psi1;
    bool zero() const { return psi0 == 0.0 && psi1 == 0.0; }
};

struct UnprimedSpinor {
    Complex phi0, phi1;
    bool zero() const { return phi0 == 0.0 && phi1 == 0.0; }
};

/// Projective null twistor {psi, beta = X psi}.
struct NullTwistor {
    PrimedSpinor psi;
    Complex beta0, beta1;
};

/// Dual twistor {phi, gamma = phi X}.
struct DualTwistor {
    UnprimedSpinor phi;
    Complex gamma0, gamma1;
};

NullCoords to_null_coords(const Event& e);
Event to_event(const NullCoords& nc);

NullTwistor incidence(const NullCoords& nc, const PrimedSpinor& psi);
DualTwistor dual_incidence(const NullCoords& nc, const UnprimedSpinor& phi);

/// <Wbar, W> = phi_A beta^A - gamma^{A'} psi_{A'}; identically zero for a
/// pair built from the same point.
Complex ambitwistor_pairing(const NullTwistor& w, const DualTwistor& wd);

/// Real null ray direction of the congruence with spinor psi = (1, G):
/// increments per unit affine parameter tau. Satisfies kuu*kvv = |kw|^2 and
/// K psi = 0; time component (kuu+kvv)/2 is always positive.
struct RayDirection {
    double kuu;   // delta u per unit tau, = |G|^2
    double kvv;   // delta v per unit tau, = 1
    Complex kw;   // delta w per unit tau, = -conj(G)

    double dt() const { return 0.5 * (kuu + kvv); }
    double dz() const { return 0.5 * (kuu - kvv); }
    double dx() const { return kw.real(); }
    double dy() const { return -kw.imag(); }
};

RayDirection ray_direction(const Complex& g);

/// Advance an event a parameter distance tau along a ray.
Event advance(const Event& e, const RayDirection& k, double tau);

}  // namespace eiko
