#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "eiko/core.hpp"
#include "eiko/verify.hpp"

using namespace eiko;

static Complex rc(std::mt19937_64& rng, double span = 4.0) {
    std::uniform_real_distribution<double> u(-span, span);
    return Complex(u(rng), u(rng));
}

TEST_CASE("null coordinate map") {
    NullCoords nc = to_null_coords(Event{1, 2, 3, 4});
    CHECK(nc.u == Complex(7.0));
    CHECK(nc.v == Complex(1.0));
    CHECK(nc.w == Complex(1.0, -2.0));
    CHECK(nc.wbar == Complex(1.0, 2.0));

    nc = to_null_coords(Event{0, 0, 0, 0});
    CHECK(nc.u == Complex(0.0));
    CHECK(nc.v == Complex(0.0));
    CHECK(nc.w == Complex(0.0));
    CHECK(nc.wbar == Complex(0.0));

    nc = to_null_coords(Event{0, 0, 1, 0});
    CHECK(nc.u == Complex(1.0));
    CHECK(nc.v == Complex(-1.0));
    CHECK(nc.w == Complex(0.0));

    CHECK_THROWS_AS(to_null_coords(Event{std::nan(""), 0, 0, 0}), InvalidInputError);
}

TEST_CASE("null coordinate round trip") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int k = 0; k < 200; ++k) {
        Event e{u(rng), u(rng), u(rng), u(rng)};
        Event r = to_event(to_null_coords(e));
        CHECK(r.x == doctest::Approx(e.x).epsilon(1e-15));
        CHECK(r.y == doctest::Approx(e.y).epsilon(1e-15));
        CHECK(r.z == doctest::Approx(e.z).epsilon(1e-15));
        CHECK(r.t == doctest::Approx(e.t).epsilon(1e-15));
    }
}

TEST_CASE("incidence relation") {
    // psi = (1, G) gives beta = (wG + u, vG + wbar)
    std::mt19937_64 rng(7);
    for (int k = 0; k < 50; ++k) {
        Event e{1.5, -0.5, 2.0, 0.25};
        NullCoords nc = to_null_coords(e);
        Complex g = rc(rng);
        NullTwistor w = incidence(nc, PrimedSpinor{1.0, g});
        CHECK(std::abs(w.beta0 - (nc.w * g + nc.u)) == 0.0);
        CHECK(std::abs(w.beta1 - (nc.v * g + nc.wbar)) == 0.0);
    }

    NullTwistor w = incidence(NullCoords{}, PrimedSpinor{1.0, Complex(3, 1)});
    CHECK(w.beta0 == Complex(0.0));
    CHECK(w.beta1 == Complex(0.0));

    w = incidence(to_null_coords(Event{2, 0, 0, 0}), PrimedSpinor{1.0, Complex(0, -2)});
    CHECK(w.beta0 == Complex(0.0, -4.0));
    CHECK(w.beta1 == Complex(2.0, 0.0));

    CHECK_THROWS_AS(incidence(NullCoords{}, PrimedSpinor{0.0, 0.0}), InvalidInputError);
}

TEST_CASE("dual incidence") {
    NullCoords nc = to_null_coords(Event{1, 2, 3, 4});
    DualTwistor d = dual_incidence(nc, UnprimedSpinor{1.0, 0.0});
    CHECK(d.gamma0 == Complex(7.0));
    CHECK(d.gamma1 == Complex(1.0, -2.0));

    d = dual_incidence(nc, UnprimedSpinor{0.0, 1.0});
    CHECK(d.gamma0 == Complex(1.0, 2.0));
    CHECK(d.gamma1 == Complex(1.0, 0.0));

    d = dual_incidence(NullCoords{}, UnprimedSpinor{2.0, 3.0});
    CHECK(d.gamma0 == Complex(0.0));
    CHECK(d.gamma1 == Complex(0.0));

    CHECK_THROWS_AS(dual_incidence(nc, UnprimedSpinor{0.0, 0.0}), InvalidInputError);
}

TEST_CASE("ambitwistor pairing vanishes") {
    NullCoords nc = to_null_coords(Event{1, 2, 3, 4});
    PrimedSpinor psi{1.0, 0.0};
    UnprimedSpinor phi{1.0, 0.0};
    CHECK(std::abs(ambitwistor_pairing(incidence(nc, psi), dual_incidence(nc, phi))) == 0.0);

    nc = to_null_coords(Event{2, 0, 0, 0});
    psi = PrimedSpinor{1.0, Complex(0, -2)};
    phi = UnprimedSpinor{Complex(3, 1), -1.0};
    CHECK(std::abs(ambitwistor_pairing(incidence(nc, psi), dual_incidence(nc, phi))) <= 1e-13);

    // property: identically zero over random inputs, relative to scale
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int k = 0; k < 10000; ++k) {
        NullCoords rnc = to_null_coords(Event{u(rng), u(rng), u(rng), u(rng)});
        PrimedSpinor rpsi{rc(rng), rc(rng)};
        UnprimedSpinor rphi{rc(rng), rc(rng)};
        if (rpsi.zero() || rphi.zero()) continue;
        NullTwistor w = incidence(rnc, rpsi);
        DualTwistor wd = dual_incidence(rnc, rphi);
        double scale = 1.0 + std::abs(w.beta0) + std::abs(w.beta1) + std::abs(wd.gamma0) +
                       std::abs(wd.gamma1);
        CHECK(std::abs(ambitwistor_pairing(w, wd)) <= 1e-13 * scale);
    }
}

TEST_CASE("projective gauge symmetry of the outer product") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 2000; ++k) {
        UnprimedSpinor phi{rc(rng), rc(rng)};
        PrimedSpinor psi{rc(rng), rc(rng)};
        Complex lam = rc(rng);
        if (lam == 0.0) continue;
        double scale = (1.0 + std::abs(phi.phi0) + std::abs(phi.phi1)) *
                       (1.0 + std::abs(psi.psi0) + std::abs(psi.psi1));
        CHECK(verify::gauge_invariance_check(phi, psi, lam) <= 1e-13 * scale);
    }
    CHECK(verify::gauge_invariance_check(UnprimedSpinor{1, 2}, PrimedSpinor{3, 4},
                                         Complex(1.0)) == 0.0);
    CHECK_THROWS_AS(verify::gauge_invariance_check(UnprimedSpinor{1, 2}, PrimedSpinor{3, 4},
                                                   Complex(0.0)),
                    InvalidInputError);
}

TEST_CASE("ray direction") {
    RayDirection k = ray_direction(Complex(0.0));
    CHECK(k.kuu == 0.0);
    CHECK(k.kvv == 1.0);
    CHECK(k.kw == Complex(0.0));
    CHECK(k.dt() == 0.5);
    CHECK(k.dz() == -0.5);  // ray along -z at light speed

    k = ray_direction(Complex(1.0));
    CHECK(k.dt() == 1.0);
    CHECK(k.dz() == 0.0);
    CHECK(k.dx() == -1.0);
    CHECK(k.dy() == 0.0);

    std::mt19937_64 rng(99);
    for (int n = 0; n < 500; ++n) {
        Complex g = rc(rng, 10.0);
        RayDirection r = ray_direction(g);
        // null: kuu kvv = |kw|^2
        CHECK(std::abs(r.kuu * r.kvv - std::norm(r.kw)) <= 1e-12 * (1.0 + std::norm(g)));
        // annihilates psi = (1, G): K psi = 0 with K = [[kuu, kw],[conj(kw), kvv]]
        Complex row0 = r.kuu + r.kw * g;
        Complex row1 = std::conj(r.kw) + r.kvv * g;
        CHECK(std::abs(row0) <= 1e-12 * (1.0 + std::norm(g)));
        CHECK(std::abs(row1) <= 1e-12 * (1.0 + std::abs(g)));
        CHECK(r.dt() > 0.0);
    }
}
