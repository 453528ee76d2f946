#pragma once

// Second solution class: shear-free congruences from a single holomorphic
// constraint Pi(G, wG+u, vG+wbar) = 0, eikonals built on their solutions,
// congruence potentials, and singular-locus extraction via resultants.

#include <cstdint>
#include <utility>
#include <vector>

#include "eiko/core.hpp"
#include "eiko/genfun.hpp"
#include "eiko/locus.hpp"
#include "eiko/roots.hpp"
#include "eiko/verify.hpp"

namespace eiko::class2 {

/// The constraint plus cached derivatives. Q = dPi/dG is the Newton
/// derivative and the singularity indicator.
struct Congruence {
    dsl::GenFun pi;
    dsl::GenFun q;       // dPi/dG (total)
    dsl::GenFun pi_b0;   // dPi/dB0
    dsl::GenFun pi_b1;   // dPi/dB1
    dsl::Params params;

    Congruence(const dsl::GenFun& pi_, const dsl::Params& params_);

    Complex g_at(const Event& e, const Complex& hint) const;
    verify::FieldEvaluator g_evaluator(const Complex& hint) const;
};

struct Class2Solution {
    dsl::GenFun pi;
    dsl::Params params;
    roots::BranchedField field;      // selected G branch of Pi = 0
    std::vector<Complex> q_value;    // Q on the branch
};

Class2Solution solve(const dsl::GenFun& pi, const dsl::Params& params,
                     const roots::GridSpec& grid, const Event& seed_point,
                     const Complex& seed_g, const roots::TrackOptions& opts = {});

/// Eikonal S(G(X), wG+u, vG+wbar) built on the congruence. Pole cells are
/// flagged in the second member.
std::pair<std::vector<Complex>, std::vector<std::uint8_t>> build_eikonal(
    const Class2Solution& sol, const dsl::GenFun& s);

/// Shear-free congruence residuals (d_w G - G d_u G, d_v G - G d_wbar G) by
/// centered differences of the field evaluator.
std::pair<Complex, Complex> sfc_residual(const verify::FieldEvaluator& g_field,
                                         const Event& e, double h);

/// k = d_u G and l = d_wbar G from implicit differentiation of Pi = 0:
/// k = -Pi_0/Q, l = -Pi_1/Q. Regular points only (throws when Q ~ 0).
struct CongruenceJet {
    Complex g, k, l;
};

CongruenceJet congruence_potentials(const Congruence& c, const NullCoords& nc,
                                    const Complex& g);

/// Points of the slice where Pi = 0 and dPi/dG = 0 admit a common root:
/// zero set of the resultant of the two numerator polynomials in G, cell
/// scan plus Gauss-Newton refinement, validated by a common-root check
/// (which also discards degree-drop artifacts of the resultant).
locus::SingularLocus singular_locus(const dsl::GenFun& pi, const dsl::Params& params,
                                    const roots::GridSpec& slice,
                                    const locus::ExtractOptions& opts = {});

}  // namespace eiko::class2
