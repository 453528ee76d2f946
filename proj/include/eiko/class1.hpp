#pragma once

// First solution class: eikonal fields generated from a single twistor
// function S through the stationarity condition dS/dG = 0. The selected
// branch is always user-seeded; trivial roots (which give degenerate
// eikonals) are surfaced, never filtered.

#include <cstdint>
#include <utility>
#include <vector>

#include "eiko/core.hpp"
#include "eiko/genfun.hpp"
#include "eiko/locus.hpp"
#include "eiko/roots.hpp"
#include "eiko/verify.hpp"

namespace eiko::class1 {

/// The generator plus its cached total derivatives. dS/dG is the root
/// equation, d2S/dG2 drives Newton refinement and the caustic residual.
struct Pipeline {
    dsl::GenFun s;
    dsl::GenFun phi;    // dS/dG
    dsl::GenFun dphi;   // d2S/dG2
    dsl::Params params;

    Pipeline(const dsl::GenFun& s_, const dsl::Params& params_);

    /// Newton-refined branch value near hint.
    Complex g_at(const Event& e, const Complex& hint) const;
    /// Eikonal value on the branch near hint.
    Complex s_at(const Event& e, const Complex& hint) const;
    /// Pointwise evaluator for residual checks; Newton starts from hint.
    verify::FieldEvaluator evaluator(const Complex& hint) const;
};

struct Class1Solution {
    dsl::GenFun s;
    dsl::Params params;
    roots::BranchedField field;          // selected G branch
    std::vector<Complex> s_value;        // S on the branch (where defined)
    std::vector<Complex> caustic;        // caustic residual D per cell
    std::vector<std::uint8_t> s_pole;    // 1 where S has a pole at regular G
    bool is_static = false;              // max |S(t+1)-S(t)| <= 1e-10 sampled
};

Class1Solution solve(const dsl::GenFun& s, const dsl::Params& params,
                     const roots::GridSpec& grid, const Event& seed_point,
                     const Complex& seed_g, const roots::TrackOptions& opts = {});

/// Caustic residual D: the numerator of the total second derivative
/// d2S/dG2 (denominators cleared, no cancellation) evaluated at (nc, G).
/// Zeros mark branching points of the root system; for polynomial S this is
/// exactly d2S/dG2. Falls back to direct AST evaluation when S is not
/// rational in G.
Complex caustic_residual(const dsl::GenFun& s, const dsl::Params& params,
                         const NullCoords& nc, const Complex& g);

/// phi_A = dS/dbeta^A and psi = (1, G) at a regular point; their outer
/// product is the 4-gradient of the eikonal. Throws on a zero gradient
/// spinor (degenerate solution).
std::pair<UnprimedSpinor, PrimedSpinor> gradient_spinors(const dsl::GenFun& s,
                                                         const dsl::Params& params,
                                                         const NullCoords& nc,
                                                         const Complex& g);

/// Singular locus of the solution field on a slice: the points where the
/// eikonal S itself blows up along the seeded branch (zeros of 1/S). The
/// caustic residual D vanishes there as well; the locus' residual column
/// stores |1/S| after refinement.
locus::SingularLocus singular_locus(const dsl::GenFun& s, const dsl::Params& params,
                                    const roots::GridSpec& slice, const Event& seed_point,
                                    const Complex& seed_g,
                                    const locus::ExtractOptions& opts = {});

}  // namespace eiko::class1
