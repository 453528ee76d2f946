#pragma once

// Cauchy procedure: from analytic initial data on a time slice, extract the
// projective spinor field G from the factorized 4-gradient, classify the
// solution by functional (in)dependence of the twistor components, and
// evolve second-class data by propagation along the null rays on which the
// twistor is constant.

#include <functional>
#include <optional>
#include <vector>

#include "eiko/core.hpp"
#include "eiko/genfun.hpp"

namespace eiko::cauchy {

/// Initial data is not an eikonal solution (the gradient does not factorize).
struct NotEikonalDataError : Error {
    using Error::Error;
};

/// Classification could not reach the required per-sample agreement.
struct InconclusiveError : Error {
    using Error::Error;
};

/// Analytic initial data: a space-time evaluator restricted to a
/// neighborhood of the slice t = t0 (time derivatives on the slice are
/// taken by finite differences, so the evaluator must accept t near t0;
/// static data simply ignores t).
struct InitialData {
    std::function<Complex(const Event&)> s;
    double t0 = 0.0;

    /// Closed form over the identifiers {x, y, z, t} (all optional) plus
    /// named parameters. The twistor variables G, B0, B1 are not allowed.
    static InitialData closed_form(const dsl::GenFun& expr, const dsl::Params& params,
                                   double t0);
    static InitialData closed_form(const std::string& expr_text, const dsl::Params& params,
                                   double t0);

    /// Single-snapshot lattice of S values at t0 (treated as static in t),
    /// evaluated off-lattice by cubic Lagrange interpolation per axis.
    static InitialData sampled_grid(const std::vector<Complex>& values, const double lo[3],
                                    const double hi[3], double res, double t0);
};

struct ExtractOptions {
    double h = 0.0;               // 0: per-point default 1e-5*(1+|coord|)
    double det_tol = 1e-3;        // relative factorization tolerance
    double stationary_tol = 1e-9; // gradient magnitude below this is stationary
};

/// G = (d_w S)/(d_u S) (or the alternate ratio when better conditioned),
/// with the rank-1 factorization of the 4-gradient verified through the
/// determinant. Throws SingularPointError at stationary points and
/// NotEikonalDataError when the factorization fails.
Complex extract_G(const InitialData& data, const Event& point,
                  const ExtractOptions& opts = {});

enum class SolutionClass { ClassI, ClassII, Degenerate };

struct Classification {
    SolutionClass cls;
    int samples_total = 0;
    int samples_valid = 0;
    int rank3_votes = 0;
    int rank2_votes = 0;
    int degenerate_votes = 0;
    std::vector<double> sigma_ratios;  // sigma_3/sigma_1 per valid sample
};

struct ClassifyOptions {
    double rank_tol = 1e-6;     // sigma_3/sigma_1 below this means rank <= 2
    double jac_step = 3e-3;     // outer Jacobian step scale (4th order stencil)
    double agreement = 0.95;    // required vote fraction
    double min_valid = 0.90;    // required extract_G success fraction
    ExtractOptions extract;
};

/// Numerical Jacobian of (G, beta0, beta1) with respect to (x, y, z) at
/// fixed t0; rank by singular-value ratio. Throws InconclusiveError when
/// too few samples are valid or no class reaches the agreement threshold.
Classification classify(const InitialData& data, const std::vector<Event>& samples,
                        const ClassifyOptions& opts = {});

struct RayEvolveResult {
    Complex g;        // field value at the target
    Event source;     // slice point the ray leaves from
    double tau = 0;   // affine parameter to the target
};

struct EvolveOptions {
    int max_iter = 50;
    int restarts = 8;
    double tol = 1e-10;
    ExtractOptions extract;
    /// Optional constraint for a consistency check of the evolved value.
    std::optional<dsl::GenFun> pi;
    dsl::Params pi_params;
};

/// Find the slice point and parameter tau >= 0 whose null ray reaches the
/// target; the field value rides unchanged along the ray. Newton in the four
/// unknowns (x0, y0, z0, tau) with deterministic restart jitter. Throws
/// NoRayFoundError when no ray is found (caustic crossing suspected) and
/// PreconditionError for targets before the slice.
RayEvolveResult evolve_class2(const InitialData& data, const Event& target,
                              const EvolveOptions& opts = {});

}  // namespace eiko::cauchy
