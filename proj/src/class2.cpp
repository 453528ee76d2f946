#include "eiko/class2.hpp"

#include <cmath>
#include <limits>

#include "eiko/util.hpp"

namespace eiko::class2 {

using dsl::EvalContext;
using dsl::GenFun;
using dsl::Params;

Congruence::Congruence(const GenFun& pi_, const Params& params_)
    : pi(pi_), q(dsl::d_total_dG(pi_)), pi_b0(dsl::d_partial(pi_, dsl::Sym::B0)),
      pi_b1(dsl::d_partial(pi_, dsl::Sym::B1)), params(params_) {}

Complex Congruence::g_at(const Event& e, const Complex& hint) const {
    return roots::refine_root(pi, q, params, to_null_coords(e), hint);
}

verify::FieldEvaluator Congruence::g_evaluator(const Complex& hint) const {
    return [this, hint](const Event& e) { return g_at(e, hint); };
}

// Relative scale for Q ~ 0 tests at a point.
static double q_scale(const dsl::GenFun& pi, const Params& params, const NullCoords& nc,
                      const Complex& g) {
    auto poly = roots::polynomialize(pi, nc, params);
    if (poly) {
        roots::PolyC dq = poly->derivative();
        return 1.0 + dq.max_coeff() * std::pow(1.0 + std::abs(g), std::max(dq.degree(), 0));
    }
    return 1.0 + std::abs(g);
}

Class2Solution solve(const GenFun& pi, const Params& params, const roots::GridSpec& grid,
                     const Event& seed_point, const Complex& seed_g,
                     const roots::TrackOptions& opts) {
    Congruence cong(pi, params);
    Class2Solution sol;
    sol.pi = pi;
    sol.params = params;
    sol.field = roots::track_branch(pi, params, grid, seed_point, seed_g, opts);

    const std::size_t total = grid.size();
    sol.q_value.assign(total, Complex(0.0));
    util::parallel_for(total, [&](std::size_t idx) {
        if (!sol.field.ok(idx)) return;
        NullCoords nc = to_null_coords(grid.point(idx));
        Complex g = sol.field.g[idx];
        Complex qv = dsl::eval(cong.q, EvalContext::at(nc, g, params));
        sol.q_value[idx] = qv;
        if (std::abs(qv) <= 1e-10 * q_scale(pi, params, nc, g))
            sol.field.flag[idx] = roots::CellFlag::Singular;
    });
    return sol;
}

std::pair<std::vector<Complex>, std::vector<std::uint8_t>> build_eikonal(
    const Class2Solution& sol, const GenFun& s) {
    const std::size_t total = sol.field.grid.size();
    std::vector<Complex> values(total, Complex(0.0));
    std::vector<std::uint8_t> pole(total, 0);
    util::parallel_for(total, [&](std::size_t idx) {
        if (!sol.field.ok(idx)) return;
        NullCoords nc = to_null_coords(sol.field.grid.point(idx));
        try {
            values[idx] = dsl::eval(s, EvalContext::at(nc, sol.field.g[idx], sol.params));
        } catch (const PoleError&) {
            pole[idx] = 1;
        }
    });
    return {std::move(values), std::move(pole)};
}

std::pair<Complex, Complex> sfc_residual(const verify::FieldEvaluator& g_field,
                                         const Event& e, double h) {
    verify::FourGradient grad = verify::fd_gradient(g_field, e, h);
    Complex g = g_field(e);
    return {grad.dw() - g * grad.du(), grad.dv() - g * grad.dwbar()};
}

CongruenceJet congruence_potentials(const Congruence& c, const NullCoords& nc,
                                    const Complex& g) {
    EvalContext ctx = EvalContext::at(nc, g, c.params);
    Complex qv = dsl::eval(c.q, ctx);
    if (std::abs(qv) <= 1e-10 * q_scale(c.pi, c.params, nc, g))
        throw SingularPointError("congruence_potentials: Q vanishes (branching point)");
    CongruenceJet jet;
    jet.g = g;
    jet.k = -dsl::eval(c.pi_b0, ctx) / qv;
    jet.l = -dsl::eval(c.pi_b1, ctx) / qv;
    return jet;
}

locus::SingularLocus singular_locus(const GenFun& pi, const Params& params,
                                    const roots::GridSpec& slice,
                                    const locus::ExtractOptions& opts) {
    {
        // the extraction needs the polynomial route
        NullCoords probe = to_null_coords(slice.point(0, 0, 0));
        if (!roots::polynomialize(pi, probe, params))
            throw InvalidInputError(
                "singular_locus: generating function is not polynomializable");
    }

    auto fn = [&pi, &params](const Event& e) -> Complex {
        NullCoords nc = to_null_coords(e);
        auto rat = roots::rationalize(pi, nc, params);
        if (!rat) throw SingularPointError("not rational here");
        // formal coefficient vectors; no trimming, so the resultant varies
        // continuously across degree drops
        std::vector<Complex> p = rat->num.c;
        roots::PolyC dp = rat->num.derivative();
        return roots::resultant(p, dp.c);
    };

    // Validation: the refined point must carry a genuine common root of
    // (Pi, dPi/dG); this discards the spurious zero set the formal resultant
    // gains where the leading coefficient vanishes.
    auto validate = [&pi, &params](const Event& e) -> bool {
        NullCoords nc = to_null_coords(e);
        auto poly = roots::polynomialize(pi, nc, params);
        if (!poly) return false;
        roots::PolyC dp = poly->derivative();
        roots::RootSet rs = roots::all_roots(*poly);
        double scale = 1.0;
        for (const auto& r : rs.roots)
            scale = std::max(scale, 1.0 + dp.max_coeff() *
                                              std::pow(1.0 + std::abs(r.z),
                                                       std::max(dp.degree(), 0)));
        for (const auto& r : rs.roots) {
            if (r.multiplicity >= 2) return true;
            if (std::abs(dp.eval(r.z)) <= 1e-3 * scale) return true;
        }
        return false;
    };

    return locus::extract_zero_locus(fn, slice, validate, opts);
}

}  // namespace eiko::class2
