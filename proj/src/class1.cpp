#include "eiko/class1.hpp"

#include <cmath>

#include "eiko/util.hpp"

namespace eiko::class1 {

using dsl::EvalContext;
using dsl::GenFun;
using dsl::Params;

Pipeline::Pipeline(const GenFun& s_, const Params& params_)
    : s(s_), phi(dsl::d_total_dG(s_)), dphi(dsl::d_total_dG(dsl::d_total_dG(s_))),
      params(params_) {}

Complex Pipeline::g_at(const Event& e, const Complex& hint) const {
    return roots::refine_root(phi, dphi, params, to_null_coords(e), hint);
}

Complex Pipeline::s_at(const Event& e, const Complex& hint) const {
    NullCoords nc = to_null_coords(e);
    Complex g = roots::refine_root(phi, dphi, params, nc, hint);
    return dsl::eval(s, EvalContext::at(nc, g, params));
}

verify::FieldEvaluator Pipeline::evaluator(const Complex& hint) const {
    return [this, hint](const Event& e) { return s_at(e, hint); };
}

Complex caustic_residual(const GenFun& s, const Params& params, const NullCoords& nc,
                         const Complex& g) {
    GenFun dd = dsl::d_total_dG(dsl::d_total_dG(s));
    auto rat = roots::rationalize(dd, nc, params);
    if (rat) return rat->num.eval(g);
    return dsl::eval(dd, EvalContext::at(nc, g, params));
}

std::pair<UnprimedSpinor, PrimedSpinor> gradient_spinors(const GenFun& s,
                                                         const Params& params,
                                                         const NullCoords& nc,
                                                         const Complex& g) {
    EvalContext ctx = EvalContext::at(nc, g, params);
    UnprimedSpinor phi;
    phi.phi0 = dsl::eval(dsl::d_partial(s, dsl::Sym::B0), ctx);
    phi.phi1 = dsl::eval(dsl::d_partial(s, dsl::Sym::B1), ctx);
    if (std::abs(phi.phi0) < 1e-300 && std::abs(phi.phi1) < 1e-300)
        throw InvalidInputError("gradient_spinors: zero gradient (degenerate solution)");
    PrimedSpinor psi{Complex(1.0), g};
    return {phi, psi};
}

Class1Solution solve(const GenFun& s, const Params& params, const roots::GridSpec& grid,
                     const Event& seed_point, const Complex& seed_g,
                     const roots::TrackOptions& opts) {
    Pipeline pipe(s, params);
    Class1Solution sol;
    sol.s = s;
    sol.params = params;
    sol.field = roots::track_branch(pipe.phi, params, grid, seed_point, seed_g, opts);

    const std::size_t total = grid.size();
    sol.s_value.assign(total, Complex(0.0));
    sol.caustic.assign(total, Complex(0.0));
    sol.s_pole.assign(total, 0);

    GenFun dd = pipe.dphi;
    util::parallel_for(total, [&](std::size_t idx) {
        if (!sol.field.ok(idx)) return;
        NullCoords nc = to_null_coords(grid.point(idx));
        Complex g = sol.field.g[idx];
        try {
            sol.s_value[idx] = dsl::eval(s, EvalContext::at(nc, g, params));
        } catch (const PoleError&) {
            sol.s_pole[idx] = 1;
        }
        try {
            auto rat = roots::rationalize(dd, nc, params);
            sol.caustic[idx] = rat ? rat->num.eval(g)
                                   : dsl::eval(dd, EvalContext::at(nc, g, params));
        } catch (const Error&) {
            sol.caustic[idx] = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
        }
    });

    // Static-solution detection on a subsample: re-solve one time unit later
    // from the same branch value and compare.
    bool is_static = true;
    std::size_t checked = 0;
    std::size_t stride = std::max<std::size_t>(1, total / 97);
    for (std::size_t idx = 0; idx < total && checked < 64; idx += stride) {
        if (!sol.field.ok(idx) || sol.s_pole[idx]) continue;
        Event later = grid.point(idx);
        later.t += 1.0;
        try {
            Complex s1 = pipe.s_at(later, sol.field.g[idx]);
            ++checked;
            if (std::abs(s1 - sol.s_value[idx]) > 1e-10 * (1.0 + std::abs(sol.s_value[idx]))) {
                is_static = false;
                break;
            }
        } catch (const Error&) {
            continue;
        }
    }
    sol.is_static = checked > 0 && is_static;
    return sol;
}

locus::SingularLocus singular_locus(const GenFun& s, const Params& params,
                                    const roots::GridSpec& slice, const Event& seed_point,
                                    const Complex& seed_g, const locus::ExtractOptions& opts) {
    Pipeline pipe(s, params);
    roots::BranchedField field =
        roots::track_branch(pipe.phi, params, slice, seed_point, seed_g);

    // Branch hints for off-lattice evaluation: nearest filled lattice cell,
    // searching a small neighborhood when the nearest one is flagged.
    auto hint_near = [&field, &slice](const Event& e) -> std::optional<Complex> {
        auto idx0 = slice.nearest_index(e);
        if (!idx0) return std::nullopt;
        if (field.ok(*idx0)) return field.g[*idx0];
        int i = int(*idx0 % slice.n[0]);
        int j = int((*idx0 / slice.n[0]) % slice.n[1]);
        int k = int(*idx0 / (std::size_t(slice.n[0]) * slice.n[1]));
        for (int r = 1; r <= 2; ++r)
            for (int dk = -r; dk <= r; ++dk)
                for (int dj = -r; dj <= r; ++dj)
                    for (int di = -r; di <= r; ++di) {
                        int ii = i + di, jj = j + dj, kk = k + dk;
                        if (ii < 0 || ii >= slice.n[0] || jj < 0 || jj >= slice.n[1] ||
                            kk < 0 || kk >= slice.n[2])
                            continue;
                        std::size_t idx = slice.index(ii, jj, kk);
                        if (field.ok(idx)) return field.g[idx];
                    }
        return std::nullopt;
    };

    // 1/S along the branch, extended by zero at poles of S.
    auto fn = [&](const Event& e) -> Complex {
        auto hint = hint_near(e);
        if (!hint) throw SingularPointError("no branch value near point");
        Complex g = pipe.g_at(e, *hint);
        Complex sv;
        try {
            sv = dsl::eval(s, EvalContext::at(to_null_coords(e), g, params));
        } catch (const PoleError&) {
            return Complex(0.0);
        }
        if (sv == 0.0) return Complex(std::numeric_limits<double>::infinity(), 0.0);
        return 1.0 / sv;
    };

    return locus::extract_zero_locus(fn, slice, {}, opts);
}

}  // namespace eiko::class1
